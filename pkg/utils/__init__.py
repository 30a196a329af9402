# Export, parallel fan-out and test fixtures
