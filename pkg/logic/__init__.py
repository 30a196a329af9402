# Network analytics: efficiency, criticality, robustness, statistics
