# Trade data ingestion
