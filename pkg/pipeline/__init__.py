# Batch orchestration across years
