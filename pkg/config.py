"""
Configuration constants for the trade network toolkit.
All tunable parameters are centralized here.
"""

import os

from dotenv import load_dotenv

load_dotenv()

TOOL_NAME = "trade-network-toolkit"
TOOL_VERSION = "1.0.0"

# Efficiency modes
MODE_UNWEIGHTED = "unweighted"
MODE_WEIGHTED = "weighted"
MODE_NORMALIZED = "normalized"
MODES = (MODE_UNWEIGHTED, MODE_WEIGHTED, MODE_NORMALIZED)

# Modes used by the published ranking tables (E^A and E^W)
DEFAULT_MODES = (MODE_UNWEIGHTED, MODE_WEIGHTED)

# Removal kinds
KIND_NODE = "node"
KIND_EDGE = "edge"
KINDS = (KIND_NODE, KIND_EDGE)

# Attack strategies
STRATEGY_RANDOM = "random"
STRATEGY_CRITICALITY = "criticality"
STRATEGY_IN = "in"
STRATEGY_OUT = "out"
STRATEGY_VALUE = "value"
STRATEGIES = (STRATEGY_RANDOM, STRATEGY_CRITICALITY, STRATEGY_IN, STRATEGY_OUT, STRATEGY_VALUE)
NODE_STRATEGIES = (STRATEGY_RANDOM, STRATEGY_CRITICALITY, STRATEGY_IN, STRATEGY_OUT)
EDGE_STRATEGIES = (STRATEGY_RANDOM, STRATEGY_CRITICALITY, STRATEGY_VALUE)

# Robustness grid: p from 0 to 0.5 in steps of 0.02
P_GRID_START = 0.0
P_GRID_STOP = 0.5
P_GRID_STEP = 0.02
DEFAULT_SAMPLE_BUDGET = 200  # Monte Carlo subsets per p when enumeration is infeasible

# Rankings
DEFAULT_TOP_K = 10
UNMAPPED_GROUP = "unmapped"

# Reproducibility
DEFAULT_SEED = int(os.getenv("TRADE_NET_SEED", "20171231"))

# Parallelism (1 = run inline)
DEFAULT_WORKERS = int(os.getenv("TRADE_NET_WORKERS", "1"))

# Output
OUTPUT_FORMATS = ("csv", "json")
DEFAULT_FORMAT = "csv"
DEFAULT_OUT_DIR = os.getenv("TRADE_NET_OUT_DIR", "results")
EDGE_KEY_SEPARATOR = "->"

# Input CSV headers
TRADE_COLUMNS = ("year", "exporter", "importer", "volume")
GROUP_COLUMNS = ("economy", "group")

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def default_p_grid() -> tuple:
    """Default attack fractions 0.00, 0.02, ..., 0.50 (rounded to avoid float drift)."""
    steps = int(round((P_GRID_STOP - P_GRID_START) / P_GRID_STEP))
    return tuple(round(P_GRID_START + i * P_GRID_STEP, 10) for i in range(steps + 1))
