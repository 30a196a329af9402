"""
Correlation between criticality and trade volumes, and volume time series.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats as sp_stats

import config
from logic.criticality import CriticalityTable, node_criticality
from logic.errors import LengthMismatch, TradeNetworkError, ZeroVariance
from logic.network import Network

VOLUME_IMPORT = "import"
VOLUME_EXPORT = "export"
VOLUME_SIDES = (VOLUME_IMPORT, VOLUME_EXPORT)

MIN_SAMPLE = 3


@dataclass(frozen=True)
class CorrelationReport:
    """Pearson and Spearman coefficients of criticality vs one volume series."""

    year: int
    mode: str
    volume: str
    n: int
    pearson: float
    spearman: float
    pearson_p: float
    spearman_p: float

    def to_dict(self) -> Dict:
        return asdict(self)


def _check_series(x: Sequence[float], y: Sequence[float]):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"Series lengths differ: {x.size} vs {y.size}")
    if x.size < MIN_SAMPLE:
        raise LengthMismatch(f"Need at least {MIN_SAMPLE} observations, got {x.size}")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ZeroVariance("Correlation undefined for a constant series")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Sample Pearson correlation coefficient.

    Raises:
        LengthMismatch: unequal lengths or fewer than 3 points
        ZeroVariance: either series is constant
    """
    x, y = _check_series(x, y)
    r = float(sp_stats.pearsonr(x, y).statistic)
    return max(-1.0, min(1.0, r))


def rank(values: Sequence[float]) -> np.ndarray:
    """Ranks starting at 1, ties get the average rank."""
    return sp_stats.rankdata(np.asarray(values, dtype=np.float64), method='average')


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation: Pearson on average ranks."""
    x, y = _check_series(x, y)
    return pearson(rank(x), rank(y))


def t_test_p_value(r: float, n: int) -> float:
    """
    Two-sided p-value of a correlation coefficient from the t approximation
    t = r * sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of freedom.
    """
    if n <= 2:
        return float('nan')
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(2.0 * sp_stats.t.sf(abs(t), n - 2))


def criticality_volume_correlation(network: Network, which_volume: str, mode: str,
                                   table: Optional[CriticalityTable] = None) -> CorrelationReport:
    """
    Correlate economy criticality with import or export volume.

    Economies without volume on the chosen side enter with 0.

    Args:
        network: Snapshot
        which_volume: 'import' or 'export'
        mode: Criticality mode
        table: Precomputed node criticality table (computed when omitted)

    Raises:
        ZeroVariance, LengthMismatch: from the coefficients
        DegenerateBaseline: criticality undefined
    """
    if which_volume not in VOLUME_SIDES:
        raise TradeNetworkError(f"Volume side must be one of {VOLUME_SIDES}, got '{which_volume}'")
    if table is None:
        table = node_criticality(network, mode)
    elif table.kind != config.KIND_NODE or table.mode != mode:
        raise TradeNetworkError("Correlation needs an economy criticality table in the same mode")

    side = network.import_volumes if which_volume == VOLUME_IMPORT else network.export_volumes
    scores = [table.scores[code] for code in network.codes]
    volumes = side.tolist()

    r = pearson(scores, volumes)
    r_s = spearman(scores, volumes)
    n = len(scores)
    return CorrelationReport(
        year=network.year,
        mode=mode,
        volume=which_volume,
        n=n,
        pearson=r,
        spearman=r_s,
        pearson_p=t_test_p_value(r, n),
        spearman_p=t_test_p_value(r_s, n),
    )


def volume_time_series(networks: Mapping[int, Network],
                       top_k: int = config.DEFAULT_TOP_K) -> Dict[str, pd.DataFrame]:
    """
    Yearly import and export volumes of the largest economies.

    Economies are selected per side by their volume summed over all years;
    economies that never trade on a side are not listed for it.

    Returns:
        {'import': df, 'export': df}; each df has a 'year' column followed by
        one column per selected economy (largest first), 0 where absent
    """
    if not networks:
        raise TradeNetworkError("Need at least one network for a volume time series")
    if top_k < 1:
        raise ValueError(f"top_k must be at least 1, got {top_k}")

    years = sorted(networks)
    series = {}
    for side in VOLUME_SIDES:
        rows = {}
        for year in years:
            network = networks[year]
            values = network.import_volumes if side == VOLUME_IMPORT else network.export_volumes
            rows[year] = dict(zip(network.codes, values.tolist()))

        frame = pd.DataFrame.from_dict(rows, orient='index').reindex(years).fillna(0.0)
        totals = {code: math.fsum(frame[code].tolist()) for code in frame.columns}
        active = [code for code in frame.columns if totals[code] > 0]
        selected = sorted(active, key=lambda c: (-totals[c], c))[:top_k]

        frame = frame[selected]
        frame.index.name = 'year'
        series[side] = frame.reset_index()
    return series
