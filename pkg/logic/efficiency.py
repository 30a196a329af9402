"""
Network efficiency: all-pairs shortest paths and the E^A, E^W, E^W-bar measures.

Unweighted distances are hop counts along directed edges. Weighted distances
use edge length 1/v_ij, so the shortest path maximizes the pairwise
efficiency e_ij = 1 / sum(1/v_l). Unreachable pairs contribute 0.
"""

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
from scipy.sparse import csgraph

import config
from logic.errors import TradeNetworkError
from logic.network import Network, length_matrix, mean_edge_volume, total_volume
from utils.parallel import ordered_map

UNREACHABLE = math.inf


@dataclass(frozen=True)
class PathLengths:
    """Shortest distances from one source; UNREACHABLE marks missing paths."""

    source: str
    weighted: bool
    distances: Mapping[str, float]

    def __getitem__(self, target: str) -> float:
        return self.distances[target]

    def is_reachable(self, target: str) -> bool:
        return math.isfinite(self.distances[target])


def distance_matrix(network: Network, weighted: bool,
                    indices: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Shortest distances for the given source rows (all rows by default).

    Args:
        network: Snapshot
        weighted: Use 1/v_ij edge lengths instead of hop counts
        indices: Source node indices

    Returns:
        Array of shape (len(indices), N) with np.inf for unreachable targets
    """
    n = network.n_nodes
    rows = np.arange(n) if indices is None else np.asarray(indices, dtype=np.int64)
    if n == 0 or rows.size == 0:
        return np.zeros((rows.size, n))

    return csgraph.shortest_path(
        length_matrix(network, weighted),
        method='D',
        directed=True,
        unweighted=not weighted,
        indices=rows,
    ).reshape(rows.size, n)


def row_efficiency_sums(distances: np.ndarray) -> np.ndarray:
    """Per-source sums of 1/d_ij over reachable targets j != i (exactly rounded)."""
    reachable = np.isfinite(distances) & (distances > 0)
    inverse = np.zeros_like(distances, dtype=np.float64)
    np.divide(1.0, distances, out=inverse, where=reachable)
    return np.array([math.fsum(row) for row in inverse.tolist()], dtype=np.float64)


def efficiency_from_row_sums(row_sums: Sequence[float], n_nodes: int) -> float:
    """Average over ordered pairs; fsum keeps the total independent of evaluation order."""
    if n_nodes < 2:
        return 0.0
    return math.fsum(np.asarray(row_sums, dtype=np.float64).tolist()) / (n_nodes * (n_nodes - 1))


def _row_sums(network: Network, weighted: bool, workers: int) -> np.ndarray:
    n = network.n_nodes
    if workers <= 1 or n < 2 * workers:
        return row_efficiency_sums(distance_matrix(network, weighted))

    chunks = np.array_split(np.arange(n), workers)
    parts = ordered_map(
        lambda rows: row_efficiency_sums(distance_matrix(network, weighted, rows)),
        chunks,
        workers=workers,
    )
    return np.concatenate(parts)


def _lengths_from(network: Network, source: str, weighted: bool) -> PathLengths:
    row = distance_matrix(network, weighted, [network.index_of(source)])[0]
    return PathLengths(
        source=source,
        weighted=weighted,
        distances={code: float(d) for code, d in zip(network.codes, row)},
    )


def shortest_lengths_unweighted(network: Network, source: str) -> PathLengths:
    """Hop-count distances d_ij from source (breadth-first semantics)."""
    return _lengths_from(network, source, weighted=False)


def shortest_lengths_weighted(network: Network, source: str) -> PathLengths:
    """Minimal sum of 1/v_l over directed paths from source."""
    return _lengths_from(network, source, weighted=True)


def efficiency_unweighted(network: Network, workers: int = 1) -> float:
    """E^A: mean of 1/d_ij over ordered pairs i != j."""
    if network.n_nodes < 2:
        return 0.0
    return efficiency_from_row_sums(_row_sums(network, False, workers), network.n_nodes)


def efficiency_weighted(network: Network, workers: int = 1) -> float:
    """E^W: mean of e_ij = 1 / min sum(1/v_l) over ordered pairs i != j."""
    if network.n_nodes < 2 or network.n_edges == 0:
        return 0.0
    return efficiency_from_row_sums(_row_sums(network, True, workers), network.n_nodes)


def efficiency_normalized(network: Network, workers: int = 1) -> float:
    """E^W-bar: E^W with every volume divided by <v>, i.e. E^W / <v>."""
    if network.n_nodes < 2 or network.n_edges == 0:
        return 0.0
    return efficiency_weighted(network, workers) / mean_edge_volume(network)


_EFFICIENCY_BY_MODE = {
    config.MODE_UNWEIGHTED: efficiency_unweighted,
    config.MODE_WEIGHTED: efficiency_weighted,
    config.MODE_NORMALIZED: efficiency_normalized,
}


def check_mode(mode: str) -> str:
    if mode not in _EFFICIENCY_BY_MODE:
        raise TradeNetworkError(f"Unknown efficiency mode '{mode}', expected one of {config.MODES}")
    return mode


def efficiency(network: Network, mode: str, workers: int = 1) -> float:
    """Efficiency of the network in the requested mode."""
    return _EFFICIENCY_BY_MODE[check_mode(mode)](network, workers)


def network_summary(network: Network, workers: int = 1) -> Dict:
    """
    One row of the yearly efficiency table.

    Returns:
        Dictionary with year, N, N_e, V, E_A, E_W, E_Wbar
    """
    e_weighted = efficiency_weighted(network, workers)
    e_normalized = e_weighted / mean_edge_volume(network) if network.n_edges else 0.0

    return {
        'year': network.year,
        'N': network.n_nodes,
        'N_e': network.n_edges,
        'V': total_volume(network),
        'E_A': efficiency_unweighted(network, workers),
        'E_W': e_weighted,
        'E_Wbar': e_normalized,
    }
