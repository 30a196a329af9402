"""
Economy and relationship criticality: C = 1 - E(G')/E(G), where G' drops one
economy (with its relationships) or one relationship.

Rankings are descending by C, then by trade volume, then by code, so tables
are reproducible byte-for-byte.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd

import config
from data.trade_loader import GroupMap
from logic.efficiency import (
    check_mode, distance_matrix, efficiency, efficiency_from_row_sums, row_efficiency_sums,
)
from logic.errors import DegenerateBaseline, TradeNetworkError, UnknownNode
from logic.network import (
    EdgeKey, Network, mean_edge_volume, remove_edge_positions, remove_node,
)
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)

Key = Union[str, EdgeKey]


def format_key(key: Key) -> str:
    """'USA' for economies, 'SAU->USA' for relationships."""
    if isinstance(key, tuple):
        return config.EDGE_KEY_SEPARATOR.join(key)
    return key


def rank_keys(keys: Iterable[Key], scores: Mapping[Key, float],
              volumes: Mapping[Key, float]) -> Tuple[Key, ...]:
    """Descending score, then descending volume, then lexicographic key."""
    return tuple(sorted(keys, key=lambda k: (-scores[k], -volumes[k], k)))


@dataclass(frozen=True)
class CriticalityTable:
    """Per-economy or per-relationship criticality for one network and mode."""

    kind: str
    mode: str
    year: int
    baseline: float
    scores: Mapping[Key, float]
    volumes: Mapping[Key, float]
    ranking: Tuple[Key, ...]
    nodes: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.ranking)

    def rank_of(self, key: Key) -> int:
        """1-based rank of a key."""
        return self.ranking.index(key) + 1

    def to_frame(self, top_k: int = None) -> pd.DataFrame:
        """Rank-ordered table with columns rank, key, criticality."""
        keys = self.ranking if top_k is None else self.ranking[:top_k]
        return pd.DataFrame({
            'rank': np.arange(1, len(keys) + 1),
            'key': [format_key(k) for k in keys],
            'criticality': [self.scores[k] for k in keys],
        }, columns=['rank', 'key', 'criticality'])


def _require_baseline(baseline: float, network: Network, mode: str) -> None:
    if not baseline > 0:
        raise DegenerateBaseline(
            f"Baseline {mode} efficiency of network {network.year} is {baseline}; criticality undefined"
        )


def node_criticality(network: Network, mode: str, workers: int = 1,
                     progress: bool = False) -> CriticalityTable:
    """
    C_i = 1 - E(G_i)/E for every economy i.

    Args:
        network: Snapshot with at least 3 economies
        mode: unweighted, weighted or normalized
        workers: Threads for the removal sweep
        progress: Show a progress bar

    Returns:
        CriticalityTable of kind 'node'

    Raises:
        DegenerateBaseline: baseline efficiency is 0
    """
    check_mode(mode)
    if network.n_nodes < 3:
        raise TradeNetworkError(
            f"Node criticality needs at least 3 economies, network {network.year} has {network.n_nodes}"
        )

    baseline = efficiency(network, mode)
    _require_baseline(baseline, network, mode)

    reduced = ordered_map(
        lambda code: efficiency(remove_node(network, code), mode),
        network.codes,
        workers=workers,
        progress=progress,
        desc=f"{network.year} {mode} economies",
    )

    keys = network.codes
    scores = {code: 1.0 - e / baseline for code, e in zip(keys, reduced)}
    volumes = {
        code: float(v)
        for code, v in zip(keys, network.import_volumes + network.export_volumes)
    }

    return CriticalityTable(
        kind=config.KIND_NODE,
        mode=mode,
        year=network.year,
        baseline=baseline,
        scores=scores,
        volumes=volumes,
        ranking=rank_keys(keys, scores, volumes),
        nodes=network.codes,
    )


def _edge_removal_efficiencies(network: Network, mode: str, workers: int,
                               progress: bool) -> Tuple[float, List[float]]:
    """
    Baseline efficiency and E(G_ij) for every edge, in edge order.

    Removing i->j can only change shortest distances from sources s with
    d(s,i) + len(i,j) == d(s,j); only those rows are recomputed.
    """
    weighted = mode != config.MODE_UNWEIGHTED
    n = network.n_nodes
    distances = distance_matrix(network, weighted)
    rows = row_efficiency_sums(distances)
    lengths = 1.0 / network.volumes if weighted else np.ones(network.n_edges)

    def scale(reduced: Network, e: float) -> float:
        if mode != config.MODE_NORMALIZED:
            return e
        return e / mean_edge_volume(reduced) if reduced.n_edges else 0.0

    baseline = scale(network, efficiency_from_row_sums(rows, n))

    def without_edge(position: int) -> float:
        u = network.sources[position]
        v = network.targets[position]
        via_edge = distances[:, u] + lengths[position]
        tight = np.flatnonzero(np.isfinite(via_edge) & (via_edge == distances[:, v]))

        reduced = remove_edge_positions(network, [position])
        new_rows = rows.copy()
        if tight.size:
            new_rows[tight] = row_efficiency_sums(distance_matrix(reduced, weighted, tight))
        return scale(reduced, efficiency_from_row_sums(new_rows, n))

    reduced = ordered_map(
        without_edge,
        range(network.n_edges),
        workers=workers,
        progress=progress,
        desc=f"{network.year} {mode} relationships",
    )
    return baseline, reduced


def edge_criticality(network: Network, mode: str, workers: int = 1,
                     progress: bool = False) -> CriticalityTable:
    """
    C_ij = 1 - E(G_ij)/E for every relationship i->j.

    Raises:
        DegenerateBaseline: baseline efficiency is 0
    """
    check_mode(mode)
    if network.n_nodes < 2 or network.n_edges < 1:
        raise DegenerateBaseline(f"Network {network.year} has no relationships to remove")

    baseline, reduced = _edge_removal_efficiencies(network, mode, workers, progress)
    _require_baseline(baseline, network, mode)

    keys = network.edge_keys
    scores = {key: 1.0 - e / baseline for key, e in zip(keys, reduced)}
    volumes = {key: float(v) for key, v in zip(keys, network.volumes.tolist())}

    return CriticalityTable(
        kind=config.KIND_EDGE,
        mode=mode,
        year=network.year,
        baseline=baseline,
        scores=scores,
        volumes=volumes,
        ranking=rank_keys(keys, scores, volumes),
        nodes=network.codes,
    )


def criticality(network: Network, kind: str, mode: str, workers: int = 1,
                progress: bool = False) -> CriticalityTable:
    if kind == config.KIND_NODE:
        return node_criticality(network, mode, workers, progress)
    if kind == config.KIND_EDGE:
        return edge_criticality(network, mode, workers, progress)
    raise TradeNetworkError(f"Unknown removal kind '{kind}', expected one of {config.KINDS}")


def rank_top(table: CriticalityTable, k: int) -> List[Tuple[Key, float]]:
    """The first min(k, len(table)) entries of the ranking."""
    if k < 1:
        raise ValueError(f"K must be at least 1, got {k}")
    return [(key, table.scores[key]) for key in table.ranking[:k]]


def group_criticality(table: CriticalityTable, groups: GroupMap) -> Dict[str, float]:
    """
    Sum of economy criticalities per group; unmapped economies go to 'unmapped'.
    """
    if table.kind != config.KIND_NODE:
        raise TradeNetworkError("Group criticality needs an economy (node) table")

    members: Dict[str, List[float]] = {}
    for code in table.nodes:
        members.setdefault(groups.group_of(code), []).append(table.scores[code])
    return {group: math.fsum(values) for group, values in sorted(members.items())}


def economy_top_relationships(table: CriticalityTable, economy: str,
                              k: int) -> List[Tuple[EdgeKey, float]]:
    """
    The k most critical relationships touching an economy, imports and
    exports pooled into one ranked list.
    """
    if table.kind != config.KIND_EDGE:
        raise TradeNetworkError("Economy relationships need a relationship (edge) table")
    if economy not in table.nodes:
        raise UnknownNode(f"Unknown economy '{economy}' in network {table.year}")
    if k < 1:
        raise ValueError(f"K must be at least 1, got {k}")

    incident = [key for key in table.ranking if economy in key]
    return [(key, table.scores[key]) for key in incident[:k]]


def rank_table_by_year(tables: Sequence[CriticalityTable], k: int = config.DEFAULT_TOP_K) -> pd.DataFrame:
    """
    Published ranking layout: one row per rank, one column per year.

    Cells hold the economy (or relationship) at that rank; years with fewer
    than k entries leave the remaining cells empty.
    """
    columns = {}
    for table in sorted(tables, key=lambda t: t.year):
        keys = [format_key(key) for key, _ in rank_top(table, k)]
        columns[table.year] = keys + [''] * (k - len(keys))

    frame = pd.DataFrame(columns, index=pd.RangeIndex(1, k + 1, name='rank'))
    return frame.reset_index()


def group_criticality_by_year(tables: Sequence[CriticalityTable], groups: GroupMap) -> pd.DataFrame:
    """
    Year x group table of summed criticality. Group columns are ordered by
    criticality accumulated over all years, highest first.
    """
    rows = {table.year: group_criticality(table, groups) for table in tables}
    frame = pd.DataFrame.from_dict(rows, orient='index').sort_index().fillna(0.0)

    totals = {group: math.fsum(frame[group].tolist()) for group in frame.columns}
    ordered = sorted(frame.columns, key=lambda g: (-totals[g], g))
    frame = frame[ordered]
    frame.index.name = 'year'
    return frame.reset_index()


def criticality_time_series(tables: Sequence[CriticalityTable],
                            top_k: int = config.DEFAULT_TOP_K) -> pd.DataFrame:
    """
    Yearly criticality of the economies with the largest trade volume.

    Economies are chosen by import + export volume summed over all tables,
    whatever their criticality rank, so the series follows the big traders
    even in years where they fall outside the top of the ranking.

    Returns:
        DataFrame with a 'year' column followed by one column per selected
        economy (largest volume first); NaN where the economy is absent
    """
    if top_k < 1:
        raise ValueError(f"top_k must be at least 1, got {top_k}")
    if any(table.kind != config.KIND_NODE for table in tables):
        raise TradeNetworkError("Criticality series need economy (node) tables")

    ordered = sorted(tables, key=lambda t: t.year)
    totals: Dict[str, List[float]] = {}
    for table in ordered:
        for code in table.nodes:
            totals.setdefault(code, []).append(table.volumes[code])
    summed = {code: math.fsum(values) for code, values in totals.items()}
    selected = sorted(summed, key=lambda c: (-summed[c], c))[:top_k]

    frame = pd.DataFrame(
        [[table.scores.get(code, np.nan) for code in selected] for table in ordered],
        columns=selected,
        dtype=float,
    )
    frame.insert(0, 'year', [table.year for table in ordered])
    return frame
