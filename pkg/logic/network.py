"""
Immutable directed trade network snapshot: volume accounting and removal views.

A Network holds one year of trade. Nodes are economy codes kept in
lexicographic order; edges are parallel numpy arrays sorted by
(source index, target index). Removals never touch the original snapshot.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from scipy import sparse

import config
from logic.errors import EmptyInput, TradeNetworkError, UnknownEdge, UnknownNode

EdgeKey = Tuple[str, str]


def _read_only(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Network:
    """One year's directed trade network (A_t / W_t share the same snapshot)."""

    year: int
    codes: Tuple[str, ...]
    sources: np.ndarray
    targets: np.ndarray
    volumes: np.ndarray
    _index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'codes', tuple(self.codes))
        object.__setattr__(self, 'sources', _read_only(self.sources, np.int64))
        object.__setattr__(self, 'targets', _read_only(self.targets, np.int64))
        object.__setattr__(self, 'volumes', _read_only(self.volumes, np.float64))
        object.__setattr__(self, '_index', {code: i for i, code in enumerate(self.codes)})

        if len(self._index) != len(self.codes):
            raise TradeNetworkError(f"Duplicate economy codes in network {self.year}")
        if not (len(self.sources) == len(self.targets) == len(self.volumes)):
            raise TradeNetworkError("Edge arrays must have equal length")
        if any(a >= b for a, b in zip(self.codes, self.codes[1:])):
            raise TradeNetworkError(f"Economy codes of network {self.year} must be sorted")
        if self.n_edges == 0:
            return

        n = len(self.codes)
        if self.sources.min() < 0 or self.targets.min() < 0 \
                or self.sources.max() >= n or self.targets.max() >= n:
            raise TradeNetworkError(f"Edge endpoint out of range in network {self.year}")
        if np.any(self.sources == self.targets):
            raise TradeNetworkError(f"Self-loop in network {self.year}")
        if not np.all(np.isfinite(self.volumes) & (self.volumes > 0)):
            raise TradeNetworkError(f"Volumes must be positive in network {self.year}")
        # strictly increasing (source, target) pairs: canonical order, no duplicates
        pair_ids = self.sources * n + self.targets
        if np.any(np.diff(pair_ids) <= 0):
            raise TradeNetworkError(
                f"Relationships of network {self.year} must be unique and sorted by (source, target)"
            )

    @classmethod
    def from_volumes(cls, year: int, volumes: Mapping[EdgeKey, float]) -> 'Network':
        """
        Build a snapshot from a {(exporter, importer): volume} mapping.

        The node set is every code that appears as exporter or importer.

        Raises:
            EmptyInput: no edges given
            TradeNetworkError: self-loop or non-positive volume
        """
        if not volumes:
            raise EmptyInput(f"No trade relationships for year {year}")

        codes = sorted({code for pair in volumes for code in pair})
        index = {code: i for i, code in enumerate(codes)}

        rows = []
        for (exporter, importer), volume in volumes.items():
            if exporter == importer:
                raise TradeNetworkError(f"Self-loop {exporter}->{importer} in year {year}")
            volume = float(volume)
            if not math.isfinite(volume) or volume <= 0:
                raise TradeNetworkError(
                    f"Volume must be positive for {exporter}->{importer} in year {year}, got {volume}"
                )
            rows.append((index[exporter], index[importer], volume))
        rows.sort()

        return cls(
            year=int(year),
            codes=tuple(codes),
            sources=[r[0] for r in rows],
            targets=[r[1] for r in rows],
            volumes=[r[2] for r in rows],
        )

    @property
    def n_nodes(self) -> int:
        return len(self.codes)

    @property
    def n_edges(self) -> int:
        return len(self.volumes)

    def __contains__(self, code) -> bool:
        return code in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.year == other.year
            and self.codes == other.codes
            and np.array_equal(self.sources, other.sources)
            and np.array_equal(self.targets, other.targets)
            and np.array_equal(self.volumes, other.volumes)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Network(year={self.year}, N={self.n_nodes}, N_e={self.n_edges})"

    def index_of(self, code: str) -> int:
        try:
            return self._index[code]
        except KeyError:
            raise UnknownNode(f"Unknown economy '{code}' in network {self.year}") from None

    @cached_property
    def _edge_positions(self) -> Dict[EdgeKey, int]:
        return {
            (self.codes[s], self.codes[t]): pos
            for pos, (s, t) in enumerate(zip(self.sources.tolist(), self.targets.tolist()))
        }

    @property
    def edge_keys(self) -> Tuple[EdgeKey, ...]:
        return tuple(self._edge_positions)

    def edge_position(self, source: str, target: str) -> int:
        try:
            return self._edge_positions[(source, target)]
        except KeyError:
            raise UnknownEdge(
                f"No relationship {source}{config.EDGE_KEY_SEPARATOR}{target} in network {self.year}"
            ) from None

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self._edge_positions

    def edge_volume(self, source: str, target: str) -> float:
        return float(self.volumes[self.edge_position(source, target)])

    @cached_property
    def export_volumes(self) -> np.ndarray:
        """V_i^out for every node, in node order."""
        out = np.bincount(self.sources, weights=self.volumes, minlength=self.n_nodes)
        out.setflags(write=False)
        return out

    @cached_property
    def import_volumes(self) -> np.ndarray:
        """V_i^in for every node, in node order."""
        out = np.bincount(self.targets, weights=self.volumes, minlength=self.n_nodes)
        out.setflags(write=False)
        return out


def export_volume(network: Network, node: str) -> float:
    """Total export volume of an economy (sum over outgoing relationships)."""
    return float(network.export_volumes[network.index_of(node)])


def import_volume(network: Network, node: str) -> float:
    """Total import volume of an economy (sum over incoming relationships)."""
    return float(network.import_volumes[network.index_of(node)])


def trade_volume(network: Network, node: str) -> float:
    """Import plus export volume; used as the ranking tie-break for economies."""
    i = network.index_of(node)
    return float(network.import_volumes[i] + network.export_volumes[i])


def total_volume(network: Network) -> float:
    """V, the total trade volume of the network."""
    return math.fsum(network.volumes.tolist())


def mean_edge_volume(network: Network) -> float:
    """<v>, the average volume of a trade relationship."""
    if network.n_edges == 0:
        raise EmptyInput(f"Network {network.year} has no relationships")
    return total_volume(network) / network.n_edges


def remove_node_indices(network: Network, indices: Iterable[int]) -> Network:
    """Drop nodes by index together with every incident edge."""
    drop = np.zeros(network.n_nodes, dtype=bool)
    drop[np.asarray(list(indices), dtype=np.int64)] = True

    keep_edge = ~(drop[network.sources] | drop[network.targets])
    new_index = np.cumsum(~drop) - 1  # monotone, so edge order is preserved

    return Network(
        year=network.year,
        codes=tuple(code for code, dropped in zip(network.codes, drop) if not dropped),
        sources=new_index[network.sources[keep_edge]],
        targets=new_index[network.targets[keep_edge]],
        volumes=network.volumes[keep_edge],
    )


def remove_edge_positions(network: Network, positions: Iterable[int]) -> Network:
    """Drop edges by position; the node set is unchanged."""
    keep = np.ones(network.n_edges, dtype=bool)
    keep[np.asarray(list(positions), dtype=np.int64)] = False

    return Network(
        year=network.year,
        codes=network.codes,
        sources=network.sources[keep],
        targets=network.targets[keep],
        volumes=network.volumes[keep],
    )


def remove_node(network: Network, node: str) -> Network:
    """G_i: the network without economy i and all its relationships."""
    return remove_node_indices(network, [network.index_of(node)])


def remove_nodes(network: Network, nodes: Iterable[str]) -> Network:
    return remove_node_indices(network, [network.index_of(code) for code in nodes])


def remove_edge(network: Network, source: str, target: str) -> Network:
    """G_ij: the network without the relationship i->j (endpoints stay)."""
    return remove_edge_positions(network, [network.edge_position(source, target)])


def remove_edges(network: Network, edges: Iterable[EdgeKey]) -> Network:
    return remove_edge_positions(network, [network.edge_position(s, t) for s, t in edges])


def length_matrix(network: Network, weighted: bool) -> sparse.csr_matrix:
    """
    Sparse edge-length matrix: 1 per edge (A_t) or 1/v_ij (W_t).

    Explicit entries are always positive, so csgraph never mistakes an
    edge for a missing one.
    """
    data = 1.0 / network.volumes if weighted else np.ones(network.n_edges)
    return sparse.csr_matrix(
        (data, (network.sources, network.targets)),
        shape=(network.n_nodes, network.n_nodes),
    )


def network_to_frame(network: Network) -> pd.DataFrame:
    """Canonical edge list: year, exporter, importer, volume."""
    codes = np.asarray(network.codes, dtype=object)
    return pd.DataFrame({
        'year': np.full(network.n_edges, network.year, dtype=np.int64),
        'exporter': codes[network.sources] if network.n_edges else [],
        'importer': codes[network.targets] if network.n_edges else [],
        'volume': network.volumes,
    }, columns=list(config.TRADE_COLUMNS))


def to_digraph(network: Network) -> nx.DiGraph:
    """
    networkx view of the snapshot. Edges carry 'volume' and 'length' (1/volume).
    """
    graph = nx.DiGraph(year=network.year)
    graph.add_nodes_from(network.codes)
    for (source, target), volume in zip(network.edge_keys, network.volumes.tolist()):
        graph.add_edge(source, target, volume=volume, length=1.0 / volume)
    return graph
