"""
Small reference networks and synthetic trade datasets for tests and benchmarks.
"""

from typing import List, Optional, Sequence

import numpy as np

from data.trade_loader import TradeRecord
from logic.network import Network


def path_network(volumes: Sequence[float] = (1.0, 1.0), year: int = 2017) -> Network:
    """A->B->C with the given volumes."""
    return Network.from_volumes(year, {('A', 'B'): volumes[0], ('B', 'C'): volumes[1]})


def out_star(leaves: int = 3, volume: float = 10.0, year: int = 2017) -> Network:
    """Center 'c' exporting to leaves '1'..'n'."""
    return Network.from_volumes(year, {('c', str(i)): volume for i in range(1, leaves + 1)})


def complete_digraph(n: int, volume: float = 1.0, year: int = 2017) -> Network:
    """Every ordered pair of n economies trades with the same volume."""
    codes = [f"N{i}" for i in range(n)]
    return Network.from_volumes(year, {(a, b): volume for a in codes for b in codes if a != b})


def random_network(n: int, density: float, seed: int, year: int = 2017,
                   unit_volumes: bool = False, max_volume: float = 10.0) -> Optional[Network]:
    """
    Random directed graph with volumes in (0, max_volume].

    Returns None when no edge was drawn. Economies without edges are not part
    of the network.
    """
    rng = np.random.default_rng(seed)
    codes = [f"N{i}" for i in range(n)]
    volumes = {}
    for a in range(n):
        for b in range(n):
            if a != b and rng.random() < density:
                volume = 1.0 if unit_volumes else max_volume - rng.uniform(0.0, max_volume)
                volumes[(codes[a], codes[b])] = volume
    if not volumes:
        return None
    return Network.from_volumes(year, volumes)


def synthetic_trade_records(years: Sequence[int], n_nodes: int = 250,
                            edges_per_year: int = 10_000, seed: int = 0) -> List[TradeRecord]:
    """
    Trade-like data: heavy-tailed economy sizes, partners drawn in proportion
    to the product of sizes, log-normal volumes.
    """
    rng = np.random.default_rng(seed)
    codes = np.array([f"E{i:03d}" for i in range(n_nodes)], dtype=object)
    size = rng.pareto(1.5, n_nodes) + 1.0

    weights = np.outer(size, size)
    np.fill_diagonal(weights, 0.0)
    weights = weights.ravel() / weights.sum()
    edges = min(edges_per_year, n_nodes * (n_nodes - 1))

    records = []
    for year in years:
        pairs = rng.choice(weights.size, size=edges, replace=False, p=weights)
        volumes = rng.lognormal(mean=15.0, sigma=2.0, size=edges)
        for pair, volume in zip(pairs.tolist(), volumes.tolist()):
            exporter, importer = divmod(pair, n_nodes)
            records.append(TradeRecord(int(year), codes[exporter], codes[importer], volume))
    return records
