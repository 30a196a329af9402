"""Shortest paths and the three efficiency measures."""

import math

import networkx as nx
import pytest

from logic.efficiency import (
    UNREACHABLE, efficiency, efficiency_normalized, efficiency_unweighted, efficiency_weighted,
    network_summary, shortest_lengths_unweighted, shortest_lengths_weighted,
)
from logic.errors import TradeNetworkError
from logic.network import Network, remove_edge, remove_node, to_digraph
from utils.fixtures import random_network


def brute_force_efficiency(network: Network, weighted: bool) -> float:
    """Mean of 1/d over ordered pairs, d taken from every simple path."""
    graph = to_digraph(network)
    n = network.n_nodes
    if n < 2:
        return 0.0
    total = 0.0
    for source in network.codes:
        for target in network.codes:
            if source == target:
                continue
            best = math.inf
            for path in nx.all_simple_paths(graph, source, target):
                if weighted:
                    length = math.fsum(graph[a][b]['length'] for a, b in zip(path, path[1:]))
                else:
                    length = len(path) - 1
                best = min(best, length)
            if math.isfinite(best):
                total += 1.0 / best
    return total / (n * (n - 1))


def scaled(network: Network, k: float) -> Network:
    return Network.from_volumes(network.year, {key: v * k for key, v in zip(network.edge_keys, network.volumes)})


def test_unweighted_lengths(path_abc, k3):
    assert shortest_lengths_unweighted(path_abc, 'A').distances == {'A': 0, 'B': 1, 'C': 2}
    from_c = shortest_lengths_unweighted(path_abc, 'C')
    assert from_c['C'] == 0
    assert from_c['A'] == UNREACHABLE and not from_c.is_reachable('B')
    for code in k3.codes:
        lengths = shortest_lengths_unweighted(k3, code)
        assert all(lengths[other] == 1 for other in k3.codes if other != code)


def test_weighted_lengths(detour):
    lengths = shortest_lengths_weighted(detour, '1')
    assert lengths['2'] == 1.0
    assert lengths['3'] == 2.0

    single = Network.from_volumes(2017, {('A', 'B'): 4.0})
    assert shortest_lengths_weighted(single, 'A')['B'] == 0.25
    assert not shortest_lengths_weighted(single, 'B').is_reachable('A')


def test_unweighted_examples(k3, path_abc, star):
    assert efficiency_unweighted(k3) == 1.0
    assert efficiency_unweighted(path_abc) == pytest.approx(2.5 / 6, abs=1e-15)
    assert efficiency_unweighted(star) == 0.25


def test_weighted_examples(path_abc_v2, detour):
    assert efficiency_weighted(path_abc_v2) == pytest.approx(5 / 6, abs=1e-15)
    assert efficiency_weighted(detour) == pytest.approx(2.5 / 6, abs=1e-15)


def test_normalized_examples(path_abc_v2, k4):
    assert efficiency_normalized(path_abc_v2) == pytest.approx(2.5 / 6, abs=1e-15)
    # constant volumes: normalized equals unweighted
    assert efficiency_normalized(k4) == pytest.approx(efficiency_unweighted(k4), abs=1e-15)


def test_no_edges_is_zero(path_abc):
    bare = remove_node(path_abc, 'B')
    for mode in ('unweighted', 'weighted', 'normalized'):
        assert efficiency(bare, mode) == 0.0


def test_unknown_mode(path_abc):
    with pytest.raises(TradeNetworkError):
        efficiency(path_abc, 'harmonic')


def test_matches_simple_path_oracle():
    checked = 0
    for seed in range(600):
        n = 3 + seed % 6
        network = random_network(n, 0.15 + 0.1 * (seed % 5), seed)
        if network is None:
            continue
        assert efficiency_unweighted(network) == pytest.approx(
            brute_force_efficiency(network, weighted=False), rel=1e-12, abs=1e-15)
        assert efficiency_weighted(network) == pytest.approx(
            brute_force_efficiency(network, weighted=True), rel=1e-12, abs=1e-15)
        checked += 1
    assert checked >= 500


def test_bounds():
    for seed in range(50):
        network = random_network(7, 0.3, seed)
        if network is None:
            continue
        assert 0.0 <= efficiency_unweighted(network) <= 1.0
        assert efficiency_weighted(network) >= 0.0
        assert efficiency_normalized(network) >= 0.0


@pytest.mark.parametrize("k", [1e-3, 1.0, 1e3])
def test_scaling(k):
    for seed in range(110):
        network = random_network(6, 0.35, seed)
        if network is None:
            continue
        big = scaled(network, k)
        assert efficiency_weighted(big) == pytest.approx(k * efficiency_weighted(network), rel=1e-12)
        assert efficiency_normalized(big) == pytest.approx(efficiency_normalized(network), rel=1e-12)
        assert efficiency_unweighted(big) == efficiency_unweighted(network)


def test_unit_volumes_reduce_to_unweighted():
    for seed in range(50):
        network = random_network(7, 0.3, seed, unit_volumes=True)
        if network is None:
            continue
        assert efficiency_weighted(network) == efficiency_unweighted(network)


def test_removing_an_edge_never_helps():
    for seed in range(30):
        network = random_network(6, 0.4, seed)
        if network is None:
            continue
        for source, target in network.edge_keys:
            reduced = remove_edge(network, source, target)
            assert efficiency_unweighted(reduced) <= efficiency_unweighted(network)
            assert efficiency_weighted(reduced) <= efficiency_weighted(network)


def test_workers_do_not_change_results():
    network = random_network(40, 0.1, seed=7)
    for mode in ('unweighted', 'weighted', 'normalized'):
        assert efficiency(network, mode, workers=1) == efficiency(network, mode, workers=4)


def test_network_summary(path_abc_v2):
    row = network_summary(path_abc_v2)
    assert row['year'] == 2017
    assert (row['N'], row['N_e'], row['V']) == (3, 2, 4.0)
    assert row['E_A'] == pytest.approx(2.5 / 6, abs=1e-15)
    assert row['E_W'] == pytest.approx(5 / 6, abs=1e-15)
    assert row['E_Wbar'] == pytest.approx(2.5 / 6, abs=1e-15)
