"""Network snapshot: volume accounting and removal views."""

import math

import numpy as np
import pytest

from logic.errors import EmptyInput, TradeNetworkError, UnknownEdge, UnknownNode
from logic.network import (
    Network, export_volume, import_volume, mean_edge_volume, network_to_frame, remove_edge,
    remove_edges, remove_node, remove_nodes, to_digraph, total_volume, trade_volume,
)
from utils.fixtures import complete_digraph, random_network


def net(edges, year=2017):
    return Network.from_volumes(year, edges)


def test_export_volume():
    assert export_volume(net({('A', 'B'): 5, ('A', 'C'): 7}), 'A') == 12
    assert export_volume(net({('A', 'B'): 5}), 'B') == 0
    assert export_volume(net({('A', 'B'): 5, ('B', 'A'): 3}), 'B') == 3


def test_import_volume():
    assert import_volume(net({('A', 'B'): 5, ('C', 'B'): 7}), 'B') == 12
    assert import_volume(net({('A', 'B'): 5}), 'A') == 0
    assert import_volume(net({('A', 'B'): 5, ('B', 'A'): 3}), 'A') == 3


def test_unknown_node():
    with pytest.raises(UnknownNode):
        export_volume(net({('A', 'B'): 5}), 'Z')
    # also catchable as a KeyError
    with pytest.raises(KeyError):
        import_volume(net({('A', 'B'): 5}), 'Z')


def test_total_and_mean_volume():
    n = net({('A', 'B'): 5, ('C', 'B'): 7})
    assert total_volume(n) == 12
    assert mean_edge_volume(n) == 6
    assert mean_edge_volume(net({('A', 'B'): 5})) == 5
    assert mean_edge_volume(complete_digraph(4, volume=3.5)) == 3.5


def test_mean_volume_without_edges():
    bare = remove_edge(net({('A', 'B'): 5}), 'A', 'B')
    with pytest.raises(EmptyInput):
        mean_edge_volume(bare)


def test_trade_volume_is_import_plus_export():
    n = net({('A', 'B'): 5, ('B', 'C'): 2, ('C', 'B'): 1})
    assert trade_volume(n, 'B') == 8


def test_volume_conservation():
    for seed in range(20):
        n = random_network(8, 0.3, seed)
        if n is None:
            continue
        v = total_volume(n)
        assert math.isclose(sum(export_volume(n, c) for c in n.codes), v, rel_tol=1e-12)
        assert math.isclose(sum(import_volume(n, c) for c in n.codes), v, rel_tol=1e-12)


def test_canonical_order():
    a = net({('C', 'A'): 1, ('A', 'B'): 2, ('A', 'C'): 3})
    b = net({('A', 'C'): 3, ('C', 'A'): 1, ('A', 'B'): 2})
    assert a == b
    assert a.codes == ('A', 'B', 'C')
    assert a.edge_keys == (('A', 'B'), ('A', 'C'), ('C', 'A'))


def test_construction_errors():
    with pytest.raises(EmptyInput):
        net({})
    with pytest.raises(TradeNetworkError):
        net({('A', 'A'): 1})
    with pytest.raises(TradeNetworkError):
        net({('A', 'B'): 0})


def test_direct_construction_is_validated():
    def build(codes=('A', 'B', 'C'), sources=(0, 1), targets=(1, 2), volumes=(1.0, 2.0)):
        return Network(year=2017, codes=codes, sources=sources, targets=targets, volumes=volumes)

    assert build() == net({('A', 'B'): 1, ('B', 'C'): 2})
    assert build(sources=(), targets=(), volumes=()).n_edges == 0
    for bad in (
        dict(codes=('B', 'A', 'C')),
        dict(targets=(1, 3)),
        dict(sources=(-1, 1)),
        dict(sources=(1, 1), targets=(1, 2)),
        dict(volumes=(1.0, 0.0)),
        dict(volumes=(1.0, float('inf'))),
        dict(sources=(1, 0), targets=(2, 1)),
        dict(sources=(0, 0), targets=(1, 1)),
    ):
        with pytest.raises(TradeNetworkError):
            build(**bad)


def test_arrays_are_read_only():
    n = net({('A', 'B'): 5})
    with pytest.raises(ValueError):
        n.volumes[0] = 1.0


def test_remove_node_from_k3():
    reduced = remove_node(complete_digraph(3), 'N1')
    assert reduced == net({('N0', 'N2'): 1.0, ('N2', 'N0'): 1.0})


def test_remove_center_of_star(star):
    reduced = remove_node(star, 'c')
    assert reduced.codes == ('1', '2', '3')
    assert reduced.n_edges == 0


def test_remove_middle_of_path(path_abc):
    reduced = remove_node(path_abc, 'B')
    assert reduced.codes == ('A', 'C')
    assert reduced.n_edges == 0


def test_remove_edge_keeps_nodes(path_abc):
    reduced = remove_edge(path_abc, 'A', 'B')
    assert reduced.codes == ('A', 'B', 'C')
    assert reduced.edge_keys == (('B', 'C'),)


def test_remove_one_direction():
    reduced = remove_edge(net({('A', 'B'): 1, ('B', 'A'): 2}), 'A', 'B')
    assert reduced.edge_keys == (('B', 'A'),)
    assert reduced.edge_volume('B', 'A') == 2


def test_remove_only_edge():
    reduced = remove_edge(net({('A', 'B'): 1}), 'A', 'B')
    assert reduced.n_nodes == 2 and reduced.n_edges == 0


def test_unknown_edge(path_abc):
    with pytest.raises(UnknownEdge):
        remove_edge(path_abc, 'B', 'A')


def test_original_is_untouched(path_abc):
    before = path_abc.volumes.copy()
    remove_node(path_abc, 'B')
    remove_edge(path_abc, 'A', 'B')
    assert path_abc.n_nodes == 3 and path_abc.n_edges == 2
    assert np.array_equal(path_abc.volumes, before)


def test_batch_removals_match_repeated():
    n = random_network(8, 0.4, seed=3)
    a, b = n.codes[1], n.codes[-1]
    assert remove_nodes(n, [a, b]) == remove_node(remove_node(n, a), b)

    first, second = n.edge_keys[0], n.edge_keys[-1]
    assert remove_edges(n, [first, second]) == remove_edge(remove_edge(n, *first), *second)


def test_frame_and_digraph(path_abc_v2):
    frame = network_to_frame(path_abc_v2)
    assert list(frame.columns) == ['year', 'exporter', 'importer', 'volume']
    assert frame[['exporter', 'importer']].values.tolist() == [['A', 'B'], ['B', 'C']]

    graph = to_digraph(path_abc_v2)
    assert set(graph.nodes) == {'A', 'B', 'C'}
    assert graph['A']['B']['volume'] == 2.0
    assert graph['A']['B']['length'] == 0.5
