import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netec.errors import NetworkError
from netec.flow import path_set
from netec.network import (
    Network,
    edge_total_order,
    indicator_matrix,
    parse_network,
    prefix_expand,
    prefix_start,
    prune_to_paths,
)


def test_parse_butterfly(butterfly):
    assert butterfly.n_s == 2
    assert butterfly.n_edges == 9
    assert butterfly.sinks == ("t", "u")


def test_parse_single_edge():
    net = parse_network("edge a s t\nsource s\nsink t\n")
    assert net.n_s == 1 and net.n_edges == 1


@pytest.mark.parametrize(
    "text, msg",
    [
        ("edge 1 s a\nedge 2 a t\nedge 3 t a\nsource s\nsink t\n", "cycle"),
        ("edge 1 s t\nedge 2 t s\nsource s\nsink t\n", "incoming"),
        ("edge 1 s t\nsource s\nsink v\n", "unknown sink"),
        ("edge 1 s t\nedge 1 s t\nsource s\nsink t\n", "duplicate"),
        ("edge 1 s t\nsink t\n", "no source"),
        ("edge 1 s t\nbogus line\nsource s\nsink t\n", "cannot parse"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(NetworkError, match=msg):
        parse_network(text)


def test_comments_ignored():
    net = parse_network("# header\nedge 1 s t  # direct\nsource s\nsink t\n")
    assert net.n_edges == 1


def test_two_sink_labeling_reproduced(two_sink):
    assert [e.id for e in two_sink.edges] == [str(i) for i in range(1, 14)]
    assert two_sink.n_s == 3


def test_chain_and_parallel_order():
    chain = Network.from_edges([("b", "a", "t"), ("a", "s", "a")], "s", ["t"])
    assert [e.id for e in chain.edges] == ["a", "b"]
    par = Network.from_edges([("y", "s", "t"), ("x", "s", "t")], "s", ["t"])
    assert [e.id for e in par.edges] == ["y", "x"]


@st.composite
def random_dags(draw):
    n_nodes = draw(st.integers(2, 6))
    names = ["s"] + [f"v{i}" for i in range(1, n_nodes)]
    pairs = st.tuples(st.integers(0, n_nodes - 2), st.integers(1, n_nodes - 1)).filter(lambda p: p[0] < p[1])
    raw = draw(st.lists(pairs, min_size=1, max_size=12))
    edges = [(f"e{k}", names[a], names[b]) for k, (a, b) in enumerate(raw)]
    perm = draw(st.permutations(range(len(edges))))
    return [edges[i] for i in perm], names[-1], names


@settings(max_examples=80)
@given(random_dags())
def test_total_order_extends_partial_order(dag):
    edges, sink, names = dag
    net = Network.from_edges(edges, "s", [sink], nodes=names)
    pos = {e.id: k for k, e in enumerate(net.edges)}
    for e in net.edges:
        for e2 in net.edges:
            if e.head == e2.tail:
                assert pos[e.id] < pos[e2.id]
    assert all(e.tail == "s" for e in net.edges[: net.n_s])
    assert edge_total_order(net) == list(range(net.n_edges))


def test_indicator_matrices(butterfly):
    assert np.array_equal(indicator_matrix(butterfly, range(9)), np.eye(9, dtype=np.int64))
    assert indicator_matrix(butterfly, []).shape == (0, 9)
    A = indicator_matrix(butterfly, [butterfly.index("e5"), butterfly.index("e2")])
    assert [list(np.flatnonzero(r)) for r in A] == [[1], [4]]
    assert np.array_equal(A @ A.T, np.eye(2, dtype=np.int64))


def test_prune_keeps_two_sink_network(two_sink, two_sink_paths):
    pruned, kept, paths = prune_to_paths(two_sink, two_sink_paths)
    assert kept == list(range(13))
    assert paths == two_sink_paths


def test_prune_drops_dangling_edge():
    net = parse_network("edge 1 s a\nedge 2 a t\nedge 3 a x\nsource s\nsink t\n")
    pruned, kept, paths = prune_to_paths(net, {"t": [(0, 1)]})
    assert [e.id for e in pruned.edges] == ["1", "2"]
    assert "x" not in pruned.nodes


def test_prune_butterfly_unchanged(butterfly):
    paths = path_set(butterfly, {"t": 2, "u": 2})
    pruned, kept, _ = prune_to_paths(butterfly, paths)
    assert pruned.n_edges == 9


def test_prefix_sequence_butterfly(butterfly):
    paths = path_set(butterfly, {"t": 2, "u": 2})
    g0 = prefix_start(butterfly, paths)
    assert g0.inputs == {"t": (0, 1), "u": (0, 1)}
    g1 = prefix_expand(g0)
    # e3 lies on the first path to u only
    assert butterfly.edge_ids(g1.inputs["t"]) == ["e1", "e2"]
    assert butterfly.edge_ids(g1.inputs["u"]) == ["e3", "e2"]
    assert g1.indicator("u").shape == (2, 3)


def test_prefix_sequence_reaches_path_ends(two_sink, two_sink_paths):
    g = prefix_start(two_sink, two_sink_paths)
    assert g.inputs == {"t": (0, 1, 2), "u": (0, 1, 2)}
    while not g.is_complete():
        g = prefix_expand(g)
        assert all(len(v) == 3 for v in g.inputs.values())
    assert g.n_edges == 13
    for t, plist in two_sink_paths.items():
        assert g.inputs[t] == tuple(p[-1] for p in plist)
    with pytest.raises(NetworkError):
        prefix_expand(g)
