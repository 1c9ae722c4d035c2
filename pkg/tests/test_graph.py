import json

import pytest
from hypothesis import given, settings, strategies as st

from steinhom import corpus
from steinhom.abgroup import FgAbelianGroup, IntMatrix
from steinhom.graph import Graph, GraphError, bowen_franks, cohn_graph, relabel, rose


@pytest.mark.parametrize("n,expected", [(1, FgAbelianGroup(1)), (2, FgAbelianGroup()),
                                        (3, FgAbelianGroup(0, (2,))), (4, FgAbelianGroup(0, (3,)))])
def test_rose_bowen_franks(n, expected):
    assert bowen_franks(rose(n)) == expected


def test_sinks_contribute_free_summands():
    E = Graph(["v", "w"], [("e", "v", "w")])
    assert E.sinks == [1] and E.regular == [0]
    assert bowen_franks(E) == FgAbelianGroup(1)
    F = Graph(["v", "w"], [])
    assert bowen_franks(F) == FgAbelianGroup(2)


def test_cohn_graph_counts():
    C = cohn_graph(rose(1))
    assert (len(C.vertices), len(C.edges)) == (2, 2)
    C2 = cohn_graph(rose(2))
    assert (len(C2.vertices), len(C2.edges)) == (2, 4)
    E = Graph(["a", "b"], [])
    assert cohn_graph(E).vertices == ["a", "b"]
    assert bowen_franks(C) == FgAbelianGroup(1)


def _trace_power(M: IntMatrix, m):
    rows = M.to_rows()
    P = [[int(i == j) for j in range(len(rows))] for i in range(len(rows))]
    for _ in range(m):
        P = [[sum(P[i][k] * rows[k][j] for k in range(len(rows))) for j in range(len(rows))] for i in range(len(rows))]
    return sum(P[i][i] for i in range(len(rows)))


@pytest.mark.parametrize("name", corpus.names("graphs"))
def test_closed_paths_count_is_trace_of_adjacency_power(name):
    E = Graph.from_json(corpus.load("graphs", name))
    for m in (1, 2, 3):
        assert len(E.closed_paths(m)) == _trace_power(E.full_incidence(), m)


@st.composite
def graphs(draw):
    nv = draw(st.integers(1, 4))
    ne = draw(st.integers(0, 6))
    edges = [(f"e{k}", f"v{draw(st.integers(0, nv - 1))}", f"v{draw(st.integers(0, nv - 1))}") for k in range(ne)]
    return Graph([f"v{k}" for k in range(nv)], edges)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_bowen_franks_is_invariant_under_relabelling(E, rnd):
    vp = list(range(len(E.vertices)))
    ep = list(range(len(E.edges)))
    rnd.shuffle(vp)
    rnd.shuffle(ep)
    assert bowen_franks(relabel(E, vp, ep)) == bowen_franks(E)


def test_json_roundtrip():
    E = Graph.from_json(corpus.load("graphs", "two_vertex"))
    F = Graph.from_json(json.loads(json.dumps(E.to_json())))
    assert (F.vertices, F.edges, F.s, F.r) == (E.vertices, E.edges, E.s, E.r)


@pytest.mark.parametrize("vertices,edges", [(["v", "v"], []), (["v"], [("e", "v", "w")]),
                                            (["v"], [("e", "v", "v"), ("e", "v", "v")])])
def test_malformed_graphs_are_rejected(vertices, edges):
    with pytest.raises(GraphError):
        Graph(vertices, edges)


def test_missing_field_is_reported():
    with pytest.raises(GraphError, match="missing"):
        Graph.from_json({"vertices": ["v"], "edges": [{"name": "e", "s": "v"}]})
