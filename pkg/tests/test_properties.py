from hypothesis import given, settings
from hypothesis import strategies as st

from tedgraph.graph import build_graph, permute_graph
from tedgraph.persistence import lgvr_diagram
from tedgraph.wl import wl_distinguish, wl_refine


@st.composite
def graphs(draw, max_nodes=8):
    n = draw(st.integers(0, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, edges)


@st.composite
def graph_and_perm(draw):
    g = draw(graphs())
    return g, draw(st.permutations(range(g.node_count)))


@settings(max_examples=200, deadline=None)
@given(graph_and_perm())
def test_relabelling_changes_nothing(gp):
    g, perm = gp
    h = permute_graph(g, list(perm))
    assert not wl_distinguish(g, h)
    assert lgvr_diagram(g) == lgvr_diagram(h)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_euler_counts(g):
    d = lgvr_diagram(g)
    assert len(d.ph0) == g.node_count
    # merges plus cycles account for every edge
    assert d.nonessential0 + len(d.ph1) == g.edge_count
    assert sum(k for _, k in wl_refine(g).stable.histogram()) == g.node_count
