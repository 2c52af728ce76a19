import random
from fractions import Fraction as F

import networkx as nx
import pytest

from tedgraph.errors import MalformedMatrix
from tedgraph.filtration import FiltrationMatrix, canonical_rank_filtration, phi_filtration, universe_of
from tedgraph.graph import Coloring, Graph, build_graph, cycle_graph, disjoint_union, path_graph, permute_graph, star_graph
from tedgraph.persistence import (
    TED,
    PersistencePoint,
    UnionFindStats,
    _sorted_edges,
    lgvr_diagram,
    ted,
    ted_equal,
    union_find_pass,
    vr_persistence,
)
from tedgraph.values import INF
from tedgraph.wl import wl_refine

from conftest import atlas, random_graph

HALF = F(1, 2)
C6 = cycle_graph(6)
TWO_C3 = disjoint_union(cycle_graph(3), cycle_graph(3))


def uniform_matrix(g: Graph, value=HALF) -> FiltrationMatrix:
    return FiltrationMatrix(g.node_count, {e: value for e in g.edges})


def sublevel_recount(g: Graph, values: dict) -> dict:
    """Per threshold: components and cycle rank of the sublevel graph, via networkx."""
    out = {}
    for t in sorted(set(values.values())):
        h = nx.Graph()
        h.add_nodes_from(range(g.node_count))
        h.add_edges_from(e for e, v in values.items() if v <= t)
        c = nx.number_connected_components(h)
        out[t] = (c, h.number_of_edges() - g.node_count + c)
    return out


def check_against_oracle(g: Graph, values: dict) -> None:
    d = vr_persistence(FiltrationMatrix(g.node_count, values))
    recount = sublevel_recount(g, values)
    prev_c, prev_rank = g.node_count, 0
    for t, (c, rank) in recount.items():
        deaths = sum(1 for p in d.ph0 if p.death == t)
        births = sum(1 for p in d.ph1 if p.birth == t)
        assert deaths == prev_c - c
        assert births == rank - prev_rank
        prev_c, prev_rank = c, rank
    assert d.essential0 == nx.number_connected_components(_nx(g))
    assert len(d.ph0) == g.node_count


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges)
    return h


def test_hexagon_diagram():
    d = vr_persistence(uniform_matrix(C6))
    assert d.ph0 == (PersistencePoint(0, HALF),) * 5 + (PersistencePoint(0, INF),)
    assert d.ph1 == (PersistencePoint(HALF, INF),)


def test_two_triangles_diagram():
    d = vr_persistence(uniform_matrix(TWO_C3))
    assert d.nonessential0 == 4 and d.essential0 == 2
    assert d.ph1 == (PersistencePoint(HALF, INF),) * 2


def test_edgeless():
    d = vr_persistence(FiltrationMatrix(5, {}))
    assert d.ph0 == (PersistencePoint(0, INF),) * 5 and d.ph1 == ()


def test_ted_examples():
    ef = canonical_rank_filtration({(0, 0)})
    tri = ted(cycle_graph(3), Coloring.uniform(3), ef)
    assert tri.ph0 == (PersistencePoint(0, HALF),) * 2 + (PersistencePoint(0, INF),)
    assert tri.ph1 == (PersistencePoint(HALF, INF),)
    ef = canonical_rank_filtration({(0, 1)})
    p = ted(path_graph(3), Coloring((0, 1, 0)), ef)
    assert p.ph0 == (PersistencePoint(0, HALF),) * 2 + (PersistencePoint(0, INF),) and p.ph1 == ()


def test_ted_equal_examples():
    a = vr_persistence(uniform_matrix(C6))
    b = vr_persistence(uniform_matrix(TWO_C3))
    assert ted_equal(a, a)
    assert not ted_equal(a, b)
    c = TED(a.ph0, a.ph1 * 2)
    assert not ted_equal(a, c)


def test_point_validation():
    with pytest.raises(ValueError):
        PersistencePoint(HALF, HALF)
    with pytest.raises(ValueError):
        PersistencePoint(INF, INF)
    with pytest.raises(ValueError):
        PersistencePoint(F(-1), INF)


def test_malformed_matrix():
    with pytest.raises(MalformedMatrix):
        vr_persistence(FiltrationMatrix(2, {(1, 0): HALF}))
    with pytest.raises(MalformedMatrix):
        vr_persistence(FiltrationMatrix(2, {(0, 1): F(0)}))


def test_lgvr_examples():
    a, b = lgvr_diagram(C6), lgvr_diagram(TWO_C3)
    assert (a.nonessential0, len(a.ph1)) == (5, 1)
    assert (b.nonessential0, len(b.ph1)) == (4, 2)
    s = lgvr_diagram(star_graph(3))
    assert s.ph1 == () and len(s.ph0) == 4 and s.essential0 == 1
    assert lgvr_diagram(build_graph(3, [])).ph0 == (PersistencePoint(0, INF),) * 3


def test_lgvr_values_in_range():
    rng = random.Random(31)
    for _ in range(100):
        d = lgvr_diagram(random_graph(rng, rng.randint(1, 10)))
        for p in d.ph0 + d.ph1:
            assert p.birth == 0 or 0 < p.birth <= HALF
            assert p.death is INF or 0 < p.death <= HALF


def test_lgvr_permutation_invariant():
    rng = random.Random(32)
    for _ in range(100):
        n = rng.randint(1, 10)
        g = random_graph(rng, n)
        perm = list(range(n))
        rng.shuffle(perm)
        assert ted_equal(lgvr_diagram(g), lgvr_diagram(permute_graph(g, perm)))


def test_invariants_and_euler_bookkeeping():
    rng = random.Random(33)
    for _ in range(300):
        g = random_graph(rng, rng.randint(0, 12))
        d = lgvr_diagram(g)
        comps = g.component_count()
        assert len(d.ph0) == g.node_count
        assert d.essential0 == comps
        assert all(p.essential for p in d.ph1)
        assert len(d.ph1) == g.edge_count - g.node_count + comps
        assert d.nonessential0 + len(d.ph1) == g.edge_count


def test_oracle_exhaustive_small_random_values():
    rng = random.Random(34)
    for g in atlas(6):
        values = {e: F(rng.randint(1, 4), 8) for e in g.edges}
        check_against_oracle(g, values)


def test_tie_order_invariance():
    rng = random.Random(35)
    for _ in range(20):
        g = random_graph(rng, rng.randint(3, 9), 0.5)
        values = {e: F(rng.randint(1, 3), 6) for e in g.edges}
        base = union_find_pass(g.node_count, _sorted_edges(values))
        for _ in range(100):
            edges = [(i, j, v) for (i, j), v in values.items()]
            rng.shuffle(edges)
            edges.sort(key=lambda e: e[2])  # stable: ties keep the shuffled order
            assert ted_equal(union_find_pass(g.node_count, edges), base)


def test_union_find_operation_count():
    rng = random.Random(36)
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 15))
        stats = UnionFindStats()
        lgvr_diagram(g, stats=stats)
        assert stats.operations == g.edge_count == stats.edges
        assert stats.per_graph == [g.edge_count]


def test_json_round_trip():
    d = lgvr_diagram(C6)
    assert TED.from_json_obj(d.to_json_obj()) == d
    assert d.to_json_obj()["ph1"] == [["1/2", "inf"]]


def test_filtration_choice_does_not_matter_for_hexagon_pair():
    a, b = wl_refine(C6).stable, wl_refine(TWO_C3).stable
    for build in (canonical_rank_filtration, phi_filtration):
        ef = build(universe_of([(C6, a), (TWO_C3, b)]))
        assert not ted_equal(ted(C6, a, ef), ted(TWO_C3, b, ef))
