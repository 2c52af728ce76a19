import random
from fractions import Fraction as F

import pytest

from tedgraph.errors import (
    DimensionMismatch,
    EmptyUniverse,
    MalformedMatrix,
    MissingFiltrationValue,
    NonInjectiveFeatures,
)
from tedgraph.filtration import (
    EdgeFiltration,
    FiltrationMatrix,
    canonical_rank_filtration,
    choose_phi_epsilon,
    epsilon_separates,
    filtration_matrix,
    line_graph_matrix,
    phi_filtration,
    phi_map,
    phi_vectors,
    universe_of,
)
from tedgraph.graph import Coloring, build_graph, colored_edge_multiset, cycle_graph, path_graph, permute_graph
from tedgraph.values import INF
from tedgraph.wl import wl_refine

from conftest import random_graph


def test_rank_single_class():
    ef = canonical_rank_filtration({(0, 0)})
    assert ef((0, 0)) == F(1, 2)


def test_rank_three_classes():
    ef = canonical_rank_filtration({(1, 1), (0, 1), (0, 0)})
    assert [v for _, v in ef.items()] == [F(1, 6), F(2, 6), F(3, 6)]
    assert ef((1, 0)) == F(1, 3)


def test_rank_deterministic_and_order_free():
    u = [(2, 3), (0, 0), (1, 2), (0, 3)]
    assert canonical_rank_filtration(u).table == canonical_rank_filtration(reversed(u)).table


def test_rank_custom_order():
    ef = canonical_rank_filtration({(0, 0), (0, 1)}, key=lambda e: -e[1])
    assert ef((0, 1)) == F(1, 4) and ef((0, 0)) == F(1, 2)


def test_empty_universe():
    with pytest.raises(EmptyUniverse):
        canonical_rank_filtration(set())
    with pytest.raises(EmptyUniverse):
        phi_filtration(set())


def test_filtration_rejects_out_of_range_values():
    with pytest.raises(ValueError):
        EdgeFiltration({(0, 0): F(3, 4)}, "canonical_rank")
    with pytest.raises(ValueError):
        EdgeFiltration({(0, 0): F(0)}, "canonical_rank")


def test_missing_value():
    ef = canonical_rank_filtration({(0, 0)})
    with pytest.raises(MissingFiltrationValue):
        ef((0, 1))


def test_json_round_trip():
    ef = phi_filtration({(0, 0), (0, 1), (1, 2)})
    assert EdgeFiltration.from_json_obj(ef.to_json_obj()) == ef
    assert ef.to_json_obj()["table"][0] == {"colored_edge": [0, 0], "value": ef((0, 0)).__str__()}


def test_phi_map_examples():
    f = lambda v: v[0] + 1
    x, y = (F(2), F(5)), (F(7), F(1))
    assert phi_map(x, x, f, F(1, 3)).diff_part == (0, 0)
    assert phi_map(x, y, f, F(1, 3)) == phi_map(y, x, f, F(1, 3))
    with pytest.raises(DimensionMismatch):
        phi_map((F(1),), (F(1), F(2)), f, F(1))


def test_phi_random_scan_hundred_colors():
    rng = random.Random(21)
    colors = list(range(100))
    universe = set()
    while len(universe) < 10**4 // 2:
        a, b = rng.choice(colors), rng.choice(colors)
        universe.add((min(a, b), max(a, b)))
    vecs = phi_vectors(universe)
    assert len(set(vecs.values())) == len(vecs)


def test_phi_filtration_examples():
    assert phi_filtration({(3, 3)}).table == {(3, 3): F(1, 2)}
    u = {(0, 0), (0, 1), (1, 1), (1, 4), (2, 3)}
    ef = phi_filtration(u)
    vals = [v for _, v in ef.items()]
    assert len(set(vals)) == len(u)
    assert all(0 < v <= F(1, 2) for v in vals)
    assert sorted(vals) == sorted(v for _, v in canonical_rank_filtration(u).items())


def test_phi_rejects_shared_features():
    with pytest.raises(NonInjectiveFeatures):
        phi_filtration({(0, 1)}, color_features={0: (F(1),), 1: (F(1),)})


def test_phi_multidimensional_features():
    feats = {0: (F(1), F(0)), 1: (F(0), F(1)), 2: (F(1), F(1))}
    ef = phi_filtration({(0, 1), (2, 2), (0, 2), (1, 1)}, color_features=feats)
    assert ef.is_injective()


def test_epsilon_choice_verified_by_brute_force():
    rng = random.Random(22)
    for _ in range(30):
        k = rng.randint(2, 8)
        feats = {c: (F(rng.randint(-5, 5)) + F(c, 1000),) for c in range(k)}
        enc = {c: F(c + 1) for c in range(k)}
        eps = choose_phi_epsilon(feats, enc)
        assert epsilon_separates(feats, enc, eps)
        # full pairwise check of phi images, independent of the separation argument
        f = lambda v, inv={v: c for c, v in feats.items()}: enc[inv[v]]
        seen = {}
        for a in range(k):
            for b in range(a, k):
                img = phi_map(feats[a], feats[b], f, eps)
                assert seen.setdefault(img, (a, b)) == (a, b)


def test_epsilon_separates_rejects_bad_eps():
    feats = {0: (F(0),), 1: (F(1),), 2: (F(3),)}
    enc = {0: F(1), 1: F(2), 2: F(3)}
    assert epsilon_separates(feats, enc, F(1, 5))
    assert not epsilon_separates(feats, enc, F(1))
    assert not epsilon_separates(feats, enc, F(0))


def test_matrix_examples():
    tri = cycle_graph(3)
    ef = canonical_rank_filtration({(0, 0)})
    m = filtration_matrix(tri, Coloring.uniform(3), ef)
    assert m.to_dense() == [[0, F(1, 2), F(1, 2)], [F(1, 2), 0, F(1, 2)], [F(1, 2), F(1, 2), 0]]
    p = path_graph(3)
    assert filtration_matrix(p, Coloring.uniform(3), ef)[0, 2] is INF
    iso = build_graph(3, [(0, 1)])
    m = filtration_matrix(iso, Coloring.uniform(3), ef)
    assert [m[2, j] for j in range(3)] == [INF, INF, 0]


def test_matrix_missing_value():
    ef = canonical_rank_filtration({(0, 0)})
    with pytest.raises(MissingFiltrationValue):
        filtration_matrix(path_graph(2), Coloring((0, 1)), ef)


def test_matrix_from_dense_validation():
    half = F(1, 2)
    good = FiltrationMatrix.from_dense([[0, half], [half, 0]])
    assert good.entries == {(0, 1): half}
    for rows in (
        [[0, half], [F(1, 3), 0]],
        [[1, half], [half, 0]],
        [[0, -half], [-half, 0]],
        [[0, half]],
    ):
        with pytest.raises(MalformedMatrix):
            FiltrationMatrix.from_dense(rows)


def test_matrix_consistency_and_permutation():
    rng = random.Random(23)
    for _ in range(100):
        n = rng.randint(2, 10)
        g = random_graph(rng, n)
        c = wl_refine(g).stable
        if g.edge_count == 0:
            continue
        ef = phi_filtration(universe_of([(g, c)]))
        m = filtration_matrix(g, c, ef)
        assert sorted(v for _, v in m.finite_entries()) == sorted(ef(e) for e in colored_edge_multiset(g, c))
        assert all(v <= F(1, 2) for _, v in m.finite_entries())
        assert line_graph_matrix(g, c, ef) == m
        perm = list(range(n))
        rng.shuffle(perm)
        pm = filtration_matrix(permute_graph(g, perm), c.permuted(perm), ef)
        assert pm == m.permuted(perm)
        dense, pdense = m.to_dense(), pm.to_dense()
        assert all(pdense[perm[i]][perm[j]] == dense[i][j] for i in range(n) for j in range(n))
