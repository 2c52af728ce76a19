"""Injective edge filtrations on colored-edge classes and their distance matrices.

Filtration values are exact :class:`~fractions.Fraction` objects in
``(0, 1/2]``. Two constructions are offered: ranking classes by their color
pair, and ranking them by an injective vector encoding of the color pair
(:func:`phi_map`). Either way a class at rank ``r`` of ``R`` gets ``r/(2R)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    EmptyUniverse,
    MalformedMatrix,
    MissingFiltrationValue,
    NonInjectiveFeatures,
)
from .graph import ColoredEdge, Coloring, Graph, check_coloring, colored_edge, line_graph
from .values import INF, Value, as_fraction, format_exact

CANONICAL_RANK = "canonical_rank"
PHI_MAP = "phi_map"

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class EdgeFiltration:
    """Map from colored-edge class to a positive rational ``<= 1/2``."""

    table: Mapping[ColoredEdge, Fraction]
    construction: str = CANONICAL_RANK

    def __post_init__(self):
        for key, val in self.table.items():
            if not (0 < val <= HALF):
                raise ValueError(f"filtration value {val} for {key} outside (0, 1/2]")

    def __call__(self, edge: ColoredEdge) -> Fraction:
        try:
            return self.table[colored_edge(*edge)]
        except KeyError:
            raise MissingFiltrationValue(f"no filtration value for colored edge {edge}") from None

    def __contains__(self, edge: ColoredEdge) -> bool:
        return colored_edge(*edge) in self.table

    def __len__(self) -> int:
        return len(self.table)

    def items(self) -> list[tuple[ColoredEdge, Fraction]]:
        return sorted(self.table.items())

    def find_collision(self) -> tuple[ColoredEdge, ColoredEdge] | None:
        """First pair of classes sharing a value, or None if injective."""
        owner: dict[Fraction, ColoredEdge] = {}
        for key, val in self.items():
            if val in owner:
                return owner[val], key
            owner[val] = key
        return None

    def is_injective(self) -> bool:
        return self.find_collision() is None

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "construction": self.construction,
            "table": [{"colored_edge": list(k), "value": format_exact(v)} for k, v in self.items()],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Any]) -> EdgeFiltration:
        table = {colored_edge(*row["colored_edge"]): as_fraction(row["value"]) for row in obj["table"]}
        return cls(table, obj.get("construction", CANONICAL_RANK))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1, sort_keys=True)


def _rank_values(ordered: Sequence[ColoredEdge], construction: str) -> EdgeFiltration:
    total = len(ordered)
    return EdgeFiltration({e: Fraction(r, 2 * total) for r, e in enumerate(ordered, 1)}, construction)


def canonical_rank_filtration(
    universe: Iterable[ColoredEdge],
    key: Callable[[ColoredEdge], Any] | None = None,
) -> EdgeFiltration:
    """Rank the distinct classes and give rank ``r`` of ``R`` the value ``r/(2R)``.

    The default order is lexicographic on the ordered color pair; ``key``
    swaps in another total order (it must not tie distinct classes).
    """
    classes = sorted({colored_edge(*e) for e in universe})
    if not classes:
        raise EmptyUniverse("cannot build a filtration over an empty colored-edge universe")
    if key is not None:
        classes.sort(key=key)
    return _rank_values(classes, CANONICAL_RANK)


@dataclass(frozen=True)
class PhiVector:
    sum_part: tuple[Fraction, ...]
    diff_part: tuple[Fraction, ...]

    def as_tuple(self) -> tuple[Fraction, ...]:
        return self.sum_part + self.diff_part


def phi_map(
    x: Sequence[Fraction],
    y: Sequence[Fraction],
    f: Callable[[tuple[Fraction, ...]], Fraction],
    eps: Fraction,
) -> PhiVector:
    """``(a + b, |a - b|)`` with ``a = x + eps * f(x)`` and ``b`` likewise.

    ``f`` is a scalar encoder of feature vectors, broadcast over all
    coordinates. The result does not depend on the argument order.
    """
    if len(x) != len(y):
        raise DimensionMismatch(f"feature lengths differ: {len(x)} vs {len(y)}")
    x = tuple(as_fraction(v) for v in x)
    y = tuple(as_fraction(v) for v in y)
    fx, fy = eps * as_fraction(f(x)), eps * as_fraction(f(y))
    a = [xi + fx for xi in x]
    b = [yi + fy for yi in y]
    return PhiVector(tuple(p + q for p, q in zip(a, b)), tuple(abs(p - q) for p, q in zip(a, b)))


PairList = Sequence[tuple[int, int]]


def _all_pairs(keys: Iterable[int]) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(sorted(set(keys)), 2))


def _pair_sums(values: Mapping[int, Fraction], pairs: PairList) -> set[Fraction]:
    return {values[a] + values[b] for a, b in pairs}


def _differences(values: set[Fraction]) -> set[Fraction]:
    return {a - b for a in values for b in values if a != b}


def _coordinate(features: Mapping[int, Sequence[Fraction]], i: int) -> dict[int, Fraction]:
    return {c: as_fraction(v[i]) for c, v in features.items()}


def _min_gap(features: Mapping[int, Sequence[Fraction]], dim: int, pairs: PairList) -> Fraction | None:
    """Smallest positive difference between two pair sums in any one coordinate."""
    gap = None
    for i in range(dim):
        sums = sorted(_pair_sums(_coordinate(features, i), pairs))
        for a, b in zip(sums, sums[1:]):
            if gap is None or b - a < gap:
                gap = b - a
    return gap


def epsilon_separates(
    features: Mapping[int, Sequence[Fraction]],
    encoder: Mapping[int, Fraction],
    eps: Fraction,
    pairs: PairList | None = None,
) -> bool:
    """Check that ``eps`` keeps feature and encoder contributions apart.

    For each coordinate ``i`` let ``D_i`` hold the nonzero differences of two
    pair sums ``x_i + y_i`` over ``pairs`` (all color pairs by default), and
    ``T`` the nonzero differences of two pair sums ``f(x) + f(y)``. ``eps``
    is admissible when ``d = eps * t`` has no solution with ``d`` in ``D_i``
    and ``t`` in ``T``: then equal phi images force equal encoder sums and
    equal encoder gaps, which pins down the pair because the encoder is
    injective.
    """
    if eps <= 0:
        return False
    if pairs is None:
        pairs = _all_pairs(features)
    enc = {c: as_fraction(v) for c, v in encoder.items()}
    enc_sums = sorted(_pair_sums(enc, pairs))
    if len(enc_sums) < 2:
        return True
    (dim,) = {len(v) for v in features.values()}
    # |t| <= spread and every nonzero |d| >= the smallest adjacent gap, so
    # eps * spread < gap rules out all solutions without the quartic scan
    spread = enc_sums[-1] - enc_sums[0]
    gap = _min_gap(features, dim, pairs)
    if gap is None or eps * spread < gap:
        return True
    t_set = _differences(set(enc_sums))
    for i in range(dim):
        for d in _differences(_pair_sums(_coordinate(features, i), pairs)):
            if d / eps in t_set:
                return False
    return True


def choose_phi_epsilon(
    features: Mapping[int, Sequence[Fraction]],
    encoder: Mapping[int, Fraction],
    pairs: PairList | None = None,
) -> Fraction:
    """Deterministic admissible ``eps`` for :func:`phi_map` on a finite universe.

    Picks ``eps = g / (2 * s)`` where ``g`` is the smallest gap between pair
    sums of any coordinate and ``s`` the spread of encoder pair sums, so that
    ``eps * |t| < |d|`` always; the choice is then verified by
    :func:`epsilon_separates`. Only ``pairs`` need to be kept apart.
    """
    if pairs is None:
        pairs = _all_pairs(features)
    enc = {c: as_fraction(v) for c, v in encoder.items()}
    enc_sums = sorted(_pair_sums(enc, pairs))
    spread = enc_sums[-1] - enc_sums[0] if enc_sums else Fraction(0)
    gap = _min_gap(features, len(next(iter(features.values()))), pairs)
    if gap is None or spread == 0:
        eps = Fraction(1)
    else:
        eps = gap / (2 * spread)
    if not epsilon_separates(features, encoder, eps, pairs):  # pragma: no cover - guaranteed by the bound
        raise NonInjectiveFeatures(f"epsilon {eps} failed the separation check")
    return eps


def default_features(colors: Iterable[int]) -> dict[int, tuple[Fraction, ...]]:
    """Color id ``c`` as the one-dimensional feature ``(c,)``."""
    return {c: (Fraction(c),) for c in sorted(set(colors))}


def _phi_sort_key(v: PhiVector) -> tuple[Fraction, ...]:
    return v.as_tuple()


def phi_vectors(
    universe: Iterable[ColoredEdge],
    color_features: Mapping[int, Sequence[Fraction]] | None = None,
    encoder: Mapping[int, Fraction] | None = None,
    eps: Fraction | None = None,
) -> dict[ColoredEdge, PhiVector]:
    """Phi image of every class in ``universe``."""
    classes = sorted({colored_edge(*e) for e in universe})
    if not classes:
        raise EmptyUniverse("cannot build a filtration over an empty colored-edge universe")
    colors = sorted({c for e in classes for c in e})
    if color_features is None:
        color_features = default_features(colors)
    missing = [c for c in colors if c not in color_features]
    if missing:
        raise MissingFiltrationValue(f"no features for colors {missing[:5]}")
    feats = {c: tuple(as_fraction(v) for v in color_features[c]) for c in colors}
    if len({len(v) for v in feats.values()}) != 1:
        raise DimensionMismatch("color features have differing lengths")
    inverse: dict[tuple[Fraction, ...], int] = {}
    for c, v in feats.items():
        if v in inverse:
            raise NonInjectiveFeatures(f"colors {inverse[v]} and {c} share feature vector {v}")
        inverse[v] = c
    if encoder is None:
        encoder = {c: Fraction(c + 1) for c in colors}
    enc = {c: as_fraction(encoder[c]) for c in colors}
    if len(set(enc.values())) != len(enc):
        raise NonInjectiveFeatures("color encoder is not injective")
    if eps is None:
        eps = choose_phi_epsilon(feats, enc, classes)

    def f(vec: tuple[Fraction, ...]) -> Fraction:
        return enc[inverse[vec]]

    return {e: phi_map(feats[e[0]], feats[e[1]], f, eps) for e in classes}


def phi_filtration(
    universe: Iterable[ColoredEdge],
    color_features: Mapping[int, Sequence[Fraction]] | None = None,
    encoder: Mapping[int, Fraction] | None = None,
    eps: Fraction | None = None,
) -> EdgeFiltration:
    """Rank classes by their phi image and rescale ranks into ``(0, 1/2]``.

    Raises :class:`NonInjectiveFeatures` if two classes share a phi image,
    which the collision scan below detects exactly.
    """
    vecs = phi_vectors(universe, color_features, encoder, eps)
    owner: dict[PhiVector, ColoredEdge] = {}
    for e, v in vecs.items():
        if v in owner:
            raise NonInjectiveFeatures(f"classes {owner[v]} and {e} collide under phi")
        owner[v] = e
    ordered = sorted(vecs, key=lambda e: _phi_sort_key(vecs[e]))
    return _rank_values(ordered, PHI_MAP)


@dataclass(frozen=True)
class FiltrationMatrix:
    """Symmetric ``size x size`` matrix with zero diagonal and ``INF`` off edges.

    Only finite off-diagonal entries are stored, keyed by ``(i, j)`` with
    ``i < j``; indexing returns ``0`` on the diagonal and ``INF`` elsewhere.
    """

    size: int
    entries: Mapping[tuple[int, int], Fraction]

    def __getitem__(self, ij: tuple[int, int]) -> Value:
        i, j = ij
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise IndexError(ij)
        if i == j:
            return Fraction(0)
        return self.entries.get((i, j) if i < j else (j, i), INF)

    def finite_entries(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self.entries.items())

    def to_dense(self) -> list[list[Value]]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]

    def permuted(self, perm: Sequence[int]) -> FiltrationMatrix:
        moved = {}
        for (i, j), v in self.entries.items():
            a, b = perm[i], perm[j]
            moved[(a, b) if a < b else (b, a)] = v
        return FiltrationMatrix(self.size, moved)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Any]]) -> FiltrationMatrix:
        """Validate a dense matrix; ``INF``, ``"inf"`` or ``float('inf')`` mark non-edges."""
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise MalformedMatrix("matrix is not square")

        def conv(x):
            if x is INF or x == "inf" or (isinstance(x, float) and x == float("inf")):
                return INF
            return as_fraction(x)

        m = [[conv(x) for x in r] for r in rows]
        entries = {}
        for i in range(n):
            if m[i][i] is INF or m[i][i] != 0:
                raise MalformedMatrix(f"nonzero diagonal entry at ({i}, {i})")
            for j in range(i + 1, n):
                a, b = m[i][j], m[j][i]
                if a != b:
                    raise MalformedMatrix(f"asymmetric entries at ({i}, {j})")
                if a is INF:
                    continue
                if a <= 0:
                    raise MalformedMatrix(f"non-positive off-diagonal entry at ({i}, {j})")
                entries[(i, j)] = a
        return cls(n, entries)


def filtration_matrix(graph: Graph, coloring: Coloring, ef: EdgeFiltration) -> FiltrationMatrix:
    """Edge ``{i, j}`` gets ``ef`` of its colored edge; non-edges stay ``INF``."""
    check_coloring(graph, coloring)
    c = coloring.colors
    return FiltrationMatrix(graph.node_count, {(i, j): ef((c[i], c[j])) for i, j in graph.edges})


def line_graph_matrix(graph: Graph, coloring: Coloring, ef: EdgeFiltration) -> FiltrationMatrix:
    """Same matrix built the LGVR way: color line-graph nodes, then pull back.

    Each line-graph node carries the filtration value of its colored edge;
    entry ``(i, j)`` is read off the line-graph node of edge ``{i, j}``, and
    pairs that are not edges of ``graph`` (the virtual edges of the complete
    graph) stay at ``INF``.
    """
    lg = line_graph(graph, coloring, ef)
    entries = {e: lg.node_colors[k] for e, k in lg.edge_to_node.items()}
    return FiltrationMatrix(graph.node_count, entries)


def universe_of(pairs: Iterable[tuple[Graph, Coloring]]) -> set[ColoredEdge]:
    out: set[ColoredEdge] = set()
    for g, col in pairs:
        check_coloring(g, col)
        c = col.colors
        out.update(colored_edge(c[i], c[j]) for i, j in g.edges)
    return out


def iter_collisions(ef: EdgeFiltration) -> Iterator[tuple[ColoredEdge, ColoredEdge]]:
    owner: dict[Fraction, ColoredEdge] = {}
    for k, v in ef.items():
        if v in owner:
            yield owner[v], k
        else:
            owner[v] = k
