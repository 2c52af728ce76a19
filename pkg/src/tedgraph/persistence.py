"""Persistence of the 1-skeleton Vietoris-Rips filtration of a filtration matrix.

On a 1-skeleton every edge either merges two components (a finite point in
dimension 0) or closes a cycle that nothing can fill (an essential point in
dimension 1), so one sorted pass with union-find computes both diagrams.
"""

from __future__ import annotations

import gc
import json
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .errors import MalformedMatrix
from .filtration import (
    EdgeFiltration,
    FiltrationMatrix,
    canonical_rank_filtration,
    filtration_matrix,
    phi_filtration,
    universe_of,
)
from .graph import Coloring, Graph
from .values import INF, Value, as_value, format_exact, value_key
from .wl import wl_refine, wl_refine_joint

ZERO = Fraction(0)


@dataclass(frozen=True, order=False)
class PersistencePoint:
    birth: Fraction
    death: Value

    def __post_init__(self):
        if self.birth is INF or self.birth < 0:
            raise ValueError(f"invalid birth {self.birth}")
        if not (self.death is INF or self.birth < self.death):
            raise ValueError(f"death {self.death} must exceed birth {self.birth}")

    @property
    def essential(self) -> bool:
        return self.death is INF

    def sort_key(self):
        return (self.birth, value_key(self.death))

    def __lt__(self, other: PersistencePoint) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"({self.birth}, {self.death})"

    @classmethod
    def _unchecked(cls, birth: Fraction, death: Value) -> PersistencePoint:
        p = object.__new__(cls)
        object.__setattr__(p, "birth", birth)
        object.__setattr__(p, "death", death)
        return p


def _canon(points: Iterable[PersistencePoint]) -> tuple[PersistencePoint, ...]:
    return tuple(sorted(points, key=PersistencePoint.sort_key))


@dataclass(frozen=True)
class TED:
    """Dimension-0 and dimension-1 diagrams, each a sorted multiset of points."""

    ph0: tuple[PersistencePoint, ...]
    ph1: tuple[PersistencePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "ph0", _canon(self.ph0))
        object.__setattr__(self, "ph1", _canon(self.ph1))

    @classmethod
    def _presorted(cls, ph0: tuple, ph1: tuple) -> TED:
        t = object.__new__(cls)
        object.__setattr__(t, "ph0", ph0)
        object.__setattr__(t, "ph1", ph1)
        return t

    @property
    def essential0(self) -> int:
        return sum(1 for p in self.ph0 if p.essential)

    @property
    def nonessential0(self) -> int:
        return len(self.ph0) - self.essential0

    def to_json_obj(self) -> dict[str, list]:
        def enc(pts):
            return [[format_exact(p.birth), format_exact(p.death)] for p in pts]

        return {"ph0": enc(self.ph0), "ph1": enc(self.ph1)}

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Any]) -> TED:
        def dec(rows):
            return [PersistencePoint(as_value(b), as_value(d)) for b, d in rows]

        return cls(tuple(dec(obj["ph0"])), tuple(dec(obj["ph1"])))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def counts(self) -> dict[str, int]:
        return {
            "ph0": len(self.ph0),
            "ph0_essential": self.essential0,
            "ph0_finite": self.nonessential0,
            "ph1": len(self.ph1),
        }


@dataclass
class UnionFindStats:
    """Operation counters for one union-find pass."""

    edges: int = 0
    finds: int = 0
    unions: int = 0
    cycles: int = 0
    per_graph: list[int] = field(default_factory=list)

    @property
    def operations(self) -> int:
        """Edge steps taken, each one union or one cycle detection."""
        return self.unions + self.cycles


def _sorted_edges(entries: Mapping[tuple[int, int], Fraction]) -> list[tuple[int, int, Fraction]]:
    # rank distinct values once, then sort on small integers; ties fall back to (i, j).
    # Values are keyed by (numerator, denominator): hashing Fractions is slow.
    pairs = {(v.numerator, v.denominator): v for v in entries.values()}
    order = sorted(pairs, key=lambda nd: pairs[nd])
    ranks = {nd: r for r, nd in enumerate(order)}
    distinct = [pairs[nd] for nd in order]
    keyed = sorted((ranks[(v.numerator, v.denominator)], i, j) for (i, j), v in entries.items())
    return [(i, j, distinct[r]) for r, i, j in keyed]


def union_find_pass(
    size: int,
    edges: Sequence[tuple[int, int, Fraction]],
    stats: UnionFindStats | None = None,
) -> TED:
    """Process edges in the given order; an edge merging components kills one."""
    ordered = all(a[2] <= b[2] for a, b in zip(edges, edges[1:]))
    return _union_find(size, edges, stats, ordered)


def _union_find(
    size: int,
    edges: Sequence[tuple[int, int, Fraction]],
    stats: UnionFindStats | None,
    ordered: bool,
) -> TED:
    # with value-sorted edges the points come out in diagram order, so only
    # the extreme values need checking and the canonical sort is skipped
    if ordered and edges and (edges[0][2] <= 0 or edges[-1][2] is INF):
        ordered = False
    parent = list(range(size))
    rank = [0] * size
    ph0: list[PersistencePoint] = []
    ph1: list[PersistencePoint] = []
    finds = unions = cycles = 0
    point = PersistencePoint._unchecked if ordered else PersistencePoint
    for i, j, v in edges:
        if not ordered and (v is INF or v <= 0):
            raise MalformedMatrix(f"edge ({i}, {j}) has value {v}")
        # path halving
        a = i
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = j
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        finds += 2
        if a == b:
            cycles += 1
            ph1.append(point(v, INF))
        else:
            unions += 1
            if rank[a] < rank[b]:
                a, b = b, a
            parent[b] = a
            if rank[a] == rank[b]:
                rank[a] += 1
            ph0.append(point(ZERO, v))
    survivors = size - unions
    ph0.extend(point(ZERO, INF) for _ in range(survivors))
    if stats is not None:
        stats.edges += len(edges)
        stats.finds += finds
        stats.unions += unions
        stats.cycles += cycles
        stats.per_graph.append(unions + cycles)
    if ordered:
        return TED._presorted(tuple(ph0), tuple(ph1))
    return TED(tuple(ph0), tuple(ph1))


def validate_matrix(matrix: FiltrationMatrix) -> None:
    for (i, j), v in matrix.entries.items():
        if not (0 <= i < j < matrix.size):
            raise MalformedMatrix(f"entry key ({i}, {j}) is not an upper-triangle index")
        # Fractions keep a positive denominator, so the numerator carries the sign
        if v is INF or v.numerator <= 0:
            raise MalformedMatrix(f"entry ({i}, {j}) = {v} is not a finite positive value")


@contextmanager
def _collector_paused():
    # the pass allocates millions of acyclic tuples on large graphs; cyclic
    # collection during it costs about half the runtime and frees nothing
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def vr_persistence(matrix: FiltrationMatrix, stats: UnionFindStats | None = None) -> TED:
    """TED of the 1-skeleton Vietoris-Rips filtration of ``matrix``."""
    validate_matrix(matrix)
    with _collector_paused():
        return _union_find(matrix.size, _sorted_edges(matrix.entries), stats, True)


def ted(graph: Graph, coloring: Coloring, ef: EdgeFiltration, stats: UnionFindStats | None = None) -> TED:
    return vr_persistence(filtration_matrix(graph, coloring, ef), stats)


def ted_equal(a: TED, b: TED) -> bool:
    return a.ph0 == b.ph0 and a.ph1 == b.ph1


def lgvr_diagram(
    graph: Graph,
    initial: Coloring | None = None,
    *,
    features=None,
    stats: UnionFindStats | None = None,
) -> TED:
    """Stable WL coloring, phi filtration over its colored edges, then TED.

    A graph without edges has no colored edges, so no filtration is needed
    and every node is an essential component.
    """
    stable = wl_refine(graph, initial).stable
    if graph.edge_count == 0:
        return vr_persistence(FiltrationMatrix(graph.node_count, {}), stats)
    ef = phi_filtration(universe_of([(graph, stable)]), features)
    return ted(graph, stable, ef, stats)


@dataclass(frozen=True)
class CorpusDiagrams:
    """TEDs of many graphs under one shared coloring space and filtration."""

    colorings: tuple[Coloring, ...]
    filtration: EdgeFiltration | None
    diagrams: tuple[TED, ...]


def shared_filtration(
    graphs: Sequence[Graph],
    colorings: Sequence[Coloring],
    construction: str = "phi_map",
    key=None,
) -> EdgeFiltration | None:
    universe = universe_of(zip(graphs, colorings))
    if not universe:
        return None
    if construction == "phi_map":
        return phi_filtration(universe)
    return canonical_rank_filtration(universe, key=key)


def lgvr_corpus(
    graphs: Sequence[Graph],
    initial: Sequence[Coloring] | None = None,
    *,
    construction: str = "phi_map",
    refine: bool = True,
    key=None,
    stats: UnionFindStats | None = None,
) -> CorpusDiagrams:
    """LGVR diagrams for a corpus with joint WL colors and one filtration.

    With ``refine=False`` the initial colorings are used as they are.
    """
    if refine:
        colorings = wl_refine_joint(graphs, initial)
    else:
        if initial is None:
            raise ValueError("refine=False needs explicit colorings")
        colorings = list(initial)
    ef = shared_filtration(graphs, colorings, construction, key)
    out = []
    for g, c in zip(graphs, colorings):
        if g.edge_count == 0:
            out.append(vr_persistence(FiltrationMatrix(g.node_count, {}), stats))
        else:
            out.append(ted(g, c, ef, stats))
    return CorpusDiagrams(tuple(colorings), ef, tuple(out))


def point_multiset(t: TED) -> Counter:
    return Counter([(0, p) for p in t.ph0] + [(1, p) for p in t.ph1])
