"""1-WL color refinement and the Degree Assumption check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .graph import Coloring, Graph, check_coloring, disjoint_union

HASH = "hash"
SUM = "sum"


@dataclass(frozen=True)
class RefinementTrace:
    """All colorings produced by a refinement run.

    ``colorings[0]`` is the input coloring. ``stable_round`` is the first
    index ``t`` whose partition equals that of round ``t + 1``; ``stable`` is
    the coloring at that round. ``converged`` is False only when a round cap
    stopped the run early, in which case ``stable`` is the last coloring.
    """

    colorings: tuple[Coloring, ...]
    stable_round: int
    stable: Coloring
    converged: bool = True

    @property
    def rounds(self) -> int:
        """Number of refinement rounds actually computed."""
        return len(self.colorings) - 1


def _densify(keys: Sequence) -> tuple[int, ...]:
    ids = {k: n for n, k in enumerate(sorted(set(keys)))}
    return tuple(ids[k] for k in keys)


def _partition_signature(colors: Sequence) -> tuple[int, ...]:
    first: dict = {}
    return tuple(first.setdefault(c, len(first)) for c in colors)


def _refine_hash(adj: Sequence[Sequence[int]], colors: tuple[int, ...]) -> tuple[int, ...]:
    sigs = [(colors[v], tuple(sorted(colors[u] for u in nb))) for v, nb in enumerate(adj)]
    return _densify(sigs)


def wl_refine(
    graph: Graph,
    initial: Coloring | None = None,
    *,
    variant: str = HASH,
    max_rounds: int | None = None,
) -> RefinementTrace:
    """Refine ``initial`` until the induced partition stops changing.

    The ``hash`` variant recolors each node by the canonical id of
    ``(own color, sorted neighbor colors)``; new ids are ranks of the sorted
    signatures, so they do not depend on node order. The ``sum`` variant
    iterates ``x'(v) = sum of x(u) over neighbors u``, starting from
    ``color + 1``; it is kept for comparison and is strictly weaker.
    """
    if initial is None:
        initial = Coloring.uniform(graph.node_count)
    check_coloring(graph, initial)
    adj = graph.adjacency
    start = _densify(initial.colors)
    trace = [Coloring(start, initial.provenance, 0)]
    cap = max_rounds if max_rounds is not None else graph.node_count + 1

    if variant == HASH:
        current = start
        for r in range(1, cap + 1):
            nxt = _refine_hash(adj, current)
            trace.append(Coloring(nxt, "wl", r))
            # hash refinement is monotone, so equal class counts mean equal partitions
            if len(set(nxt)) == len(set(current)):
                stable = Coloring(current, "wl", r - 1)
                return RefinementTrace(tuple(trace), r - 1, stable)
            current = nxt
        return RefinementTrace(tuple(trace), cap, Coloring(current, "wl", cap), converged=False)

    if variant == SUM:
        values = [c + 1 for c in start]
        prev_sig = _partition_signature(values)
        for r in range(1, cap + 1):
            values = [sum(values[u] for u in nb) for nb in adj]
            dense = _densify(values)
            trace.append(Coloring(dense, "wl", r))
            sig = _partition_signature(values)
            if sig == prev_sig:
                stable = Coloring(trace[r - 1].colors, "wl", r - 1)
                return RefinementTrace(tuple(trace), r - 1, stable)
            prev_sig = sig
        return RefinementTrace(tuple(trace), cap, Coloring(trace[-1].colors, "wl", cap), converged=False)

    raise ValueError(f"unknown WL variant {variant!r}")


def wl_refine_joint(
    graphs: Sequence[Graph],
    initial: Sequence[Coloring] | None = None,
    *,
    variant: str = HASH,
) -> list[Coloring]:
    """Stable colorings of several graphs in one shared color space.

    Refinement runs on the disjoint union, so equal ids mean equal colors
    across graphs.
    """
    union = disjoint_union(*graphs)
    if initial is None:
        start = Coloring.uniform(union.node_count)
    else:
        flat: list[int] = []
        for g, c in zip(graphs, initial, strict=True):
            check_coloring(g, c)
            flat.extend(c.colors)
        start = Coloring(tuple(flat))
    trace = wl_refine(union, start, variant=variant)
    out = []
    offset = 0
    for g in graphs:
        out.append(Coloring(trace.stable.colors[offset : offset + g.node_count], "wl", trace.stable_round))
        offset += g.node_count
    return out


def wl_histograms(graphs: Sequence[Graph], *, variant: str = HASH) -> list[tuple]:
    return [c.histogram() for c in wl_refine_joint(graphs, variant=variant)]


def wl_distinguish(g: Graph, h: Graph, *, variant: str = HASH) -> bool:
    """True iff 1-WL from uniform colorings tells ``g`` and ``h`` apart."""
    if g.node_count != h.node_count:
        return True
    cg, ch = wl_refine_joint([g, h], variant=variant)
    return cg.histogram() != ch.histogram()


class DegreeCheck(NamedTuple):
    holds: bool
    violations: tuple[int, ...]


def check_degree_assumption(graph: Graph, coloring: Coloring) -> DegreeCheck:
    """Equal colors must imply equal degrees; returns offending color ids."""
    check_coloring(graph, coloring)
    deg_of: dict[int, set[int]] = {}
    for v, c in enumerate(coloring.colors):
        deg_of.setdefault(c, set()).add(graph.degree(v))
    bad = tuple(sorted(c for c, ds in deg_of.items() if len(ds) > 1))
    return DegreeCheck(not bad, bad)
