"""Simple undirected graphs, node colorings, colored edges and line graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import IndexOutOfRange, LengthMismatch, SelfLoop

Edge = tuple[int, int]
ColoredEdge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph on nodes ``0..node_count-1``.

    ``edges`` is kept sorted with ``i < j`` in every pair, so two graphs with
    the same edge set compare equal. Use :func:`build_graph` to construct one
    from raw input; the constructor trusts its arguments.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()
    had_duplicates: bool = field(default=False, compare=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_index

    def isolated_nodes(self) -> tuple[int, ...]:
        return tuple(v for v, a in enumerate(self.adjacency) if not a)

    def component_count(self) -> int:
        parent = list(range(self.node_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = self.node_count
        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
                count -= 1
        return count

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"


def build_graph(node_count: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validate and canonicalize an edge list into a :class:`Graph`.

    Pairs may come in either orientation. Repeated pairs (including both
    directions of the same edge, as in TUDataset files) are merged and the
    result carries ``had_duplicates=True``.
    """
    if node_count < 0:
        raise IndexOutOfRange(f"negative node count {node_count}")
    seen: set[Edge] = set()
    dup = False
    for pair in edge_list:
        i, j = int(pair[0]), int(pair[1])
        if not (0 <= i < node_count and 0 <= j < node_count):
            raise IndexOutOfRange(f"edge ({i}, {j}) out of range for {node_count} nodes")
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        e = (i, j) if i < j else (j, i)
        if e in seen:
            dup = True
        else:
            seen.add(e)
    return Graph(node_count, tuple(sorted(seen)), had_duplicates=dup)


def complete_graph(node_count: int) -> Graph:
    return Graph(node_count, tuple(combinations(range(node_count), 2)))


def cycle_graph(node_count: int) -> Graph:
    if node_count < 3:
        raise IndexOutOfRange("a simple cycle needs at least 3 nodes")
    return build_graph(node_count, [(i, (i + 1) % node_count) for i in range(node_count)])


def path_graph(node_count: int) -> Graph:
    return build_graph(node_count, [(i, i + 1) for i in range(node_count - 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at node 0."""
    return build_graph(leaves + 1, [(0, k) for k in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges: list[Edge] = []
    offset = 0
    for g in graphs:
        edges.extend((i + offset, j + offset) for i, j in g.edges)
        offset += g.node_count
    return Graph(offset, tuple(sorted(edges)))


def permute_graph(graph: Graph, perm: Sequence[int]) -> Graph:
    """Relabel node ``v`` as ``perm[v]``."""
    if sorted(perm) != list(range(graph.node_count)):
        raise LengthMismatch("perm is not a permutation of the node set")
    return build_graph(graph.node_count, [(perm[i], perm[j]) for i, j in graph.edges])


@dataclass(frozen=True)
class Coloring:
    """Color-id per node.

    Ids are dense non-negative integers. ``provenance`` is ``"initial"`` for
    supplied colorings and ``"wl"`` for stable refinement output, in which
    case ``rounds`` records how many refinement rounds were run.
    """

    colors: tuple[int, ...]
    provenance: str = "initial"
    rounds: int = 0

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    @classmethod
    def uniform(cls, node_count: int) -> Coloring:
        return cls((0,) * node_count)

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> Coloring:
        """Dense ids by sorted distinct label, independent of node order."""
        ids = {lab: k for k, lab in enumerate(sorted(set(labels)))}
        return cls(tuple(ids[lab] for lab in labels))

    @classmethod
    def by_degree(cls, graph: Graph) -> Coloring:
        return cls.from_labels(graph.degrees())

    def histogram(self) -> tuple[tuple[int, int], ...]:
        counts: dict[int, int] = {}
        for c in self.colors:
            counts[c] = counts.get(c, 0) + 1
        return tuple(sorted(counts.items()))

    def classes(self) -> int:
        return len(set(self.colors))

    def permuted(self, perm: Sequence[int]) -> Coloring:
        out = [0] * len(self.colors)
        for v, c in enumerate(self.colors):
            out[perm[v]] = c
        return Coloring(tuple(out), self.provenance, self.rounds)


def check_coloring(graph: Graph, coloring: Coloring) -> None:
    if len(coloring) != graph.node_count:
        raise LengthMismatch(
            f"coloring has {len(coloring)} entries for a graph with {graph.node_count} nodes"
        )


def colored_edge(c1: int, c2: int) -> ColoredEdge:
    return (c1, c2) if c1 <= c2 else (c2, c1)


def colored_edge_multiset(graph: Graph, coloring: Coloring) -> tuple[ColoredEdge, ...]:
    """The multiset of endpoint-color pairs, one per edge, as a sorted tuple."""
    check_coloring(graph, coloring)
    c = coloring.colors
    return tuple(sorted(colored_edge(c[i], c[j]) for i, j in graph.edges))


@dataclass(frozen=True)
class LineGraphMap:
    line_graph: Graph
    edge_to_node: Mapping[Edge, int]
    node_colors: tuple[Hashable, ...]


def intern_colored_edges(universe: Iterable[ColoredEdge]) -> dict[ColoredEdge, int]:
    """Injective ids for colored-edge classes, assigned in sorted order."""
    return {e: k for k, e in enumerate(sorted(set(universe)))}


def line_graph(
    graph: Graph,
    coloring: Coloring,
    h: Callable[[ColoredEdge], Hashable] | Mapping[ColoredEdge, Hashable] | None = None,
) -> LineGraphMap:
    """Line graph of ``graph`` with nodes colored by ``h`` of the colored edge.

    Line-graph node ``k`` stands for ``graph.edges[k]``. Without ``h`` the
    distinct colored edges of this graph are interned to dense ids.
    """
    check_coloring(graph, coloring)
    c = coloring.colors
    cedges = [colored_edge(c[i], c[j]) for i, j in graph.edges]
    if h is None:
        h = intern_colored_edges(cedges)
    lookup = h.__getitem__ if isinstance(h, Mapping) else h
    incident: list[list[int]] = [[] for _ in range(graph.node_count)]
    for k, (i, j) in enumerate(graph.edges):
        incident[i].append(k)
        incident[j].append(k)
    ledges = set()
    for inc in incident:
        for a, b in combinations(inc, 2):
            ledges.add((a, b) if a < b else (b, a))
    lg = Graph(graph.edge_count, tuple(sorted(ledges)))
    return LineGraphMap(lg, dict(graph.edge_index), tuple(lookup(e) for e in cedges))
