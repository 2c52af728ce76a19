"""WL-versus-TED discrimination experiments with a brute-force isomorphism oracle."""

from __future__ import annotations

import json
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import SizeBoundExceeded, MonotonicityViolation, TooLarge
from .graph import Coloring, Graph
from .integration import (
    IntegratedEncoding,
    index_map,
    integrate,
    separated_base,
    separated_encoding,
    sparse_numeral,
)
from .persistence import TED, CorpusDiagrams, lgvr_corpus, ted_equal
from .values import format_exact

ORACLE_GUARD = 10

BOTH = "both"
TED_ONLY = "ted_only"
WL_ONLY = "wl_only"
NEITHER = "neither"
CELLS = (BOTH, TED_ONLY, WL_ONLY, NEITHER)


def brute_force_isomorphic(g: Graph, h: Graph, guard: int = ORACLE_GUARD) -> bool:
    """Backtracking search for an edge-preserving bijection.

    Candidates for each node are restricted to nodes of equal degree, and a
    partial map is extended only while adjacency to already-mapped nodes is
    preserved in both directions.
    """
    n = g.node_count
    if max(n, h.node_count) > guard:
        raise TooLarge(f"graphs with more than {guard} nodes are beyond the oracle guard")
    if n != h.node_count or g.edge_count != h.edge_count:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    gadj = [set(a) for a in g.adjacency]
    hadj = [set(a) for a in h.adjacency]
    gdeg, hdeg = g.degrees(), h.degrees()
    # most constrained first: high degree nodes, then connectivity to earlier picks
    order = sorted(range(n), key=lambda v: -gdeg[v])
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if w in used or hdeg[w] != gdeg[v]:
                continue
            if all((u in gadj[v]) == (mapping[u] in hadj[w]) for u in mapping):
                mapping[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend(0)


def _cell(wl: bool, td: bool) -> str:
    if wl and td:
        return BOTH
    if td:
        return TED_ONLY
    if wl:
        return WL_ONLY
    return NEITHER


@dataclass(frozen=True)
class PairResult:
    wl_distinguished: bool
    ted_distinguished: bool
    cell: str
    diagrams: tuple[TED, TED]


def discriminate_pair(
    g: Graph,
    h: Graph,
    *,
    construction: str = "phi_map",
    key=None,
) -> PairResult:
    """Compare WL and TED on one pair from uniform initial colors.

    Both graphs are refined jointly and share one filtration built over the
    union of their colored edges.
    """
    cd = lgvr_corpus([g, h], construction=construction, key=key)
    cg, ch = cd.colorings
    wl = g.node_count != h.node_count or cg.histogram() != ch.histogram()
    td = not ted_equal(*cd.diagrams)
    return PairResult(wl, td, _cell(wl, td), cd.diagrams)


@dataclass
class DiscriminationReport:
    corpus_id: str
    graph_count: int
    pair_counts: dict[str, int]
    witnesses: dict[str, list[list[int]]]
    violations: list[dict[str, Any]] = field(default_factory=list)
    errors: list[dict[str, Any]] = field(default_factory=list)
    runtime: dict[str, float] = field(default_factory=dict)
    wl_pairs: frozenset = field(default_factory=frozenset, repr=False)
    ted_pairs: frozenset = field(default_factory=frozenset, repr=False)

    def to_json_obj(self, include_runtime: bool = False) -> dict[str, Any]:
        obj = {
            "corpus_id": self.corpus_id,
            "graph_count": self.graph_count,
            "pair_counts": dict(sorted(self.pair_counts.items())),
            "witnesses": {k: self.witnesses[k] for k in sorted(self.witnesses)},
            "violations": self.violations,
            "errors": self.errors,
        }
        if include_runtime:
            obj["runtime"] = {k: round(v, 6) for k, v in sorted(self.runtime.items())}
        return obj

    def dumps(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_json_obj(include_runtime), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        pc = self.pair_counts
        rows = [
            ("pairs", pc["total"]),
            ("isomorphic (oracle)", pc["isomorphic"]),
            ("oracle unknown", pc["oracle_unknown"]),
            ("wl distinguished", pc["wl_distinguished"]),
            ("ted distinguished", pc["ted_distinguished"]),
            ("both", pc[BOTH]),
            ("ted only", pc[TED_ONLY]),
            ("wl only", pc[WL_ONLY]),
            ("neither", pc[NEITHER]),
        ]
        width = max(len(r[0]) for r in rows)
        lines = [f"corpus {self.corpus_id}: {self.graph_count} graphs"]
        lines += [f"  {name:<{width}}  {val:>10}" for name, val in rows]
        if self.violations:
            lines.append(f"  VIOLATIONS: {len(self.violations)}")
        return "\n".join(lines)


def _oracle_chunk(args) -> list[tuple[int, int, bool]]:
    graphs, pairs, guard = args
    return [(i, j, brute_force_isomorphic(graphs[i], graphs[j], guard)) for i, j in pairs]


def _hist_key(c: Coloring, n: int):
    return (n, c.histogram())


def _ted_key(t: TED):
    return (t.ph0, t.ph1)


def discriminate_corpus(
    graphs: Sequence[Graph],
    initial: Sequence[Coloring] | None = None,
    *,
    corpus_id: str = "corpus",
    oracle_max: int = ORACLE_GUARD,
    jobs: int = 1,
    max_witnesses: int = 5,
    construction: str = "phi_map",
    strict: bool = False,
) -> DiscriminationReport:
    """Classify every unordered pair of ``graphs``.

    The stable WL coloring is computed jointly over the whole corpus and a
    single filtration covers its colored-edge universe, so every diagram in
    the corpus is comparable with every other. Isomorphism is checked by the
    oracle only when both graphs have at most ``oracle_max`` nodes.
    Without ``initial`` every graph starts from the uniform coloring.
    """
    t0 = time.perf_counter()
    n = len(graphs)
    cd = lgvr_corpus(graphs, initial, construction=construction)
    t1 = time.perf_counter()

    wl_cls = [_hist_key(c, g.node_count) for c, g in zip(cd.colorings, graphs)]
    ted_cls = [_ted_key(t) for t in cd.diagrams]

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    oracle_pairs = [
        (i, j) for i, j in pairs if graphs[i].node_count <= oracle_max and graphs[j].node_count <= oracle_max
    ]
    iso: dict[tuple[int, int], bool] = {}
    if oracle_pairs:
        if jobs > 1:
            size = max(1, len(oracle_pairs) // (jobs * 4))
            chunks = [oracle_pairs[k : k + size] for k in range(0, len(oracle_pairs), size)]
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                for part in ex.map(_oracle_chunk, [(list(graphs), c, oracle_max) for c in chunks]):
                    for i, j, r in part:
                        iso[(i, j)] = r
        else:
            for i, j, r in _oracle_chunk((graphs, oracle_pairs, oracle_max)):
                iso[(i, j)] = r
    t2 = time.perf_counter()

    counts = defaultdict(int)
    witnesses: dict[str, list[list[int]]] = {c: [] for c in CELLS}
    witnesses["isomorphic"] = []
    violations: list[dict[str, Any]] = []
    wl_set, ted_set = set(), set()
    for i, j in pairs:
        wl = wl_cls[i] != wl_cls[j]
        td = ted_cls[i] != ted_cls[j]
        cell = _cell(wl, td)
        counts["total"] += 1
        counts[cell] += 1
        if wl:
            counts["wl_distinguished"] += 1
            wl_set.add((i, j))
        if td:
            counts["ted_distinguished"] += 1
            ted_set.add((i, j))
        if len(witnesses[cell]) < max_witnesses:
            witnesses[cell].append([i, j])
        known = iso.get((i, j))
        if known is None:
            counts["oracle_unknown"] += 1
        elif known:
            counts["isomorphic"] += 1
            if len(witnesses["isomorphic"]) < max_witnesses:
                witnesses["isomorphic"].append([i, j])
            if cell != NEITHER:
                violations.append({"pair": [i, j], "kind": "isomorphic_pair_distinguished", "cell": cell})
        if cell == WL_ONLY:
            violations.append({"pair": [i, j], "kind": "wl_only"})
    for key in ("total", "isomorphic", "oracle_unknown", "wl_distinguished", "ted_distinguished", *CELLS):
        counts.setdefault(key, 0)
    t3 = time.perf_counter()

    report = DiscriminationReport(
        corpus_id=corpus_id,
        graph_count=n,
        pair_counts=dict(counts),
        witnesses=witnesses,
        violations=violations,
        runtime={"diagrams_s": t1 - t0, "oracle_s": t2 - t1, "classify_s": t3 - t2, "total_s": t3 - t0},
        wl_pairs=frozenset(wl_set),
        ted_pairs=frozenset(ted_set),
    )
    if strict and violations:
        raise MonotonicityViolation(f"{len(violations)} violations, first: {violations[0]}")
    return report


def fusion_tokens(diagram: TED, coloring: Coloring) -> tuple[list[str], list[str], list[str]]:
    """The three multisets fused per graph: ph0 points, ph1 points, stable colors."""
    ph0 = [f"{format_exact(p.birth)}:{format_exact(p.death)}" for p in diagram.ph0]
    ph1 = [f"{format_exact(p.birth)}:{format_exact(p.death)}" for p in diagram.ph1]
    colors = [f"c{c}" for c in sorted(coloring.colors)]
    return ph0, ph1, colors


@dataclass(frozen=True)
class FusionResult:
    encoding: IntegratedEncoding
    fingerprints: tuple[tuple[Fraction, ...], ...]
    tokens: tuple[tuple[list[str], list[str], list[str]], ...] = field(repr=False)

    @property
    def base(self) -> int:
        return separated_base(len(self.encoding.component_maps), self.encoding.bound)

    def numerals(self) -> list[list[tuple[int, int]]]:
        return [sparse_numeral(fp[0], self.base) for fp in self.fingerprints]


def fuse_corpus(cd: CorpusDiagrams, bound: int | None = None) -> FusionResult:
    """One integrated encoding over every graph's three token multisets.

    ``bound`` defaults to the largest multiset in the corpus.
    """
    tokens = tuple(fusion_tokens(t, c) for t, c in zip(cd.diagrams, cd.colorings))
    largest = max((len(ms) for tk in tokens for ms in tk), default=0)
    if bound is None:
        bound = max(largest, 1)
    elif largest > bound:
        raise SizeBoundExceeded(f"corpus has a multiset of size {largest}, above bound {bound}")
    domains = [sorted({x for tk in tokens for x in tk[k]}) for k in range(3)]
    encoding = separated_encoding([index_map(d) for d in domains], bound)
    prints = tuple(integrate(encoding, tk) for tk in tokens)
    return FusionResult(encoding, prints, tokens)
