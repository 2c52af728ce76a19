"""Command-line interface: ``tedgraph <command> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import io as tio
from .errors import TedGraphError
from .filtration import (
    CANONICAL_RANK,
    PHI_MAP,
    FiltrationMatrix,
    canonical_rank_filtration,
    phi_filtration,
    universe_of,
)
from .graph import Coloring
from .harness import discriminate_corpus, discriminate_pair, fuse_corpus
from .integration import ENUMERATION_LIMIT, certify_uniqueness, enumeration_size
from .persistence import TED, lgvr_corpus, lgvr_diagram, ted, vr_persistence
from .values import format_exact
from .wl import HASH, SUM, wl_refine, wl_refine_joint


def _load(path: str, fmt: str | None = None) -> tio.Corpus:
    return tio.load_corpus(path, fmt)


def _single(path: str) -> tio.Corpus:
    corpus = _load(path)
    if len(corpus) != 1:
        raise TedGraphError(f"{path}: expected exactly one graph, found {len(corpus)}")
    return corpus


def _initial_diagram(graph, coloring: Coloring) -> TED:
    if graph.edge_count == 0:
        return vr_persistence(FiltrationMatrix(graph.node_count, {}))
    return ted(graph, coloring, phi_filtration(universe_of([(graph, coloring)])))


def cmd_diagram(args) -> int:
    corpus = _load(args.input, args.format)
    teds = []
    for k, g in enumerate(corpus.graphs):
        given = corpus.initial_colorings[k] if corpus.initial_colorings else None
        if args.coloring == "wl":
            teds.append(lgvr_diagram(g, given))
        else:
            teds.append(_initial_diagram(g, given if given is not None else Coloring.by_degree(g)))

    if args.emit == "svg":
        from .plotting import render_diagram_svg

        if len(teds) == 1:
            text = render_diagram_svg(teds[0], corpus.name)
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return 0
        if not args.out:
            raise TedGraphError("several graphs: --emit svg needs --out FILE (one file per graph)")
        out = Path(args.out)
        for k, t in enumerate(teds):
            target = out.with_name(f"{out.stem}-{k}{out.suffix or '.svg'}")
            target.write_text(render_diagram_svg(t, f"{corpus.name} #{k}"))
        return 0

    if args.emit == "csv":
        if len(teds) == 1:
            text = tio.diagram_csv(teds[0])
        else:
            rows = ["graph,dim,birth,death"]
            for k, t in enumerate(teds):
                rows += [f"{k},{line}" for line in tio.diagram_csv(t).splitlines()[1:]]
            text = "\n".join(rows) + "\n"
    else:
        text = tio.diagram_json(teds[0]) if len(teds) == 1 else tio.dump_diagrams(teds)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    g = _single(args.input_a).graphs[0]
    h = _single(args.input_b).graphs[0]
    res = discriminate_pair(g, h)
    print(f"wl_distinguish: {str(res.wl_distinguished).lower()}")
    print(f"ted_equal: {str(not res.ted_distinguished).lower()}")
    print(f"cell: {res.cell}")
    return 0 if res.ted_distinguished else 1


def cmd_wl(args) -> int:
    corpus = _load(args.input)
    for k, g in enumerate(corpus.graphs):
        given = corpus.initial_colorings[k] if corpus.initial_colorings else None
        trace = wl_refine(g, given, variant=args.variant, max_rounds=args.rounds)
        if len(corpus) > 1:
            print(f"graph {k}")
        for r, c in enumerate(trace.colorings):
            print(f"round {r}: {c.classes()} classes")
        state = "stable" if trace.converged else "not stable (round cap)"
        print(f"{state} at round {trace.stable_round}")
        hist = " ".join(f"{c}:{n}" for c, n in trace.stable.histogram())
        print(f"histogram: {hist}")
    return 0


def cmd_discriminate(args) -> int:
    corpus = _load(args.corpus)
    report = discriminate_corpus(
        corpus.graphs, corpus_id=corpus.name, oracle_max=args.oracle_max, jobs=args.jobs
    )
    if args.report:
        Path(args.report).write_text(report.dumps())
    print(report.table())
    if report.violations:
        print(f"error: {len(report.violations)} monotonicity violations, see report", file=sys.stderr)
        return 1
    return 0


def cmd_certify(args) -> int:
    corpus = _load(args.corpus)
    colorings = wl_refine_joint(corpus.graphs, corpus.initial_colorings)
    universe = universe_of(zip(corpus.graphs, colorings))
    cert = {"corpus": corpus.name, "graphs": len(corpus), "universe_size": len(universe), "filtrations": []}
    ok = True
    if universe:
        for name, build in ((CANONICAL_RANK, canonical_rank_filtration), (PHI_MAP, phi_filtration)):
            ef = build(universe)
            collision = ef.find_collision()
            values = [v for _, v in ef.items()]
            cert["filtrations"].append(
                {
                    "construction": name,
                    "classes": len(ef),
                    "injective": collision is None,
                    "collision": None if collision is None else [list(e) for e in collision],
                    "min_value": format_exact(min(values)),
                    "max_value": format_exact(max(values)),
                }
            )
            ok = ok and collision is None
    cert["certified"] = ok
    print(json.dumps(cert, indent=2, sort_keys=True))
    return 0 if ok else 1


def cmd_fuse(args) -> int:
    corpus = _load(args.corpus)
    cd = lgvr_corpus(corpus.graphs, corpus.initial_colorings)
    fused = fuse_corpus(cd, args.bound)
    enc = fused.encoding
    size = enumeration_size(enc)
    if size <= ENUMERATION_LIMIT:
        c = certify_uniqueness(enc)
        certificate = {"checked": True, "unique": c.unique, "tuples": c.tuples_checked}
    else:
        magnitude = int(size.bit_length() * math.log10(2))
        certificate = {
            "checked": False,
            "reason": f"about 10^{magnitude} tuples exceed the enumeration limit {ENUMERATION_LIMIT}",
        }
    out = {
        "corpus": corpus.name,
        "bound": enc.bound,
        "domain_sizes": [len(fm.domain) for fm in enc.component_maps],
        "epsilons": [format_exact(e) for e in enc.epsilons],
        "certificate": certificate,
        "distinct_fingerprints": len(set(fused.fingerprints)),
        "base": fused.base,
        "fingerprints": [[list(t) for t in num] for num in fused.numerals()],
    }
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        summary = {k: v for k, v in out.items() if k != "fingerprints"}
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text)
    return 0 if certificate.get("unique", True) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tedgraph", description="Topological edge diagrams of colored graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diagram", help="compute the diagram of each graph")
    d.add_argument("input")
    d.add_argument("--format", choices=[tio.TU, tio.EDGELIST, tio.JSON])
    d.add_argument("--coloring", choices=["wl", "initial"], default="wl")
    d.add_argument("--out", metavar="FILE")
    d.add_argument("--emit", choices=["json", "csv", "svg"], default="json")
    d.set_defaults(func=cmd_diagram)

    c = sub.add_parser("compare", help="compare two graphs; exit 0 iff diagrams differ")
    c.add_argument("input_a", metavar="inputA")
    c.add_argument("input_b", metavar="inputB")
    c.set_defaults(func=cmd_compare)

    w = sub.add_parser("wl", help="print a WL refinement trace")
    w.add_argument("input")
    w.add_argument("--rounds", type=int)
    w.add_argument("--variant", choices=[HASH, SUM], default=HASH)
    w.set_defaults(func=cmd_wl)

    r = sub.add_parser("discriminate", help="WL versus diagram discrimination over all pairs")
    r.add_argument("corpus")
    r.add_argument("--oracle-max", type=int, default=10)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--report", metavar="FILE")
    r.set_defaults(func=cmd_discriminate)

    f = sub.add_parser("certify-filtration", help="build filtrations and scan for collisions")
    f.add_argument("corpus")
    f.set_defaults(func=cmd_certify)

    u = sub.add_parser("fuse", help="integrated fingerprints of diagrams and colors")
    u.add_argument("corpus")
    u.add_argument("--bound", type=int)
    u.add_argument("--out", metavar="FILE")
    u.set_defaults(func=cmd_fuse)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TedGraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
