"""Reading graphs and corpora, writing diagrams."""

from __future__ import annotations

import csv
import io as _stdio
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .errors import GraphError, MissingFile, ParseError, RaggedIndicator, TUIndexError
from .graph import Coloring, Graph, build_graph, check_coloring
from .persistence import TED
from .values import format_decimal

TU = "tu"
EDGELIST = "edgelist"
JSON = "json"


@dataclass
class Corpus:
    graphs: list[Graph]
    initial_colorings: list[Coloring] | None = None
    labels: list[int] | None = None
    name: str = "corpus"

    def __post_init__(self):
        if self.initial_colorings is not None:
            if len(self.initial_colorings) != len(self.graphs):
                raise ValueError("one initial coloring per graph is required")
            for g, c in zip(self.graphs, self.initial_colorings):
                check_coloring(g, c)

    def __len__(self) -> int:
        return len(self.graphs)


def _read_lines(path: Path) -> list[str]:
    try:
        return path.read_text().splitlines()
    except FileNotFoundError:
        raise MissingFile(f"missing file {path}") from None


def _ints(path: Path, width: int | None = None) -> list[list[int]]:
    rows = []
    for k, line in enumerate(_read_lines(path), start=1):
        line = line.strip()
        if not line:
            continue
        parts = [p for p in line.replace(",", " ").split()]
        try:
            row = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", k, str(path)) from None
        if width is not None and len(row) != width:
            raise ParseError(f"expected {width} values, got {len(row)}", k, str(path))
        rows.append(row)
    return rows


def _tu_file(directory: Path, name: str, suffix: str) -> Path:
    return directory / f"{name}_{suffix}.txt"


def parse_tudataset(directory: str | Path, name: str | None = None) -> Corpus:
    """Read a TUDataset directory (``DS_A.txt``, ``DS_graph_indicator.txt`` ...).

    Indices in the files are 1-based and each undirected edge usually appears
    in both directions; graphs come out 0-based and deduplicated. Node labels,
    when present, are mapped to dense color ids shared by the whole corpus.
    Without a node-label file every graph gets the uniform coloring.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingFile(f"not a directory: {directory}")
    if name is None:
        found = sorted(directory.glob("*_A.txt"))
        if not found:
            raise MissingFile(f"no *_A.txt file in {directory}")
        name = found[0].name[: -len("_A.txt")]

    ind_path = _tu_file(directory, name, "graph_indicator")
    indicator = [r[0] for r in _ints(ind_path, 1)]
    node_total = len(indicator)
    if node_total == 0:
        return Corpus([], None, None, name)

    # graph ids must be 1..G, non-decreasing, with no gaps
    prev = 0
    starts: list[int] = []
    for v, gid in enumerate(indicator):
        if gid == prev + 1:
            starts.append(v)
            prev = gid
        elif gid != prev:
            raise RaggedIndicator(
                f"node {v + 1} jumps from graph {prev} to graph {gid}", v + 1, str(ind_path)
            )
    graph_count = prev
    bounds = starts + [node_total]

    a_path = _tu_file(directory, name, "A")
    per_graph: list[list[tuple[int, int]]] = [[] for _ in range(graph_count)]
    for k, (u, w) in enumerate(_ints(a_path, 2), start=1):
        if not (1 <= u <= node_total and 1 <= w <= node_total):
            raise TUIndexError(f"node index out of range 1..{node_total}", k, str(a_path))
        gu, gw = indicator[u - 1], indicator[w - 1]
        if gu != gw:
            raise TUIndexError(f"edge joins graphs {gu} and {gw}", k, str(a_path))
        if u == w:
            continue
        base = starts[gu - 1]
        per_graph[gu - 1].append((u - 1 - base, w - 1 - base))

    graphs = [build_graph(bounds[g + 1] - bounds[g], per_graph[g]) for g in range(graph_count)]

    colorings = None
    nl_path = _tu_file(directory, name, "node_labels")
    if nl_path.exists():
        labels = [r[0] for r in _ints(nl_path)]
        if len(labels) != node_total:
            raise ParseError(f"{len(labels)} node labels for {node_total} nodes", None, str(nl_path))
        dense = Coloring.from_labels(labels).colors
        colorings = [Coloring(dense[bounds[g] : bounds[g + 1]]) for g in range(graph_count)]

    graph_labels = None
    gl_path = _tu_file(directory, name, "graph_labels")
    if gl_path.exists():
        graph_labels = [r[0] for r in _ints(gl_path)]
        if len(graph_labels) != graph_count:
            raise ParseError(f"{len(graph_labels)} graph labels for {graph_count} graphs", None, str(gl_path))

    return Corpus(graphs, colorings, graph_labels, name)


def parse_edge_list_text(text: str, path: str | None = None) -> Graph:
    """First non-blank line is the node count, then one ``u v`` pair per line.

    Lines starting with ``#`` are comments.
    """
    n = None
    edges = []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {raw.strip()!r}", k, path) from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise ParseError("first line must be a non-negative node count", k, path)
            n = nums[0]
            continue
        if len(nums) != 2:
            raise ParseError(f"expected 'u v', got {raw.strip()!r}", k, path)
        u, v = nums
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"node index out of range 0..{n - 1}", k, path)
        if u == v:
            raise ParseError(f"self-loop at node {u}", k, path)
        edges.append((u, v))
    if n is None:
        raise ParseError("empty edge list", None, path)
    return build_graph(n, edges)


def parse_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    return parse_edge_list_text("\n".join(_read_lines(path)), str(path))


def graph_from_json_obj(obj: Any, where: str | None = None) -> tuple[Graph, Coloring | None]:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ParseError("graph object needs an 'n' field", None, where)
    try:
        g = build_graph(int(obj["n"]), [tuple(e) for e in obj.get("edges", [])])
    except (GraphError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), None, where) from None
    colors = obj.get("colors")
    if colors is None:
        return g, None
    if len(colors) != g.node_count:
        raise ParseError(f"{len(colors)} colors for {g.node_count} nodes", None, where)
    return g, Coloring.from_labels(colors)


def _load_json(path: Path) -> Any:
    try:
        return json.loads("\n".join(_read_lines(path)))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, str(path)) from None


def parse_json_graph(path: str | Path) -> tuple[Graph, Coloring | None]:
    """``{"n": 3, "edges": [[0, 1]], "colors": [...]}``; colors are optional."""
    path = Path(path)
    return graph_from_json_obj(_load_json(path), str(path))


def parse_json_corpus(path: str | Path) -> Corpus:
    """A single graph object, a list of them, or ``{"name", "graphs": [...]}``."""
    path = Path(path)
    obj = _load_json(path)
    name = path.stem
    if isinstance(obj, dict) and "graphs" in obj:
        name = obj.get("name", name)
        items = obj["graphs"]
    elif isinstance(obj, list):
        items = obj
    else:
        items = [obj]
    graphs, colorings, labels = [], [], []
    for k, item in enumerate(items):
        g, c = graph_from_json_obj(item, f"{path}[{k}]")
        graphs.append(g)
        colorings.append(c)
        labels.append(item.get("label"))
    has_colors = [c is not None for c in colorings]
    if any(has_colors) and not all(has_colors):
        raise ParseError("either every graph or no graph may carry colors", None, str(path))
    if all(has_colors) and colorings:
        # rebuild ids over the whole corpus from the original labels
        flat = [col for item in items for col in item["colors"]]
        dense = Coloring.from_labels(flat).colors
        out, off = [], 0
        for g in graphs:
            out.append(Coloring(dense[off : off + g.node_count]))
            off += g.node_count
        colorings_final = out
    else:
        colorings_final = None
    return Corpus(graphs, colorings_final, labels if all(x is not None for x in labels) else None, name)


def detect_format(path: str | Path) -> str:
    path = Path(path)
    if path.is_dir():
        return TU
    if path.suffix.lower() == ".json":
        return JSON
    return EDGELIST


def load_corpus(path: str | Path, fmt: str | None = None) -> Corpus:
    path = Path(path)
    fmt = fmt or detect_format(path)
    if fmt == TU:
        return parse_tudataset(path)
    if fmt == JSON:
        return parse_json_corpus(path)
    if fmt == EDGELIST:
        return Corpus([parse_edge_list(path)], None, None, path.stem)
    raise ValueError(f"unknown input format {fmt!r}")


def diagram_csv(ted: TED) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dim", "birth", "death"])
    for dim, pts in ((0, ted.ph0), (1, ted.ph1)):
        for p in pts:
            w.writerow([dim, format_decimal(p.birth), format_decimal(p.death)])
    return buf.getvalue()


def diagram_json(ted: TED) -> str:
    return json.dumps(ted.to_json_obj(), indent=2, sort_keys=True) + "\n"


def export_diagram(ted: TED, fmt: str, path: str | Path, title: str | None = None) -> None:
    """Write ``ted`` as ``json`` (exact rationals), ``csv`` or ``svg``."""
    path = Path(path)
    if fmt == "json":
        path.write_text(diagram_json(ted))
    elif fmt == "csv":
        path.write_text(diagram_csv(ted))
    elif fmt == "svg":
        from .plotting import render_diagram_svg

        path.write_text(render_diagram_svg(ted, title))
    else:
        raise ValueError(f"unknown diagram format {fmt!r}")


def load_diagram(path: str | Path) -> TED:
    path = Path(path)
    obj = _load_json(path)
    try:
        return TED.from_json_obj(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"not a diagram: {exc}", None, str(path)) from None


def dump_diagrams(teds: Sequence[TED]) -> str:
    return json.dumps([t.to_json_obj() for t in teds], indent=2, sort_keys=True) + "\n"
