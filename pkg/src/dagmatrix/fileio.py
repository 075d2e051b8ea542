"""Text and DOT formats for parent graphs and induced graphs.

Graph text format::

    # comment
    d 4
    1 2      # arrow 1 <- 2
    2 3
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Iterable

from .binary import LabeledBinary
from .graph import GraphError, ParentGraph, build_parent_graph

__all__ = [
    "GraphFormatError",
    "parse_graph",
    "load_graph",
    "format_graph",
    "graph_to_dot",
    "directed_dot",
    "undirected_dot",
    "pattern_to_dot",
    "EXAMPLES",
    "load_example",
]


EXAMPLES = ("sixnode", "sevennode")


class GraphFormatError(GraphError):
    def __init__(self, message: str, lineno: int | None = None, source: str = "<string>"):
        self.lineno = lineno
        self.source = source
        where = f"{source}:{lineno}: " if lineno is not None else f"{source}: "
        super().__init__(where + message)


def parse_graph(text: str, source: str = "<string>") -> ParentGraph:
    """Parse the line-oriented graph format; errors carry line numbers."""
    d = None
    arrows: list[tuple[int, int]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if d is None:
            if len(fields) != 2 or fields[0] != "d":
                raise GraphFormatError("expected header 'd <n>'", lineno, source)
            try:
                d = int(fields[1])
            except ValueError:
                raise GraphFormatError(f"bad node count {fields[1]!r}", lineno, source) from None
            continue
        if len(fields) != 2:
            raise GraphFormatError("expected an arrow line '<i> <j>'", lineno, source)
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"bad arrow {line!r}", lineno, source) from None
        arrows.append((i, j))
        lines.append(lineno)
    if d is None:
        raise GraphFormatError("missing header 'd <n>'", None, source)
    # validate arrow by arrow so the message can point at the offending line
    seen = set()
    for (i, j), lineno in zip(arrows, lines):
        try:
            build_parent_graph(d, [(i, j)])
        except GraphError as exc:
            raise GraphFormatError(str(exc), lineno, source) from None
        if (i, j) in seen:
            raise GraphFormatError(f"duplicate arrow ({i}, {j})", lineno, source)
        seen.add((i, j))
    return build_parent_graph(d, arrows)


def load_graph(path: str | Path) -> ParentGraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(exc.strerror or str(exc), None, str(path)) from None
    return parse_graph(text, str(path))


def format_graph(G: ParentGraph) -> str:
    lines = [f"d {G.d}"]
    lines += [f"{i} {j}" for i, j in G.arrows()]
    return "\n".join(lines) + "\n"


def directed_dot(arrows: Iterable[tuple[int, int]], nodes: Iterable[int], name: str = "G") -> str:
    """DOT digraph; each ``(i, j)`` pair is drawn as ``j -> i``."""
    out = [f"digraph {name} {{"]
    out += [f"  {v};" for v in nodes]
    out += [f"  {j} -> {i};" for i, j in sorted(arrows)]
    out.append("}")
    return "\n".join(out) + "\n"


def undirected_dot(
    edges: Iterable[tuple[int, int]], nodes: Iterable[int], dashed: bool = False, name: str = "G"
) -> str:
    """DOT graph with one line per unordered pair; dashed for covariance graphs."""
    style = " [style=dashed]" if dashed else ""
    pairs = sorted({(min(i, j), max(i, j)) for i, j in edges if i != j})
    out = [f"graph {name} {{"]
    out += [f"  {v};" for v in nodes]
    out += [f"  {i} -- {j}{style};" for i, j in pairs]
    out.append("}")
    return "\n".join(out) + "\n"


def graph_to_dot(G: ParentGraph) -> str:
    return directed_dot(G.arrows(), G.nodes)


def pattern_to_dot(M: LabeledBinary, kind: str) -> str:
    """DOT rendering of an induced edge matrix.

    ``kind`` is ``"directed"`` (row label receives the arrow), ``"covariance"``
    (dashed lines) or ``"concentration"`` (full lines).
    """
    nodes = sorted(set(M.row_labels) | set(M.col_labels))
    if kind == "directed":
        return directed_dot(M.edges(), nodes)
    if kind in ("covariance", "concentration"):
        return undirected_dot(M.edges(), nodes, dashed=kind == "covariance")
    raise ValueError(f"unknown pattern kind {kind!r}")


def load_example(name: str) -> ParentGraph:
    """Load one of the bundled example graphs listed in :data:`EXAMPLES`."""
    if name not in EXAMPLES:
        raise GraphFormatError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    text = resources.files("dagmatrix.examples").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return parse_graph(text, f"<example {name}>")
