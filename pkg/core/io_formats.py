"""Text and JSON formats: edge lists, colorings, SP trees, DOT exports and solve traces."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING

from core.errors import GraphInputError, StructuralError
from core.graph_core import Coloring, Graph
from core.solver_types import TraceRecord
from core.sp_tree import NodeKind, SPNode, SPTree, canonical_children

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from pathlib import Path

DOT_PALETTE = (
    "lightblue",
    "salmon",
    "palegreen",
    "gold",
    "plum",
    "orange",
    "lightgray",
    "cyan",
    "pink",
    "khaki",
)


def _parse_id(token: str, line_number: int) -> int:
    if not (token.isascii() and token.isdigit()):
        msg = f"Line {line_number}: vertex id '{token}' is not an unsigned integer"
        raise GraphInputError(msg)
    return int(token)


def parse_edge_list(text: str) -> Graph:
    """``v`` lines declare vertices, ``u v`` lines add edges; ``#`` starts a comment."""
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "v":
            vertices.update(_parse_id(token, line_number) for token in tokens[1:])
            continue
        if len(tokens) != 2:  # noqa: PLR2004
            msg = f"Line {line_number}: expected 'u v', got '{line}'"
            raise GraphInputError(msg)
        u, v = (_parse_id(token, line_number) for token in tokens)
        if u == v:
            msg = f"Line {line_number}: self-loop on vertex {u}"
            raise GraphInputError(msg)
        edges.add((min(u, v), max(u, v)))
    vertices.update(v for edge in edges for v in edge)
    return Graph(vertices, edges)


def format_edge_list(g: Graph) -> str:
    lines = []
    isolated = [v for v in g.sorted_vertices() if g.degree(v) == 0]
    if isolated:
        lines.append("v " + " ".join(map(str, isolated)))
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path: Path) -> Graph:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"Cannot read graph file {path}: {exc}"
        raise GraphInputError(msg) from exc
    return parse_edge_list(text)


def coloring_to_json(c: Coloring) -> str:
    colors = {str(v): c.assignment[v] for v in sorted(c.assignment)}
    return json.dumps({"k": c.k, "colors": colors}, indent=2)


def coloring_from_json(text: str) -> Coloring:
    try:
        data = json.loads(text)
        return Coloring(int(data["k"]), {int(v): int(color) for v, color in data["colors"].items()})
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        msg = f"Invalid coloring JSON: {exc}"
        raise GraphInputError(msg) from exc


def _node_to_dict(node: SPNode) -> dict[str, object]:
    data: dict[str, object] = {"kind": node.kind.value, "poles": list(node.poles)}
    if node.is_leaf:
        data["has_edge"] = node.has_edge
        data["virtual"] = node.virtual
    data["children"] = [_node_to_dict(child) for child in canonical_children(node)]
    return data


def tree_to_json(t: SPTree) -> str:
    return json.dumps(_node_to_dict(t.root), indent=2)


def _node_from_dict(data: Mapping[str, object]) -> SPNode:
    kind = NodeKind(str(data["kind"]))
    poles = data["poles"]
    if not isinstance(poles, list) or len(poles) != 2:  # noqa: PLR2004
        msg = f"Tree node poles must be a pair, got {poles!r}"
        raise StructuralError(msg)
    pair = (int(poles[0]), int(poles[1]))
    if kind is NodeKind.LEAF:
        return SPNode(kind, pair, has_edge=bool(data.get("has_edge", True)), virtual=bool(data.get("virtual", False)))
    children = data.get("children", [])
    if not isinstance(children, list):
        msg = "Tree node children must be a list"
        raise StructuralError(msg)
    return SPNode(kind, pair, tuple(_node_from_dict(child) for child in children))


def tree_from_json(text: str) -> SPTree:
    try:
        data = json.loads(text)
        return SPTree(_node_from_dict(data))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        msg = f"Invalid tree JSON: {exc}"
        raise StructuralError(msg) from exc


def tree_to_dot(t: SPTree) -> str:
    lines = ["digraph sp_tree {", "  node [shape=box];"]
    counter = 0

    def visit(node: SPNode) -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        a, b = node.poles
        if node.is_leaf:
            edge = "virtual edge" if node.virtual else ("edge" if node.has_edge else "no edge")
            label = f"leaf ({a},{b})\\n{edge}"
        else:
            label = f"{node.kind.value} ({a},{b})\\nwidth {node.width}"
        lines.append(f'  {name} [label="{label}"];')
        for child in canonical_children(node):
            lines.append(f"  {name} -> {visit(child)};")
        return name

    visit(t.root)
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(
    g: Graph,
    coloring: Coloring | None = None,
    virtual_edges: Iterable[tuple[int, int]] = (),
) -> str:
    """Realized graph; virtual edges dashed, vertices filled by color class."""
    dashed = {(min(u, v), max(u, v)) for u, v in virtual_edges}
    lines = ["graph g {"]
    for v in g.sorted_vertices():
        if coloring is not None and v in coloring.assignment:
            fill = DOT_PALETTE[(coloring.assignment[v] - 1) % len(DOT_PALETTE)]
            lines.append(f'  {v} [label="{v}:{coloring.assignment[v]}", style=filled, fillcolor={fill}];')
        else:
            lines.append(f"  {v};")
    for u, v in sorted({*g.edges, *dashed}):
        style = " [style=dashed]" if (u, v) in dashed else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_trace_jsonl(path: Path, trace: Iterable[TraceRecord]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as file:
        for record in trace:
            file.write(json.dumps(record.to_dict()) + "\n")


def read_trace_jsonl(path: Path) -> list[TraceRecord]:
    records = []
    with path.open(encoding="utf-8") as file:
        for line in file:
            if line.strip():
                records.append(TraceRecord.from_dict(json.loads(line)))
    return records
