"""Graphviz DOT text for operations, fleets and designs.

Output is deterministic: nodes are emitted in index order and edges in their
canonical sorted order.
"""

from __future__ import annotations

from functools import singledispatch
from typing import Any

from .design import Design
from .graph_op import GraphOp
from .nesting import NestedFleet, NestingOp
from .range_algebra import LocatedFleet


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt(value: Any) -> str:
    return repr(value) if isinstance(value, float) else str(value)


@singledispatch
def export_dot(obj: Any) -> str:
    raise TypeError(f"cannot export {type(obj).__name__} as DOT")


@export_dot.register
def _(op: GraphOp) -> str:
    lines = ["graph operation {"]
    for slot, (start, n) in enumerate(zip(op.offsets(), op.inputs)):
        lines.append(f"  subgraph cluster_{slot} {{")
        lines.append(f"    label={_quote(f'slot {slot}')};")
        lines.extend(f"    v{v} [label={_quote(v)}];" for v in range(start, start + n))
        lines.append("  }")
    lines.extend(f"  v{u} -- v{v};" for u, v in op.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


@export_dot.register
def _(op: NestingOp) -> str:
    kinds = op.output
    lines = ["digraph nesting {"]
    for slot, (start, word) in enumerate(zip(op.offsets(), op.inputs)):
        lines.append(f"  subgraph cluster_{slot} {{")
        lines.append(f"    label={_quote(f'slot {slot}')};")
        lines.extend(f"    v{v} [label={_quote(f'{v}: {kinds[v]}')}];" for v in range(start, start + len(word)))
        lines.append("  }")
    lines.extend(f"  v{c} -> v{p};" for c, p in op.parent_edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


@export_dot.register
def _(x: LocatedFleet) -> str:
    lines = ["graph fleet {"]
    for i, a in enumerate(x.agents):
        pos = f"{_fmt(a.pos[0])},{_fmt(a.pos[1])}!"
        lines.append(f"  v{i} [label={_quote(f'{i}: {a.kind}')}, pos={_quote(pos)}];")
    lines.extend(f"  v{u} -- v{v};" for u, v in x.links)
    lines.append("}")
    return "\n".join(lines) + "\n"


@export_dot.register
def _(x: NestedFleet) -> str:
    lines = ["digraph nested_fleet {"]
    lines.extend(f"  v{i} [label={_quote(f'{i}: {a.kind}')}];" for i, a in enumerate(x.agents))
    lines.extend(f"  v{c} -> v{p};" for c, p in x.parent)
    lines.append("}")
    return "\n".join(lines) + "\n"


@export_dot.register
def _(d: Design) -> str:
    fleet = d.fleet
    by_port: dict[str, list[int]] = {}
    for i in range(fleet.size):
        root = fleet.root_of(i)
        by_port.setdefault(dict(d.root_ports)[root], []).append(i)
    lines = ["digraph design {"]
    for n, port in enumerate(sorted(by_port)):
        lines.append(f"  subgraph cluster_{n} {{")
        lines.append(f"    label={_quote(f'port {port}')};")
        lines.extend(f"    v{i} [label={_quote(f'{i}: {fleet.agents[i].kind}')}];" for i in by_port[port])
        lines.append("  }")
    lines.extend(f"  v{c} -> v{p};" for c, p in fleet.parent)
    lines.append("}")
    return "\n".join(lines) + "\n"
