"""Colored operad of nestings: which asset rides inside which.

Colors are kind names.  An operation is a directed forest on the concatenated
typed vertices of its slots, with an edge ``(child, parent)`` meaning *child is
carried by parent*.  Composition is partial: the combined relation must still
be a forest and every carrier must stay within its per-kind capacity.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import accumulate
from typing import Any

from .catalog import Catalog
from .errors import CompositionError, NestingError
from .range_algebra import Agent, as_agents

Arc = tuple[int, int]


@dataclass(frozen=True)
class CapacityViolation:
    vertex: int
    kind: str
    cap: int
    actual: int

    def to_json(self) -> dict[str, Any]:
        return {"vertex": self.vertex, "kind": self.kind, "cap": self.cap, "actual": self.actual}


def check_forest(n: int, arcs: Iterable[Sequence[int]]) -> tuple[Arc, ...]:
    """Validate ``(child, parent)`` arcs over ``range(n)`` as a forest and sort them.

    Raises :class:`NestingError` with code ``malformed_arc``,
    ``vertex_out_of_range``, ``self_parent``, ``duplicate_arc``,
    ``double_parent`` or ``cycle``, checked in that order.
    """
    pairs: list[Arc] = []
    for raw in arcs:
        pair = tuple(raw)
        if len(pair) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair):
            raise NestingError(f"arc {raw!r} is not a pair of integers", code="malformed_arc")
        child, parent = pair
        for w in pair:
            if not 0 <= w < n:
                raise NestingError(
                    f"arc {child}->{parent} uses vertex {w} outside [0, {n})",
                    code="vertex_out_of_range",
                    arc=[child, parent],
                    n_vertices=n,
                )
        if child == parent:
            raise NestingError(f"vertex {child} is its own parent", code="self_parent", vertex=child)
        pairs.append((child, parent))
    if len(set(pairs)) != len(pairs):
        dup = next(p for p, c in Counter(pairs).items() if c > 1)
        raise NestingError(f"arc {dup[0]}->{dup[1]} listed twice", code="duplicate_arc", arc=list(dup))
    parent_of: dict[int, int] = {}
    for child, parent in sorted(pairs):
        if child in parent_of:
            raise NestingError(
                f"vertex {child} has two parents, {parent_of[child]} and {parent}",
                code="double_parent",
                vertex=child,
                parents=[parent_of[child], parent],
            )
        parent_of[child] = parent
    state = dict.fromkeys(range(n), 0)  # 0 unseen, 1 on current path, 2 done
    for start in range(n):
        path = []
        v: int | None = start
        while v is not None and state[v] == 0:
            state[v] = 1
            path.append(v)
            v = parent_of.get(v)
        if v is not None and state[v] == 1:
            cycle = path[path.index(v):]
            raise NestingError(f"nesting cycle through vertices {cycle}", code="cycle", vertices=cycle)
        for w in path:
            state[w] = 2
    return tuple(sorted(pairs))


def check_capacity(kinds: Sequence[str], arcs: Iterable[Sequence[int]], catalog: Catalog) -> list[CapacityViolation]:
    """Every carrier whose children of some kind outnumber its capacity for that kind.

    A kind absent from the carrier's ``carry_capacity`` has capacity 0.
    """
    counts = Counter((parent, kinds[child]) for child, parent in arcs)
    violations = []
    for (parent, child_kind), actual in sorted(counts.items()):
        cap = catalog[kinds[parent]].capacity_for(child_kind)
        if actual > cap:
            violations.append(CapacityViolation(parent, child_kind, cap, actual))
    return violations


def _raise_capacity(violations: list[CapacityViolation]) -> None:
    if violations:
        first = violations[0]
        raise NestingError(
            f"vertex {first.vertex} carries {first.actual} {first.kind} but its capacity is {first.cap}",
            code="capacity_exceeded",
            violations=[v.to_json() for v in violations],
        )


def _check_kinds(kinds: Iterable[str], catalog: Catalog) -> None:
    for kind in kinds:
        if kind not in catalog:
            raise NestingError(f"unknown kind {kind!r}", code="unknown_kind", kind=kind)


@dataclass(frozen=True)
class NestingOp:
    """A nesting blueprint: typed slots plus ``(child, parent)`` arcs over all their vertices."""

    inputs: tuple[tuple[str, ...], ...]
    parent_edges: tuple[Arc, ...] = ()

    def __post_init__(self) -> None:
        inputs = tuple(tuple(word) for word in self.inputs)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "parent_edges", check_forest(sum(map(len, inputs)), self.parent_edges))

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def output(self) -> tuple[str, ...]:
        """Output color word: the slot words concatenated."""
        return tuple(kind for word in self.inputs for kind in word)

    def offsets(self) -> tuple[int, ...]:
        return tuple(accumulate(map(len, self.inputs), initial=0))[:-1]

    def to_json(self) -> dict[str, Any]:
        return {"inputs": [list(w) for w in self.inputs], "parent_edges": [list(a) for a in self.parent_edges]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> NestingOp:
        return cls(tuple(tuple(w) for w in data["inputs"]), tuple(tuple(a) for a in data.get("parent_edges", [])))


@dataclass(frozen=True)
class NestedFleet:
    """Agents plus a carried-by forest; carried agents sit where their root carrier is."""

    agents: tuple[Agent, ...] = ()
    parent: tuple[Arc, ...] = ()

    def __post_init__(self) -> None:
        agents = as_agents(self.agents)
        object.__setattr__(self, "agents", agents)
        arcs = self.parent.items() if isinstance(self.parent, Mapping) else self.parent
        object.__setattr__(self, "parent", check_forest(len(agents), arcs))

    @property
    def size(self) -> int:
        return len(self.agents)

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(a.kind for a in self.agents)

    def parent_of(self) -> dict[int, int]:
        return dict(self.parent)

    def roots(self) -> list[int]:
        carried = {child for child, _ in self.parent}
        return [i for i in range(self.size) if i not in carried]

    def root_of(self, i: int) -> int:
        parents = self.parent_of()
        while i in parents:
            i = parents[i]
        return i

    def children(self, i: int) -> list[int]:
        return [child for child, parent in self.parent if parent == i]

    def to_json(self) -> dict[str, Any]:
        return {"agents": [a.to_json() for a in self.agents], "parent": [list(a) for a in self.parent]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> NestedFleet:
        return cls(as_agents(data.get("agents", [])), tuple(tuple(a) for a in data.get("parent", [])))


def _settle(agents: Sequence[Agent], arcs: Sequence[Arc]) -> tuple[Agent, ...]:
    """Move every agent to the position of its root carrier."""
    parents = dict(arcs)

    def root(i: int) -> int:
        while i in parents:
            i = parents[i]
        return i

    return tuple(Agent(a.kind, agents[root(i)].pos) for i, a in enumerate(agents))


class NestingOperad:
    """Nesting operations and nested fleets over a fixed catalog."""

    def __init__(self, catalog: Catalog) -> None:
        self.catalog = catalog

    def violations(self, kinds: Sequence[str], arcs: Iterable[Sequence[int]]) -> list[CapacityViolation]:
        return check_capacity(kinds, arcs, self.catalog)

    def validate_op(self, f: NestingOp) -> None:
        _check_kinds(f.output, self.catalog)
        check_forest(len(f.output), f.parent_edges)
        _raise_capacity(self.violations(f.output, f.parent_edges))

    def make_op(self, inputs: Iterable[Iterable[str]], parent_edges: Iterable[Sequence[int]] = ()) -> NestingOp:
        op = NestingOp(tuple(tuple(w) for w in inputs), tuple(tuple(a) for a in parent_edges))
        self.validate_op(op)
        return op

    def identity(self, word: Sequence[str]) -> NestingOp:
        return self.make_op([tuple(word)])

    def compose(self, f: NestingOp, gs: Sequence[NestingOp]) -> NestingOp:
        """Graft ``gs`` into the slots of ``f``; fails if the union is not a capacity-respecting forest."""
        if len(gs) != f.arity:
            raise CompositionError(
                f"operation has {f.arity} slots but {len(gs)} operations were supplied",
                code="arity_mismatch",
                expected=f.arity,
                actual=len(gs),
            )
        arcs: set[Arc] = set(f.parent_edges)
        inputs: list[tuple[str, ...]] = []
        for i, (offset, g) in enumerate(zip(f.offsets(), gs)):
            if g.output != f.inputs[i]:
                raise NestingError(
                    f"slot {i} has colors {list(f.inputs[i])} but the supplied operation outputs {list(g.output)}",
                    code="color_mismatch",
                    slot=i,
                    expected=list(f.inputs[i]),
                    actual=list(g.output),
                )
            inputs.extend(g.inputs)
            arcs.update((c + offset, p + offset) for c, p in g.parent_edges)
        kinds = f.output
        _check_kinds(kinds, self.catalog)
        forest = check_forest(len(kinds), arcs)
        _raise_capacity(self.violations(kinds, forest))
        return NestingOp(tuple(inputs), forest)

    def validate_fleet(self, x: NestedFleet) -> None:
        _check_kinds(x.kinds, self.catalog)
        _raise_capacity(self.violations(x.kinds, x.parent))
        for i, agent in enumerate(x.agents):
            root = x.root_of(i)
            if agent.pos != x.agents[root].pos:
                raise NestingError(
                    f"agent {i} is at {list(agent.pos)} but its carrier {root} is at {list(x.agents[root].pos)}",
                    code="position_mismatch",
                    agent=i,
                    root=root,
                )

    def make_fleet(self, agents: Iterable[Any] = (), parent: Iterable[Sequence[int]] | Mapping[int, int] = ()) -> NestedFleet:
        arcs = parent.items() if isinstance(parent, Mapping) else parent
        fleet = NestedFleet(as_agents(agents), tuple(tuple(a) for a in arcs))
        self.validate_fleet(fleet)
        return fleet

    def act(self, f: NestingOp, xs: Sequence[NestedFleet]) -> NestedFleet:
        """Nest fleets according to ``f``; newly carried subtrees move to their new root's position."""
        if len(xs) != f.arity:
            raise CompositionError(
                f"operation has {f.arity} slots but {len(xs)} fleets were supplied",
                code="arity_mismatch",
                expected=f.arity,
                actual=len(xs),
            )
        agents: list[Agent] = []
        arcs: set[Arc] = set(f.parent_edges)
        for i, (offset, x) in enumerate(zip(f.offsets(), xs)):
            if x.kinds != f.inputs[i]:
                raise NestingError(
                    f"slot {i} has colors {list(f.inputs[i])} but the fleet has kinds {list(x.kinds)}",
                    code="color_mismatch",
                    slot=i,
                    expected=list(f.inputs[i]),
                    actual=list(x.kinds),
                )
            agents.extend(x.agents)
            arcs.update((c + offset, p + offset) for c, p in x.parent)
        kinds = f.output
        _check_kinds(kinds, self.catalog)
        forest = check_forest(len(agents), arcs)
        _raise_capacity(self.violations(kinds, forest))
        return NestedFleet(_settle(agents, forest), forest)
