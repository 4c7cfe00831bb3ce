"""Search-and-rescue fleet design under a budget.

A design is a nesting forest of assets whose roots sit at ports.  Roots travel
in a straight line to the search area at their own speed, carrying their
subtree; once there, every agent searches at its kind's rate until the horizon.
Designs are compared by total delivered effort, then by cost.

Internally designs are handled in a canonical form so that two forests that
differ only in sibling order are the same candidate::

    forest = ((port_index, tree), ...)      # sorted
    tree   = (kind_name, (child_tree, ...)) # children sorted
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .catalog import Catalog, Position
from .errors import DesignError, NetworkOperadError, SearchSpaceTooLarge
from .nesting import NestedFleet, NestingOperad
from .range_algebra import Agent

Tree = tuple[str, tuple[Any, ...]]
Forest = tuple[tuple[int, Tree], ...]

DEFAULT_SPACE_CAP = 10**6


@dataclass(frozen=True)
class Port:
    name: str
    pos: Position

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", tuple(self.pos))


@dataclass(frozen=True)
class SearchArea:
    centroid: Position
    required_effort: float = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "centroid", tuple(self.centroid))
        if not math.isfinite(self.required_effort) or self.required_effort < 0:
            raise DesignError("required effort must be finite and non-negative", code="bad_scenario")


@dataclass(frozen=True)
class Scenario:
    catalog: Catalog
    ports: tuple[Port, ...]
    area: SearchArea
    budget: float
    horizon: float

    def __post_init__(self) -> None:
        ports = tuple(self.ports)
        object.__setattr__(self, "ports", ports)
        if not ports:
            raise DesignError("a scenario needs at least one port", code="bad_scenario")
        names = [p.name for p in ports]
        if len(set(names)) != len(names):
            raise DesignError(f"duplicate port names in {names}", code="bad_scenario")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DesignError(f"horizon must be finite and positive, got {self.horizon}", code="bad_scenario")
        if not (math.isfinite(self.budget) and self.budget >= 0):
            raise DesignError(f"budget must be finite and non-negative, got {self.budget}", code="bad_scenario")

    def port(self, name: str) -> Port:
        for p in self.ports:
            if p.name == name:
                return p
        raise DesignError(f"unknown port {name!r}", code="unknown_port", port=name)

    def distance(self, port: Port) -> float:
        return math.dist(port.pos, self.area.centroid)

    def can_root(self, port: Port, kind: str) -> bool:
        """Whether ``kind`` can reach the area from ``port`` on its own."""
        return self.catalog[kind].speed > 0 or self.distance(port) == 0

    def to_json(self) -> dict[str, Any]:
        return {
            "catalog": self.catalog.to_json(),
            "ports": [{"name": p.name, "pos": list(p.pos)} for p in self.ports],
            "area": {"centroid": list(self.area.centroid), "required_effort": self.area.required_effort},
            "budget": self.budget,
            "horizon": self.horizon,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Scenario:
        area = data["area"]
        return cls(
            catalog=Catalog.from_json(data["catalog"]),
            ports=tuple(Port(p["name"], tuple(p["pos"])) for p in data["ports"]),
            area=SearchArea(tuple(area["centroid"]), area.get("required_effort", 0)),
            budget=data["budget"],
            horizon=data["horizon"],
        )


@dataclass(frozen=True)
class Design:
    """A nested fleet whose every root is assigned to a named port."""

    fleet: NestedFleet = field(default_factory=NestedFleet)
    root_ports: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        assignment = dict(self.root_ports)
        if len(assignment) != len(self.root_ports):
            raise DesignError("a root is assigned to more than one port", code="bad_root_ports")
        roots = self.fleet.roots()
        if sorted(assignment) != roots:
            raise DesignError(
                f"port assignments cover {sorted(assignment)} but the roots are {roots}",
                code="bad_root_ports",
                assigned=sorted(assignment),
                roots=roots,
            )
        object.__setattr__(self, "root_ports", tuple(sorted(assignment.items())))

    @property
    def size(self) -> int:
        return self.fleet.size

    def to_json(self) -> dict[str, Any]:
        return {**self.fleet.to_json(), "root_ports": [[r, p] for r, p in self.root_ports]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Design:
        return cls(NestedFleet.from_json(data), tuple((r, p) for r, p in data.get("root_ports", [])))


@dataclass(frozen=True)
class EffortReport:
    total_cost: float
    arrival_times: tuple[tuple[int, float], ...]
    total_effort: float
    feasible: bool
    meets_requirement: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "total_cost": self.total_cost,
            "arrival_times": [[r, t if math.isfinite(t) else None] for r, t in self.arrival_times],
            "total_effort": self.total_effort,
            "feasible": self.feasible,
            "meets_requirement": self.meets_requirement,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> EffortReport:
        return cls(
            data["total_cost"],
            tuple((r, math.inf if t is None else t) for r, t in data["arrival_times"]),
            data["total_effort"],
            data["feasible"],
            data["meets_requirement"],
        )


def validate_design(d: Design, s: Scenario) -> None:
    """Check kinds, ports, capacities, root placement, and that immobile roots start on scene."""
    NestingOperad(s.catalog).validate_fleet(d.fleet)
    for root, name in d.root_ports:
        port = s.port(name)
        if d.fleet.agents[root].pos != port.pos:
            raise DesignError(
                f"root {root} is at {list(d.fleet.agents[root].pos)}, not at port {name}",
                code="root_not_at_port",
                root=root,
                port=name,
            )
        kind = d.fleet.agents[root].kind
        if not s.can_root(port, kind):
            raise DesignError(
                f"root {root} is a {kind}, which cannot move, at port {name} away from the area",
                code="immobile_root",
                root=root,
                port=name,
            )


def evaluate_design(d: Design, s: Scenario) -> EffortReport:
    """Cost and delivered search effort of a design.

    Every agent in a root's subtree searches at its kind's rate from the
    root's arrival time until the horizon.  Sums use :func:`math.fsum`, so the
    result does not depend on agent numbering.
    """
    try:
        kinds = [s.catalog[a.kind] for a in d.fleet.agents]
    except NetworkOperadError as exc:
        raise DesignError(exc.detail, code="unknown_kind", **exc.context) from None
    arrivals: dict[int, float] = {}
    for root, name in d.root_ports:
        dist = s.distance(s.port(name))
        speed = kinds[root].speed
        if dist == 0:
            arrivals[root] = 0.0
        elif speed > 0:
            arrivals[root] = dist / speed
        else:
            arrivals[root] = math.inf
    contributions = []
    for i, kind in enumerate(kinds):
        root = d.fleet.root_of(i)
        contributions.append(kind.search_rate * max(0.0, s.horizon - arrivals[root]))
    cost = math.fsum(k.unit_cost for k in kinds)
    effort = math.fsum(contributions)
    return EffortReport(
        total_cost=cost,
        arrival_times=tuple(sorted(arrivals.items())),
        total_effort=effort,
        feasible=cost <= s.budget,
        meets_requirement=effort >= s.area.required_effort,
    )


# -- canonical forms ---------------------------------------------------------


@lru_cache(maxsize=None)
def _tree_size(tree: Tree) -> int:
    return 1 + sum(_tree_size(child) for child in tree[1])


def _forest_size(forest: Forest) -> int:
    return sum(_tree_size(tree) for _, tree in forest)


def canonical_form(d: Design, s: Scenario) -> Forest:
    """Sibling-order-independent key of a design."""
    port_index = {p.name: i for i, p in enumerate(s.ports)}
    kids: dict[int, list[int]] = {i: [] for i in range(d.size)}
    for child, parent in d.fleet.parent:
        kids[parent].append(child)

    def tree(i: int) -> Tree:
        return (d.fleet.agents[i].kind, tuple(sorted(tree(c) for c in kids[i])))

    return tuple(sorted((port_index[name], tree(root)) for root, name in d.root_ports))


def design_from_forest(forest: Forest, s: Scenario) -> Design:
    """Build a :class:`Design`, numbering agents in depth-first preorder."""
    agents: list[Agent] = []
    arcs: list[tuple[int, int]] = []
    root_ports: list[tuple[int, str]] = []

    def place(tree: Tree, pos: Position, parent: int | None) -> None:
        index = len(agents)
        agents.append(Agent(tree[0], pos))
        if parent is not None:
            arcs.append((index, parent))
        for child in tree[1]:
            place(child, pos, index)

    for port_index, tree in forest:
        port = s.ports[port_index]
        root_ports.append((len(agents), port.name))
        place(tree, port.pos, None)
    return Design(NestedFleet(tuple(agents), tuple(arcs)), tuple(root_ports))


def _multisets(items: Sequence[Any], budget: int, size, admit) -> Iterator[tuple[Any, ...]]:
    """Non-decreasing selections from sorted ``items`` with total size within ``budget``.

    ``admit(chosen)`` is consulted after each addition and prunes the branch
    when false; it must be monotone (false stays false as items are added).
    """
    chosen: list[Any] = []

    def rec(start: int, remaining: int) -> Iterator[tuple[Any, ...]]:
        yield tuple(chosen)
        for i in range(start, len(items)):
            w = size(items[i])
            if w > remaining:
                continue
            chosen.append(items[i])
            if admit(chosen):
                yield from rec(i, remaining - w)
            chosen.pop()

    return rec(0, budget)


class _TreeFactory:
    """All capacity-valid canonical trees per root kind, memoized by size bound."""

    def __init__(self, catalog: Catalog) -> None:
        self.catalog = catalog
        self._memo: dict[tuple[str, int], list[Tree]] = {}

    def trees(self, kind: str, max_size: int) -> list[Tree]:
        key = (kind, max_size)
        if key in self._memo:
            return self._memo[key]
        out: list[Tree] = []
        if max_size >= 1:
            caps = {c: n for c, n in self.catalog[kind].carry_capacity.items() if n > 0 and c in self.catalog}
            candidates = sorted(t for c in caps for t in self.trees(c, max_size - 1))

            def admit(chosen: list[Tree]) -> bool:
                last = chosen[-1][0]
                return sum(1 for t in chosen if t[0] == last) <= caps[last]

            out = sorted((kind, children) for children in _multisets(candidates, max_size - 1, _tree_size, admit))
        self._memo[key] = out
        return out


def canonical_forests(s: Scenario, bounds: int, cap: int = DEFAULT_SPACE_CAP) -> list[Forest]:
    """Canonical forests with at most ``bounds`` agents, smallest first.

    Raises :class:`SearchSpaceTooLarge` as soon as more than ``cap`` exist.
    """
    if bounds < 0:
        raise DesignError("bounds must be non-negative", code="bad_bounds")
    factory = _TreeFactory(s.catalog)
    roots = sorted(
        (pi, tree)
        for pi, port in enumerate(s.ports)
        for kind in s.catalog
        if s.can_root(port, kind)
        for tree in factory.trees(kind, bounds)
    )
    forests = []
    for forest in _multisets(roots, bounds, lambda item: _tree_size(item[1]), lambda chosen: True):
        forests.append(forest)
        if len(forests) > cap:
            raise SearchSpaceTooLarge(f"more than {cap} designs with at most {bounds} agents", cap=cap, bounds=bounds)
    forests.sort(key=lambda f: (_forest_size(f), f))
    return forests


def enumerate_designs(s: Scenario, bounds: int, cap: int = DEFAULT_SPACE_CAP) -> list[Design]:
    """Every capacity-valid, port-rooted design with at most ``bounds`` agents.

    Designs equal up to sibling order appear once.  Assets that cannot move
    on their own are only allowed as roots at a port inside the area.
    """
    return [design_from_forest(f, s) for f in canonical_forests(s, bounds, cap)]


def _better(a: EffortReport, b: EffortReport) -> bool:
    """Strictly more effort, or equal effort at strictly lower cost."""
    return a.total_effort > b.total_effort or (a.total_effort == b.total_effort and a.total_cost < b.total_cost)


def brute_force_best(s: Scenario, bounds: int, cap: int = DEFAULT_SPACE_CAP) -> tuple[Design, EffortReport]:
    """Exhaustive oracle: the best affordable design among all enumerated ones.

    Ties go to the cheaper design, then to the earlier one in enumeration order.
    """
    best: tuple[Design, EffortReport] | None = None
    for forest in canonical_forests(s, bounds, cap):
        d = design_from_forest(forest, s)
        report = evaluate_design(d, s)
        if report.feasible and (best is None or _better(report, best[1])):
            best = (d, report)
    assert best is not None  # the empty design costs nothing
    return best


# -- beam search -------------------------------------------------------------


def _sorted_children(children: Sequence[Tree]) -> tuple[Tree, ...]:
    return tuple(sorted(children))


def _grow_tree(tree: Tree, catalog: Catalog) -> Iterator[Tree]:
    """Trees obtained by nesting one new unit somewhere inside ``tree``."""
    kind, children = tree
    counts: dict[str, int] = {}
    for child in children:
        counts[child[0]] = counts.get(child[0], 0) + 1
    for child_kind, cap in catalog[kind].carry_capacity.items():
        if child_kind in catalog and counts.get(child_kind, 0) < cap:
            yield (kind, _sorted_children(children + ((child_kind, ()),)))
    for i, child in enumerate(children):
        if i > 0 and children[i - 1] == child:
            continue
        for grown in _grow_tree(child, catalog):
            yield (kind, _sorted_children(children[:i] + (grown,) + children[i + 1:]))


def _grow(forest: Forest, s: Scenario) -> Iterator[Forest]:
    for pi, port in enumerate(s.ports):
        for kind in s.catalog:
            if s.can_root(port, kind):
                yield tuple(sorted(forest + ((pi, (kind, ())),)))
    for i, (pi, tree) in enumerate(forest):
        if i > 0 and forest[i - 1] == (pi, tree):
            continue
        for grown in _grow_tree(tree, s.catalog):
            yield tuple(sorted(forest[:i] + ((pi, grown),) + forest[i + 1:]))


def _rank(report: EffortReport) -> tuple[float, float]:
    if report.total_cost > 0:
        ratio = report.total_effort / report.total_cost
    else:
        ratio = math.inf if report.total_effort > 0 else 0.0
    return (-ratio, -report.total_effort)


def beam_search(
    s: Scenario,
    width: int = 8,
    max_agents: int = 6,
    seed: int = 0,
    explored: list[tuple[Design, EffortReport]] | None = None,
) -> tuple[Design, EffortReport]:
    """Grow designs one unit at a time, keeping the ``width`` most cost-effective.

    Each step either adds a new root at a port or nests a new unit under an
    asset with spare capacity.  Over-budget partial designs are discarded (cost
    only grows).  Ties in the ranking are ordered by a ``random.Random(seed)``
    shuffle, so results are reproducible for a fixed seed.  The best affordable
    design seen at any depth is returned.  When ``explored`` is given, every
    evaluated affordable design is appended to it.
    """
    if width < 1:
        raise DesignError("beam width must be at least 1", code="bad_beam_width")
    rng = random.Random(seed)
    empty: Forest = ()
    best_forest, best_report = empty, evaluate_design(design_from_forest(empty, s), s)
    if explored is not None:
        explored.append((design_from_forest(empty, s), best_report))
    beam = [empty]
    for _ in range(max_agents):
        scored: dict[Forest, EffortReport] = {}
        for forest in beam:
            for grown in _grow(forest, s):
                if grown in scored:
                    continue
                report = evaluate_design(design_from_forest(grown, s), s)
                if report.feasible:
                    scored[grown] = report
        if not scored:
            break
        order = sorted(scored)
        rng.shuffle(order)
        order.sort(key=lambda f: _rank(scored[f]))
        for forest in sorted(scored):
            if explored is not None:
                explored.append((design_from_forest(forest, s), scored[forest]))
            if _better(scored[forest], best_report):
                best_forest, best_report = forest, scored[forest]
        beam = order[:width]
    return design_from_forest(best_forest, s), best_report


def pareto_front(reports: Sequence[tuple[Design, EffortReport]]) -> list[tuple[Design, EffortReport]]:
    """Entries not dominated in (lower cost, higher effort), in input order."""

    def dominates(a: EffortReport, b: EffortReport) -> bool:
        return (
            a.total_cost <= b.total_cost
            and a.total_effort >= b.total_effort
            and (a.total_cost < b.total_cost or a.total_effort > b.total_effort)
        )

    return [item for item in reports if not any(dominates(other[1], item[1]) for other in reports)]
