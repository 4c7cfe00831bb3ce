"""Task planning: primitive tasks -> constraint program -> schedule.

Each task gets one integer start-time variable and one agent variable per unit
of demand.  Constraints are precedence between prerequisite tasks, distinct
agents within a task, no agent in two time-overlapping tasks, and completion
within the horizon.  :func:`solve` is a small deterministic backtracking
engine that minimizes makespan.
"""

from __future__ import annotations

import heapq
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

from .errors import InfeasibleError, NodeLimitExceeded, TaskError

DEFAULT_NODE_LIMIT = 1_000_000


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class PrimitiveTask:
    name: str
    demands: Mapping[str, int]
    duration: int
    prerequisites: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not _is_int(self.duration) or self.duration <= 0:
            raise TaskError(f"task {self.name!r}: duration must be a positive integer", code="bad_duration",
                            task=self.name)
        demands = dict(sorted(self.demands.items()))
        for kind, count in demands.items():
            if not _is_int(count) or count < 1:
                raise TaskError(f"task {self.name!r}: demand for {kind!r} must be a positive integer",
                                code="bad_demand", task=self.name, kind=kind)
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "prerequisites", tuple(sorted(set(self.prerequisites))))

    def __hash__(self) -> int:
        return hash((self.name, tuple(self.demands.items()), self.duration, self.prerequisites))

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "demands": dict(self.demands),
            "duration": self.duration,
            "prereqs": list(self.prerequisites),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> PrimitiveTask:
        return cls(data["name"], dict(data.get("demands", {})), data["duration"], tuple(data.get("prereqs", ())))


def tasks_to_json(tasks: Iterable[PrimitiveTask], horizon: int | None = None) -> dict[str, Any]:
    data: dict[str, Any] = {"tasks": [t.to_json() for t in tasks]}
    if horizon is not None:
        data["horizon"] = horizon
    return data


def tasks_from_json(data: Mapping[str, Any]) -> tuple[list[PrimitiveTask], int | None]:
    """Parse a task-set document; returns the tasks and the optional horizon."""
    return [PrimitiveTask.from_json(t) for t in data["tasks"]], data.get("horizon")


# -- the constraint program --------------------------------------------------


@dataclass(frozen=True)
class StartVar:
    task: str
    lo: int
    hi: int

    @property
    def domain(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class AssignVar:
    task: str
    kind: str
    slot: int
    domain: tuple[int, ...]


@dataclass(frozen=True)
class Precedence:
    before: str
    after: str


@dataclass(frozen=True)
class AllDifferent:
    task: str


@dataclass(frozen=True)
class WithinHorizon:
    task: str


@dataclass(frozen=True)
class NoOverlap:
    """No agent serves two tasks whose time intervals intersect."""


Constraint = Union[Precedence, AllDifferent, WithinHorizon, NoOverlap]


@dataclass(frozen=True)
class ConstraintProgram:
    tasks: tuple[PrimitiveTask, ...]
    agent_kinds: tuple[str, ...]
    horizon: int
    start_vars: tuple[StartVar, ...]
    assign_vars: tuple[AssignVar, ...]
    constraints: tuple[Constraint, ...]
    issues: tuple[str, ...] = ()

    def task(self, name: str) -> PrimitiveTask:
        for t in self.tasks:
            if t.name == name:
                return t
        raise KeyError(name)

    def assign_vars_of(self, name: str) -> list[AssignVar]:
        return [v for v in self.assign_vars if v.task == name]


def topological_order(tasks: Sequence[PrimitiveTask]) -> list[PrimitiveTask]:
    """Prerequisites first, ties broken by name."""
    by_name: dict[str, PrimitiveTask] = {}
    for t in tasks:
        if t.name in by_name:
            raise TaskError(f"duplicate task name {t.name!r}", code="duplicate_task", task=t.name)
        by_name[t.name] = t
    indegree = {name: 0 for name in by_name}
    successors: dict[str, list[str]] = {name: [] for name in by_name}
    for t in tasks:
        for p in t.prerequisites:
            if p not in by_name:
                raise TaskError(f"task {t.name!r} depends on unknown task {p!r}", code="unknown_prerequisite",
                                task=t.name, prerequisite=p)
            indegree[t.name] += 1
            successors[p].append(t.name)
    ready = [name for name, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order: list[PrimitiveTask] = []
    while ready:
        name = heapq.heappop(ready)
        order.append(by_name[name])
        for s in successors[name]:
            indegree[s] -= 1
            if indegree[s] == 0:
                heapq.heappush(ready, s)
    if len(order) != len(tasks):
        stuck = sorted(name for name, d in indegree.items() if d > 0)
        raise TaskError(f"cyclic prerequisites among {stuck}", code="cyclic_prerequisites", tasks=stuck)
    return order


def _agent_kinds(fleet: Any) -> tuple[str, ...]:
    agents = getattr(fleet, "agents", fleet)
    return tuple(a if isinstance(a, str) else a.kind for a in agents)


def translate_tasks(tasks: Iterable[PrimitiveTask], fleet: Any, horizon: int | None = None) -> ConstraintProgram:
    """Build the constraint program for ``tasks`` over the agents of ``fleet``.

    ``fleet`` may be a located or nested fleet, or a plain sequence of kind
    names.  Demands for kinds the fleet lacks are recorded in ``issues`` and
    leave an empty-domain variable; the program is still returned.  The
    horizon defaults to the sum of all durations.
    """
    ordered = topological_order(list(tasks))
    kinds = _agent_kinds(fleet)
    if horizon is None:
        horizon = sum(t.duration for t in ordered)
    if not _is_int(horizon) or horizon < 0:
        raise TaskError(f"horizon must be a non-negative integer, got {horizon!r}", code="bad_horizon")
    start_vars = []
    assign_vars = []
    constraints: list[Constraint] = []
    issues = []
    for t in ordered:
        start_vars.append(StartVar(t.name, 0, horizon))
        for kind, count in t.demands.items():
            eligible = tuple(i for i, k in enumerate(kinds) if k == kind)
            if len(eligible) < count:
                issues.append(f"task {t.name} needs {count} {kind} but the fleet has {len(eligible)}")
            for slot in range(count):
                assign_vars.append(AssignVar(t.name, kind, slot, eligible))
        constraints.extend(Precedence(p, t.name) for p in t.prerequisites)
        constraints.append(AllDifferent(t.name))
        constraints.append(WithinHorizon(t.name))
    constraints.append(NoOverlap())
    return ConstraintProgram(
        tasks=tuple(ordered),
        agent_kinds=kinds,
        horizon=horizon,
        start_vars=tuple(start_vars),
        assign_vars=tuple(assign_vars),
        constraints=tuple(constraints),
        issues=tuple(issues),
    )


# -- schedules -----------------------------------------------------------------


@dataclass(frozen=True)
class TaskAssignment:
    task: str
    start: int
    end: int
    agents: tuple[int, ...]

    def to_json(self) -> dict[str, Any]:
        return {"name": self.task, "start": self.start, "end": self.end, "agents": list(self.agents)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> TaskAssignment:
        return cls(data["name"], data["start"], data["end"], tuple(data["agents"]))


@dataclass(frozen=True)
class Schedule:
    entries: tuple[TaskAssignment, ...] = ()
    makespan: int = field(default=0)

    @classmethod
    def build(cls, entries: Iterable[TaskAssignment]) -> Schedule:
        entries = tuple(entries)
        return cls(entries, max((e.end for e in entries), default=0))

    def entry(self, name: str) -> TaskAssignment:
        for e in self.entries:
            if e.task == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict[str, Any]:
        return {"makespan": self.makespan, "tasks": [e.to_json() for e in self.entries]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Schedule:
        return cls(tuple(TaskAssignment.from_json(e) for e in data["tasks"]), data["makespan"])

    def gantt(self, agent_kinds: Sequence[str] = ()) -> str:
        """Plain-text listing, one row per task with a bar over the time axis."""
        width = max((len(e.task) for e in self.entries), default=4)
        lines = [f"{'task':<{width}}  start  end  timeline", ]
        for e in self.entries:
            bar = "." * e.start + "#" * (e.end - e.start) + "." * (self.makespan - e.end)
            names = [f"{a}:{agent_kinds[a]}" if a < len(agent_kinds) else str(a) for a in e.agents]
            lines.append(f"{e.task:<{width}}  {e.start:>5}  {e.end:>3}  |{bar}|  {' '.join(names)}")
        lines.append(f"makespan {self.makespan}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str
    context: Mapping[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"code": self.code, "detail": self.detail, "context": dict(self.context)}


def validate_schedule(sched: Schedule, cp: ConstraintProgram) -> list[Violation]:
    """Every constraint of ``cp`` that ``sched`` breaks; empty when feasible."""
    out: list[Violation] = []
    by_task: dict[str, TaskAssignment] = {}
    known = {t.name for t in cp.tasks}
    for e in sched.entries:
        if e.task not in known:
            out.append(Violation("unknown_task", f"schedule lists unknown task {e.task}", {"task": e.task}))
        elif e.task in by_task:
            out.append(Violation("duplicate_task", f"task {e.task} scheduled twice", {"task": e.task}))
        else:
            by_task[e.task] = e
    for t in cp.tasks:
        e = by_task.get(t.name)
        if e is None:
            out.append(Violation("missing_task", f"task {t.name} is not scheduled", {"task": t.name}))
            continue
        if e.end != e.start + t.duration:
            out.append(Violation("duration", f"task {t.name} runs {e.start}-{e.end} but lasts {t.duration}",
                                 {"task": t.name}))
        if e.start < 0 or e.start + t.duration > cp.horizon:
            out.append(Violation("horizon", f"task {t.name} runs {e.start}-{e.start + t.duration} outside "
                                 f"[0, {cp.horizon}]", {"task": t.name, "start": e.start}))
        bad = [a for a in e.agents if not 0 <= a < len(cp.agent_kinds)]
        if bad:
            out.append(Violation("unknown_agent", f"task {t.name} uses unknown agents {bad}",
                                 {"task": t.name, "agents": bad}))
        dup = sorted(a for a, n in Counter(e.agents).items() if n > 1)
        if dup:
            out.append(Violation("all_different", f"task {t.name} uses agents {dup} more than once",
                                 {"task": t.name, "agents": dup}))
        got = Counter(cp.agent_kinds[a] for a in e.agents if 0 <= a < len(cp.agent_kinds))
        if got != Counter(t.demands):
            out.append(Violation("wrong_kind", f"task {t.name} needs {dict(t.demands)} but got {dict(got)}",
                                 {"task": t.name, "demands": dict(t.demands), "assigned": dict(got)}))
    for c in cp.constraints:
        if isinstance(c, Precedence) and c.before in by_task and c.after in by_task:
            need = by_task[c.before].start + cp.task(c.before).duration
            if by_task[c.after].start < need:
                out.append(Violation("precedence", f"task {c.after} starts at {by_task[c.after].start} "
                                     f"before {c.before} finishes at {need}",
                                     {"before": c.before, "after": c.after}))
    names = [t.name for t in cp.tasks if t.name in by_task]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ea, eb = by_task[a], by_task[b]
            sa, fa = ea.start, ea.start + cp.task(a).duration
            sb, fb = eb.start, eb.start + cp.task(b).duration
            if sa < fb and sb < fa:
                for agent in sorted(set(ea.agents) & set(eb.agents)):
                    out.append(Violation("double_booking", f"agent {agent} is in overlapping tasks {a} and {b}",
                                         {"agent": agent, "tasks": [a, b]}))
    if sched.makespan != max((e.end for e in sched.entries), default=0):
        out.append(Violation("makespan", f"reported makespan {sched.makespan} does not match the entries", {}))
    return out


# -- the solver ----------------------------------------------------------------


class _Search:
    """Depth-first search for one schedule with makespan at most ``bound``."""

    def __init__(self, cp: ConstraintProgram, node_limit: int, nodes_used: int) -> None:
        self.cp = cp
        self.node_limit = node_limit
        self.nodes = nodes_used
        self.duration = {t.name: t.duration for t in cp.tasks}
        self.prereqs = {t.name: t.prerequisites for t in cp.tasks}
        self.successors: dict[str, list[str]] = {t.name: [] for t in cp.tasks}
        for t in cp.tasks:
            for p in t.prerequisites:
                self.successors[p].append(t.name)
        # longest prerequisite chain before a task, and longest chain from its start to the end
        self.head: dict[str, int] = {}
        for t in cp.tasks:
            self.head[t.name] = max((self.head[p] + self.duration[p] for p in t.prerequisites), default=0)
        self.tail: dict[str, int] = {}
        for t in reversed(cp.tasks):
            self.tail[t.name] = self.duration[t.name] + max((self.tail[s] for s in self.successors[t.name]),
                                                             default=0)
        self.variables: list[StartVar | AssignVar] = []
        for t in cp.tasks:
            self.variables.append(next(v for v in cp.start_vars if v.task == t.name))
            self.variables.extend(cp.assign_vars_of(t.name))
        self.start_index = {v.task: i for i, v in enumerate(self.variables) if isinstance(v, StartVar)}
        self.assign_index: dict[str, list[int]] = {t.name: [] for t in cp.tasks}
        for i, v in enumerate(self.variables):
            if isinstance(v, AssignVar):
                self.assign_index[v.task].append(i)

    def _agents_of(self, task: str, values: dict[int, int]) -> set[int]:
        return {values[i] for i in self.assign_index[task] if i in values}

    def _start(self, task: str, values: dict[int, int]) -> int | None:
        return values.get(self.start_index[task])

    def _overlap(self, a: str, sa: int, b: str, sb: int) -> bool:
        return sa < sb + self.duration[b] and sb < sa + self.duration[a]

    def _consistent(self, index: int, value: int, values: dict[int, int]) -> bool:
        var = self.variables[index]
        task = var.task
        if isinstance(var, AssignVar):
            for i in self.assign_index[task]:
                if i not in values:
                    continue
                other = self.variables[i]
                if values[i] == value:
                    return False
                # slots of one kind are interchangeable: keep them increasing
                if other.kind == var.kind and (other.slot < var.slot) != (values[i] < value):
                    return False
            start = self._start(task, values)
            if start is None:
                return True
            for other in self.cp.tasks:
                if other.name == task:
                    continue
                s = self._start(other.name, values)
                if s is not None and self._overlap(task, start, other.name, s) \
                        and value in self._agents_of(other.name, values):
                    return False
            return True
        for p in self.prereqs[task]:
            s = self._start(p, values)
            if s is not None and value < s + self.duration[p]:
                return False
        for q in self.successors[task]:
            s = self._start(q, values)
            if s is not None and s < value + self.duration[task]:
                return False
        mine = self._agents_of(task, values)
        if mine:
            for other in self.cp.tasks:
                if other.name == task:
                    continue
                s = self._start(other.name, values)
                if s is not None and self._overlap(task, value, other.name, s) \
                        and mine & self._agents_of(other.name, values):
                    return False
        return True

    def _domain(self, index: int, bound: int) -> Sequence[int]:
        var = self.variables[index]
        if isinstance(var, AssignVar):
            return var.domain
        lo = max(var.lo, self.head[var.task])
        hi = min(var.hi, bound - self.tail[var.task], self.cp.horizon - self.duration[var.task])
        return range(lo, hi + 1)

    def run(self, bound: int) -> dict[int, int] | None:
        values: dict[int, int] = {}

        def search() -> bool:
            if len(values) == len(self.variables):
                return True
            best_index, best_domain = -1, None
            for i in range(len(self.variables)):
                if i in values:
                    continue
                live = [x for x in self._domain(i, bound) if self._consistent(i, x, values)]
                if best_domain is None or len(live) < len(best_domain):
                    best_index, best_domain = i, live
                    if not live:
                        return False
            for x in best_domain:
                self.nodes += 1
                if self.nodes > self.node_limit:
                    raise _OutOfNodes
                values[best_index] = x
                if search():
                    return True
                del values[best_index]
            return False

        return dict(values) if search() else None


class _OutOfNodes(Exception):
    pass


def _to_schedule(search: _Search, values: dict[int, int]) -> Schedule:
    entries = []
    for t in search.cp.tasks:
        start = search._start(t.name, values)
        agents = tuple(values[i] for i in search.assign_index[t.name])
        entries.append(TaskAssignment(t.name, start, start + t.duration, agents))
    return Schedule.build(entries)


def solve(cp: ConstraintProgram, node_limit: int = DEFAULT_NODE_LIMIT) -> Schedule:
    """Minimum-makespan schedule for ``cp``.

    Searches depth first, always branching on the variable with the fewest
    consistent values (ties by program order) and trying values in increasing
    order.  After each schedule found, the makespan bound is tightened to one
    less and the search restarts; the last schedule found is optimal.

    Raises :class:`InfeasibleError` if no schedule exists and
    :class:`NodeLimitExceeded` (carrying the best schedule so far) if
    ``node_limit`` branching decisions were used first.
    """
    search = _Search(cp, node_limit, 0)
    best: Schedule | None = None
    bound = cp.horizon
    while bound >= 0:
        try:
            values = search.run(bound)
        except _OutOfNodes:
            raise NodeLimitExceeded(
                f"node limit {node_limit} reached" + ("" if best is None else f" with makespan {best.makespan}"),
                best=best,
                node_limit=node_limit,
            ) from None
        if values is None:
            break
        best = _to_schedule(search, values)
        bound = best.makespan - 1
    if best is None:
        raise InfeasibleError(
            "no schedule satisfies the constraints within the horizon",
            horizon=cp.horizon,
            issues=list(cp.issues),
        )
    return best
