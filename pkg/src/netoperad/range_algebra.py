"""Range-limited communication: an algebra of the network operad.

An element is a fleet of located agents together with the links already
established between them.  A blueprint acts by laying fleets side by side and
turning each of its edges into a link only when both radios reach.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import accumulate
from typing import Any

from .catalog import Catalog, Position
from .errors import CatalogError, CompositionError, FleetError, GraphOpError
from .graph_op import Edge, GraphOp, normalize_edges


@dataclass(frozen=True)
class Agent:
    kind: str
    pos: Position

    def __post_init__(self) -> None:
        pos = tuple(self.pos)
        if len(pos) != 2:
            raise FleetError(f"position {self.pos!r} is not a 2-vector", code="bad_position")
        object.__setattr__(self, "pos", pos)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "pos": list(self.pos)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Agent:
        return cls(data["kind"], tuple(data["pos"]))


def squared_distance(p: Position, q: Position) -> Any:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def within(p: Position, q: Position, reach: Any) -> bool:
    """``dist(p, q) <= reach``, compared on squares so integer inputs stay exact."""
    return squared_distance(p, q) <= reach * reach


def as_agents(items: Iterable[Agent | Mapping[str, Any] | Sequence[Any]]) -> tuple[Agent, ...]:
    out = []
    for item in items:
        if isinstance(item, Agent):
            out.append(item)
        elif isinstance(item, Mapping):
            out.append(Agent.from_json(item))
        else:
            kind, pos = item
            out.append(Agent(kind, tuple(pos)))
    return tuple(out)


@dataclass(frozen=True)
class LocatedFleet:
    """Agents at positions plus a simple graph of links between them.

    Construction checks the graph structure only; the range condition needs a
    catalog and is checked by :meth:`RangeAlgebra.make_fleet`.
    """

    agents: tuple[Agent, ...] = ()
    links: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        agents = as_agents(self.agents)
        object.__setattr__(self, "agents", agents)
        try:
            links = normalize_edges(self.links, len(agents))
        except GraphOpError as exc:
            raise FleetError(exc.detail, code=exc.code, **exc.context) from None
        object.__setattr__(self, "links", links)

    @property
    def size(self) -> int:
        """Operad type of the element: its agent count."""
        return len(self.agents)

    def reindexed(self, mapping: Sequence[int]) -> LocatedFleet:
        """Move agent ``i`` to position ``mapping[i]``, relabelling links."""
        agents: list[Agent | None] = [None] * len(self.agents)
        for old, new in enumerate(mapping):
            agents[new] = self.agents[old]
        return LocatedFleet(tuple(agents), tuple((mapping[u], mapping[v]) for u, v in self.links))

    def to_json(self) -> dict[str, Any]:
        return {"agents": [a.to_json() for a in self.agents], "links": [list(e) for e in self.links]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> LocatedFleet:
        return cls(as_agents(data.get("agents", [])), tuple(tuple(e) for e in data.get("links", [])))


class RangeAlgebra:
    """The range-limited algebra over a given catalog of agent kinds.

    Two agents can talk when their distance is at most the smaller of their
    two communication ranges (boundary included).
    """

    def __init__(self, catalog: Catalog) -> None:
        self.catalog = catalog

    def reach(self, kind: str) -> Any:
        return self.catalog[kind].comm_range

    def in_range(self, a: Agent, b: Agent) -> bool:
        return within(a.pos, b.pos, min(self.reach(a.kind), self.reach(b.kind)))

    def validate(self, fleet: LocatedFleet) -> None:
        """Raise :class:`FleetError` unless every kind is known and every link is in range."""
        for i, agent in enumerate(fleet.agents):
            if agent.kind not in self.catalog:
                raise FleetError(f"agent {i} has unknown kind {agent.kind!r}", code="unknown_kind", agent=i,
                                 kind=agent.kind)
        for u, v in fleet.links:
            a, b = fleet.agents[u], fleet.agents[v]
            if not self.in_range(a, b):
                raise FleetError(
                    f"link {{{u},{v}}} spans squared distance {squared_distance(a.pos, b.pos)} "
                    f"beyond ranges {self.reach(a.kind)} and {self.reach(b.kind)}",
                    code="link_out_of_range",
                    edge=[u, v],
                    squared_distance=squared_distance(a.pos, b.pos),
                    ranges=[self.reach(a.kind), self.reach(b.kind)],
                )

    def make_fleet(self, agents: Iterable[Any] = (), links: Iterable[Sequence[int]] = ()) -> LocatedFleet:
        fleet = LocatedFleet(as_agents(agents), tuple(tuple(e) for e in links))
        self.validate(fleet)
        return fleet

    def act(self, f: GraphOp, xs: Sequence[LocatedFleet]) -> LocatedFleet:
        """Apply blueprint ``f`` to fleets ``xs``.

        Existing links are kept (shifted to their block); a blueprint edge is
        added only when its endpoints are in range.  Positions never change.
        """
        if len(xs) != f.arity:
            raise CompositionError(
                f"operation has {f.arity} slots but {len(xs)} fleets were supplied",
                code="arity_mismatch",
                expected=f.arity,
                actual=len(xs),
            )
        agents: list[Agent] = []
        links: set[Edge] = set()
        offsets = accumulate((x.size for x in xs), initial=0)
        for slot, (offset, x) in enumerate(zip(offsets, xs)):
            if x.size != f.inputs[slot]:
                raise CompositionError(
                    f"slot {slot} expects {f.inputs[slot]} agents but the fleet has {x.size}",
                    code="type_mismatch",
                    slot=slot,
                    expected=f.inputs[slot],
                    actual=x.size,
                )
            agents.extend(x.agents)
            links.update((u + offset, v + offset) for u, v in x.links)
        try:
            links.update((u, v) for u, v in f.edges if self.in_range(agents[u], agents[v]))
        except CatalogError as exc:
            raise FleetError(exc.detail, code="unknown_kind", **exc.context) from None
        return LocatedFleet(tuple(agents), tuple(links))
