"""Maps between levels of abstraction.

``forget_colors`` sends nesting operations to plain network operations by
dropping kinds and arc direction.  ``forget_positions`` sends located fleets to
anonymous networks.  The square relating the range-limited action to the
unconditional abstract action only commutes laxly, and :func:`check_square`
reports the defect.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from itertools import accumulate
from typing import Any

from .errors import CompositionError
from .graph_op import Edge, GraphOp, normalize_edges
from .nesting import NestingOp
from .range_algebra import LocatedFleet, RangeAlgebra


@dataclass(frozen=True)
class CountFleet:
    """A network with ``n`` anonymous vertices."""

    n: int
    links: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", normalize_edges(self.links, self.n))

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "links": [list(e) for e in self.links]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> CountFleet:
        return cls(data["n"], tuple(tuple(e) for e in data.get("links", [])))


def forget_colors(f: NestingOp) -> GraphOp:
    edges = {(min(c, p), max(c, p)) for c, p in f.parent_edges}
    return GraphOp(tuple(len(word) for word in f.inputs), tuple(edges))


def forget_positions(x: LocatedFleet) -> CountFleet:
    return CountFleet(x.size, x.links)


def act_abstract(f: GraphOp, xs: Sequence[CountFleet]) -> CountFleet:
    """The abstract action: every blueprint edge becomes a link, unconditionally."""
    if len(xs) != f.arity:
        raise CompositionError(
            f"operation has {f.arity} slots but {len(xs)} networks were supplied",
            code="arity_mismatch",
            expected=f.arity,
            actual=len(xs),
        )
    links: set[Edge] = set(f.edges)
    for slot, (offset, x) in enumerate(zip(accumulate((x.n for x in xs), initial=0), xs)):
        if x.n != f.inputs[slot]:
            raise CompositionError(
                f"slot {slot} expects {f.inputs[slot]} vertices but the network has {x.n}",
                code="type_mismatch",
                slot=slot,
                expected=f.inputs[slot],
                actual=x.n,
            )
        links.update((u + offset, v + offset) for u, v in x.links)
    return CountFleet(f.output, tuple(links))


@dataclass(frozen=True)
class SquareReport:
    """Both paths around the abstraction square and the links lost on the concrete one."""

    concrete: CountFleet
    abstract: CountFleet
    dropped: tuple[Edge, ...]

    @property
    def commutes(self) -> bool:
        return not self.dropped

    def to_json(self) -> dict[str, Any]:
        return {
            "concrete": self.concrete.to_json(),
            "abstract": self.abstract.to_json(),
            "dropped": [list(e) for e in self.dropped],
        }


def check_square(algebra: RangeAlgebra, f: GraphOp, xs: Sequence[LocatedFleet]) -> SquareReport:
    """Compare act-then-forget with forget-then-act for blueprint ``f``.

    Concrete links are always a subset of abstract links; ``dropped`` lists
    the difference.
    """
    concrete = forget_positions(algebra.act(f, xs))
    abstract = act_abstract(f, [forget_positions(x) for x in xs])
    dropped = tuple(sorted(set(abstract.links) - set(concrete.links)))
    return SquareReport(concrete, abstract, dropped)
