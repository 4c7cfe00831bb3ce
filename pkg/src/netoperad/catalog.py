"""Agent kinds and the catalog that names them."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import CatalogError

Position = tuple[Any, Any]


def _check_nonnegative(kind: str, label: str, value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)) and not hasattr(value, "numerator"):
        raise CatalogError(f"{kind}: {label} must be a number, got {value!r}", code="bad_number", kind=kind, field=label)
    if not math.isfinite(value) or value < 0:
        raise CatalogError(
            f"{kind}: {label} must be finite and non-negative, got {value!r}",
            code="bad_number",
            kind=kind,
            field=label,
        )


@dataclass(frozen=True)
class AgentKind:
    """A type of asset: radio reach, speed, price, search rate and what it can carry.

    ``carry_capacity`` maps a kind name to the maximum number of children of
    that kind; a missing entry means the kind cannot be carried at all.
    """

    name: str
    comm_range: float = 0
    speed: float = 0
    unit_cost: float = 0
    search_rate: float = 0
    carry_capacity: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise CatalogError(f"kind name must be a non-empty string, got {self.name!r}", code="bad_name")
        for label in ("comm_range", "speed", "unit_cost", "search_rate"):
            _check_nonnegative(self.name, label, getattr(self, label))
        caps = dict(sorted(self.carry_capacity.items()))
        for child, cap in caps.items():
            if isinstance(cap, bool) or not isinstance(cap, int) or cap < 0:
                raise CatalogError(
                    f"{self.name}: capacity for {child!r} must be a non-negative integer",
                    code="bad_capacity",
                    kind=self.name,
                    child=child,
                )
        object.__setattr__(self, "carry_capacity", caps)

    def __hash__(self) -> int:
        return hash((self.name, self.comm_range, self.speed, self.unit_cost, self.search_rate,
                     tuple(self.carry_capacity.items())))

    def capacity_for(self, kind: str) -> int:
        return self.carry_capacity.get(kind, 0)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "comm_range": self.comm_range,
            "speed": self.speed,
            "unit_cost": self.unit_cost,
            "search_rate": self.search_rate,
            "carry_capacity": dict(self.carry_capacity),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> AgentKind:
        return cls(
            name=data["name"],
            comm_range=data.get("comm_range", 0),
            speed=data.get("speed", 0),
            unit_cost=data.get("unit_cost", 0),
            search_rate=data.get("search_rate", 0),
            carry_capacity=dict(data.get("carry_capacity", {})),
        )


class Catalog(Mapping[str, AgentKind]):
    """Read-only mapping from kind name to :class:`AgentKind`, in insertion order."""

    def __init__(self, kinds: Iterable[AgentKind] = ()) -> None:
        self._kinds: dict[str, AgentKind] = {}
        for kind in kinds:
            if kind.name in self._kinds:
                raise CatalogError(f"duplicate kind name {kind.name!r}", code="duplicate_kind", kind=kind.name)
            self._kinds[kind.name] = kind

    def __getitem__(self, name: str) -> AgentKind:
        try:
            return self._kinds[name]
        except KeyError:
            raise CatalogError(f"unknown kind {name!r}", code="unknown_kind", kind=name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._kinds)

    def __len__(self) -> int:
        return len(self._kinds)

    def __contains__(self, name: object) -> bool:
        return name in self._kinds

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return list(self._kinds.values()) == list(other._kinds.values())

    def __hash__(self) -> int:
        return hash(tuple(self._kinds.values()))

    def __repr__(self) -> str:
        return f"Catalog({list(self._kinds.values())!r})"

    def to_json(self) -> list[dict[str, Any]]:
        return [kind.to_json() for kind in self._kinds.values()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, Any]]) -> Catalog:
        return cls(AgentKind.from_json(item) for item in data)
