"""The one-colored network operad.

Types are vertex counts.  An operation with input slots ``(n1, ..., nk)`` is a
simple graph on ``N = n1 + ... + nk`` vertices, numbered block by block in slot
order.  It is a blueprint: acting on ``k`` networks it lays them side by side
and adds its edges.  Composition grafts operations into slots and unions the
edge sets.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import accumulate
from typing import Any

from .errors import CompositionError, GraphOpError

Edge = tuple[int, int]


def _is_natural(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def normalize_edges(edges: Iterable[Sequence[int]], n_vertices: int) -> tuple[Edge, ...]:
    """Validate undirected edges over ``range(n_vertices)`` and sort them.

    Each pair is reordered to ``(min, max)``.  Self-loops, out-of-range
    endpoints and duplicates raise :class:`GraphOpError` with distinct codes.
    """
    seen: set[Edge] = set()
    for raw in edges:
        pair = tuple(raw)
        if len(pair) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair):
            raise GraphOpError(f"edge {raw!r} is not a pair of integers", code="malformed_edge", edge=list(pair))
        u, v = pair
        if u == v:
            raise GraphOpError(f"self-loop at vertex {u}", code="self_loop", edge=[u, v])
        for w in (u, v):
            if not 0 <= w < n_vertices:
                raise GraphOpError(
                    f"edge {{{u},{v}}} uses vertex {w} outside [0, {n_vertices})",
                    code="vertex_out_of_range",
                    edge=[u, v],
                    n_vertices=n_vertices,
                )
        edge = (u, v) if u < v else (v, u)
        if edge in seen:
            raise GraphOpError(f"duplicate edge {{{edge[0]},{edge[1]}}}", code="duplicate_edge", edge=list(edge))
        seen.add(edge)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class GraphOp:
    """An operation of the network operad.

    ``inputs`` are the vertex counts of the slots, ``edges`` the edges added
    over the concatenated vertex set.  Instances are normalized on
    construction, so ``==`` is structural equality.
    """

    inputs: tuple[int, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        inputs = tuple(self.inputs)
        for i, n in enumerate(inputs):
            if not _is_natural(n):
                raise GraphOpError(f"slot {i} has invalid vertex count {n!r}", code="bad_arity", slot=i)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "edges", normalize_edges(self.edges, sum(inputs)))

    @property
    def arity(self) -> int:
        """Number of input slots."""
        return len(self.inputs)

    @property
    def output(self) -> int:
        """Output type: the total vertex count."""
        return sum(self.inputs)

    def offsets(self) -> tuple[int, ...]:
        """Global index of the first vertex of each slot."""
        return tuple(accumulate(self.inputs, initial=0))[:-1]

    def slot_of(self, vertex: int) -> int:
        for i, (start, n) in enumerate(zip(self.offsets(), self.inputs)):
            if start <= vertex < start + n:
                return i
        raise IndexError(vertex)

    def to_json(self) -> dict[str, Any]:
        return {"inputs": list(self.inputs), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> GraphOp:
        return make_graph_op(data["inputs"], data.get("edges", []))


def validate_graph_op(op: GraphOp) -> None:
    """Re-check every invariant of an existing operation; raise on failure."""
    for i, n in enumerate(op.inputs):
        if not _is_natural(n):
            raise GraphOpError(f"slot {i} has invalid vertex count {n!r}", code="bad_arity", slot=i)
    canonical = normalize_edges(op.edges, op.output)
    if canonical != op.edges:
        raise GraphOpError("edge list is not in canonical sorted form", code="not_canonical")


def make_graph_op(inputs: Iterable[int], edges: Iterable[Sequence[int]] = ()) -> GraphOp:
    return GraphOp(tuple(inputs), tuple(tuple(e) for e in edges))


def identity_op(n: int) -> GraphOp:
    """The unit operation on ``n`` vertices: one slot, no edges."""
    return GraphOp((n,))


def compose(f: GraphOp, gs: Sequence[GraphOp]) -> GraphOp:
    """Graft ``gs[i]`` into slot ``i`` of ``f``.

    The inner operations' edges are shifted to their block offsets; ``f``'s
    edges keep their indices because each ``gs[i]`` has exactly ``f.inputs[i]``
    vertices and blocks stay in order.
    """
    if len(gs) != f.arity:
        raise CompositionError(
            f"operation has {f.arity} slots but {len(gs)} operations were supplied",
            code="arity_mismatch",
            expected=f.arity,
            actual=len(gs),
        )
    edges: set[Edge] = set(f.edges)
    inputs: list[int] = []
    for i, (offset, g) in enumerate(zip(f.offsets(), gs)):
        if g.output != f.inputs[i]:
            raise CompositionError(
                f"slot {i} expects type {f.inputs[i]} but the supplied operation has output {g.output}",
                code="type_mismatch",
                slot=i,
                expected=f.inputs[i],
                actual=g.output,
            )
        inputs.extend(g.inputs)
        edges.update((u + offset, v + offset) for u, v in g.edges)
    return GraphOp(tuple(inputs), tuple(edges))


@dataclass(frozen=True)
class SlotPermutation:
    """A reordering of slots: new slot ``j`` is old slot ``order[j]``."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        order = tuple(self.order)
        if sorted(order) != list(range(len(order))):
            raise CompositionError(f"{list(order)} is not a permutation", code="not_a_permutation")
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.order)

    @classmethod
    def identity(cls, k: int) -> SlotPermutation:
        return cls(tuple(range(k)))

    def inverse(self) -> SlotPermutation:
        inv = [0] * len(self.order)
        for new, old in enumerate(self.order):
            inv[old] = new
        return SlotPermutation(tuple(inv))

    def apply(self, items: Sequence[Any]) -> list[Any]:
        """Reorder ``items`` (indexed by old slot) into the new slot order."""
        return [items[old] for old in self.order]

    def then(self, other: SlotPermutation) -> SlotPermutation:
        """Permutation equivalent to applying ``self`` first, then ``other``."""
        return SlotPermutation(tuple(self.order[j] for j in other.order))


def _as_permutation(sigma: SlotPermutation | Sequence[int]) -> SlotPermutation:
    return sigma if isinstance(sigma, SlotPermutation) else SlotPermutation(tuple(sigma))


def vertex_map(sizes: Sequence[int], sigma: SlotPermutation | Sequence[int]) -> list[int]:
    """Old global vertex index -> new global index when blocks are reordered."""
    sigma = _as_permutation(sigma)
    old_offsets = list(accumulate(sizes, initial=0))
    mapping = [0] * old_offsets[-1]
    position = 0
    for old in sigma.order:
        for local in range(sizes[old]):
            mapping[old_offsets[old] + local] = position
            position += 1
    return mapping


def block_permutation(
    arities: Sequence[int], sigma: SlotPermutation | Sequence[int]
) -> SlotPermutation:
    """Lift a permutation of outer slots to the flattened inner slots.

    ``arities[i]`` is the slot count of the operation grafted into outer slot
    ``i``; the result moves each group of inner slots as one block.
    """
    sigma = _as_permutation(sigma)
    starts = list(accumulate(arities, initial=0))
    order: list[int] = []
    for old in sigma.order:
        order.extend(range(starts[old], starts[old + 1]))
    return SlotPermutation(tuple(order))


def permute_inputs(f: GraphOp, sigma: SlotPermutation | Sequence[int]) -> GraphOp:
    sigma = _as_permutation(sigma)
    if len(sigma) != f.arity:
        raise CompositionError(
            f"permutation of size {len(sigma)} applied to an operation with {f.arity} slots",
            code="permutation_size_mismatch",
            expected=f.arity,
            actual=len(sigma),
        )
    remap = vertex_map(f.inputs, sigma)
    return GraphOp(tuple(sigma.apply(f.inputs)), tuple((remap[u], remap[v]) for u, v in f.edges))


def overlay(f: GraphOp, g: GraphOp) -> GraphOp:
    """Union of the edge sets of two operations with the same slots."""
    if f.inputs != g.inputs:
        raise CompositionError(
            f"cannot overlay operations with inputs {list(f.inputs)} and {list(g.inputs)}",
            code="shape_mismatch",
            left=list(f.inputs),
            right=list(g.inputs),
        )
    return GraphOp(f.inputs, tuple(set(f.edges) | set(g.edges)))
