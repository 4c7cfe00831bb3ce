"""Randomized law suites for the operads, their algebras and the abstraction maps.

Every generator takes an explicit :class:`random.Random`, so a suite run is a
pure function of its seed.  Each ``check_*`` function returns a
:class:`LawTally` counting passes and failures per law.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from .abstraction import check_square, forget_colors
from .catalog import AgentKind, Catalog
from .errors import NetworkOperadError
from .graph_op import (
    GraphOp,
    SlotPermutation,
    block_permutation,
    compose,
    identity_op,
    permute_inputs,
    validate_graph_op,
    vertex_map,
)
from .nesting import NestedFleet, NestingOp, NestingOperad, check_capacity, check_forest
from .range_algebra import Agent, LocatedFleet, RangeAlgebra


@dataclass
class LawTally:
    passed: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    examples: list[str] = field(default_factory=list)

    def record(self, law: str, ok: bool, example: Callable[[], str] | None = None) -> None:
        bucket = self.passed if ok else self.failed
        bucket[law] = bucket.get(law, 0) + 1
        if not ok and example is not None and len(self.examples) < 5:
            self.examples.append(f"{law}: {example()}")

    def merge(self, other: LawTally) -> LawTally:
        for law, n in other.passed.items():
            self.passed[law] = self.passed.get(law, 0) + n
        for law, n in other.failed.items():
            self.failed[law] = self.failed.get(law, 0) + n
        self.examples.extend(other.examples[: max(0, 5 - len(self.examples))])
        return self

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict[str, Any]:
        laws = sorted(set(self.passed) | set(self.failed))
        return {
            "laws": {law: {"passed": self.passed.get(law, 0), "failed": self.failed.get(law, 0)} for law in laws},
            "total_passed": sum(self.passed.values()),
            "total_failed": sum(self.failed.values()),
            "failures": list(self.examples),
        }


# -- generators ------------------------------------------------------------------


def split(rng: random.Random, n: int, max_parts: int) -> list[int]:
    """A random ordered list of 1..max_parts non-negative parts summing to ``n``."""
    parts = rng.randint(1, max_parts)
    cuts = sorted(rng.randint(0, n) for _ in range(parts - 1))
    bounds = [0, *cuts, n]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def random_edges(rng: random.Random, n: int, density: float | None = None) -> list[tuple[int, int]]:
    p = rng.random() if density is None else density
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def random_graph_op(rng: random.Random, inputs: list[int]) -> GraphOp:
    return GraphOp(tuple(inputs), tuple(random_edges(rng, sum(inputs))))


def random_composable(
    rng: random.Random, max_vertices: int = 8, max_slots: int = 4
) -> tuple[GraphOp, list[GraphOp], list[GraphOp]]:
    """``f``, ``gs`` composable with ``f`` and ``hs`` composable with the ``gs`` flattened."""
    n = rng.randint(0, max_vertices)
    f = random_graph_op(rng, split(rng, n, max_slots))
    gs = [random_graph_op(rng, split(rng, m, max_slots)) for m in f.inputs]
    hs = [random_graph_op(rng, split(rng, m, max_slots)) for g in gs for m in g.inputs]
    return f, gs, hs


def random_permutation(rng: random.Random, k: int) -> SlotPermutation:
    order = list(range(k))
    rng.shuffle(order)
    return SlotPermutation(tuple(order))


def random_catalog(rng: random.Random, n_kinds: int = 3, max_range: int = 6) -> Catalog:
    return Catalog(AgentKind(f"k{i}", comm_range=rng.randint(0, max_range)) for i in range(n_kinds))


def random_fleet(rng: random.Random, algebra: RangeAlgebra, n: int, extent: int = 8) -> LocatedFleet:
    """``n`` agents on an integer grid with a random subset of the in-range links."""
    kinds = list(algebra.catalog)
    agents = [Agent(rng.choice(kinds), (rng.randint(0, extent), rng.randint(0, extent))) for _ in range(n)]
    links = [
        (u, v) for u in range(n) for v in range(u + 1, n)
        if algebra.in_range(agents[u], agents[v]) and rng.random() < 0.6
    ]
    return algebra.make_fleet(agents, links)


NESTING_CATALOG = Catalog([
    AgentKind("ship", speed=20, unit_cost=200, search_rate=1, carry_capacity={"boat": 2, "heli": 1}),
    AgentKind("heli", speed=100, unit_cost=60, search_rate=1, carry_capacity={"quad": 2}),
    AgentKind("boat", speed=10, unit_cost=15, search_rate=1, carry_capacity={"quad": 1}),
    AgentKind("quad", speed=0, unit_cost=10, search_rate=2),
])


def random_forest_arcs(rng: random.Random, n: int, density: float = 0.5) -> list[tuple[int, int]]:
    """Random (child, parent) arcs that always form a forest."""
    order = list(range(n))
    rng.shuffle(order)
    arcs = []
    for i, v in enumerate(order[1:], start=1):
        if rng.random() < density:
            arcs.append((v, order[rng.randrange(i)]))
    return arcs


def random_valid_nesting_op(rng: random.Random, inputs: list[tuple[str, ...]], catalog: Catalog) -> NestingOp:
    """Random forest over the slot words, pruned until it respects capacities."""
    word = [k for w in inputs for k in w]
    arcs = [a for a in random_forest_arcs(rng, len(word), rng.uniform(0.3, 1.0))
            if catalog[word[a[1]]].capacity_for(word[a[0]]) > 0]
    while check_capacity(word, arcs, catalog):
        arcs.pop(rng.randrange(len(arcs)))
    return NestingOp(tuple(inputs), tuple(arcs))


def _split_word(rng: random.Random, word: tuple[str, ...], max_slots: int) -> list[tuple[str, ...]]:
    out, p = [], 0
    for s in split(rng, len(word), max_slots):
        out.append(word[p:p + s])
        p += s
    return out


def random_nesting_attempt(
    rng: random.Random, catalog: Catalog = NESTING_CATALOG, max_vertices: int = 8, max_slots: int = 4
) -> tuple[NestingOp, list[NestingOp]]:
    """A valid outer operation and valid inner operations of matching colors.

    Each piece respects forest and capacity on its own; their union often does
    not, so the composite may or may not be defined.
    """
    kinds = list(catalog)
    # carriers and small units dominate so that unions often collide
    weights = [3 if catalog[k].carry_capacity else 4 for k in kinds]
    word = tuple(rng.choices(kinds, weights)[0] for _ in range(rng.randint(0, max_vertices)))
    f = random_valid_nesting_op(rng, _split_word(rng, word, max_slots), catalog)
    gs = [random_valid_nesting_op(rng, _split_word(rng, w, max_slots), catalog) for w in f.inputs]
    return f, gs


# -- suites ----------------------------------------------------------------------


def check_operad_laws(rng: random.Random, trials: int) -> LawTally:
    tally = LawTally()
    for _ in range(trials):
        f, gs, hs = random_composable(rng)
        fg = compose(f, gs)
        slices, pos = [], 0
        for g in gs:
            slices.append(hs[pos:pos + g.arity])
            pos += g.arity
        left = compose(fg, hs)
        right = compose(f, [compose(g, s) for g, s in zip(gs, slices)])
        tally.record("associativity", left == right, lambda: f"{f} {gs} {hs}")
        tally.record("left_unit", compose(identity_op(f.output), [f]) == f, lambda: f"{f}")
        tally.record("right_unit", compose(f, [identity_op(n) for n in f.inputs]) == f, lambda: f"{f}")
        sigma = random_permutation(rng, f.arity)
        lhs = compose(permute_inputs(f, sigma), sigma.apply(gs))
        rhs = permute_inputs(fg, block_permutation([g.arity for g in gs], sigma))
        tally.record("equivariance", lhs == rhs, lambda: f"{f} {gs} {sigma}")
        try:
            for op in (fg, left, right, lhs):
                validate_graph_op(op)
            valid = True
        except NetworkOperadError:
            valid = False
        tally.record("closure", valid, lambda: f"{f} {gs}")
    return tally


def check_algebra_laws(rng: random.Random, trials: int) -> LawTally:
    tally = LawTally()
    for _ in range(trials):
        algebra = RangeAlgebra(random_catalog(rng))
        f, gs, _ = random_composable(rng)
        xs = [random_fleet(rng, algebra, m) for g in gs for m in g.inputs]
        slices, pos = [], 0
        for g in gs:
            slices.append(xs[pos:pos + g.arity])
            pos += g.arity
        left = algebra.act(compose(f, gs), xs)
        right = algebra.act(f, [algebra.act(g, s) for g, s in zip(gs, slices)])
        tally.record("functoriality", left == right, lambda: f"{f} {gs} {xs}")
        ys = [random_fleet(rng, algebra, n) for n in f.inputs]
        tally.record("unit", all(algebra.act(identity_op(y.size), [y]) == y for y in ys), lambda: f"{ys}")
        sigma = random_permutation(rng, f.arity)
        out = algebra.act(f, ys)
        permuted = algebra.act(permute_inputs(f, sigma), sigma.apply(ys))
        tally.record("equivariance", permuted == out.reindexed(vertex_map(f.inputs, sigma)),
                     lambda: f"{f} {ys} {sigma}")
        try:
            for z in (left, right, out, permuted):
                algebra.validate(z)
            valid = True
        except NetworkOperadError:
            valid = False
        tally.record("range_invariant", valid, lambda: f"{f} {xs}")
    return tally


def check_nesting_laws(rng: random.Random, trials: int, catalog: Catalog = NESTING_CATALOG) -> LawTally:
    """Closure, unit and (where defined) associativity and functoriality of nesting."""
    tally = LawTally()
    nest = NestingOperad(catalog)
    for _ in range(trials):
        f, gs = random_nesting_attempt(rng, catalog)
        try:
            fg = nest.compose(f, gs)
        except NetworkOperadError:
            fg = None
        if fg is not None:
            try:
                check_forest(len(fg.output), fg.parent_edges)
                ok = not check_capacity(fg.output, fg.parent_edges, catalog)
            except NetworkOperadError:
                ok = False
            tally.record("closure", ok, lambda: f"{f} {gs}")
            tally.record("left_unit", nest.compose(nest.identity(f.output), [f]) == f, lambda: f"{f}")
            tally.record("right_unit", nest.compose(f, [nest.identity(w) for w in f.inputs]) == f, lambda: f"{f}")
            hs = [random_valid_nesting_op(rng, _split_word(rng, w, 4), catalog) for g in gs for w in g.inputs]
            slices, pos = [], 0
            for g in gs:
                slices.append(hs[pos:pos + g.arity])
                pos += g.arity
            try:
                left = nest.compose(fg, hs)
            except NetworkOperadError:
                left = None
            try:
                right = nest.compose(f, [nest.compose(g, s) for g, s in zip(gs, slices)])
            except NetworkOperadError:
                right = None
            if left is not None and right is not None:
                tally.record("associativity", left == right, lambda: f"{f} {gs} {hs}")
            # homomorphism to the plain operad
            tally.record("forget_colors", forget_colors(fg) == compose(forget_colors(f), [forget_colors(g) for g in gs]),
                         lambda: f"{f} {gs}")
            # functoriality of the action on singleton fleets
            xs = [NestedFleet(tuple(Agent(k, (i, 0)) for k in w), ()) for i, w in enumerate(x for g in gs for x in g.inputs)]
            xslices, pos = [], 0
            for g in gs:
                xslices.append(xs[pos:pos + g.arity])
                pos += g.arity
            staged = nest.act(f, [nest.act(g, s) for g, s in zip(gs, xslices)])
            tally.record("action_functoriality", nest.act(fg, xs) == staged, lambda: f"{f} {gs}")
    return tally


def check_square_laws(rng: random.Random, trials: int) -> LawTally:
    """The abstraction defect is exactly the set of out-of-range blueprint edges."""
    tally = LawTally()
    for _ in range(trials):
        algebra = RangeAlgebra(random_catalog(rng))
        n = rng.randint(0, 8)
        f = random_graph_op(rng, split(rng, n, 4))
        xs = [random_fleet(rng, algebra, m) for m in f.inputs]
        report = check_square(algebra, f, xs)
        agents = [a for x in xs for a in x.agents]
        expected = tuple(e for e in f.edges if not algebra.in_range(agents[e[0]], agents[e[1]]))
        tally.record("defect_exact", report.dropped == expected, lambda: f"{f} {xs}")
        tally.record("lax", set(report.concrete.links) <= set(report.abstract.links), lambda: f"{f} {xs}")
    return tally


SUITES: dict[str, Callable[[random.Random, int], LawTally]] = {
    "operad": check_operad_laws,
    "algebra": check_algebra_laws,
    "nesting": check_nesting_laws,
    "square": check_square_laws,
}


def run_all(seed: int = 0, trials: int = 200) -> dict[str, LawTally]:
    """Run every suite with its own generator derived from ``seed``."""
    return {name: suite(random.Random(f"{seed}:{name}"), trials) for name, suite in SUITES.items()}
