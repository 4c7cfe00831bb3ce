import json
import math
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netoperad.catalog import AgentKind, Catalog
from netoperad.design import (
    Design,
    EffortReport,
    Port,
    Scenario,
    SearchArea,
    beam_search,
    brute_force_best,
    canonical_form,
    enumerate_designs,
    evaluate_design,
    pareto_front,
    validate_design,
)
from netoperad.errors import DesignError, SearchSpaceTooLarge
from netoperad.nesting import NestedFleet, NestingOperad

from oracles import design_key, labelled_designs, naive_best_effort, random_scenario

DATA = Path(__file__).resolve().parents[1] / "data"
TINY_JSON = json.loads((DATA / "tiny_scenario.json").read_text())
TINY = Scenario.from_json(TINY_JSON)


def with_(s: Scenario, **changes) -> Scenario:
    fields = {"catalog": s.catalog, "ports": s.ports, "area": s.area, "budget": s.budget, "horizon": s.horizon}
    return Scenario(**{**fields, **changes})


def heli_two_quads(s=TINY):
    x = NestedFleet([("heli", (0, 0)), ("quad", (0, 0)), ("quad", (0, 0))], [(1, 0), (2, 0)])
    return Design(x, ((0, "harbor"),))


def empty_design():
    return Design(NestedFleet(), ())


class TestEvaluate:
    def test_heli_two_quads(self):
        r = evaluate_design(heli_two_quads(), TINY)
        # 200 / 100 = 2 to arrive; 8 hours on scene at rates 1 + 2 + 2
        assert r.total_cost == 80
        assert r.arrival_times == ((0, 2.0),)
        assert r.total_effort == 40
        assert r.feasible and r.meets_requirement

    def test_empty(self):
        r = evaluate_design(empty_design(), TINY)
        assert (r.total_cost, r.total_effort, r.feasible) == (0, 0, True)
        assert not r.meets_requirement

    def test_over_budget_still_reports_effort(self):
        r = evaluate_design(heli_two_quads(), with_(TINY, budget=70))
        assert not r.feasible
        assert r.total_effort == 40

    def test_late_arrival_contributes_nothing(self):
        r = evaluate_design(heli_two_quads(), with_(TINY, horizon=1.5))
        assert r.total_effort == 0

    def test_validate_rejects_immobile_root(self):
        d = Design(NestedFleet([("quad", (0, 0))]), ((0, "harbor"),))
        with pytest.raises(DesignError) as info:
            validate_design(d, TINY)
        assert info.value.code == "immobile_root"

    def test_validate_rejects_root_off_port(self):
        d = Design(NestedFleet([("heli", (1, 0))]), ((0, "harbor"),))
        with pytest.raises(DesignError) as info:
            validate_design(d, TINY)
        assert info.value.code == "root_not_at_port"

    def test_root_ports_must_cover_roots(self):
        with pytest.raises(DesignError) as info:
            Design(NestedFleet([("heli", (0, 0))]), ())
        assert info.value.code == "bad_root_ports"

    def test_json(self):
        r = evaluate_design(heli_two_quads(), TINY)
        assert EffortReport.from_json(r.to_json()) == r
        d = heli_two_quads()
        assert Design.from_json(d.to_json()) == d
        assert Scenario.from_json(TINY.to_json()) == TINY

    def test_unreachable_root_serializes_as_null(self):
        s = with_(TINY, catalog=Catalog([AgentKind("buoy", search_rate=1)]))
        r = evaluate_design(Design(NestedFleet([("buoy", (0, 0))]), ((0, "harbor"),)), s)
        assert r.to_json()["arrival_times"] == [[0, None]]
        assert r.total_effort == 0


def one_kind_scenario():
    cat = Catalog([AgentKind("heli", speed=1, unit_cost=1, search_rate=1, carry_capacity={"quad": 1}),
                   AgentKind("quad", unit_cost=1, search_rate=1)])
    return Scenario(cat, (Port("base", (0, 0)),), SearchArea((10, 0)), budget=10, horizon=20)


class TestEnumerate:
    def test_bounds_zero(self):
        assert enumerate_designs(TINY, 0) == [empty_design()]

    def test_heli_with_one_quad_slot(self):
        keys = {canonical_form(d, one_kind_scenario()) for d in enumerate_designs(one_kind_scenario(), 2)}
        assert keys == {
            (),
            ((0, ("heli", ())),),
            ((0, ("heli", ())), (0, ("heli", ()))),
            ((0, ("heli", (("quad", ()),))),),
        }

    def test_tiny_bounds_three(self):
        assert len(enumerate_designs(TINY, 3)) == 7

    def test_two_identical_ports_are_distinct(self):
        s = with_(TINY, ports=(Port("a", (0, 0)), Port("b", (0, 0))))
        singles = [d for d in enumerate_designs(s, 1) if d.size == 1]
        assert sorted(d.root_ports[0][1] for d in singles) == ["a", "b"]

    def test_every_design_is_valid(self):
        operad = NestingOperad(TINY.catalog)
        for d in enumerate_designs(TINY, 4):
            validate_design(d, TINY)
            operad.validate_fleet(d.fleet)

    def test_cap(self):
        with pytest.raises(SearchSpaceTooLarge):
            enumerate_designs(TINY, 6, cap=5)

    def test_negative_bounds(self):
        with pytest.raises(DesignError):
            enumerate_designs(TINY, -1)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32))
    def test_matches_naive_enumeration(self, seed):
        data = random_scenario(random.Random(seed), max_kinds=2)
        s = Scenario.from_json(data)
        expected = {design_key(*d) for d in labelled_designs(data, 3)}
        got = set()
        for d in enumerate_designs(s, 3):
            parent = d.fleet.parent_of()
            got.add(design_key(d.fleet.kinds, [parent.get(i, -1) for i in range(d.size)], dict(d.root_ports)))
        assert got == expected
        assert len(enumerate_designs(s, 3)) == len(expected)


class TestBruteForce:
    def test_tiny(self):
        d, r = brute_force_best(TINY, 3)
        assert canonical_form(d, TINY) == ((0, ("heli", (("quad", ()), ("quad", ())))),)
        assert r.total_effort == 40 and r.total_cost == 80

    def test_zero_budget(self):
        d, r = brute_force_best(with_(TINY, budget=0), 3)
        assert d.size == 0 and r.total_effort == 0

    def test_only_heli_affordable(self):
        d, r = brute_force_best(with_(TINY, budget=60), 3)
        assert d.fleet.kinds == ("heli",)
        assert r.total_effort == 8

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32))
    def test_matches_naive_optimum(self, seed):
        data = random_scenario(random.Random(seed))
        _, r = brute_force_best(Scenario.from_json(data), 3)
        assert r.total_effort == pytest.approx(naive_best_effort(data, 3), abs=1e-9)


class TestBeam:
    @pytest.mark.parametrize("width", [1, 3, 100])
    def test_tiny(self, width):
        d, r = beam_search(TINY, width=width, max_agents=3)
        _, best = brute_force_best(TINY, 3)
        assert r.feasible and r.total_effort <= best.total_effort
        validate_design(d, TINY)
        if width == 100:
            assert r.total_effort == best.total_effort == 40

    def test_empty_catalog(self):
        d, r = beam_search(with_(TINY, catalog=Catalog()), width=4, max_agents=3)
        assert d.size == 0 and r.total_effort == 0

    def test_seeded_runs_repeat(self):
        s = Scenario.from_json(json.loads((DATA / "sar_scenario.json").read_text()))
        assert beam_search(s, 2, 5, seed=7) == beam_search(s, 2, 5, seed=7)

    def test_bad_width(self):
        with pytest.raises(DesignError):
            beam_search(TINY, width=0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 10))
    def test_wide_beam_equals_oracle(self, seed, beam_seed):
        s = Scenario.from_json(random_scenario(random.Random(seed)))
        _, oracle = brute_force_best(s, 4)
        _, r = beam_search(s, width=10**6, max_agents=4, seed=beam_seed)
        assert r.total_effort == oracle.total_effort


class TestPareto:
    @staticmethod
    def item(cost, effort):
        return (empty_design(), EffortReport(cost, (), effort, True, True))

    def test_single(self):
        xs = [self.item(5, 5)]
        assert pareto_front(xs) == xs

    def test_dominated_dropped(self):
        a, b = self.item(10, 9), self.item(20, 5)
        assert pareto_front([a, b]) == [a]

    def test_incomparable_kept(self):
        a, b = self.item(10, 5), self.item(20, 9)
        assert pareto_front([a, b]) == [a, b]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0, 20))
def test_effort_monotone_in_horizon(seed, extra):
    s = Scenario.from_json(random_scenario(random.Random(seed)))
    longer = with_(s, horizon=s.horizon + extra)
    for d in enumerate_designs(s, 3):
        assert evaluate_design(d, longer).total_effort >= evaluate_design(d, s).total_effort


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_removing_a_leaf_never_raises_cost(seed):
    s = Scenario.from_json(random_scenario(random.Random(seed)))
    for d in enumerate_designs(s, 3):
        if d.size == 0:
            continue
        parents = d.fleet.parent_of()
        leaf = max(i for i in range(d.size) if not d.fleet.children(i))
        keep = [i for i in range(d.size) if i != leaf]
        renumber = {old: new for new, old in enumerate(keep)}
        smaller = Design(
            NestedFleet([d.fleet.agents[i] for i in keep],
                        [(renumber[c], renumber[p]) for c, p in parents.items() if c != leaf]),
            tuple((renumber[r], port) for r, port in d.root_ports if r != leaf),
        )
        assert evaluate_design(smaller, s).total_cost <= evaluate_design(d, s).total_cost
        assert not math.isnan(evaluate_design(smaller, s).total_effort)
