import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netoperad.catalog import AgentKind, Catalog
from netoperad.errors import CatalogError, CompositionError, FleetError
from netoperad.graph_op import compose, identity_op, make_graph_op, permute_inputs, vertex_map
from netoperad.laws import random_composable, random_fleet, random_permutation
from netoperad.range_algebra import Agent, LocatedFleet, RangeAlgebra

from oracles import euclid

CATALOG = Catalog([AgentKind("radio", comm_range=5), AgentKind("long", comm_range=20), AgentKind("mute", comm_range=0)])
ALG = RangeAlgebra(CATALOG)
CROSS = make_graph_op((2, 2), [(0, 2), (1, 3)])

# every pair inside a fleet and the {0,2} pair sit exactly at distance 5
CROSS_POSITIONS = [(0, 0), (-3, 4), (3, 4), (6, 8)]


def radio_pairs():
    a = ALG.make_fleet([("radio", CROSS_POSITIONS[0]), ("radio", CROSS_POSITIONS[1])], [(0, 1)])
    b = ALG.make_fleet([("radio", CROSS_POSITIONS[2]), ("radio", CROSS_POSITIONS[3])], [(0, 1)])
    return a, b


class TestInRange:
    def test_boundary_inclusive(self):
        assert ALG.in_range(Agent("radio", (0, 0)), Agent("radio", (3, 4)))

    def test_too_far(self):
        assert not ALG.in_range(Agent("radio", (0, 0)), Agent("radio", (10, 0)))

    @pytest.mark.parametrize("kinds", [("radio", "radio"), ("mute", "long"), ("mute", "mute")])
    def test_coincident(self, kinds):
        assert ALG.in_range(Agent(kinds[0], (2, 7)), Agent(kinds[1], (2, 7)))

    def test_smaller_radio_decides(self):
        # 10 apart: the long-range radio reaches, the short one does not
        assert not ALG.in_range(Agent("long", (0, 0)), Agent("radio", (10, 0)))

    def test_unknown_kind(self):
        with pytest.raises(CatalogError):
            ALG.in_range(Agent("ghost", (0, 0)), Agent("radio", (0, 0)))


class TestMakeFleet:
    def test_linked_pair(self):
        x = ALG.make_fleet([("radio", (0, 0)), ("radio", (3, 4))], [(1, 0)])
        assert x.links == ((0, 1),)
        assert x.size == 2

    def test_empty(self):
        assert ALG.make_fleet().size == 0

    def test_out_of_range_link(self):
        with pytest.raises(FleetError) as info:
            ALG.make_fleet([("radio", (0, 0)), ("radio", (10, 0))], [(0, 1)])
        assert info.value.code == "link_out_of_range"
        assert info.value.context["edge"] == [0, 1]
        assert info.value.context["squared_distance"] == 100

    def test_unknown_kind(self):
        with pytest.raises(FleetError) as info:
            ALG.make_fleet([("ghost", (0, 0))])
        assert info.value.code == "unknown_kind"

    def test_duplicate_link(self):
        with pytest.raises(FleetError) as info:
            ALG.make_fleet([("radio", (0, 0)), ("radio", (0, 1))], [(0, 1), (1, 0)])
        assert info.value.code == "duplicate_edge"


class TestAct:
    def test_cross_drops_the_far_edge(self):
        a, b = radio_pairs()
        out = ALG.act(CROSS, [a, b])
        assert out.links == ((0, 1), (0, 2), (2, 3))
        assert [ag.pos for ag in out.agents] == CROSS_POSITIONS

    def test_cross_coordinates_by_hand(self):
        p = CROSS_POSITIONS
        assert euclid(p[0], p[1]) == 5 and euclid(p[2], p[3]) == 5 and euclid(p[0], p[2]) == 5
        assert euclid(p[1], p[3]) > 5

    def test_documented_coordinates_cannot_hold_input_links(self):
        # (0,0)-(0,6) and (3,4)-(20,0) are both farther apart than range 5
        with pytest.raises(FleetError):
            ALG.make_fleet([("radio", (0, 0)), ("radio", (0, 6))], [(0, 1)])
        a = ALG.make_fleet([("radio", (0, 0)), ("radio", (0, 6))])
        b = ALG.make_fleet([("radio", (3, 4)), ("radio", (20, 0))])
        assert ALG.act(CROSS, [a, b]).links == ((0, 2),)

    def test_unit(self):
        a, _ = radio_pairs()
        assert ALG.act(identity_op(2), [a]) == a

    def test_edgeless_blueprint_concatenates(self):
        a, b = radio_pairs()
        out = ALG.act(make_graph_op((2, 2), []), [a, b])
        assert out.links == ((0, 1), (2, 3))

    def test_type_mismatch_per_slot(self):
        a, _ = radio_pairs()
        with pytest.raises(CompositionError) as info:
            ALG.act(CROSS, [a, ALG.make_fleet([("radio", (0, 0))])])
        assert info.value.context["slot"] == 1

    def test_arity_mismatch(self):
        a, _ = radio_pairs()
        with pytest.raises(CompositionError) as info:
            ALG.act(CROSS, [a])
        assert info.value.code == "arity_mismatch"


def _random_case(seed):
    rng = random.Random(seed)
    algebra = RangeAlgebra(Catalog([AgentKind(f"k{i}", comm_range=rng.randint(0, 6)) for i in range(3)]))
    f, gs, _ = random_composable(rng)
    xs = [random_fleet(rng, algebra, m) for g in gs for m in g.inputs]
    return rng, algebra, f, gs, xs


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_functoriality(seed):
    _, algebra, f, gs, xs = _random_case(seed)
    slices, pos = [], 0
    for g in gs:
        slices.append(xs[pos:pos + g.arity])
        pos += g.arity
    left = algebra.act(compose(f, gs), xs)
    right = algebra.act(f, [algebra.act(g, s) for g, s in zip(gs, slices)])
    assert left == right
    algebra.validate(left)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_equivariance(seed):
    rng, algebra, f, _, _ = _random_case(seed)
    ys = [random_fleet(rng, algebra, n) for n in f.inputs]
    sigma = random_permutation(rng, f.arity)
    out = algebra.act(f, ys)
    assert algebra.act(permute_inputs(f, sigma), sigma.apply(ys)) == out.reindexed(vertex_map(f.inputs, sigma))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10))
def test_larger_range_never_removes_links(seed, boost):
    rng, algebra, f, _, _ = _random_case(seed)
    ys = [random_fleet(rng, algebra, n) for n in f.inputs]
    boosted_kind = rng.choice(list(algebra.catalog))
    bigger = RangeAlgebra(Catalog(
        AgentKind(k.name, comm_range=k.comm_range + (boost if k.name == boosted_kind else 0))
        for k in algebra.catalog.values()
    ))
    assert set(algebra.act(f, ys).links) <= set(bigger.act(f, ys).links)


def test_json_round_trip():
    a, _ = radio_pairs()
    data = a.to_json()
    assert data == {"agents": [{"kind": "radio", "pos": [0, 0]}, {"kind": "radio", "pos": [-3, 4]}],
                    "links": [[0, 1]]}
    assert LocatedFleet.from_json(data) == a
    assert Catalog.from_json(CATALOG.to_json()) == CATALOG


def test_catalog_rejects_duplicates_and_bad_numbers():
    with pytest.raises(CatalogError):
        Catalog([AgentKind("a"), AgentKind("a")])
    with pytest.raises(CatalogError):
        AgentKind("a", comm_range=-1)
    with pytest.raises(CatalogError):
        AgentKind("a", speed=float("inf"))
    with pytest.raises(CatalogError):
        AgentKind("a", carry_capacity={"b": -1})
