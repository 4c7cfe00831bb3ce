# # Who carries whom
#
# A helicopter can carry two quadcopters. Nesting operations say which unit
# rides inside which, and composing them has to respect that limit.

from netoperad.catalog import AgentKind, Catalog
from netoperad.errors import NestingError
from netoperad.nesting import NestingOperad

catalog = Catalog([
    AgentKind("heli", speed=100, carry_capacity={"quad": 2}),
    AgentKind("quad"),
])
nest = NestingOperad(catalog)

# %%
# Load two quads onto a helicopter parked at (5, 5). The quads jump to the
# helicopter's position.

load_two = nest.make_op([["heli"], ["quad"], ["quad"]], [(1, 0), (2, 0)])
heli = nest.make_fleet([("heli", (5, 5))])
q1 = nest.make_fleet([("quad", (0, 0))])
q2 = nest.make_fleet([("quad", (9, 1))])

loaded = nest.act(load_two, [heli, q1, q2])
for agent in loaded.agents:
    print(agent)

# %%
# A third quad does not fit.

one_more = nest.make_op([["heli", "quad", "quad"], ["quad"]], [(3, 0)])
try:
    nest.compose(one_more, [load_two, nest.identity(["quad"])])
except NestingError as err:
    print(err.code, err.context)
