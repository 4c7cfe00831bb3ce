# # Wiring fleets with a range limit
#
# Two radio pairs, each already linked. The blueprint asks for two cross links,
# but radios only talk when they are within range of each other.

from netoperad.abstraction import check_square
from netoperad.catalog import AgentKind, Catalog
from netoperad.graph_op import compose, make_graph_op
from netoperad.range_algebra import RangeAlgebra

# %%

radios = RangeAlgebra(Catalog([AgentKind("radio", comm_range=5)]))

left = radios.make_fleet([("radio", (0, 0)), ("radio", (-3, 4))], [(0, 1)])
right = radios.make_fleet([("radio", (3, 4)), ("radio", (6, 8))], [(0, 1)])

# the blueprint: four vertices in two slots, edges 0-2 and 1-3
f = make_graph_op((2, 2), [(0, 2), (1, 3)])

# %%
# (0,0) and (3,4) sit exactly 5 apart, so 0-2 is kept. (-3,4) and (6,8) are
# almost 10 apart, so 1-3 is silently dropped.

out = radios.act(f, [left, right])
print("links:", out.links)

# %%
# Forgetting positions first and wiring afterwards would keep every edge.
# The difference is exactly the dropped edge.

report = check_square(radios, f, [left, right])
print("abstract links:", report.abstract.links)
print("dropped:", report.dropped)

# %%
# Operations compose by grafting. Putting a single-edge operation in each
# slot of f gives a 4-cycle blueprint over four singleton slots.

edge = make_graph_op((1, 1), [(0, 1)])
print(compose(f, [edge, edge]))
