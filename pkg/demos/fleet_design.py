# # Buying a search fleet
#
# One harbor, 200 units from the search area. Helicopters fly at 100 and can
# ferry two quadcopters, which cannot get there on their own. The budget is
# 100 and the search runs until t = 10.

import json
from pathlib import Path

from netoperad.design import Scenario, beam_search, brute_force_best, enumerate_designs, evaluate_design, pareto_front
from netoperad.dot import export_dot

data = Path(__file__).resolve().parents[1] / "data"
tiny = Scenario.from_json(json.loads((data / "tiny_scenario.json").read_text()))

# %%
# Every design up to three units, with cost and delivered effort.

designs = enumerate_designs(tiny, 3)
rows = [(d, evaluate_design(d, tiny)) for d in designs]
for d, r in rows:
    print(f"{'+'.join(d.fleet.kinds) or '(nothing)':<16} cost {r.total_cost:>5}  effort {r.total_effort:>5}  affordable {r.feasible}")

# %%
# The exhaustive answer and the beam answer agree here.

best, report = brute_force_best(tiny, 3)
print(best.fleet.kinds, report.total_effort)
print(beam_search(tiny, width=4, max_agents=3)[1].total_effort)

# %%
# Cost against effort among the affordable designs.

for d, r in pareto_front([(d, r) for d, r in rows if r.feasible]):
    print(r.total_cost, r.total_effort, d.fleet.kinds)

print(export_dot(best))

# %%
# A bigger scenario with two ports and four kinds. Only the beam is practical
# for larger fleets.

sar = Scenario.from_json(json.loads((data / "sar_scenario.json").read_text()))
design, r = beam_search(sar, width=8, max_agents=6, seed=1)
print(design.fleet.kinds, design.root_ports, r.total_cost, r.total_effort)
