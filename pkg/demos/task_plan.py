# # Scheduling a small operation
#
# T1 needs the helicopter for 2 hours. T2 needs the helicopter and the plane
# together for 3 hours and cannot start before T1 is done.

from netoperad.tasks import PrimitiveTask, solve, translate_tasks, validate_schedule

tasks = [
    PrimitiveTask("T1", {"heli": 1}, 2),
    PrimitiveTask("T2", {"heli": 1, "plane": 1}, 3, ("T1",)),
]
cp = translate_tasks(tasks, ["heli", "plane"])
print(len(cp.start_vars), "start variables,", len(cp.assign_vars), "assignment variables")

# %%

plan = solve(cp)
print(plan.gantt(cp.agent_kinds))
print("violations:", validate_schedule(plan, cp))

# %%
# Two independent jobs fighting over one helicopter run back to back.

jobs = [PrimitiveTask("A", {"heli": 1}, 2), PrimitiveTask("B", {"heli": 1}, 2)]
print(solve(translate_tasks(jobs, ["heli"])).gantt(["heli"]))
