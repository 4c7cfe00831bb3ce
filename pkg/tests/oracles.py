"""Independent brute-force oracles used to freeze and cross-check expected values.

None of these import the solver or search code they check.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np


def exhaustive_makespan(tasks, agent_kinds, horizon):
    """Optimal makespan by enumerating every agent choice and every start vector.

    ``tasks`` is a list of ``(name, demands, duration, prereqs)``.  Returns
    ``None`` when nothing fits in the horizon.  Feasibility only depends on
    which task pairs share an agent, so start vectors are checked once per
    distinct sharing pattern, vectorized over the full start grid.
    """
    if not tasks:
        return 0
    names = [t[0] for t in tasks]
    index = {n: i for i, n in enumerate(names)}
    durations = np.array([t[2] for t in tasks])
    if np.any(durations > horizon):
        return None

    per_task_choices = []
    for _, demands, _, _ in tasks:
        options = []
        for kind, count in sorted(demands.items()):
            eligible = [i for i, k in enumerate(agent_kinds) if k == kind]
            options.append([set(c) for c in itertools.combinations(eligible, count)])
        per_task_choices.append([set().union(*combo) for combo in itertools.product(*options)])
    if any(not choices for choices in per_task_choices):
        return None

    patterns = set()
    for combo in itertools.product(*per_task_choices):
        patterns.add(frozenset(
            (a, b) for a, b in itertools.combinations(range(len(tasks)), 2) if combo[a] & combo[b]
        ))

    axes = [np.arange(horizon - d + 1) for d in durations]
    grids = np.meshgrid(*axes, indexing="ij")
    starts = [g.ravel() for g in grids]
    ends = [s + d for s, d in zip(starts, durations)]
    base = np.ones_like(starts[0], dtype=bool)
    for i, (_, _, _, prereqs) in enumerate(tasks):
        for p in prereqs:
            base &= starts[i] >= ends[index[p]]
    makespan = np.max(np.stack(ends), axis=0)

    best = None
    for pattern in patterns:
        ok = base.copy()
        for a, b in pattern:
            ok &= (ends[a] <= starts[b]) | (ends[b] <= starts[a])
        if ok.any():
            m = int(makespan[ok].min())
            best = m if best is None else min(best, m)
    return best


def random_task_instance(rng: random.Random, kinds=("heli", "plane", "boat")):
    """Up to 5 tasks over up to 4 agents, durations 1-3, acyclic prerequisites."""
    n_agents = rng.randint(1, 4)
    agent_kinds = [rng.choice(kinds[:2]) for _ in range(n_agents)]
    n_tasks = rng.randint(1, 5)
    tasks = []
    for i in range(n_tasks):
        present = sorted(set(agent_kinds))
        demands = {}
        for kind in rng.sample(present, rng.randint(1, len(present))):
            demands[kind] = rng.randint(1, max(1, min(2, agent_kinds.count(kind))))
        prereqs = sorted(f"T{j}" for j in range(i) if rng.random() < 0.3)
        tasks.append((f"T{i}", demands, rng.randint(1, 3), prereqs))
    horizon = sum(t[2] for t in tasks)
    return tasks, agent_kinds, horizon


def euclid(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def labelled_designs(scenario: dict, bounds: int):
    """Every labelled design up to ``bounds`` agents, straight from the rules.

    ``scenario`` is the plain JSON dictionary.  Yields ``(kinds, parents,
    ports)`` where ``parents[i]`` is ``-1`` for roots and ``ports`` maps each
    root to a port name.
    """
    catalog = {k["name"]: k for k in scenario["catalog"]}
    names = sorted(catalog)
    centroid = scenario["area"]["centroid"]
    for n in range(bounds + 1):
        for kinds in itertools.product(names, repeat=n):
            for parents in itertools.product(range(-1, n), repeat=n):
                if any(p == i for i, p in enumerate(parents)):
                    continue
                if not _acyclic(parents):
                    continue
                if not _within_capacity(kinds, parents, catalog):
                    continue
                roots = [i for i in range(n) if parents[i] == -1]
                for ports in itertools.product(scenario["ports"], repeat=len(roots)):
                    if all(
                        catalog[kinds[r]].get("speed", 0) > 0 or euclid(p["pos"], centroid) == 0
                        for r, p in zip(roots, ports)
                    ):
                        yield kinds, parents, {r: p["name"] for r, p in zip(roots, ports)}


def _acyclic(parents):
    for start in range(len(parents)):
        seen, i = set(), start
        while i != -1:
            if i in seen:
                return False
            seen.add(i)
            i = parents[i]
    return True


def _within_capacity(kinds, parents, catalog):
    for i, kind in enumerate(kinds):
        cap = catalog[kind].get("carry_capacity", {})
        carried = [kinds[c] for c, p in enumerate(parents) if p == i]
        if any(carried.count(k) > cap.get(k, 0) for k in set(carried)):
            return False
    return True


def design_key(kinds, parents, ports):
    """Labelling-independent string for a design."""

    def tree(i):
        kids = sorted(tree(c) for c, p in enumerate(parents) if p == i)
        return kinds[i] + "(" + ",".join(kids) + ")"

    return tuple(sorted(f"{ports[r]}:{tree(r)}" for r in ports))


def design_cost_effort(scenario: dict, kinds, parents, ports):
    catalog = {k["name"]: k for k in scenario["catalog"]}
    where = {p["name"]: p["pos"] for p in scenario["ports"]}
    horizon = scenario["horizon"]

    def root(i):
        while parents[i] != -1:
            i = parents[i]
        return i

    cost = effort = 0.0
    for i, kind in enumerate(kinds):
        spec = catalog[kind]
        cost += spec.get("unit_cost", 0)
        r = root(i)
        dist = euclid(where[ports[r]], scenario["area"]["centroid"])
        arrival = 0.0 if dist == 0 else dist / catalog[kinds[r]]["speed"]
        effort += spec.get("search_rate", 0) * max(0.0, horizon - arrival)
    return cost, effort


def naive_best_effort(scenario: dict, bounds: int) -> float:
    best = 0.0
    for kinds, parents, ports in labelled_designs(scenario, bounds):
        cost, effort = design_cost_effort(scenario, kinds, parents, ports)
        if cost <= scenario["budget"] + 1e-9:
            best = max(best, effort)
    return best


def random_scenario(rng: random.Random, max_kinds=3, max_ports=2) -> dict:
    """A small scenario dictionary: a carrier, small searchers, one or two ports."""
    names = ["heli", "quad", "boat"][: rng.randint(1, max_kinds)]
    catalog = []
    for name in names:
        cap = {other: rng.randint(0, 2) for other in names if other != name and rng.random() < 0.6}
        catalog.append({
            "name": name,
            "comm_range": 10,
            "speed": rng.choice([0, 40, 80, 120]),
            "unit_cost": rng.randint(5, 50),
            "search_rate": rng.randint(1, 4),
            "carry_capacity": cap,
        })
    ports = [{"name": f"p{i}", "pos": [rng.randint(-150, 150), rng.randint(-150, 150)]}
             for i in range(rng.randint(1, max_ports))]
    if rng.random() < 0.2:
        ports[0]["pos"] = [0, 0]
    return {
        "catalog": catalog,
        "ports": ports,
        "area": {"centroid": [0, 0], "required_effort": rng.randint(0, 50)},
        "budget": rng.randint(0, 200),
        "horizon": rng.randint(2, 15),
    }
