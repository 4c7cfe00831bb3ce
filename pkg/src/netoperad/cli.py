"""Command-line front end.

Exit status is 0 on success, 1 on domain errors (type mismatch, capacity
violation, infeasible plan, failed laws) and 2 on usage or parse errors.
Errors are written to standard error as ``{"error", "detail", "context"}``
JSON.  All randomness comes from ``--seed`` via :class:`random.Random`.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import design as ds
from .catalog import Catalog
from .dot import export_dot
from .errors import NetworkOperadError
from .graph_op import GraphOp, compose
from .laws import run_all
from .nesting import NestedFleet, NestingOp
from .range_algebra import LocatedFleet, RangeAlgebra
from .tasks import solve, tasks_from_json, translate_tasks


class UsageError(Exception):
    """Bad invocation or unreadable input; maps to exit status 2."""

    def __init__(self, code: str, detail: str, **context: Any) -> None:
        super().__init__(detail)
        self.code = code
        self.detail = detail
        self.context = context


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def _load(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError("unreadable_input", str(exc), path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError("parse_error", f"{path}: {exc}", path=path) from None


def _parse(path: str, parser) -> Any:
    data = _load(path)
    try:
        return parser(data)
    except NetworkOperadError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError("parse_error", f"{path}: malformed document ({exc!r})", path=path) from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _catalog(data: Any) -> Catalog:
    return Catalog.from_json(data["catalog"] if isinstance(data, dict) else data)


def cmd_compose(args: argparse.Namespace) -> None:
    f = _parse(args.op, GraphOp.from_json)
    gs = [_parse(p, GraphOp.from_json) for p in args.args]
    _write(args.output, dumps(compose(f, gs).to_json()))


def cmd_act(args: argparse.Namespace) -> None:
    algebra = RangeAlgebra(_parse(args.catalog, _catalog))
    f = _parse(args.op, GraphOp.from_json)
    xs = []
    for p in args.fleets:
        fleet = _parse(p, LocatedFleet.from_json)
        algebra.validate(fleet)
        xs.append(fleet)
    _write(args.output, dumps(algebra.act(f, xs).to_json()))


def cmd_design(args: argparse.Namespace) -> None:
    scenario = _parse(args.scenario, ds.Scenario.from_json)
    if args.method == "exhaustive":
        best = ds.brute_force_best(scenario, args.bounds, cap=args.cap)
        explored = [(d, ds.evaluate_design(d, scenario)) for d in ds.enumerate_designs(scenario, args.bounds, args.cap)]
        explored = [item for item in explored if item[1].feasible]
    else:
        explored = []
        best = ds.beam_search(scenario, args.beam_width, args.bounds, args.seed, explored=explored)
    design, report = best
    result = {
        "method": args.method,
        "seed": args.seed,
        "bounds": args.bounds,
        "design": design.to_json(),
        "report": report.to_json(),
    }
    _write(args.output, dumps(result))
    if args.pareto_csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["total_cost", "total_effort", "agents", "kinds"])
        for d, r in ds.pareto_front(explored):
            writer.writerow([r.total_cost, r.total_effort, d.size, "+".join(sorted(d.fleet.kinds))])
        Path(args.pareto_csv).write_text(buf.getvalue())
    if args.dot:
        Path(args.dot).write_text(export_dot(design))


def cmd_plan(args: argparse.Namespace) -> None:
    tasks, horizon = _parse(args.tasks, tasks_from_json)
    fleet_data = _load(args.fleet)
    try:
        fleet = NestedFleet.from_json(fleet_data) if "parent" in fleet_data else LocatedFleet.from_json(fleet_data)
    except (KeyError, TypeError) as exc:
        raise UsageError("parse_error", f"{args.fleet}: malformed fleet ({exc!r})") from None
    if args.horizon is not None:
        horizon = args.horizon
    cp = translate_tasks(tasks, fleet, horizon)
    schedule = solve(cp, node_limit=args.node_limit)
    _write(args.output, dumps({**schedule.to_json(), "horizon": cp.horizon}))
    if args.gantt:
        _write(args.gantt, schedule.gantt(cp.agent_kinds))


def _detect(data: Any) -> Any:
    if isinstance(data, dict) and "design" in data and isinstance(data["design"], dict):
        data = data["design"]
    if not isinstance(data, dict):
        raise UsageError("parse_error", "cannot tell what kind of document this is")
    if "root_ports" in data:
        return ds.Design.from_json(data)
    if "parent_edges" in data:
        return NestingOp.from_json(data)
    if "edges" in data and "inputs" in data:
        return GraphOp.from_json(data)
    if "parent" in data:
        return NestedFleet.from_json(data)
    if "agents" in data:
        return LocatedFleet.from_json(data)
    raise UsageError("parse_error", "cannot tell what kind of document this is")


def cmd_export_dot(args: argparse.Namespace) -> None:
    _write(args.output, export_dot(_parse(args.input, _detect)))


def cmd_check_laws(args: argparse.Namespace) -> int:
    tallies = run_all(args.seed, args.trials)
    summary = {
        "seed": args.seed,
        "trials": args.trials,
        "suites": {name: t.to_json() for name, t in tallies.items()},
        "ok": all(t.ok for t in tallies.values()),
    }
    _write(args.output, dumps(summary))
    return 0 if summary["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netoperad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", help="graft operations into the slots of an operation")
    p.add_argument("op", help="outer operation JSON")
    p.add_argument("args", nargs="*", help="one operation JSON per slot")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("act", help="apply an operation to fleets under range-limited links")
    p.add_argument("--op", required=True)
    p.add_argument("--catalog", required=True, help="catalog JSON (a list of kinds, or a scenario)")
    p.add_argument("fleets", nargs="*")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("design", help="search for the best fleet design within budget")
    p.add_argument("--scenario", required=True)
    p.add_argument("--method", choices=["beam", "exhaustive"], default="beam")
    p.add_argument("--beam-width", type=int, default=8)
    p.add_argument("--bounds", type=int, default=6, help="maximum agents per design")
    p.add_argument("--cap", type=int, default=ds.DEFAULT_SPACE_CAP, help="exhaustive search-space cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("--pareto-csv")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("plan", help="solve a task plan for a fleet")
    p.add_argument("--tasks", required=True)
    p.add_argument("--fleet", required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--node-limit", type=int, default=1_000_000)
    p.add_argument("-o", "--output")
    p.add_argument("--gantt")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("export-dot", help="render an operation, fleet or design as DOT")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("check-laws", help="run the randomized law suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check_laws)
    return parser


def _fail(code: str, detail: str, context: dict[str, Any]) -> None:
    sys.stderr.write(json.dumps({"error": code, "detail": detail, "context": context}, default=str) + "\n")


def run(args: argparse.Namespace) -> int:
    try:
        status = args.func(args)
    except NetworkOperadError as exc:
        _fail(exc.code, exc.detail, exc.context)
        return 1
    except UsageError as exc:
        _fail(exc.code, exc.detail, exc.context)
        return 2
    return status or 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
