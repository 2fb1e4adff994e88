"""``coase`` command line: run scenarios, query Pareto optimality, verify claims, dump sweep stats.

Exit codes: 0 success (or the verified claim holds), 1 validation error,
2 budget or step limit exceeded, 3 the verified claim does not hold.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager

from .core import BudgetExceeded, EconomyError
from .dynamics import (
    DYNAMICS,
    KIND_EXCHANGE,
    KIND_TRADE,
    POLICY_NAMES,
    StepLimitExceeded,
    Trace,
    make_policy,
    run,
)
from .pareto import pareto_frontier, pareto_witness
from .scenario import allocation_to_doc, load_scenario
from .verifier import CHECKS, COASE, CONVERGENCE, INVARIANCE, SUBOPTIMAL, STAT_FIELDS, SweepConfig, sweep_rows

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_CLAIM_FAILED = 3

CLAIM_ALIASES = {
    "convergence": CONVERGENCE,
    "coase": COASE,
    "invariance": INVARIANCE,
    "suboptimal": SUBOPTIMAL,
}


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def _emit(stream, record: dict) -> None:
    stream.write(json.dumps(record) + "\n")


def step_records(trace: Trace) -> list[dict]:
    e = trace.economy
    out = []
    for step in trace.steps:
        rec = {"record": "step", "t": step.t, "kind": step.kind}
        if step.kind == KIND_TRADE:
            p = step.detail
            rec["trade"] = {
                "giver_i": e.agents[p.i],
                "giver_j": e.agents[p.j],
                "r1": e.resources.names_of(p.r1),
                "r2": e.resources.names_of(p.r2),
            }
        elif step.kind == KIND_EXCHANGE:
            rec["target"] = allocation_to_doc(e, step.detail)
        rec["allocation_after"] = allocation_to_doc(e, step.allocation_after)
        out.append(rec)
    return out


def summary_record(trace: Trace) -> dict:
    e = trace.economy
    verdict = pareto_witness(e, trace.final)
    return {
        "record": "summary",
        "dynamics": trace.dynamics,
        "policy": trace.policy.describe(),
        "moves": trace.moves,
        "steps": len(trace.steps),
        "stagnated": trace.stagnated,
        "initial": allocation_to_doc(e, trace.initial),
        "final": allocation_to_doc(e, trace.final),
        "potential_series": list(trace.potential_series),
        "final_pareto_optimal": verdict.optimal,
        "pareto_witness": None if verdict.optimal else allocation_to_doc(e, verdict.witness),
    }


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    settings = scenario.settings
    dynamics = args.dynamics or settings.dynamics
    policy = make_policy(args.policy or settings.policy, args.seed if args.seed is not None else settings.seed)
    max_steps = args.max_steps or settings.max_steps
    try:
        trace = run(dynamics, scenario.economy, scenario.initial, policy, max_steps)
    except StepLimitExceeded as exc:
        with _output(args.out) as out:
            for rec in step_records(exc.trace):
                _emit(out, rec)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    with _output(args.out) as out:
        for rec in step_records(trace):
            _emit(out, rec)
        _emit(out, summary_record(trace))
    return EXIT_OK


def cmd_pareto(args) -> int:
    scenario = load_scenario(args.scenario)
    e = scenario.economy
    verdict = pareto_witness(e, scenario.initial)
    rec = {
        "record": "pareto",
        "allocation": allocation_to_doc(e, scenario.initial),
        "optimal": verdict.optimal,
        "witness": None if verdict.optimal else allocation_to_doc(e, verdict.witness),
        "improvers": [e.agents[q] for q in verdict.improvers],
        "unchanged": [e.agents[q] for q in verdict.unchanged],
    }
    if args.frontier:
        rec["frontier"] = [allocation_to_doc(e, a) for a in pareto_frontier(e)]
    with _output(args.out) as out:
        _emit(out, rec)
    return EXIT_OK


def _sweep_config(args, dynamics=None) -> SweepConfig:
    if args.exhaustive == (args.sample is not None):
        raise EconomyError("choose exactly one of --exhaustive or --sample N")
    seed = args.seed if args.seed is not None else 0
    return SweepConfig(
        n=args.n,
        m=args.m,
        mode="exhaustive" if args.exhaustive else "sampled",
        sample_count=args.sample or 0,
        seed=seed,
        policy=make_policy(args.policy, seed),
        dynamics=dynamics or args.dynamics,
        witness_cap=args.witness_cap,
        workers=args.workers,
    )


def cmd_verify(args) -> int:
    claim = CLAIM_ALIASES[args.claim]
    cfg = _sweep_config(args)
    report = CHECKS[claim](cfg)
    with _output(args.out) as out:
        out.write(report.to_json() + "\n")
    status = "holds" if report.holds else "FAILS"
    print(
        f"{claim}: {report.runs} runs, {report.violations} violations, "
        f"{len(report.witnesses)} witnesses, {report.defects} defects -> {status} "
        f"({report.elapsed:.2f}s)",
        file=sys.stderr,
    )
    return EXIT_OK if report.holds else EXIT_CLAIM_FAILED


def cmd_stats(args) -> int:
    cfg = _sweep_config(args)
    rows = sweep_rows(cfg, args.dynamics)
    with _output(args.out) as out:
        if args.format == "csv":
            writer = csv.DictWriter(out, fieldnames=STAT_FIELDS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        else:
            for row in rows:
                _emit(out, row)
    return EXIT_OK


def _add_run_flags(p, dynamics_default=None):
    p.add_argument("--dynamics", choices=DYNAMICS, default=dynamics_default)
    p.add_argument("--policy", choices=POLICY_NAMES, default=None if dynamics_default is None else "first-in-order")
    p.add_argument("--seed", type=int, default=None)


def _add_sweep_flags(p):
    _add_run_flags(p, dynamics_default="bilateral")
    p.add_argument("--n", type=int, required=True, help="number of agents")
    p.add_argument("--m", type=int, required=True, help="number of resources")
    p.add_argument("--exhaustive", action="store_true", help="sweep every profile and initial allocation")
    p.add_argument("--sample", type=int, default=None, metavar="N", help="sweep N seeded random cells")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--witness-cap", type=int, default=10)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario's dynamics and write its trace")
    p.add_argument("scenario")
    _add_run_flags(p)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("pareto", help="Pareto verdict for a scenario's initial allocation")
    p.add_argument("scenario")
    p.add_argument("--frontier", action="store_true", help="also list every Pareto-optimal allocation")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("verify", help="check a claim over a sweep of economies")
    p.add_argument("claim", choices=sorted(CLAIM_ALIASES))
    _add_sweep_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="one row per run of a sweep")
    _add_sweep_flags(p)
    p.add_argument("--format", choices=("csv", "ndjson"), default="csv")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, StepLimitExceeded) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except EconomyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
