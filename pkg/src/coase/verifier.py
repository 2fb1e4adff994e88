"""Finite-model checking of the convergence and efficiency claims.

A sweep walks a space of *cells* (one economy plus one initial allocation,
or one economy with all its initial allocations for the invariance search),
evaluates each cell independently and merges the per-cell results in cell
order.  Because cells share nothing, any contiguous partition of the index
range merges to the same report.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .core import (
    DEFAULT_ALLOCATION_BUDGET,
    Allocation,
    BudgetExceeded,
    Economy,
    EconomyError,
    count_preference_orders,
    preference_order_at,
    random_economy,
    validate_allocation,
)
from .dynamics import (
    BILATERAL,
    DYNAMICS,
    FIRST_IN_ORDER,
    IDEAL,
    KIND_STAGNATION,
    StepLimitExceeded,
    Trace,
    default_max_steps,
    derive_seed,
    find_bilateral_trades,
    find_ideal_exchanges,
    run,
)
from .pareto import ParetoVerdict, pareto_witness

CONVERGENCE = "convergence"
COASE = "coase"
INVARIANCE = "invariance-violation"
SUBOPTIMAL = "suboptimal-stagnation"
CLAIMS = (CONVERGENCE, COASE, INVARIANCE, SUBOPTIMAL)

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
CASES = "cases"


@dataclass(frozen=True)
class Budgets:
    profiles: int = 10**6
    runs: int = 10**7
    allocations: int = DEFAULT_ALLOCATION_BUDGET


@dataclass(frozen=True)
class SweepConfig:
    """What to sweep.

    ``mode`` is ``exhaustive`` (every profile times every initial
    allocation), ``sampled`` (``sample_count`` seeded random cells) or
    ``cases`` (exactly the given ``(economy, allocation)`` pairs).
    ``dynamics`` only matters for the invariance search; the other claims
    fix their dynamics.
    """

    n: int = 2
    m: int = 1
    mode: str = EXHAUSTIVE
    sample_count: int = 0
    seed: int = 0
    policy: object = FIRST_IN_ORDER
    dynamics: str = BILATERAL
    budgets: Budgets = field(default_factory=Budgets)
    witness_cap: int = 10
    workers: int = 1
    cases: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        if self.mode not in (EXHAUSTIVE, SAMPLED, CASES):
            raise EconomyError(f"unknown sweep mode {self.mode!r}")
        if self.dynamics not in DYNAMICS:
            raise EconomyError(f"unknown dynamics {self.dynamics!r}")
        if self.witness_cap < 0 or self.workers < 1:
            raise EconomyError("witness_cap must be >= 0 and workers >= 1")
        if self.mode == CASES:
            if not self.cases:
                raise EconomyError("cases mode needs at least one (economy, allocation) pair")
            return
        if self.n < 2 or not 1 <= self.m <= 16:
            raise EconomyError(f"need n >= 2 and 1 <= m <= 16, got n={self.n}, m={self.m}")
        if self.n ** self.m > self.budgets.allocations:
            raise BudgetExceeded(f"allocations (n^m = {self.n}^{self.m})", self.n ** self.m,
                                 self.budgets.allocations)
        if self.mode == SAMPLED and self.sample_count < 1:
            raise EconomyError("sampled mode needs sample_count >= 1")
        if self.mode == EXHAUSTIVE:
            if self.m > 4:
                raise BudgetExceeded(f"preference profiles ((2^{self.m})!)^{self.n}", 10**100,
                                     self.budgets.profiles)
            profiles = self.profile_count
            if profiles > self.budgets.profiles:
                raise BudgetExceeded(f"preference profiles ((2^{self.m})!)^{self.n}", profiles,
                                     self.budgets.profiles)
            if profiles * self.n ** self.m > self.budgets.runs:
                raise BudgetExceeded("runs (profiles x allocations)", profiles * self.n ** self.m,
                                     self.budgets.runs)

    @property
    def profile_count(self) -> int:
        return count_preference_orders(self.m) ** self.n

    def describe(self) -> dict:
        out = {
            "mode": self.mode,
            "policy": self.policy.describe(),
            "dynamics": self.dynamics,
            "witness_cap": self.witness_cap,
        }
        if self.mode != CASES:
            out.update(n=self.n, m=self.m)
        if self.mode == SAMPLED:
            out.update(sample_count=self.sample_count, seed=self.seed)
        if self.mode == CASES:
            out.update(cases=len(self.cases))
        return out


@dataclass(frozen=True)
class Witness:
    """One counterexample or violation, replayable standalone.

    For the invariance search ``contrast`` holds the second run whose final
    allocation differs from ``trace.final``.
    """

    economy: Economy
    initial: Allocation
    trace: Trace | None
    verdict: ParetoVerdict | None = None
    contrast: Trace | None = None
    problems: tuple[str, ...] = ()
    cell: int = -1


@dataclass
class SweepReport:
    claim: str
    config: dict
    runs: int = 0
    violations: int = 0
    defects: int = 0
    witnesses: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def holds(self) -> bool:
        """Whether the claim's expectation is met by this sweep."""
        if self.defects:
            return False
        if self.claim in (CONVERGENCE, COASE):
            return self.violations == 0
        return len(self.witnesses) > 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "claim": self.claim,
            "config": self.config,
            "runs": self.runs,
            "violations": self.violations,
            "defects": self.defects,
            "holds": self.holds,
            "witnesses": [witness_to_dict(w) for w in self.witnesses],
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def _names(e: Economy, alloc: Allocation) -> list[list[str]]:
    return [e.resources.names_of(h) for h in alloc.holdings]


def witness_to_dict(w: Witness) -> dict:
    e = w.economy
    out = {
        "cell": w.cell,
        "agents": list(e.agents),
        "resources": list(e.resources.names),
        "preferences": [[e.resources.names_of(b) for b in p.ranking] for p in e.profile],
        "initial": _names(e, w.initial),
    }
    if w.trace is not None:
        out["final"] = _names(e, w.trace.final)
        out["moves"] = w.trace.moves
        out["potential_series"] = list(w.trace.potential_series)
    if w.verdict is not None:
        out["final_pareto_optimal"] = w.verdict.optimal
        if w.verdict.witness is not None:
            out["pareto_witness"] = _names(e, w.verdict.witness)
    if w.contrast is not None:
        out["contrast_initial"] = _names(e, w.contrast.initial)
        out["contrast_final"] = _names(e, w.contrast.final)
    if w.problems:
        out["problems"] = list(w.problems)
    return out


# ---------------------------------------------------------------------------
# trace audit


def audit_trace(trace: Trace) -> list[str]:
    """Structural checks every run must pass; returns human-readable problems.

    Checks ownership axioms on every allocation, stagnation as the final
    step, a strictly increasing potential, the step bound, and the
    per-step rank pattern of bilateral (exactly two agents gain, nobody
    else changes) and ideal (nobody loses, somebody gains) moves.
    """
    e = trace.economy
    problems = []
    allocs = trace.allocations()
    for idx, a in enumerate(allocs):
        try:
            validate_allocation(e, a.holdings)
        except EconomyError as err:
            problems.append(f"allocation {idx} invalid: {err}")
    if not trace.stagnated:
        problems.append("run did not end in stagnation")
    if any(s.kind == KIND_STAGNATION for s in trace.steps[:-1]):
        problems.append("stagnation step before the end")
    series = trace.potential_series
    if len(series) != len(allocs):
        problems.append("potential series length mismatch")
    for a, b in zip(series[:-2], series[1:-1]):
        if not b > a:
            problems.append(f"potential not strictly increasing: {list(series)}")
            break
    if len(series) >= 2 and trace.stagnated and series[-1] != series[-2]:
        problems.append("potential changed at stagnation")
    if trace.moves > e.potential_bound:
        problems.append(f"{trace.moves} moves exceed bound {e.potential_bound}")
    for before, after in zip(allocs, allocs[1:]):
        if before == after:
            continue
        deltas = [
            e.profile[q].ranks[after.holdings[q]] - e.profile[q].ranks[before.holdings[q]]
            for q in range(e.n)
        ]
        if trace.dynamics == BILATERAL:
            gained = [q for q, d in enumerate(deltas) if d > 0]
            moved = [q for q in range(e.n) if after.holdings[q] != before.holdings[q]]
            if len(gained) != 2 or moved != gained:
                problems.append(f"bilateral step changed {moved}, gains at {gained}")
        else:
            if min(deltas) < 0 or max(deltas) <= 0:
                problems.append(f"ideal step rank deltas {deltas}")
    visited = allocs[:-1] if trace.stagnated else allocs
    if len(set(visited)) != len(visited):
        problems.append("an allocation repeats within the run")
    return problems


def _run_checked(dynamics, e, initial, policy):
    bound = default_max_steps(e)
    try:
        trace = run(dynamics, e, initial, policy, bound)
    except StepLimitExceeded as exc:
        return exc.trace, [str(exc)]
    return trace, audit_trace(trace)


# ---------------------------------------------------------------------------
# cells


def cell_count(cfg: SweepConfig, claim: str) -> int:
    if cfg.mode == CASES:
        return len(cfg.cases)
    if cfg.mode == SAMPLED:
        return cfg.sample_count
    if claim == INVARIANCE:
        return cfg.profile_count
    return cfg.profile_count * cfg.n ** cfg.m


def _exhaustive_economy(cfg: SweepConfig, profile_index: int) -> Economy:
    per_agent = count_preference_orders(cfg.m)
    digits = []
    for _ in range(cfg.n):
        profile_index, d = divmod(profile_index, per_agent)
        digits.append(d)
    # agent 0 is the most significant digit so indices follow itertools.product order
    rankings = [preference_order_at(cfg.m, d).ranking for d in reversed(digits)]
    return Economy.from_rankings(rankings)


def sampled_cell(cfg: SweepConfig, k: int) -> tuple[Economy, Allocation]:
    """Economy and initial allocation of sample ``k``; a pure function of (seed, k)."""
    e = random_economy(cfg.n, cfg.m, derive_seed(cfg.seed, "economy", k))
    code = random.Random(derive_seed(cfg.seed, "initial", k)).randrange(cfg.n ** cfg.m)
    return e, Allocation.from_code(code, cfg.n, cfg.m)


def cell(cfg: SweepConfig, claim: str, k: int) -> tuple[Economy, Allocation | None]:
    """The economy (and initial allocation, except for invariance) of cell ``k``."""
    if cfg.mode == CASES:
        e, a = cfg.cases[k]
        return e, (None if claim == INVARIANCE else a)
    if cfg.mode == SAMPLED:
        e, a = sampled_cell(cfg, k)
        return e, (None if claim == INVARIANCE else a)
    if claim == INVARIANCE:
        return _exhaustive_economy(cfg, k), None
    per = cfg.n ** cfg.m
    profile, code = divmod(k, per)
    return _exhaustive_economy(cfg, profile), Allocation.from_code(code, cfg.n, cfg.m)


def _evaluate(cfg: SweepConfig, claim: str, k: int):
    """(runs, violations, defects, witness or None) for one cell."""
    e, initial = cell(cfg, claim, k)
    budget = cfg.budgets.allocations
    policy = cfg.policy
    if claim == CONVERGENCE:
        trace, problems = _run_checked(BILATERAL, e, initial, policy)
        if find_bilateral_trades(e, trace.final):
            problems.append("final allocation still admits a bilateral trade")
        if problems:
            return 1, 1, 0, Witness(e, initial, trace, problems=tuple(problems), cell=k)
        return 1, 0, 0, None
    if claim == COASE:
        trace, problems = _run_checked(IDEAL, e, initial, policy)
        verdict = pareto_witness(e, trace.final, budget)
        if not verdict.optimal:
            problems.append("ideal-exchange final is not Pareto optimal")
        if problems:
            return 1, 1, 0, Witness(e, initial, trace, verdict, problems=tuple(problems), cell=k)
        return 1, 0, 0, None
    if claim == SUBOPTIMAL:
        trace, problems = _run_checked(BILATERAL, e, initial, policy)
        if problems:
            return 1, 0, 1, Witness(e, initial, trace, problems=tuple(problems), cell=k)
        verdict = pareto_witness(e, trace.final, budget)
        if verdict.optimal:
            return 1, 0, 0, None
        return 1, 1, 0, Witness(e, initial, trace, verdict, cell=k)
    if claim == INVARIANCE:
        traces = []
        for code in range(e.allocation_count):
            start = Allocation.from_code(code, e.n, e.m)
            trace, problems = _run_checked(cfg.dynamics, e, start, policy)
            if problems:
                return code + 1, 0, 1, Witness(e, start, trace, problems=tuple(problems), cell=k)
            traces.append(trace)
        first = traces[0]
        for trace in traces[1:]:
            if trace.final != first.final:
                return len(traces), 1, 0, Witness(e, first.initial, first, contrast=trace, cell=k)
        return len(traces), 0, 0, None
    raise ValueError(f"unknown claim {claim!r}")


@dataclass
class _Partial:
    runs: int = 0
    violations: int = 0
    defects: int = 0
    witnesses: list = field(default_factory=list)


def evaluate_range(cfg: SweepConfig, claim: str, start: int, stop: int) -> _Partial:
    part = _Partial()
    for k in range(start, stop):
        runs, violations, defects, witness = _evaluate(cfg, claim, k)
        part.runs += runs
        part.violations += violations
        part.defects += defects
        if witness is not None and len(part.witnesses) < cfg.witness_cap:
            part.witnesses.append(witness)
    return part


def merge(parts, cap: int) -> _Partial:
    """Combine partial results in the given (cell) order."""
    out = _Partial()
    for p in parts:
        out.runs += p.runs
        out.violations += p.violations
        out.defects += p.defects
        out.witnesses.extend(p.witnesses[: max(0, cap - len(out.witnesses))])
    return out


def partitions(total: int, pieces: int) -> list[tuple[int, int]]:
    pieces = max(1, min(pieces, total)) if total else 1
    bounds = [total * i // pieces for i in range(pieces + 1)]
    return list(zip(bounds, bounds[1:]))


def sweep(cfg: SweepConfig, claim: str) -> SweepReport:
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {', '.join(CLAIMS)}")
    started = time.perf_counter()
    total = cell_count(cfg, claim)
    if cfg.workers == 1:
        result = evaluate_range(cfg, claim, 0, total)
    else:
        ranges = partitions(total, cfg.workers * 4)
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(evaluate_range, cfg, claim, a, b) for a, b in ranges]
            result = merge((f.result() for f in futures), cfg.witness_cap)
    return SweepReport(
        claim=claim,
        config=cfg.describe(),
        runs=result.runs,
        violations=result.violations,
        defects=result.defects,
        witnesses=result.witnesses,
        elapsed=time.perf_counter() - started,
    )


def check_convergence(cfg: SweepConfig) -> SweepReport:
    """Every bilateral run stagnates within the potential bound."""
    return sweep(cfg, CONVERGENCE)


def check_coase(cfg: SweepConfig) -> SweepReport:
    """Every ideal-exchange run stagnates at a Pareto-optimal allocation."""
    return sweep(cfg, COASE)


def find_invariance_violation(cfg: SweepConfig) -> SweepReport:
    """Economies whose final allocation depends on the initial one."""
    return sweep(cfg, INVARIANCE)


def find_suboptimal_stagnation(cfg: SweepConfig) -> SweepReport:
    """Bilateral endpoints that the Pareto oracle rejects."""
    return sweep(cfg, SUBOPTIMAL)


CHECKS = {
    CONVERGENCE: check_convergence,
    COASE: check_coase,
    INVARIANCE: find_invariance_violation,
    SUBOPTIMAL: find_suboptimal_stagnation,
}


def replay_witness(claim: str, w: Witness, policy=FIRST_IN_ORDER, dynamics: str = BILATERAL) -> bool:
    """Re-run a witness from scratch and confirm it still shows its violation."""
    e = w.economy
    if claim == SUBOPTIMAL:
        trace = run(BILATERAL, e, w.initial, policy)
        if find_bilateral_trades(e, trace.final):
            return False
        verdict = pareto_witness(e, trace.final)
        return (not verdict.optimal and trace.final == w.trace.final
                and bool(find_ideal_exchanges(e, trace.final)))
    if claim == INVARIANCE:
        a = run(dynamics, e, w.initial, policy)
        b = run(dynamics, e, w.contrast.initial, policy)
        return a.final != b.final
    if claim in (CONVERGENCE, COASE):
        dyn = BILATERAL if claim == CONVERGENCE else IDEAL
        trace, problems = _run_checked(dyn, e, w.initial, policy)
        if claim == COASE and not pareto_witness(e, trace.final).optimal:
            problems.append("not optimal")
        return bool(problems)
    raise ValueError(f"unknown claim {claim!r}")


# ---------------------------------------------------------------------------
# per-run rows for batch statistics


STAT_FIELDS = ("economy", "initial", "dynamics", "steps", "final_potential", "final_pareto_optimal")


def sweep_rows(cfg: SweepConfig, dynamics: str) -> Iterator[dict]:
    """One row per (economy, initial allocation) cell, in cell order."""
    total = cell_count(cfg, CONVERGENCE)
    for k in range(total):
        e, initial = cell(cfg, CONVERGENCE, k)
        trace = run(dynamics, e, initial, cfg.policy)
        if cfg.mode == SAMPLED:
            economy_id = str(derive_seed(cfg.seed, "economy", k))
        elif cfg.mode == EXHAUSTIVE:
            economy_id = str(k // cfg.n ** cfg.m)
        else:
            economy_id = str(k)
        yield {
            "economy": economy_id,
            "initial": initial.code,
            "dynamics": dynamics,
            "steps": trace.moves,
            "final_potential": trace.potential_series[-1],
            "final_pareto_optimal": pareto_witness(e, trace.final, cfg.budgets.allocations).optimal,
        }
