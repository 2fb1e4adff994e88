"""Bilateral-trade and ideal-exchange dynamics.

Each dynamics is a pure step function plus a driver that iterates it until
the allocation stagnates.  When several moves qualify at a step, a
tie-break policy picks one.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from . import kernels
from .core import (
    DEFAULT_ALLOCATION_BUDGET,
    Allocation,
    Economy,
    check_allocation_budget,
)

BILATERAL = "bilateral"
IDEAL = "ideal"
DYNAMICS = (BILATERAL, IDEAL)

KIND_TRADE = "bilateral-trade"
KIND_EXCHANGE = "ideal-exchange"
KIND_STAGNATION = "stagnation"


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from any mix of ints and strings."""
    digest = hashlib.blake2b(":".join(map(str, parts)).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


# ---------------------------------------------------------------------------
# tie-break policies


@dataclass(frozen=True)
class FirstInOrder:
    """Always take the first qualifying move in canonical order."""

    name = "first-in-order"
    needs_all = False

    def select(self, options: Sequence, key) -> int:
        return 0

    def describe(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class SeededRandom:
    """Uniform choice among qualifying moves.

    The draw depends only on ``(seed, key)``, where the key identifies the
    current state, so step functions stay pure and runs are reproducible.
    """

    seed: int = 0
    name = "seeded-random"
    needs_all = True

    def select(self, options: Sequence, key) -> int:
        return random.Random(derive_seed(self.seed, key)).randrange(len(options))

    def describe(self) -> dict:
        return {"name": self.name, "seed": self.seed}


FIRST_IN_ORDER = FirstInOrder()
POLICY_NAMES = (FirstInOrder.name, SeededRandom.name)


def make_policy(name: str, seed: int | None = None):
    if name == FirstInOrder.name:
        return FIRST_IN_ORDER
    if name == SeededRandom.name:
        return SeededRandom(0 if seed is None else seed)
    raise ValueError(f"unknown policy {name!r}; expected one of {', '.join(POLICY_NAMES)}")


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class TradeProposal:
    """Agent ``i`` hands ``r1`` to agent ``j`` in return for ``r2``."""

    i: int
    j: int
    r1: int
    r2: int

    def apply(self, alloc: Allocation) -> Allocation:
        holdings = list(alloc.holdings)
        holdings[self.i] = (holdings[self.i] & ~self.r1) | self.r2
        holdings[self.j] = (holdings[self.j] & ~self.r2) | self.r1
        return Allocation(tuple(holdings), alloc.m)


@dataclass(frozen=True)
class TraceStep:
    t: int
    kind: str
    detail: TradeProposal | Allocation | None
    allocation_after: Allocation


@dataclass(frozen=True)
class Trace:
    economy: Economy
    dynamics: str
    initial: Allocation
    steps: tuple[TraceStep, ...]
    policy: object
    potential_series: tuple[int, ...]

    @property
    def final(self) -> Allocation:
        return self.steps[-1].allocation_after if self.steps else self.initial

    @property
    def moves(self) -> int:
        """Number of trades or exchanges performed."""
        return sum(1 for s in self.steps if s.kind != KIND_STAGNATION)

    @property
    def stagnated(self) -> bool:
        return bool(self.steps) and self.steps[-1].kind == KIND_STAGNATION

    def allocations(self) -> list[Allocation]:
        return [self.initial] + [s.allocation_after for s in self.steps]


class StepLimitExceeded(RuntimeError):
    """A run hit ``max_steps`` without stagnating.

    Both dynamics provably stagnate within the potential bound, so this
    signals a broken implementation or an explicitly undersized limit.
    """

    def __init__(self, trace: Trace, max_steps: int):
        super().__init__(f"{trace.dynamics} run did not stagnate within {max_steps} steps")
        self.trace = trace
        self.max_steps = max_steps


# ---------------------------------------------------------------------------
# shared pieces


def potential(e: Economy, alloc: Allocation) -> int:
    """Sum over agents of the rank of their own bundle."""
    return kernels.potential(e.rank_table, e.n, e.m, alloc.holdings)


def default_max_steps(e: Economy) -> int:
    return e.potential_bound + 1


def _check_alloc(e: Economy, alloc: Allocation) -> None:
    if alloc.n != e.n or alloc.m != e.m:
        raise ValueError(f"allocation shape ({alloc.n}, {alloc.m}) does not match economy ({e.n}, {e.m})")


def _run(e, initial, policy, max_steps, dynamics, next_move) -> Trace:
    _check_alloc(e, initial)
    if max_steps is None:
        max_steps = default_max_steps(e)
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    alloc = initial
    steps = []
    series = [potential(e, alloc)]
    for t in range(1, max_steps + 1):
        move = next_move(e, alloc, policy)
        if move is None:
            steps.append(TraceStep(t, KIND_STAGNATION, None, alloc))
            series.append(series[-1])
            return Trace(e, dynamics, initial, tuple(steps), policy, tuple(series))
        kind, detail, alloc = move
        steps.append(TraceStep(t, kind, detail, alloc))
        series.append(potential(e, alloc))
    raise StepLimitExceeded(Trace(e, dynamics, initial, tuple(steps), policy, tuple(series)), max_steps)


# ---------------------------------------------------------------------------
# bilateral trades


def find_bilateral_trades(e: Economy, alloc: Allocation) -> list[TradeProposal]:
    """Every double-coincidence trade available at ``alloc``.

    A proposal qualifies when both sides hold what they give, each strictly
    prefers what it receives over what it gives, and each strictly prefers
    its post-trade bundle over its current one.  Each swap is reported once,
    with ``i < j``, sorted by (i, j, r1, r2).
    """
    _check_alloc(e, alloc)
    raw = kernels.bilateral_trades(e.rank_table, e.n, e.m, alloc.holdings)
    return [TradeProposal(*p) for p in raw]


def _next_bilateral(e, alloc, policy):
    proposals = find_bilateral_trades(e, alloc)
    if not proposals:
        return None
    chosen = proposals[policy.select(proposals, (BILATERAL, alloc.code))]
    return KIND_TRADE, chosen, chosen.apply(alloc)


def step_bilateral(e: Economy, alloc: Allocation, policy=FIRST_IN_ORDER) -> Allocation | None:
    """Successor allocation under bilateral trading, or ``None`` if stagnant."""
    move = _next_bilateral(e, alloc, policy)
    return None if move is None else move[2]


def run_bilateral(e: Economy, initial: Allocation, policy=FIRST_IN_ORDER,
                  max_steps: int | None = None) -> Trace:
    return _run(e, initial, policy, max_steps, BILATERAL, _next_bilateral)


# ---------------------------------------------------------------------------
# ideal exchanges


def _improving_codes(e, alloc, limit, budget):
    check_allocation_budget(e, budget)
    return kernels.improving_allocations(e.rank_table, e.n, e.m, alloc.holdings, limit)


def find_ideal_exchanges(e: Economy, alloc: Allocation,
                         budget: int = DEFAULT_ALLOCATION_BUDGET) -> list[Allocation]:
    """Allocations that make some agent strictly better and nobody worse, in code order."""
    _check_alloc(e, alloc)
    return [Allocation.from_code(c, e.n, e.m) for c in _improving_codes(e, alloc, 0, budget)]


def _next_ideal(e, alloc, policy, budget=DEFAULT_ALLOCATION_BUDGET):
    codes = _improving_codes(e, alloc, 0 if policy.needs_all else 1, budget)
    if not codes:
        return None
    target = Allocation.from_code(codes[policy.select(codes, (IDEAL, alloc.code))], e.n, e.m)
    return KIND_EXCHANGE, target, target


def step_ideal(e: Economy, alloc: Allocation, policy=FIRST_IN_ORDER) -> Allocation | None:
    """Successor allocation under ideal exchanges, or ``None`` once Pareto optimal."""
    _check_alloc(e, alloc)
    move = _next_ideal(e, alloc, policy)
    return None if move is None else move[2]


def run_ideal(e: Economy, initial: Allocation, policy=FIRST_IN_ORDER,
              max_steps: int | None = None) -> Trace:
    return _run(e, initial, policy, max_steps, IDEAL, _next_ideal)


RUNNERS: dict[str, Callable[..., Trace]] = {BILATERAL: run_bilateral, IDEAL: run_ideal}


def run(dynamics: str, e: Economy, initial: Allocation, policy=FIRST_IN_ORDER,
        max_steps: int | None = None) -> Trace:
    try:
        runner = RUNNERS[dynamics]
    except KeyError:
        raise ValueError(f"unknown dynamics {dynamics!r}; expected one of {', '.join(DYNAMICS)}") from None
    return runner(e, initial, policy, max_steps)
