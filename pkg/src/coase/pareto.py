"""Brute-force Pareto optimality oracle.

Deliberately independent of the dynamics kernels: it walks
``enumerate_allocations`` and compares bundles through
``PreferenceOrder.prefers`` only, so it can adjudicate the ideal-exchange
engine rather than share its bugs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_ALLOCATION_BUDGET, Allocation, Economy, enumerate_allocations


@dataclass(frozen=True)
class ParetoVerdict:
    optimal: bool
    witness: Allocation | None = None
    improvers: tuple[int, ...] = ()
    unchanged: tuple[int, ...] = ()


def prefers_distribution(e: Economy, q: int, i_alloc: Allocation, k_alloc: Allocation) -> bool:
    """Whether agent ``q`` strictly prefers its bundle in ``k_alloc`` over the one in ``i_alloc``."""
    return e.profile[q].prefers(i_alloc.holdings[q], k_alloc.holdings[q])


def _dominates(e: Economy, current: Allocation, other: Allocation) -> bool:
    gain = False
    for q in range(e.n):
        if prefers_distribution(e, q, other, current):
            return False
        if prefers_distribution(e, q, current, other):
            gain = True
    return gain


def pareto_witness(e: Economy, alloc: Allocation, budget: int = DEFAULT_ALLOCATION_BUDGET) -> ParetoVerdict:
    """First allocation (canonical order) that Pareto-dominates ``alloc``, if any."""
    for other in enumerate_allocations(e, budget):
        if other == alloc or not _dominates(e, alloc, other):
            continue
        improvers, unchanged = [], []
        for q in range(e.n):
            if prefers_distribution(e, q, alloc, other):
                improvers.append(q)
            else:
                unchanged.append(q)
        return ParetoVerdict(False, other, tuple(improvers), tuple(unchanged))
    return ParetoVerdict(True)


def is_pareto_optimal(e: Economy, alloc: Allocation, budget: int = DEFAULT_ALLOCATION_BUDGET) -> bool:
    return pareto_witness(e, alloc, budget).optimal


def pareto_frontier(e: Economy, budget: int = DEFAULT_ALLOCATION_BUDGET) -> list[Allocation]:
    """All Pareto-optimal allocations in canonical order."""
    allocs = list(enumerate_allocations(e, budget))
    ranks = [tuple(e.profile[q].ranks[a.holdings[q]] for q in range(e.n)) for a in allocs]
    frontier = []
    for a, ra in zip(allocs, ranks):
        dominated = any(
            all(x >= y for x, y in zip(rb, ra)) and rb != ra
            for rb in ranks
        )
        if not dominated:
            frontier.append(a)
    return frontier
