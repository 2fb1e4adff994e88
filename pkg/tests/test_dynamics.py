import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coase import (
    Allocation,
    SeededRandom,
    StepLimitExceeded,
    TradeProposal,
    find_bilateral_trades,
    find_ideal_exchanges,
    potential,
    random_economy,
    run_bilateral,
    run_ideal,
    step_bilateral,
    step_ideal,
)
from coase.dynamics import FIRST_IN_ORDER, KIND_STAGNATION, make_policy
from coase.pareto import pareto_witness
from coase.verifier import audit_trace

from conftest import alloc

POLICIES = [FIRST_IN_ORDER, SeededRandom(1), SeededRandom(2024)]


# -- bilateral --------------------------------------------------------------


def test_paper_allocation_has_no_bilateral_trade(paper):
    assert find_bilateral_trades(paper.economy, paper.initial) == []


def test_e1_has_no_bilateral_trade(e1):
    assert find_bilateral_trades(e1, alloc(e1, ["x"], [])) == []
    assert find_bilateral_trades(e1, alloc(e1, [], ["x"])) == []


def test_e2_gift_is_the_only_trade(e2):
    # frozen from oracles.brute_bilateral_trades over all (r1, r2) pairs
    assert find_bilateral_trades(e2, alloc(e2, ["x"], [])) == [TradeProposal(0, 1, 0b1, 0)]


def test_step_bilateral(paper, e1, e2):
    assert step_bilateral(e2, alloc(e2, ["x"], [])) == alloc(e2, [], ["x"])
    for policy in POLICIES:
        assert step_bilateral(paper.economy, paper.initial, policy) is None
        assert step_bilateral(e1, alloc(e1, [], ["x"]), policy) is None


def test_run_bilateral_e2(e2):
    trace = run_bilateral(e2, alloc(e2, ["x"], []))
    assert [s.kind for s in trace.steps] == ["bilateral-trade", KIND_STAGNATION]
    assert trace.final == alloc(e2, [], ["x"])
    assert trace.potential_series == (0, 2, 2)


def test_run_bilateral_paper_stagnates_immediately(paper):
    trace = run_bilateral(paper.economy, paper.initial)
    assert len(trace.steps) == 1 and trace.steps[0].kind == KIND_STAGNATION
    assert trace.final == paper.initial
    assert trace.moves == 0


def test_run_bilateral_e1_depends_on_initial(e1):
    left = run_bilateral(e1, alloc(e1, ["x"], [])).final
    right = run_bilateral(e1, alloc(e1, [], ["x"])).final
    assert left == alloc(e1, ["x"], [])
    assert right == alloc(e1, [], ["x"])


# -- ideal ------------------------------------------------------------------


def test_find_ideal_exchanges(paper, e1):
    e = paper.economy
    # frozen from oracles.brute_improvements over all 27 allocations
    assert find_ideal_exchanges(e, paper.initial) == [alloc(e, ["y"], ["x"], ["z"])]
    assert find_ideal_exchanges(e, alloc(e, ["y"], ["x"], ["z"])) == []
    assert find_ideal_exchanges(e1, alloc(e1, ["x"], [])) == []


def test_step_ideal(paper, e1):
    e = paper.economy
    assert step_ideal(e, paper.initial) == alloc(e, ["y"], ["x"], ["z"])
    for policy in POLICIES:
        assert step_ideal(e, alloc(e, ["y"], ["x"], ["z"]), policy) is None
        assert step_ideal(e1, alloc(e1, [], ["x"]), policy) is None


def test_run_ideal_paper(paper):
    trace = run_ideal(paper.economy, paper.initial)
    assert trace.moves == 1
    assert trace.final == alloc(paper.economy, ["y"], ["x"], ["z"])
    assert trace.potential_series == (6, 9, 9)


def test_run_ideal_fixes_optimal_points(e1):
    for a in (alloc(e1, ["x"], []), alloc(e1, [], ["x"])):
        trace = run_ideal(e1, a)
        assert trace.final == a and trace.moves == 0


def test_potential_examples(paper):
    e = paper.economy
    assert potential(e, paper.initial) == 6
    assert potential(e, alloc(e, ["y"], ["x"], ["z"])) == 9


def test_potential_zero_when_everyone_holds_their_worst():
    # a1 ranks {x} lowest, a0 ranks {} lowest
    from coase import Economy

    e = Economy.from_rankings([[0, 1], [1, 0]])
    assert potential(e, Allocation((0, 1), 1)) == 0


def test_step_limit_is_reported(e2):
    with pytest.raises(StepLimitExceeded) as info:
        run_bilateral(e2, alloc(e2, ["x"], []), max_steps=1)
    assert info.value.trace.moves == 1


def test_ideal_budget(paper):
    from coase import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        find_ideal_exchanges(paper.economy, paper.initial, budget=10)


def test_make_policy():
    assert make_policy("first-in-order") is FIRST_IN_ORDER
    assert make_policy("seeded-random", 5) == SeededRandom(5)
    with pytest.raises(ValueError):
        make_policy("greedy")


def test_seeded_random_is_deterministic():
    e = random_economy(3, 3, 11)
    a = Allocation.from_code(0, 3, 3)
    runs = [run_ideal(e, a, SeededRandom(9)) for _ in range(2)]
    assert runs[0] == runs[1]


# -- properties -------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**64 - 1), st.integers(0, 10**6),
       st.sampled_from(POLICIES))
def test_runs_are_well_behaved(n, m, seed, code, policy):
    e = random_economy(n, m, seed)
    a = Allocation.from_code(code % n**m, n, m)
    for runner in (run_bilateral, run_ideal):
        trace = runner(e, a, policy)
        assert audit_trace(trace) == []
        assert trace.moves <= e.potential_bound
        for before, step in zip(trace.allocations(), trace.steps):
            if step.kind == KIND_STAGNATION:
                stepper = step_bilateral if runner is run_bilateral else step_ideal
                finder = find_bilateral_trades if runner is run_bilateral else find_ideal_exchanges
                assert stepper(e, before, policy) is None
                assert finder(e, before) == []
    assert pareto_witness(e, run_ideal(e, a, policy).final).optimal


def test_bilateral_steps_change_exactly_two_agents():
    e = random_economy(3, 3, 5)
    for code in range(27):
        trace = run_bilateral(e, Allocation.from_code(code, 3, 3))
        for before, after in zip(trace.allocations(), trace.allocations()[1:]):
            if before == after:
                continue
            changed = [q for q in range(3) if before[q] != after[q]]
            assert len(changed) == 2
            for q in changed:
                assert e.profile[q].ranks[after[q]] > e.profile[q].ranks[before[q]]
