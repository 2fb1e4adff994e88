from hypothesis import given, settings
from hypothesis import strategies as st

from coase import Allocation, enumerate_allocations, find_ideal_exchanges, potential, random_economy
from coase.pareto import pareto_frontier, pareto_witness, prefers_distribution

from conftest import alloc


def test_prefers_distribution(paper):
    e = paper.economy
    k = alloc(e, ["y"], ["x"], ["z"])
    assert prefers_distribution(e, 0, paper.initial, k)
    assert not prefers_distribution(e, 1, paper.initial, paper.initial)
    assert not prefers_distribution(e, 1, k, paper.initial)


def test_paper_witness(paper):
    e = paper.economy
    v = pareto_witness(e, paper.initial)
    assert not v.optimal
    assert v.witness == alloc(e, ["y"], ["x"], ["z"])
    assert v.improvers == (0, 1, 2)
    assert v.unchanged == ()
    assert pareto_witness(e, v.witness).optimal


def test_e1_corners_optimal(e1):
    assert pareto_witness(e1, alloc(e1, ["x"], [])).optimal
    assert pareto_frontier(e1) == [alloc(e1, ["x"], []), alloc(e1, [], ["x"])]


def test_paper_frontier(paper):
    frontier = pareto_frontier(paper.economy)
    assert alloc(paper.economy, ["y"], ["x"], ["z"]) in frontier
    assert paper.initial not in frontier
    # brute-force count from oracles.brute_improvements
    assert len(frontier) == 13


_economies = st.tuples(st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**64 - 1))


@settings(max_examples=120, deadline=None)
@given(_economies, st.integers(0, 10**6))
def test_oracle_agrees_with_ideal_engine(params, code):
    n, m, seed = params
    e = random_economy(n, m, seed)
    a = Allocation.from_code(code % n**m, n, m)
    v = pareto_witness(e, a)
    ideal = find_ideal_exchanges(e, a)
    assert v.optimal == (not ideal)
    if not v.optimal:
        assert v.witness == ideal[0]
        assert v.witness != a
        assert v.improvers
        assert sorted(v.improvers + v.unchanged) == list(range(n))
        for q in range(n):
            before = e.profile[q].ranks[a[q]]
            after = e.profile[q].ranks[v.witness[q]]
            assert after > before if q in v.improvers else v.witness[q] == a[q]


@settings(max_examples=60, deadline=None)
@given(_economies)
def test_frontier_contains_potential_maximisers(params):
    e = random_economy(*params)
    frontier = pareto_frontier(e)
    assert frontier
    allocs = list(enumerate_allocations(e))
    top = max(potential(e, a) for a in allocs)
    for a in allocs:
        if potential(e, a) == top:
            assert a in frontier
    assert frontier == [a for a in allocs if pareto_witness(e, a).optimal]
