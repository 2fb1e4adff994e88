"""Compiled and pure-Python kernels against the set-based oracle and each other."""

from hypothesis import given, settings
from hypothesis import strategies as st

from coase import Allocation, random_economy
from coase import kernels

import oracles


def _rand_case(n, m, seed, code):
    e = random_economy(n, m, seed)
    return e, Allocation.from_code(code % n**m, n, m)


cases = st.tuples(st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**64 - 1), st.integers(0, 10**6))


@settings(max_examples=150, deadline=None)
@given(cases)
def test_bilateral_kernel_matches_oracle(kernel, case):
    e, a = _rand_case(*case)
    assert kernel.bilateral_trades(e.rank_table, e.n, e.m, a.holdings) == oracles.brute_bilateral_trades(e, a)


@settings(max_examples=150, deadline=None)
@given(cases)
def test_improvement_kernel_matches_oracle(kernel, case):
    e, a = _rand_case(*case)
    codes = kernel.improving_allocations(e.rank_table, e.n, e.m, a.holdings)
    assert [Allocation.from_code(c, e.n, e.m).owners() for c in codes] == oracles.brute_improvements(e, a)
    first = kernel.improving_allocations(e.rank_table, e.n, e.m, a.holdings, 1)
    assert first == codes[:1]


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4), st.integers(1, 5), st.integers(0, 2**64 - 1), st.integers(0, 10**6))
def test_backends_agree(n, m, seed, code):
    e, a = _rand_case(n, m, seed, code)
    results = {
        name: (
            mod.bilateral_trades(e.rank_table, n, m, a.holdings),
            mod.improving_allocations(e.rank_table, n, m, a.holdings),
            mod.potential(e.rank_table, n, m, a.holdings),
        )
        for name, mod in kernels.backends().items()
    }
    assert len(set(map(repr, results.values()))) == 1


def test_backend_flag():
    assert kernels.BACKEND in kernels.backends()


def test_env_var_forces_pure_fallback():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import coase.kernels as k; print(k.BACKEND)"],
        env={"COASE_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
