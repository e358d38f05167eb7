import pytest
from hypothesis import given, strategies as st

from totient_forest.core import DomainError, euler_phi
from totient_forest.fibers import (
    BudgetExceeded,
    bruteforce_fibers,
    totient_fiber,
    totient_fiber_bruteforce,
)

FIBER_24 = (35, 39, 45, 52, 56, 70, 72, 78, 84, 90)


@pytest.mark.parametrize("m, expected", [(1, (1, 2)), (14, ()), (24, FIBER_24), (3, ()), (2, (3, 4, 6))])
def test_fiber_examples(m, expected):
    assert totient_fiber(m).members == expected
    assert totient_fiber(m, "ascending").members == expected


def test_bruteforce_examples():
    assert totient_fiber_bruteforce(1).members == (1, 2)
    assert totient_fiber_bruteforce(24).members == FIBER_24
    assert totient_fiber_bruteforce(500).members == totient_fiber(500).members


def test_bruteforce_budget():
    with pytest.raises(BudgetExceeded) as info:
        totient_fiber_bruteforce(10**5)
    assert info.value.limit == 2 * 10**10


def test_domain():
    with pytest.raises(DomainError):
        totient_fiber(0)


def test_oracle_equivalence_small():
    ref = bruteforce_fibers(300)
    for m in range(1, 301):
        assert totient_fiber(m).members == ref[m].members


@pytest.mark.parametrize("m", [2, 10, 24, 48, 96, 720])
def test_order_does_not_matter(m):
    assert totient_fiber(m, "asc").members == totient_fiber(m, "desc").members


def test_membership_soundness():
    for m in range(1, 10**4 + 1):
        fib = totient_fiber(m)
        assert list(fib.members) == sorted(set(fib.members))
        for x in fib:
            assert euler_phi(x) == m


@given(st.integers(1, 10**6).map(lambda k: 2 * k + 1))
def test_odd_values_have_empty_fibers(m):
    assert len(totient_fiber(m)) == 0


@given(st.integers(1, 10**9))
def test_doubling_closure(m):
    members = set(totient_fiber(m).members)
    for x in members:
        if x % 2:
            assert 2 * x in members
        assert euler_phi(x) == m


def test_large_value_fiber():
    # preimages of a power of two are products of Fermat primes times powers of two
    fib = totient_fiber(2**32)
    assert all(euler_phi(x) == 2**32 for x in fib)
    assert 2**33 in fib
    assert 3 * 5 * 17 * 257 * 65537 * 4 in fib
    assert 3 * 5 * 17 * 257 * 65537 * 2 not in fib
