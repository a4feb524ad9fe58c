import math

import gmpy2
import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d4fields.arith import (
    check_squarefree_int,
    euler_phi,
    fundamental_discriminant,
    is_square,
    is_squarefree,
    kronecker,
    legendre_batch,
    log_integral,
    moebius_sieve,
    prime_factors,
    prime_sieve,
    squarefree_part,
)
from d4fields.errors import DomainError, ResourceBudgetError


def _trial_primes(x):
    return [n for n in range(2, x + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def _segmented_count(x, seg=10_000):
    """Independent segmented sieve: pi(x)."""
    base = _trial_primes(math.isqrt(x))
    count = 0
    for lo in range(2, x + 1, seg):
        hi = min(lo + seg - 1, x)
        mark = bytearray([1]) * (hi - lo + 1)
        for p in base:
            start = max(p * p, (lo + p - 1) // p * p)
            for m in range(start, hi + 1, p):
                mark[m - lo] = 0
        count += sum(mark)
    return count


def _mu_by_factoring(n):
    f = 1
    for p in range(2, n + 1):
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            f = -f
        if n == 1:
            break
    return f


def test_prime_sieve_small_matches_trial_division():
    assert prime_sieve(2000).tolist() == _trial_primes(2000)


def test_prime_sieve_count_matches_segmented_oracle():
    assert prime_sieve(10**6).size == _segmented_count(10**6) == 78498


def test_prime_sieve_edges():
    with pytest.raises(DomainError):
        prime_sieve(1)
    assert prime_sieve(2).tolist() == [2]
    assert prime_sieve(3).tolist() == [2, 3]


def test_sieve_budget():
    with pytest.raises(ResourceBudgetError):
        prime_sieve(10**6, limit=1000)


def test_moebius_matches_factoring():
    mu = moebius_sieve(3000)
    assert all(mu[n] == _mu_by_factoring(n) for n in range(1, 3001))


def test_mertens_value():
    assert int(moebius_sieve(10**6)[1:].sum()) == 212


@given(st.integers(-10**6, 10**6).filter(lambda n: n != 0))
def test_squarefree_part_properties(n):
    s = squarefree_part(n)
    assert is_squarefree(s)
    assert n % s == 0 and is_square(n // s)
    assert (s > 0) == (n > 0)


@given(st.integers(1, 10**6))
def test_prime_factors_reconstruct(n):
    ps = prime_factors(n)
    assert ps == sorted(set(ps))
    m = n
    for p in ps:
        assert gmpy2.is_prime(p)
        while m % p == 0:
            m //= p
    assert m == 1


def test_is_squarefree_rejects_zero():
    with pytest.raises(DomainError):
        is_squarefree(0)


@pytest.mark.parametrize("bad", [0, 1, 4, -12, 18])
def test_check_squarefree_int_rejects(bad):
    with pytest.raises(DomainError):
        check_squarefree_int(bad)


@pytest.mark.parametrize(
    "c, disc", [(2, 8), (3, 12), (5, 5), (7, 28), (-1, -4), (-3, -3), (-7, -7), (14, 56), (-14, -56)]
)
def test_fundamental_discriminant(c, disc):
    assert fundamental_discriminant(c) == disc


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
@settings(max_examples=2000)
def test_kronecker_matches_gmpy2(d, n):
    assert kronecker(d, n) == gmpy2.kronecker(d, n)


def test_kronecker_at_two():
    # (d/2) = 0 for even d, else +1 for d = +-1 mod 8 and -1 for d = +-3 mod 8
    assert [kronecker(d, 2) for d in (1, 3, 5, 7, 8, 17)] == [1, -1, -1, 1, 0, 1]


@given(st.integers(-10**6, 10**6))
def test_legendre_batch_matches_scalar(d):
    primes = prime_sieve(500)[1:]
    assert legendre_batch(d, primes).tolist() == [kronecker(d, int(p)) for p in primes]


@given(st.integers(1, 3000))
def test_euler_phi_matches_gcd_count(q):
    assert euler_phi(q) == sum(1 for k in range(1, q + 1) if math.gcd(k, q) == 1)


@pytest.mark.parametrize("x", [2.0, 2.3, 2.5, 3.0, 10.0, 100.0, 1e4, 1e6, 1e9])
def test_log_integral_matches_mpmath(x):
    ref = float(mpmath.li(x, offset=True))
    assert log_integral(x) == pytest.approx(ref, rel=1e-12, abs=1e-13)


def test_log_integral_known_values():
    assert log_integral(100) == pytest.approx(29.080977804, abs=1e-8)
    assert log_integral(1e6) == pytest.approx(78626.504, abs=1e-3)


def test_log_integral_domain():
    with pytest.raises(DomainError):
        log_integral(1.5)


def test_is_square():
    assert [is_square(n) for n in (-4, 0, 1, 2, 49, 50)] == [False, True, True, False, True, False]
    assert np.all(np.array([is_square(k * k) for k in range(1000)]))
