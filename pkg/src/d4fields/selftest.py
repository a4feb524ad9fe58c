"""Fast invariant checks bundled with the package, run by ``d4 selftest``."""

from __future__ import annotations

import math
import random
from typing import Callable

from .arith import kronecker, log_integral, moebius_sieve, prime_sieve
from .dihedral import CLASSES, ConjugacyClass, class_from_pattern
from .family import count_squarefree_coprime, member_key
from .frobenius import artin_symbol, scan_primes
from .lseries import d4_character_table, local_euler_check
from .normcond import check_condition_1234, phi
from .quartic import BiquadraticContext, build_field, is_same_field


def _jacobi_by_definition(d: int, p: int) -> int:
    r = d % p
    if r == 0:
        return 0
    return 1 if any(x * x % p == r for x in range(1, p)) else -1


def check_kronecker(seed: int = 0) -> bool:
    rng = random.Random(seed)
    primes = prime_sieve(200)[1:].tolist()
    for _ in range(500):
        d, p = rng.randint(-500, 500), rng.choice(primes)
        if kronecker(d, p) != _jacobi_by_definition(d, p):
            return False
    return True


def check_sieves() -> bool:
    return prime_sieve(10**5).size == 9592 and int(moebius_sieve(10**4)[1:].sum()) == -23


def check_log_integral() -> bool:
    return abs(log_integral(100.0) - 29.0809778) < 1e-6


def check_generator_triple() -> bool:
    t = phi(2, 7)
    return (t.g0, t.h0, t.n0) == (3, 1, 1) and check_condition_1234(2, 7).co1


def check_character_table() -> bool:
    tab = d4_character_table()
    return tab.orthogonality_ok() and tab.regular_ok()


def check_symbol_patterns() -> bool:
    return all(class_from_pattern(c.symbol_pattern, c.fixed_points > 0) is c for c in CLASSES)


def check_frobenius_paths() -> bool:
    ctx = BiquadraticContext(2, 7)
    K = build_field(ctx, phi(2, 7), 1)
    table = scan_primes(K, 3000)
    for rec in table:
        if rec.admissible and artin_symbol(K, rec.p).cls is not rec.cls:
            return False
    return table.class_counts()[ConjugacyClass.ID] > 0


def check_euler_factors() -> bool:
    K = build_field(BiquadraticContext(2, 7), phi(2, 7), 1)
    return all(local_euler_check(K, p) for p in prime_sieve(500)[1:].tolist() if K.is_admissible(p))


def check_squarefree_count() -> bool:
    Z, q = 5000, 14
    mu = moebius_sieve(Z)
    brute = sum(1 for m in range(1, Z + 1) if mu[m] and math.gcd(m, q) == 1)
    return count_squarefree_coprime(Z, q).count == brute


def check_distinct_members() -> bool:
    ctx = BiquadraticContext(2, 7)
    t = phi(2, 7)
    mu = moebius_sieve(40)
    ms = [m for m in range(1, 41) if mu[m] and math.gcd(m, 14) == 1]
    fields = [build_field(ctx, t, m) for m in ms]
    keys = {member_key(K) for K in fields}
    pairs_ok = all(
        not is_same_field(fields[i], fields[j])
        for i in range(len(fields))
        for j in range(i + 1, len(fields))
    )
    return len(keys) == len(fields) and pairs_ok


CHECKS: dict[str, Callable[[], bool]] = {
    "kronecker": check_kronecker,
    "sieves": check_sieves,
    "log_integral": check_log_integral,
    "generator_triple": check_generator_triple,
    "character_table": check_character_table,
    "symbol_patterns": check_symbol_patterns,
    "frobenius_paths": check_frobenius_paths,
    "euler_factors": check_euler_factors,
    "squarefree_count": check_squarefree_count,
    "distinct_members": check_distinct_members,
}


def run_selftest(seed: int = 0) -> dict[str, bool]:
    results = {name: bool(fn()) for name, fn in CHECKS.items() if name != "kronecker"}
    return {"kronecker": check_kronecker(seed), **results}
