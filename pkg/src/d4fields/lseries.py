"""Chebotarev counts and the local factorization of the Dedekind zeta of the closure.

For an unramified p with Frobenius of order f, the closure has 8/f primes of
residue degree f above p, so its local zeta factor is (1 - T^f)^(-8/f) with
T = p^-s. That must equal the product over the irreducible characters rho of
det(1 - rho(Frob_p) T)^(-dim rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

import numpy as np

from .arith import kronecker, log_integral
from .dihedral import (
    CHARACTER_DIMS,
    CHARACTER_NAMES,
    CLASSES,
    ConjugacyClass,
    character_table,
    rho_charpoly,
)
from .errors import DomainError, InadmissiblePrimeError
from .frobenius import FrobeniusTable, artin_symbol, scan_primes
from .polymod import PolyModP, factor_mod_p
from .quartic import D4Field

SCHEMA = "d4/v1"


@dataclass(frozen=True)
class ChebotarevReport:
    x: float
    counts: dict[ConjugacyClass, int]
    weighted: dict[ConjugacyClass, float]
    expected: dict[ConjugacyClass, float]
    normalized_error: dict[ConjugacyClass, float]
    excluded: list[int]
    total_odd_primes: int
    field: dict = field(default_factory=dict)

    @property
    def admissible_total(self) -> int:
        return sum(self.counts.values())

    def proportions(self) -> dict[ConjugacyClass, float]:
        n = self.admissible_total
        return {c: self.counts[c] / n for c in CLASSES}

    def max_proportion_deviation(self) -> float:
        props = self.proportions()
        return max(abs(props[c] - c.size / 8) for c in CLASSES)

    def as_dict(self) -> dict:
        def by_class(d):
            return {c.value: d[c] for c in CLASSES}

        return {
            "schema": SCHEMA,
            "kind": "chebotarev",
            "field": self.field,
            "x": self.x,
            "total_odd_primes": self.total_odd_primes,
            "excluded": self.excluded,
            "class_sizes": {c.value: c.size for c in CLASSES},
            "counts": by_class(self.counts),
            "weighted": by_class(self.weighted),
            "expected": by_class(self.expected),
            "normalized_error": by_class(self.normalized_error),
            "proportions": by_class(self.proportions()),
            "max_proportion_deviation": self.max_proportion_deviation(),
        }


def chebotarev_report(
    K: D4Field, x: float, threads: int | None = None, table: FrobeniusTable | None = None
) -> ChebotarevReport:
    """pi_C(x) and psi_C(x) for each class, against (|C|/8) Li(x)."""
    if x < 10:
        raise DomainError("chebotarev_report needs x >= 10")
    if table is None:
        table = scan_primes(K, x, threads)
    counts = table.class_counts()
    logs = np.log(table.p.astype(np.float64))
    adm = table.admissible
    weighted = {}
    for i, c in enumerate(CLASSES):
        weighted[c] = float(logs[adm & (table.cls == i)].sum())
    # prime powers p^k <= x, k >= 2: Frob_p^k lies in the k-th power class
    for p, ci in zip(table.p[adm].tolist(), table.cls[adm].tolist()):
        if p * p > x:
            break
        cls = CLASSES[ci]
        pk, k = p * p, 2
        while pk <= x:
            weighted[cls.power(k)] += math.log(p)
            pk *= p
            k += 1
    li = log_integral(x)
    scale = x / math.log(x) ** 2
    expected = {c: c.size / 8 * li for c in CLASSES}
    err = {c: abs(counts[c] - expected[c]) / (c.size / 8 * scale) for c in CLASSES}
    return ChebotarevReport(
        x=float(x),
        counts=counts,
        weighted=weighted,
        expected=expected,
        normalized_error=err,
        excluded=table.excluded,
        total_odd_primes=len(table),
        field=K.as_dict(),
    )


@dataclass(frozen=True)
class D4CharacterTable:
    values: dict[str, dict[ConjugacyClass, int]]
    dims: dict[str, int]

    def orthogonality_ok(self) -> bool:
        """Row orthogonality over classes and column orthogonality over characters."""
        for u in CHARACTER_NAMES:
            for v in CHARACTER_NAMES:
                s = sum(c.size * self.values[u][c] * self.values[v][c] for c in CLASSES)
                if s != (8 if u == v else 0):
                    return False
        for c in CLASSES:
            for d in CLASSES:
                s = sum(self.values[u][c] * self.values[u][d] for u in CHARACTER_NAMES)
                if s != (8 // c.size if c == d else 0):
                    return False
        return True

    def regular_ok(self) -> bool:
        """sum_rho dim(rho) chi_rho(g) = 8 [g = 1] on every class."""
        return all(
            sum(self.dims[u] * self.values[u][c] for u in CHARACTER_NAMES)
            == (8 if c is ConjugacyClass.ID else 0)
            for c in CLASSES
        )


def d4_character_table() -> D4CharacterTable:
    return D4CharacterTable(character_table(), dict(CHARACTER_DIMS))


def _pmul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _ppow(f: list[int], e: int) -> list[int]:
    return reduce(_pmul, [f] * e, [1])


@dataclass(frozen=True)
class EulerCheck:
    p: int
    cls: ConjugacyClass
    residue_degree: int
    field_side: tuple[int, ...]
    artin_side: tuple[int, ...]

    @property
    def equal(self) -> bool:
        return self.field_side == self.artin_side


def euler_factors(K: D4Field, p: int) -> EulerCheck:
    """Both sides of the local identity as reciprocal polynomials in T (integer coefficients)."""
    if not K.is_admissible(p):
        raise InadmissiblePrimeError(f"p={p} is not admissible")
    # field side: Frobenius order from the factorization mod p alone
    f = lcm(*factor_mod_p(PolyModP(p, K.poly)))
    field_side = _ppow([1] + [0] * (f - 1) + [-1], 8 // f)
    # Artin side: Kronecker values for the linear characters, rho on the assigned class
    rec = artin_symbol(K, p)
    linear = [1, kronecker(K.discs[0], p), kronecker(K.discs[1], p), kronecker(K.discs[2], p)]
    artin = [1]
    for v in linear:
        artin = _pmul(artin, [1, -v])
    artin = _pmul(artin, _ppow(rho_charpoly(rec.cls), CHARACTER_DIMS["rho"]))
    return EulerCheck(p, rec.cls, f, tuple(field_side), tuple(artin))


def local_euler_check(K: D4Field, p: int) -> bool:
    return euler_factors(K, p).equal


def rho_coefficients(K: D4Field, x: float, threads: int | None = None) -> list[tuple[int, int]]:
    """(p, trace rho(Frob_p)) for admissible p <= x."""
    if x < 2:
        raise DomainError("rho_coefficients needs x >= 2")
    table = scan_primes(K, x, threads) if x >= 3 else None
    if table is None:
        return []
    traces = np.array([character_table()["rho"][c] for c in CLASSES], dtype=np.int64)
    adm = table.admissible
    return list(zip(table.p[adm].tolist(), traces[table.cls[adm]].tolist()))

