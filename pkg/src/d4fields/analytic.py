"""Parameter formulas for the effective Chebotarev bound, split-prime counts and class groups.

C0, C1 and C5 are unspecified absolute constants. They are inputs here
(default 1.0) and every number derived from them is non-normative.
kappa1 and the x-threshold overflow doubles for any reasonable eps0, so
they are carried as natural logarithms.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .dihedral import ConjugacyClass
from .errors import DomainError, IngestError
from .frobenius import FrobeniusTable, scan_primes
from .normcond import phi
from .quartic import BiquadraticContext, D4Field, build_field

CLASS_GROUP_COLUMNS = ("a", "b", "g", "h", "disc_exact", "invariant_factors", "provenance")


@dataclass(frozen=True)
class AnalyticConfig:
    eps0: float = 0.1
    C0: float = 1.0
    C1: float = 1.0
    C5: float = 1.0
    beta_max: float = 0.75

    def __post_init__(self):
        if not 0 < self.eps0 < 0.25:
            raise DomainError(f"eps0 must lie in (0, 1/4), got {self.eps0}")
        if min(self.C0, self.C1, self.C5) <= 0:
            raise DomainError("C0, C1, C5 must be positive")
        if not 0 < self.beta_max < 1:
            raise DomainError("beta_max must lie in (0, 1)")
        if self.delta >= 1 - self.beta_max:
            raise DomainError(
                f"delta = {self.delta:.6g} must be below 1 - beta_max = {1 - self.beta_max:.6g}"
            )

    @property
    def delta(self) -> float:
        return delta_of(self.eps0)


def delta_of(eps0: float) -> float:
    return eps0 / (42 + 4 * eps0)


@dataclass(frozen=True)
class ThresholdReport:
    delta: float
    q_max: int
    C6: float
    T0: float
    log_kappa1: float
    kappa2: float
    kappa3: float
    config: AnalyticConfig = field(repr=False)

    @property
    def kappa1(self) -> float:
        """kappa1 itself; inf when it overflows a double."""
        try:
            return math.exp(self.log_kappa1)
        except OverflowError:
            return math.inf

    def log_x_threshold(self, D: float) -> float:
        """log of kappa1 exp[kappa2 (log log D^kappa3)^2] for a closure discriminant D > 1."""
        if D <= 1:
            raise DomainError("D must exceed 1")
        return self.log_kappa1 + self.kappa2 * math.log(self.kappa3 * math.log(D)) ** 2

    def zero_free_boundary(self, t: float) -> float:
        """Left edge of the combined zero-free region at height t."""
        c = self.config
        return max(1 - c.C0 / math.log(self.q_max * (abs(t) + 3)), 1 - self.delta)

    def as_dict(self) -> dict:
        return {
            "schema": "d4/v1",
            "kind": "thresholds",
            "config": {
                "eps0": self.config.eps0,
                "C0": self.config.C0,
                "C1": self.config.C1,
                "C5": self.config.C5,
                "beta_max": self.config.beta_max,
                "note": "C0, C1, C5 are placeholders for unspecified absolute constants",
            },
            "delta": self.delta,
            "q_max": self.q_max,
            "C6": self.C6,
            "T0": self.T0,
            "log_kappa1": self.log_kappa1,
            "log10_kappa1": self.log_kappa1 / math.log(10),
            "kappa2": self.kappa2,
            "kappa3": self.kappa3,
        }


def thresholds(cfg: AnalyticConfig, ctx: BiquadraticContext) -> ThresholdReport:
    d = cfg.delta
    q = ctx.q_max
    C6 = 21760 / cfg.C5
    try:
        T0 = math.exp(cfg.C0 / d) / q - 3
    except OverflowError:
        T0 = math.inf
    log_k1 = math.log(40) + math.log(C6) / d - (2 / d) * math.log(d)
    k2 = max(4 / d, 8 / (cfg.C0 * d)) + 4
    k3 = (480 * cfg.C1) ** 0.2 * max(2 * q, C6**0.25 * d**-0.5)
    return ThresholdReport(d, q, C6, T0, log_k1, k2, k3, cfg)


@dataclass(frozen=True)
class EVReport:
    ell: int
    eta: float
    disc_bound: int
    cutoff: float
    M: int
    split_primes: list[int]
    implied_exponent: float | None
    target_exponent: Fraction

    def as_dict(self) -> dict:
        return {
            "schema": "d4/v1",
            "kind": "ev",
            "ell": self.ell,
            "eta": self.eta,
            "disc_bound": self.disc_bound,
            "disc_note": "disc_bound >= D_K stands in for D_K, so the cutoff is never smaller",
            "cutoff": self.cutoff,
            "M": self.M,
            "split_primes": self.split_primes,
            "implied_exponent": self.implied_exponent,
            "target_exponent": str(self.target_exponent),
            "target_exponent_float": float(self.target_exponent),
        }


def torsion_exponent(ell: int) -> Fraction:
    """1/2 - 1/(6 ell)."""
    if ell < 1:
        raise DomainError("ell must be a positive integer")
    return Fraction(1, 2) - Fraction(1, 6 * ell)


def ev_split_count(
    K: D4Field, ell: int, eta: float, table: FrobeniusTable | None = None
) -> EVReport:
    """Admissible primes p <= disc_bound^eta that split completely in K."""
    if ell < 1:
        raise DomainError("ell must be a positive integer")
    if not 0 < eta < 1 / (6 * ell):
        raise DomainError(f"eta must lie in (0, 1/(6 ell)) = (0, {1 / (6 * ell):.6g})")
    D = K.disc_bound
    cutoff = D**eta
    if table is None:
        table = scan_primes(K, max(cutoff, 2.0))
    sel = table.admissible & (table.p <= cutoff)
    sel &= table.cls == list(ConjugacyClass).index(ConjugacyClass.ID)
    split = table.p[sel].tolist()
    M = len(split)
    implied = math.log(math.sqrt(D) / M) / math.log(D) if M else None
    return EVReport(ell, eta, D, cutoff, M, split, implied, torsion_exponent(ell))


@dataclass(frozen=True)
class ClassGroupRecord:
    a: int
    b: int
    g: int
    h: int
    disc_exact: int
    invariant_factors: tuple[int, ...]
    provenance: str

    @property
    def class_number(self) -> int:
        return math.prod(self.invariant_factors)

    def torsion(self, ell: int) -> int:
        """|Cl[ell]| = prod gcd(f, ell) over invariant factors f."""
        return math.prod(math.gcd(f, ell) for f in self.invariant_factors)


def _parse_record(row: dict, lineno: int) -> ClassGroupRecord:
    missing = [c for c in CLASS_GROUP_COLUMNS if row.get(c) in (None, "")]
    if missing and missing != ["invariant_factors"]:
        raise IngestError(f"line {lineno}: missing {missing}")
    try:
        factors = tuple(int(f) for f in row["invariant_factors"].split(";") if f.strip())
        rec = ClassGroupRecord(
            int(row["a"]),
            int(row["b"]),
            int(row["g"]),
            int(row["h"]),
            int(row["disc_exact"]),
            factors,
            row["provenance"].strip(),
        )
    except ValueError as exc:
        raise IngestError(f"line {lineno}: {exc}") from None
    if rec.disc_exact <= 0 or any(f < 1 for f in factors):
        raise IngestError(f"line {lineno}: disc_exact and invariant factors must be positive")
    if any(y % x for x, y in zip(factors, factors[1:])):
        raise IngestError(f"line {lineno}: invariant factors {factors} do not divide successively")
    return rec


def read_class_groups(path) -> Iterator[ClassGroupRecord]:
    """Stream records; an empty file yields nothing."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return
        if tuple(reader.fieldnames) != CLASS_GROUP_COLUMNS:
            raise IngestError(
                f"expected header {','.join(CLASS_GROUP_COLUMNS)}, got {','.join(reader.fieldnames)}"
            )
        for row in reader:
            if None in row:
                raise IngestError(f"line {reader.line_num}: too many fields")
            yield _parse_record(row, reader.line_num)


def match_family_member(rec: ClassGroupRecord) -> D4Field:
    """The family member K_[m] with generator (g, h), or IngestError."""
    try:
        ctx = BiquadraticContext(rec.a, rec.b)
        triple = phi(rec.a, rec.b)
    except DomainError as exc:
        raise IngestError(f"({rec.a}, {rec.b}): {exc}") from None
    if rec.h % triple.h0 == 0:
        m = rec.h // triple.h0
        if m >= 1 and rec.g == triple.g0 * m:
            try:
                return build_field(ctx, triple, m)
            except DomainError:
                pass
    raise IngestError(
        f"unmatched field key (a, b, g, h) = ({rec.a}, {rec.b}, {rec.g}, {rec.h})"
    )


def ingest_class_groups(path, ells=(1, 2, 3, 4, 5)) -> list[dict]:
    """Per-record torsion ratios log|Cl[ell]| / log D against 1/2 - 1/(6 ell). Reports, never asserts."""
    report = []
    for rec in read_class_groups(path):
        K = match_family_member(rec)
        flags = []
        if rec.disc_exact > K.disc_bound:
            flags.append("disc_exact exceeds the lattice discriminant bound")
        logD = math.log(rec.disc_exact) if rec.disc_exact > 1 else None
        rows = []
        for ell in ells:
            t = rec.torsion(ell)
            if t > rec.class_number:
                flags.append(f"|Cl[{ell}]| > |Cl|")
            rows.append(
                {
                    "ell": ell,
                    "torsion": t,
                    "ratio": math.log(t) / logD if logD else None,
                    "target_exponent": str(torsion_exponent(ell)),
                }
            )
        report.append(
            {
                "key": {"a": rec.a, "b": rec.b, "g": rec.g, "h": rec.h},
                "m": K.m,
                "disc_exact": rec.disc_exact,
                "disc_bound": K.disc_bound,
                "class_number": rec.class_number,
                "provenance": rec.provenance,
                "torsion": rows,
                "flags": flags,
            }
        )
    return report
