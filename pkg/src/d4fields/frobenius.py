"""Artin symbols of unramified primes in the Galois closure of a D4 quartic.

The class of Frob_p is read off the three quadratic characters, with the
quartic's root count separating ID from R2. Every assignment is checked
against the factorization pattern of the quartic mod p; a mismatch raises
``InconsistentFrobeniusError`` and is never swallowed.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .arith import kronecker, legendre_batch, prime_sieve
from .dihedral import CLASSES, ConjugacyClass, class_from_pattern
from .errors import DomainError, InadmissiblePrimeError, InconsistentFrobeniusError
from .polymod import (
    PolyModP,
    cycle_types_from_traces,
    factor_mod_p,
    quartic_frobenius_traces,
)
from .quartic import D4Field

CSV_COLUMNS = ("p", "chi1", "chi2", "chi3", "root_count", "class", "admissible")
_CLASS_INDEX = {cls: i for i, cls in enumerate(CLASSES)}
_BATCH_MAX_P = 2**31
_EXPECTED_TR1 = np.array([c.cycle_type.count(1) for c in CLASSES], dtype=np.int64)
_EXPECTED_TR2 = np.array(
    [sum(d for d in c.cycle_type if d <= 2) for c in CLASSES], dtype=np.int64
)


@dataclass(frozen=True)
class FrobeniusRecord:
    p: int
    chi1: int
    chi2: int
    chi3: int
    root_count: int | None
    cls: ConjugacyClass | None
    admissible: bool

    def as_row(self) -> list:
        return [
            self.p,
            self.chi1,
            self.chi2,
            self.chi3,
            "" if self.root_count is None else self.root_count,
            "" if self.cls is None else self.cls.value,
            int(self.admissible),
        ]


def _chis(K: D4Field, p: int) -> tuple[int, int, int]:
    return tuple(kronecker(d, p) for d in K.discs)


def artin_symbol(K: D4Field, p: int) -> FrobeniusRecord:
    """Frobenius class of an admissible odd prime p, cross-checked against factoring mod p."""
    if not K.is_admissible(p):
        raise InadmissiblePrimeError(f"p={p} divides 2*base*target*h*n for this field")
    chis = _chis(K, p)
    degrees = factor_mod_p(PolyModP(p, K.poly))
    roots = degrees.count(1)
    cls = class_from_pattern(chis, splits=roots > 0)
    if roots != cls.fixed_points or degrees != cls.cycle_type:
        raise InconsistentFrobeniusError(
            f"p={p}: pattern {chis} gives {cls.value} but the quartic factors as {degrees}"
        )
    return FrobeniusRecord(p, *chis, roots, cls, True)


@dataclass(frozen=True)
class FrobeniusTable:
    """Column-oriented Frobenius data for all odd primes up to a cutoff."""

    p: np.ndarray
    chi: np.ndarray  # shape (n, 3), int8
    root_count: np.ndarray  # int8, -1 where inadmissible
    cls: np.ndarray  # int8 index into CLASSES, -1 where inadmissible
    admissible: np.ndarray  # bool

    def __len__(self) -> int:
        return int(self.p.size)

    def __iter__(self) -> Iterator[FrobeniusRecord]:
        for i in range(len(self)):
            adm = bool(self.admissible[i])
            yield FrobeniusRecord(
                int(self.p[i]),
                int(self.chi[i, 0]),
                int(self.chi[i, 1]),
                int(self.chi[i, 2]),
                int(self.root_count[i]) if adm else None,
                CLASSES[self.cls[i]] if adm else None,
                adm,
            )

    def class_counts(self) -> dict[ConjugacyClass, int]:
        counts = np.bincount(self.cls[self.admissible], minlength=len(CLASSES))
        return {cls: int(counts[i]) for i, cls in enumerate(CLASSES)}

    @property
    def excluded(self) -> list[int]:
        return self.p[~self.admissible].tolist()


def _batch_chunk(K: D4Field, primes: np.ndarray):
    """Kronecker pattern, root count and class for admissible primes 5 <= p < 2^31."""
    chi = np.stack([legendre_batch(d, primes) for d in K.discs], axis=1)
    tr1, tr2 = quartic_frobenius_traces(K.poly, primes)
    roots = tr1.astype(np.int8)
    cls = np.full(primes.size, -1, dtype=np.int8)
    for c in CLASSES:
        pat = np.array(c.symbol_pattern, dtype=np.int8)
        mask = np.all(chi == pat, axis=1)
        if c is ConjugacyClass.ID:
            mask &= roots == 4
        elif c is ConjugacyClass.R2:
            mask &= roots != 4
        cls[mask] = _CLASS_INDEX[c]
    # (tr F, tr F^2) determines the cycle type of a square-free quartic
    ok = cls >= 0
    ok[ok] = (tr1[ok] == _EXPECTED_TR1[cls[ok]]) & (tr2[ok] == _EXPECTED_TR2[cls[ok]])
    if not ok.all():
        bad = primes[~ok][:10].tolist()
        types = cycle_types_from_traces(tr1[~ok][:10], tr2[~ok][:10])
        raise InconsistentFrobeniusError(
            f"pattern/cycle-type mismatch at primes {bad} (types {types}) for poly {K.poly}"
        )
    return chi, roots, cls


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("D4_THREADS", 1))
    return max(1, int(threads))


def frobenius_table(
    K: D4Field, primes: np.ndarray, threads: int | None = None, chunk: int = 65536
) -> FrobeniusTable:
    """Frobenius data for the given odd primes. Output does not depend on ``threads``."""
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size and primes.min() < 3:
        raise DomainError("frobenius_table takes odd primes only")
    n = primes.size
    chi = np.zeros((n, 3), dtype=np.int8)
    roots = np.full(n, -1, dtype=np.int8)
    cls = np.full(n, -1, dtype=np.int8)
    bad_part = 2 * K.base * K.target * K.h * K.n
    if abs(bad_part) < 2**62:
        adm = (np.int64(bad_part) % primes) != 0
    else:
        adm = np.array([K.is_admissible(int(p)) for p in primes], dtype=bool)
    batch = adm & (primes >= 5) & (primes < _BATCH_MAX_P)
    scalar = adm & ~batch
    for i in np.flatnonzero(~adm):
        chi[i] = _chis(K, int(primes[i]))
    for i in np.flatnonzero(scalar):
        rec = artin_symbol(K, int(primes[i]))
        chi[i] = (rec.chi1, rec.chi2, rec.chi3)
        roots[i] = rec.root_count
        cls[i] = _CLASS_INDEX[rec.cls]
    idx = np.flatnonzero(batch)
    pieces = [idx[s : s + chunk] for s in range(0, idx.size, chunk)]
    workers = _resolve_threads(threads)
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda ix: _batch_chunk(K, primes[ix]), pieces))
    else:
        results = [_batch_chunk(K, primes[ix]) for ix in pieces]
    for ix, (c, r, k) in zip(pieces, results):
        chi[ix] = c
        roots[ix] = r
        cls[ix] = k
    return FrobeniusTable(primes, chi, roots, cls, adm)


def scan_primes(K: D4Field, x: float, threads: int | None = None) -> FrobeniusTable:
    """Frobenius data for every odd prime p <= x, ordered by p."""
    if x < 2:
        raise DomainError("scan_primes needs x >= 2")
    primes = prime_sieve(int(x))[1:]
    return frobenius_table(K, primes, threads)


def write_frobenius_csv(table: FrobeniusTable, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for rec in table:
            w.writerow(rec.as_row())


def read_frobenius_csv(path) -> list[FrobeniusRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            adm = row["admissible"] == "1"
            out.append(
                FrobeniusRecord(
                    int(row["p"]),
                    int(row["chi1"]),
                    int(row["chi2"]),
                    int(row["chi3"]),
                    int(row["root_count"]) if adm else None,
                    ConjugacyClass(row["class"]) if adm else None,
                    adm,
                )
            )
    return out
