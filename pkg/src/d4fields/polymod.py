"""Polynomials over F_p and factorization patterns.

Coefficient lists are little-endian: ``(c0, c1, ..., cn)`` is
c0 + c1 x + ... + cn x^n, with cn != 0 (the zero polynomial is ``()``).

Only degree patterns are ever needed downstream, so ``factor_mod_p``
runs distinct-degree factorization and stops there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotSquarefreeError


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class PolyModP:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise DomainError(f"PolyModP needs an odd prime, got {self.p}")
        object.__setattr__(self, "coeffs", _trim([int(c) % self.p for c in self.coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def monic(self) -> PolyModP:
        if not self.coeffs:
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return PolyModP(self.p, tuple(c * inv for c in self.coeffs))

    def derivative(self) -> PolyModP:
        return PolyModP(self.p, tuple(i * c for i, c in enumerate(self.coeffs))[1:])


def _sub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim([(x - y) % p for x, y in zip(f, g)])


def _mul(f, g, p):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k] * inv % p
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                f[k - dg + j] = (f[k - dg + j] - c * g[j]) % p
    return _trim(q), _trim(f[:dg])


def _mod(f, g, p):
    return _divmod(f, g, p)[1]


def _gcd(f, g, p):
    while g:
        f, g = g, _mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = tuple(c * inv % p for c in f)
    return f


def _powmod(f, e, m, p):
    result = (1,)
    f = _mod(f, m, p)
    while e:
        if e & 1:
            result = _mod(_mul(result, f, p), m, p)
        f = _mod(_mul(f, f, p), m, p)
        e >>= 1
    return result


def factor_mod_p(f: PolyModP) -> tuple[int, ...]:
    """Sorted degrees of the irreducible factors of a square-free f over F_p."""
    p = f.p
    g = f.monic().coeffs
    if len(g) < 2:
        raise DomainError("factor_mod_p needs a polynomial of degree >= 1")
    if len(_gcd(g, f.derivative().coeffs, p)) > 1:
        raise NotSquarefreeError(f"polynomial {f.coeffs} is not square-free mod {p}")
    degrees: list[int] = []
    x = (0, 1)
    h = x
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, g, p)
        common = _gcd(_sub(h, x, p), g, p)
        k = len(common) - 1
        if k:
            degrees.extend([d] * (k // d))
            g = _divmod(g, common, p)[0]
            h = _mod(h, g, p)
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return tuple(sorted(degrees))


def count_roots_mod_p(f: PolyModP) -> int:
    """Number of distinct roots of f in F_p."""
    g = f.monic().coeffs
    xp = _powmod((0, 1), f.p, g, f.p)
    return len(_gcd(_sub(xp, (0, 1), f.p), g, f.p)) - 1


# Vectorized path: many primes, one fixed monic quartic over Z.

def _mulmod_quartic(u, v, tail, p):
    """(u * v) mod (x^4 + tail) for coefficient-array lists of length 4."""
    prod = [np.zeros_like(p) for _ in range(7)]
    for i in range(4):
        for j in range(4):
            prod[i + j] = (prod[i + j] + u[i] * v[j] % p) % p
    # x^4 = -(t0 + t1 x + t2 x^2 + t3 x^3)
    for k in range(6, 3, -1):
        c = prod[k]
        for j in range(4):
            prod[k - 4 + j] = (prod[k - 4 + j] - c * tail[j] % p) % p
    return prod[:4]


def quartic_frobenius_traces(coeffs, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Traces of Frobenius and its square on F_p[x]/(f), for every p in primes.

    f is a monic integer quartic (little-endian, length 5). For square-free f mod p
    the trace of a -> a^p counts linear factors, and the trace of its square counts
    linear factors plus twice the quadratic ones. Values are reduced mod p.
    Needs every p < 2**31.
    """
    if len(coeffs) != 5 or coeffs[4] != 1:
        raise DomainError("expected a monic quartic")
    p = np.asarray(primes, dtype=np.int64)
    if p.size and p.max() >= 2**31:
        raise DomainError("batch arithmetic needs p < 2**31")
    tail = [np.int64(int(c)) % p for c in coeffs[:4]]
    zero = np.zeros_like(p)
    one = np.ones_like(p) % p
    base = [zero, one, zero, zero]
    result = [one, zero, zero, zero]
    e = p.copy()
    while np.any(e):
        odd = (e & 1).astype(bool)
        stepped = _mulmod_quartic(result, base, tail, p)
        result = [np.where(odd, s, r) for s, r in zip(stepped, result)]
        base = _mulmod_quartic(base, base, tail, p)
        e >>= 1
    xp = result
    xp2 = _mulmod_quartic(xp, xp, tail, p)
    xp3 = _mulmod_quartic(xp2, xp, tail, p)
    # column j of the Frobenius matrix holds x^(j p)
    cols = [[one, zero, zero, zero], xp, xp2, xp3]
    tr1 = (cols[0][0] + cols[1][1] + cols[2][2] + cols[3][3]) % p
    tr2 = np.zeros_like(p)
    for i in range(4):
        for j in range(4):
            tr2 = (tr2 + cols[j][i] * cols[i][j] % p) % p
    return tr1, tr2


def cycle_types_from_traces(tr1: np.ndarray, tr2: np.ndarray) -> list[tuple[int, ...]]:
    """Decode degree patterns of square-free quartics from Frobenius traces (p >= 5)."""
    out = []
    for t1, t2 in zip(tr1.tolist(), tr2.tolist()):
        n2 = (t2 - t1) // 2
        rest = 4 - t1 - 2 * n2
        degs = [1] * t1 + [2] * n2 + ([rest] if rest else [])
        out.append(tuple(sorted(degs)))
    return out
