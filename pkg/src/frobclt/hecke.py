"""Combinatorics of moments of Hecke eigenvalues in the level aspect.

The Hecke relation a(p^j) = a(p) a(p^(j-1)) - a(p^(j-2)) lets every power of
a(p) be written in the basis a(p^j):

    a(p)^n = sum_j h_n(j) a(p^j).

Averaged over an orthogonal basis of S_k(N), only a(1) survives at leading
order (Serre), so h_n(0) carries the main term; that makes the normalized
r-th moment of sum_p a(p) / sqrt(pi(x)) equal to the Gaussian moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceError
from .moments import MAIN, gaussian_moment, multinomial_term_audit

MAX_EXPANSION = 30
PSI_CAP = 10**12


@dataclass(frozen=True)
class HeckePowerExpansion:
    n: int
    coeffs: tuple[int, ...]  # h_n(0..n)

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j <= self.n else 0


def hecke_power_expand(n: int) -> HeckePowerExpansion:
    """h_n(j) via h_{n+1}(j) = h_n(j-1) + h_n(j+1), from t U_j = U_{j+1} + U_{j-1}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_EXPANSION:
        raise OverflowError(f"n={n} exceeds supported maximum {MAX_EXPANSION}")
    h = [1]
    for m in range(n):
        nxt = [0] * (m + 2)
        for j, c in enumerate(h):
            if c:
                nxt[j + 1] += c
                if j >= 1:
                    nxt[j - 1] += c
        h = nxt
    return HeckePowerExpansion(n, tuple(h))


def _factor(N: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= N:
        while N % p == 0:
            out[p] = out.get(p, 0) + 1
            N //= p
        p += 1 if p == 2 else 2
    if N > 1:
        out[N] = out.get(N, 0) + 1
    return out


def psi(N: int) -> int:
    """Index of Gamma_0(N) in SL2(Z): N prod_{l | N} (1 + 1/l)."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be a positive integer")
    if N > PSI_CAP:
        raise ResourceError(f"N={N} exceeds factorization cap {PSI_CAP}")
    out = N
    for l in _factor(N):
        out = out // l * (l + 1)
    return out


def dimension_main_term(N: int, k: int) -> float:
    """(k - 1) psi(N) / 12."""
    if k < 2:
        raise ValueError("weight must be >= 2")
    return (k - 1) * psi(N) / 12.0


def serre_main_term(n: int, N: int, k: int) -> float:
    """((k - 1)/12) n^(-1/2) psi(N) when n is a square with sqrt(n) prime to N, else 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 2:
        raise ValueError("weight must be >= 2")
    root = math.isqrt(n)
    if root * root != n or math.gcd(root, N) != 1:
        return 0.0
    return (k - 1) / 12.0 * psi(N) / root


def _integer_partitions(r: int, largest: int | None = None):
    if r == 0:
        yield ()
        return
    for first in range(min(r, largest or r), 0, -1):
        for rest in _integer_partitions(r - first, first):
            yield (first,) + rest


def hecke_moment_main_term(r: int) -> Fraction:
    """Leading coefficient of the r-th moment of sum_{p <= x} a_f(p) / sqrt(pi(x)).

    Expanding (sum_p a(p))^r groups the r factors into u distinct primes with
    multiplicities r_1..r_u.  The count of prime tuples is pi(x)^u, so only
    compositions with u = r/2 reach the scale pi(x)^(r/2), and among those
    only all-2 ones have every h_{r_i}(0) nonzero.  Each set partition of the r
    factors into such blocks contributes prod h_{r_i}(0).
    """
    if r < 0 or r > 12:
        raise ValueError("r must be in 0..12")
    if r == 0:
        return Fraction(1)
    total = Fraction(0)
    for parts in _integer_partitions(r):
        if multinomial_term_audit(r, parts, len(parts)) != MAIN:
            continue
        # labelled set partitions with these block sizes
        count = math.factorial(r)
        for size in parts:
            count //= math.factorial(size)
        for size in set(parts):
            count //= math.factorial(parts.count(size))
        weight = 1
        for size in parts:
            weight *= hecke_power_expand(size)[0]
        total += count * weight
    if total != gaussian_moment(r):
        raise ArithmeticError(f"moment bookkeeping gave {total}, expected {gaussian_moment(r)}")
    return total
