"""Normalized prime sums of Artin traces and their moments over a family.

For a field (or a synthetic sample) the statistic is

    S = sum_{p <= x} a(p) / sqrt(pi(x)),

and the family moments E[S^r] are compared with the Gaussian moments
r!/((r/2)! 2^(r/2)).

Synthetic families draw the splitting symbol at each prime independently from
the local density table.  Randomness comes from a Philox counter-based
generator keyed by (seed, p), so every prime has its own reproducible stream
and results do not depend on chunking or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .densities import admissible_symbols, density, normalize_group, GROUP_DEGREE
from .errors import DataQualityError
from .frobenius import TraceFamily, TraceSeries, artin_trace, sieve_primes
from .symchar import class_size

MAX_GAUSSIAN_ORDER = 30
MAX_FAMILY_ORDER = 12
UNRESOLVED_CAP = 0.01


def gaussian_moment(r: int) -> Fraction:
    r = int(r)
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r > MAX_GAUSSIAN_ORDER:
        raise OverflowError(f"order {r} exceeds supported maximum {MAX_GAUSSIAN_ORDER}")
    if r % 2:
        return Fraction(0)
    h = r // 2
    return Fraction(math.factorial(r), math.factorial(h) * 2**h)


# ---------------------------------------------------------------------------
# statistics


def _check_unresolved(unresolved: int, pi: int, cap: float):
    if unresolved >= cap * pi and unresolved > 0:
        raise DataQualityError(f"{unresolved} of {pi} primes unresolved (cap {cap:.0%})")


def normalized_statistic(series: TraceSeries, unresolved_cap: float = UNRESOLVED_CAP) -> float:
    pi = series.pi
    if pi < 1:
        raise ValueError("statistic needs at least one prime (x >= 2)")
    _check_unresolved(series.unresolved_count, pi, unresolved_cap)
    total = int(series.a[~series.unresolved].astype(np.int64).sum())
    return total / math.sqrt(pi)


def family_statistics(family, unresolved_cap: float = UNRESOLVED_CAP) -> np.ndarray:
    """Statistic of every member; accepts a TraceFamily or a sequence of TraceSeries."""
    if isinstance(family, TraceFamily):
        pi = family.primes.size
        if pi < 1:
            raise ValueError("statistic needs at least one prime (x >= 2)")
        unresolved = family.unresolved.sum(axis=1)
        worst = int(unresolved.max()) if len(family) else 0
        _check_unresolved(worst, pi, unresolved_cap)
        sums = family.a.astype(np.int64).sum(axis=1)
        return sums / math.sqrt(pi)
    return np.array([normalized_statistic(s, unresolved_cap) for s in family], dtype=float)


@dataclass(frozen=True)
class MomentReport:
    r: int
    empirical: float
    reference: Fraction
    deviation: float
    family_size: int
    x: int | None
    stderr: float

    def csv(self) -> str:
        return f"{self.r},{self.empirical:.10g},{float(self.reference):.10g},{self.deviation:.10g},{self.stderr:.10g}"


def moments_from_statistics(stats: np.ndarray, R: int, x: int | None = None) -> list[MomentReport]:
    stats = np.asarray(stats, dtype=float)
    if stats.size == 0:
        raise ValueError("family is empty")
    if not 1 <= R <= MAX_FAMILY_ORDER:
        raise ValueError(f"R must be in 1..{MAX_FAMILY_ORDER}")
    n = stats.size
    out = []
    power = np.ones_like(stats)
    for r in range(1, R + 1):
        power = power * stats
        m = float(np.sum(power) / n)  # numpy's pairwise summation fixes the order
        se = float(np.std(power, ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
        ref = gaussian_moment(r)
        out.append(MomentReport(r, m, ref, abs(m - float(ref)), n, x, se))
    return out


def family_moments(family, R: int, unresolved_cap: float = UNRESOLVED_CAP) -> list[MomentReport]:
    if isinstance(family, np.ndarray) and family.dtype.kind == "f":
        return moments_from_statistics(family, R)
    if not isinstance(family, TraceFamily):
        family = list(family)
    if len(family) == 0:
        raise ValueError("family is empty")
    x = family.x if isinstance(family, TraceFamily) else family[0].x
    return moments_from_statistics(family_statistics(family, unresolved_cap), R, x)


# ---------------------------------------------------------------------------
# exact local moments


@lru_cache(maxsize=4096)
def local_distribution(group, p: int, include_ramified: bool = True) -> tuple[tuple, tuple]:
    """(symbols, exact probabilities) at p; unramified-only mode renormalizes to |C|/|G|."""
    group = normalize_group(group)
    symbols = admissible_symbols(group)
    if include_ramified:
        probs = tuple(density(group, s, p) for s in symbols)
    else:
        order = math.factorial(GROUP_DEGREE[group])
        probs = tuple(Fraction(class_size(s.cycle_type()), order) if s.is_unramified() else Fraction(0) for s in symbols)
    return symbols, probs


def local_trace_moment(group, p: int, r: int, include_ramified: bool = True) -> Fraction:
    """E[a(p)^r] under the local measure."""
    symbols, probs = local_distribution(group, p, include_ramified)
    return sum((q * Fraction(artin_trace(s)) ** r for s, q in zip(symbols, probs)), Fraction(0))


def _moments_to_cumulants(m: Sequence[float]) -> list[float]:
    # m[0] = 1; standard recursion k_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) k_j m_{n-j}
    k = [0.0] * len(m)
    for n in range(1, len(m)):
        k[n] = m[n] - sum(math.comb(n - 1, j - 1) * k[j] * m[n - j] for j in range(1, n))
    return k


def _cumulants_to_moments(k: Sequence[float]) -> list[float]:
    m = [1.0] + [0.0] * (len(k) - 1)
    for n in range(1, len(k)):
        m[n] = sum(math.comb(n - 1, j - 1) * k[j] * m[n - j] for j in range(1, n + 1))
    return m


def exact_statistic_moments(group, x: int, R: int, include_ramified: bool = True) -> list[float]:
    """Moments 1..R of the statistic when symbols are independent across primes <= x."""
    primes = sieve_primes(x).primes
    if primes.size == 0:
        raise ValueError("need at least one prime")
    total = [0.0] * (R + 1)
    for p in primes:
        m = [1.0] + [float(local_trace_moment(group, int(p), r, include_ramified)) for r in range(1, R + 1)]
        for i, c in enumerate(_moments_to_cumulants(m)):
            total[i] += c
    scale = math.sqrt(primes.size)
    total = [c / scale**i for i, c in enumerate(total)]
    return _cumulants_to_moments(total)[1:]


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SamplerConfig:
    group: str
    x: int
    samples: int
    seed: int = 0
    include_ramified: bool = True

    def __post_init__(self):
        object.__setattr__(self, "group", normalize_group(self.group))
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def prime_stream(seed: int, p: int) -> np.random.Generator:
    """Independent reproducible stream for one prime."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, p], dtype=np.uint64)))


def _cumulative(group, p, include_ramified) -> np.ndarray:
    _, probs = local_distribution(group, p, include_ramified)
    cum = np.cumsum([float(q) for q in probs])
    cum[-1] = 1.0
    return cum


def sample_symbols(group, p: int, samples: int, seed: int = 0, include_ramified: bool = True) -> np.ndarray:
    """Symbol codes (indices into admissible_symbols(group)) for one prime."""
    group = normalize_group(group)
    u = prime_stream(seed, p).random(samples)
    cum = _cumulative(group, p, include_ramified)
    return np.searchsorted(cum, u, side="right").astype(np.int8)


def sample_frobenius_family(config: SamplerConfig) -> TraceFamily:
    primes = sieve_primes(config.x).primes
    codes = np.empty((config.samples, primes.size), dtype=np.int8)
    for j, p in enumerate(primes):
        codes[:, j] = sample_symbols(config.group, int(p), config.samples, config.seed, config.include_ramified)
    return TraceFamily(GROUP_DEGREE[config.group], config.x, primes, codes, admissible_symbols(config.group))


def sample_statistics(config: SamplerConfig) -> np.ndarray:
    """Statistics of sample_frobenius_family(config) without storing the symbol matrix."""
    primes = sieve_primes(config.x).primes
    if primes.size == 0:
        raise ValueError("statistic needs at least one prime (x >= 2)")
    traces = np.array([artin_trace(s) for s in admissible_symbols(config.group)], dtype=np.int64)
    sums = np.zeros(config.samples, dtype=np.int64)
    for p in primes:
        codes = sample_symbols(config.group, int(p), config.samples, config.seed, config.include_ramified)
        sums += traces[codes]
    return sums / math.sqrt(primes.size)


# ---------------------------------------------------------------------------
# multinomial bookkeeping

MAIN = "MAIN"
ERROR_TERM = "ERROR-TERM"


def multinomial_term_audit(R: int, parts: Sequence[int], u: int | None = None) -> str:
    """Classify a composition (r_1..r_u) of R in the moment expansion.

    Only the all-2 compositions contribute to the leading term; any part equal
    to 1 averages to zero, and any part above 2 costs a power of pi(x).
    """
    parts = tuple(int(r) for r in parts)
    if u is not None and u != len(parts):
        raise ValueError(f"u={u} does not match {len(parts)} parts")
    if not parts or any(r < 1 for r in parts) or sum(parts) != R:
        raise ValueError(f"{parts} is not a composition of {R}")
    return MAIN if all(r == 2 for r in parts) else ERROR_TERM
