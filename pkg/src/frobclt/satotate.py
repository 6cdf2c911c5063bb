"""Horizontal and vertical Sato-Tate style moments.

Horizontal: for one field, (1/pi(x)) sum_{p <= x} a(p)^r tends to n_r, the
multiplicity of the trivial representation in rho^r.

Vertical: across a family at a fixed prime p, the average of a(p)^r is
n_r/(1 + f(p)) up to O(1/p).

For holomorphic eigenforms the vertical law at p is the measure

    (2/pi) (1 + 1/p) sin^2 t / ((1 - 1/p)^2 + (4/p) sin^2 t) dt   on [0, pi],

whose moments of (2 cos t)^n are computed here by composite Gauss-Legendre
quadrature with dyadic panel refinement.  As p -> infinity it becomes the
semicircle law (2/pi) sin^2 t dt with Catalan moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .densities import normalize_group, ramification_mass, GROUP_DEGREE
from .errors import QuadratureError
from .frobenius import TraceFamily, TraceSeries
from .moments import UNRESOLVED_CAP, _check_unresolved
from .symchar import trivial_multiplicity

MIN_PANELS = 64
QUAD_TOL = 1e-9
MAX_REFINEMENTS = 12
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)


def horizontal_moment(series: TraceSeries, r: int, unresolved_cap: float = UNRESOLVED_CAP) -> float:
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    pi = series.pi
    if pi < 1:
        raise ValueError("horizontal moment needs at least one prime")
    if r == 0:
        return 1.0
    _check_unresolved(series.unresolved_count, pi, unresolved_cap)
    a = series.a[~series.unresolved].astype(np.float64)
    return float(np.sum(a**r) / pi)


def _column(family, p: int):
    """a(p) values of resolved members at p, plus the unresolved count."""
    if isinstance(family, TraceFamily):
        j = family.prime_column(p)
        codes = family.codes[:, j]
        ok = codes >= 0
        return family.trace_table[codes[ok]].astype(np.float64), int((~ok).sum())
    values, unresolved = [], 0
    for s in family:
        idx = np.searchsorted(s.primes, p)
        if idx >= s.primes.size or s.primes[idx] != p:
            raise ValueError(f"series {s.field_id!r} has no entry at p={p}")
        if s.unresolved[idx]:
            unresolved += 1
        else:
            values.append(float(s.a[idx]))
    return np.array(values), unresolved


def vertical_moment(family, p: int, r: int, with_stderr: bool = False):
    """Family average of a(p)^r over members resolved at p."""
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    values, _ = _column(family, int(p))
    if values.size == 0:
        raise ValueError("family is empty (or unresolved) at this prime")
    powers = values**r
    mean = float(powers.mean())
    if not with_stderr:
        return mean
    se = float(powers.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else float("nan")
    return mean, se


def vertical_reference(group, p: int, r: int) -> Fraction:
    """n_r / (1 + f(p))."""
    group = normalize_group(group)
    n = GROUP_DEGREE[group]
    n_r = 1 if r == 0 else trivial_multiplicity(n, r)
    return Fraction(n_r) / (1 + ramification_mass(group, p))


# ---------------------------------------------------------------------------
# measure moments


@dataclass(frozen=True)
class MeasureMomentRequest:
    p: float  # math.inf for the semicircle limit
    n: int
    panels: int = MIN_PANELS

    def __post_init__(self):
        if not (self.p == math.inf or self.p >= 2):
            raise ValueError("p must be >= 2 or infinity")
        if self.panels < MIN_PANELS:
            raise ValueError(f"resolution must be at least {MIN_PANELS} panels")
        if self.n < 0:
            raise ValueError("moment order must be nonnegative")


def cdf_density(theta, p: float):
    s2 = np.sin(theta) ** 2
    if p == math.inf:
        return (2.0 / math.pi) * s2
    q = 1.0 / p
    return (2.0 / math.pi) * (1.0 + q) * s2 / ((1.0 - q) ** 2 + 4.0 * q * s2)


def _composite(f, panels: int) -> float:
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    return float(np.sum(half[:, None] * _WEIGHTS[None, :] * f(pts)))


def cdf_measure_moment(req: MeasureMomentRequest | float, n: int | None = None, tol: float = QUAD_TOL) -> float:
    """Integral of (2 cos t)^n against the vertical measure at p (or the semicircle law)."""
    if not isinstance(req, MeasureMomentRequest):
        req = MeasureMomentRequest(req, int(n))
    if req.n % 2:
        return 0.0

    def integrand(t):
        return (2.0 * np.cos(t)) ** req.n * cdf_density(t, req.p)

    panels = req.panels
    prev = _composite(integrand, panels)
    for _ in range(MAX_REFINEMENTS):
        panels *= 2
        cur = _composite(integrand, panels)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise QuadratureError(f"no convergence to {tol} for p={req.p}, n={req.n} after {panels} panels")


def semicircle_moment(n: int) -> int:
    """Catalan number C_{n/2} for even n, else 0."""
    if n % 2:
        return 0
    m = n // 2
    return math.comb(2 * m, m) // (m + 1)
