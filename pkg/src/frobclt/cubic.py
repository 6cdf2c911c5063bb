"""Cubic fields by discriminant via reduced integral binary cubic forms.

Isomorphism classes of cubic fields correspond to GL2(Z)-classes of
irreducible binary cubic forms F = (a, b, c, d) whose ring is maximal at every
prime, with d_K = disc(F).  Each class is enumerated once as follows.

Positive discriminant.  The Hessian H = (P, Q, R) = (b^2-3ac, bc-9ad, c^2-3bd)
is positive definite with Q^2 - 4PR = -3D.  A form is reduced when
|Q| <= P <= R.  The syzygy G^2 + 27 D a^2 = 4 P^3 with P^2 <= D gives

    a <= (4/27)^(1/2) X^(1/4),   |b| <= 3a/2 + X^(1/4),
    (b^2 - sqrt X)/(3a) <= c <= (b^2 - 1)/(3a).

Negative discriminant.  With real root t, complex root w (Im w > 0),
d12 = |t - w|, d23 = 2 Im w, alpha = d23/d12^2, beta = 1/d23, the quadratic

    alpha (x - t y)^2 + beta |x - w y|^2

is GL2(Z)-covariant with determinant 5/4, and a^4 = |D| alpha^2 beta^4.
Reducedness |B| <= A <= C forces A <= (5/3)^(1/2), whence

    a <= (2000/19683 X)^(1/4),   |b| <= 3a/2 + 1.1362 X^(1/4),
    |b^2 - 3ac| <= 1.2910 sqrt X.

In both cases d is bounded by solving the discriminant (a quadratic in d) at
the two ends of the discriminant range.  Among forms whose covariant is
reduced, a form is kept only if it is the lexicographic maximum of its images
under the finitely many transformations with entries in {-1, 0, 1} that keep
the covariant reduced.  Such transformations realize every identification
between reduced forms of one class.

The loops run one unit past every bound; the driver checks that no accepted
form reaches that outer layer.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numba
import numpy as np

from .densities import SplittingSymbol
from .errors import ConsistencyError, ResourceError
from .frobenius import cubic_form_disc, form_symbol
from .threads import thread_cap

ENUMERATION_CAP = 10**8
REDUCED_TOL = 1e-9
NEG_B_SLOPE = 1.1362  # >= 2 * (5/3)^(1/2) * (16/27)^(1/4) / 2 rounded up
NEG_P_SLOPE = 1.2910  # >= (5/3)^(1/2)


@dataclass(frozen=True, order=True)
class BinaryCubicForm:
    a: int
    b: int
    c: int
    d: int

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def disc(self) -> int:
        return cubic_form_disc(self.coeffs)

    def hessian(self) -> tuple[int, int, int]:
        a, b, c, d = self.coeffs
        return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)

    def __call__(self, x, y):
        a, b, c, d = self.coeffs
        return a * x**3 + b * x * x * y + c * x * y * y + d * y**3

    def transform(self, g) -> "BinaryCubicForm":
        """F(px + qy, rx + sy) for g = (p, q, r, s)."""
        return BinaryCubicForm(*_act(*self.coeffs, *g))

    def monic_polynomial(self) -> tuple[int, int, int, int]:
        """x^3 + b x^2 + ac x + a^2 d (ascending), whose root generates the field."""
        a, b, c, d = self.coeffs
        return (a * a * d, a * c, b, 1)

    def is_irreducible(self) -> bool:
        return _irreducible(*self.coeffs)

    def __str__(self):
        return f"({self.a},{self.b},{self.c},{self.d})"


@dataclass(frozen=True)
class CubicFieldRecord:
    form: BinaryCubicForm
    d_K: int

    @property
    def signature(self) -> tuple[int, int]:
        return (3, 0) if self.d_K > 0 else (1, 1)

    @property
    def poly(self) -> tuple[int, ...]:
        return self.form.monic_polynomial()

    @property
    def degree(self) -> int:
        return 3

    @property
    def field_id(self) -> str:
        return f"{self.d_K}:{self.form.a}/{self.form.b}/{self.form.c}/{self.form.d}"

    def sort_key(self):
        return (abs(self.d_K), self.form.coeffs)


# ---------------------------------------------------------------------------
# compiled helpers


@numba.njit(cache=True, nogil=True)
def _disc(a, b, c, d):
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d


@numba.njit(cache=True, nogil=True)
def _act(a, b, c, d, p, q, r, s):
    # coefficients of F(p x + q y, r x + s y)
    A = a * p * p * p + b * p * p * r + c * p * r * r + d * r * r * r
    B = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (2 * p * r * s + q * r * r) + 3 * d * r * r * s
    C = 3 * a * p * q * q + b * (2 * p * q * s + q * q * r) + c * (p * s * s + 2 * q * r * s) + 3 * d * r * s * s
    D = a * q * q * q + b * q * q * s + c * q * s * s + d * s * s * s
    return A, B, C, D


@numba.njit(cache=True, nogil=True)
def _eval(a, b, c, d, u, v):
    return a * u * u * u + b * u * u * v + c * u * v * v + d * v * v * v


@numba.njit(cache=True, nogil=True)
def _irreducible(a, b, c, d):
    if d == 0 or a == 0:
        return False
    roots = np.roots(np.array([float(a), float(b), float(c), float(d)]).astype(np.complex128))
    aa = abs(a)
    for k in range(roots.size):
        z = roots[k]
        if abs(z.imag) > 1e-6 * (1.0 + abs(z.real)):
            continue
        for v in range(1, aa + 1):
            if aa % v:
                continue
            u0 = int(round(z.real * v))
            for u in range(u0 - 1, u0 + 2):
                if _eval(a, b, c, d, u, v) == 0:
                    return False
    return True


@numba.njit(cache=True, nogil=True)
def _maximal_at(a, b, c, d, p):
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return False
    pp = p * p
    if a % p == 0 and b % p == 0:
        return a % pp != 0
    for r in range(p):
        if _eval(a, b, c, d, r, 1) % p == 0 and (3 * a * r * r + 2 * b * r + c) % p == 0:
            return _eval(a, b, c, d, r, 1) % pp != 0
    return True


@numba.njit(cache=True, nogil=True)
def _isqrt(n):
    r = int(math.sqrt(float(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@numba.njit(cache=True, nogil=True)
def _maximal(a, b, c, d, D):
    n = abs(D)
    p = 2
    while p * p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e >= 2 and not _maximal_at(a, b, c, d, p):
                return False
        p += 1 if p == 2 else 2
    if n > 1:
        r = _isqrt(n)
        if r * r == n and not _maximal_at(a, b, c, d, r):
            return False
    return True


@numba.njit(cache=True, nogil=True)
def _root_covariant(a, b, c, d):
    """(A, B, C) of the covariant quadratic for a form with negative discriminant."""
    B0 = b / a
    C0 = c / a
    E0 = d / a
    sh = B0 / 3.0
    pp = C0 - B0 * B0 / 3.0
    qq = 2.0 * B0 * B0 * B0 / 27.0 - B0 * C0 / 3.0 + E0
    delta = qq * qq / 4.0 + pp * pp * pp / 27.0
    sq = math.sqrt(max(delta, 0.0))
    t = np.cbrt(-qq / 2.0 + sq) + np.cbrt(-qq / 2.0 - sq) - sh
    for _ in range(3):
        f = ((t + B0) * t + C0) * t + E0
        df = (3.0 * t + 2.0 * B0) * t + C0
        if df == 0.0:
            break
        t -= f / df
    u = B0 + t
    v = C0 + t * u
    re = -u / 2.0
    im = math.sqrt(max(v - u * u / 4.0, 0.0))
    d12 = math.hypot(t - re, im)
    d23 = 2.0 * im
    alpha = d23 / (d12 * d12)
    beta = 1.0 / d23
    A = alpha + beta
    B = -2.0 * (alpha * t + beta * re)
    C = alpha * t * t + beta * (re * re + im * im)
    return A, B, C


@numba.njit(cache=True, nogil=True)
def _lex_greater(a1, b1, c1, d1, a2, b2, c2, d2):
    if a1 != a2:
        return a1 > a2
    if b1 != b2:
        return b1 > b2
    if c1 != c2:
        return c1 > c2
    return d1 > d2


@numba.njit(cache=True, nogil=True)
def _is_canonical(a, b, c, d, positive, P, Q, R, fA, fB, fC, G):
    for k in range(G.shape[0]):
        p, q, r, s = G[k, 0], G[k, 1], G[k, 2], G[k, 3]
        if positive:
            P2 = P * p * p + Q * p * r + R * r * r
            Q2 = 2 * P * p * q + Q * (p * s + q * r) + 2 * R * r * s
            R2 = P * q * q + Q * q * s + R * s * s
            if not (abs(Q2) <= P2 and P2 <= R2):
                continue
        else:
            A2 = fA * p * p + fB * p * r + fC * r * r
            B2 = 2 * fA * p * q + fB * (p * s + q * r) + 2 * fC * r * s
            C2 = fA * q * q + fB * q * s + fC * s * s
            if abs(B2) - A2 > REDUCED_TOL * A2 or A2 - C2 > REDUCED_TOL * C2:
                continue
        a2, b2, c2, d2 = _act(a, b, c, d, p, q, r, s)
        if a2 < 0:
            a2, b2, c2, d2 = -a2, -b2, -c2, -d2
        if _lex_greater(a2, b2, c2, d2, a, b, c, d):
            return False
    return True


@numba.njit(cache=True, nogil=True)
def _level_roots(a, b, c, level):
    # real roots of D(d) = level, D(d) = -27a^2 d^2 + (18abc - 4b^3) d + (b^2c^2 - 4ac^3)
    al = -27.0 * a * a
    be = 18.0 * a * b * c - 4.0 * b * b * b
    ga = float(b * b * c * c - 4 * a * c * c * c) - level
    disc = be * be - 4.0 * al * ga
    if disc < 0.0:
        return 1.0, -1.0
    sq = math.sqrt(disc)
    r1 = (-be + sq) / (2.0 * al)
    r2 = (-be - sq) / (2.0 * al)
    return min(r1, r2), max(r1, r2)


@numba.njit(cache=True, nogil=True)
def _scan_ab(a, b, X, positive, c_lo, c_hi, G):
    """Accepted forms (a, b, c, d, D) for fixed (a, b)."""
    out = []
    lower = 0.0 if positive else -float(X)
    upper = float(X) if positive else 0.0
    for c in range(c_lo, c_hi + 1):
        if positive:
            P = b * b - 3 * a * c
            if P < 1:
                continue
        olo, ohi = _level_roots(a, b, c, lower)
        if olo > ohi:
            continue
        ilo, ihi = _level_roots(a, b, c, upper)
        d0 = int(math.floor(olo)) - 1
        d3 = int(math.ceil(ohi)) + 1
        if ilo <= ihi and math.floor(ilo) + 1 < math.ceil(ihi) - 1:
            d1 = int(math.floor(ilo)) + 1
            d2 = int(math.ceil(ihi)) - 1
        else:
            d1 = d3
            d2 = d3 + 1
        for d in range(d0, d3 + 1):
            if d1 < d < d2:
                continue
            D = _disc(a, b, c, d)
            if positive:
                if D <= 0 or D >= X:
                    continue
            else:
                if D >= 0 or D <= -X:
                    continue
            P = b * b - 3 * a * c
            Q = b * c - 9 * a * d
            R = c * c - 3 * b * d
            fA = fB = fC = 0.0
            if positive:
                if not (abs(Q) <= P and P <= R):
                    continue
            else:
                fA, fB, fC = _root_covariant(a, b, c, d)
                if abs(fB) - fA > REDUCED_TOL * fA or fA - fC > REDUCED_TOL * fC:
                    continue
            if not _is_canonical(a, b, c, d, positive, P, Q, R, fA, fB, fC, G):
                continue
            if not _irreducible(a, b, c, d):
                continue
            if not _maximal(a, b, c, d, D):
                continue
            out.append((a, b, c, d, D))
    res = np.empty((len(out), 5), dtype=np.int64)
    for i in range(len(out)):
        for j in range(5):
            res[i, j] = out[i][j]
    return res


def _small_transforms() -> np.ndarray:
    G = [g for g in itertools.product((-1, 0, 1), repeat=4) if abs(g[0] * g[3] - g[1] * g[2]) == 1]
    return np.array(G, dtype=np.int64)


_G0 = _small_transforms()


# ---------------------------------------------------------------------------
# box bounds


def _bounds(X: int, positive: bool):
    r4 = X**0.25
    if positive:
        amax = math.sqrt(4.0 / 27.0) * r4
        bslope = 1.0
    else:
        amax = (2000.0 / 19683.0 * X) ** 0.25
        bslope = NEG_B_SLOPE
    return amax, bslope, r4


def _c_range(a, b, X, positive):
    s = math.sqrt(X)
    if positive:
        lo, hi = (b * b - s) / (3 * a), (b * b - 1) / (3 * a)
    else:
        lo, hi = (b * b - NEG_P_SLOPE * s) / (3 * a), (b * b + NEG_P_SLOPE * s) / (3 * a)
    return math.floor(lo), math.ceil(hi)


def _tasks(X: int, positive: bool):
    amax, bslope, r4 = _bounds(X, positive)
    for a in range(1, math.floor(amax) + 2):
        bmax = math.floor(1.5 * a + bslope * r4) + 1
        for b in range(-bmax, bmax + 1):
            lo, hi = _c_range(a, b, X, positive)
            yield a, b, lo - 1, hi + 1


def _check_box(forms: np.ndarray, X: int, positive: bool):
    amax, bslope, r4 = _bounds(X, positive)
    for a, b, c, d, D in forms:
        lo, hi = _c_range(a, b, X, positive)
        if a > amax or abs(b) > 1.5 * a + bslope * r4 or not lo <= c <= hi:
            raise ConsistencyError(f"accepted form {(a, b, c, d)} with D={D} lies outside the proven box")


def _signatures(signature) -> list[bool]:
    s = str(signature).lower()
    if s in ("r", "+", "real", "(3,0)", "0"):
        return [True]
    if s in ("c", "-", "complex", "(1,1)", "1"):
        return [False]
    if s in ("all", "both", "*", "none"):
        return [True, False]
    raise ValueError(f"signature must be r, c or all; got {signature!r}")


def _scan_partition(a_value: int, tasks, X, positive) -> np.ndarray:
    parts = [_scan_ab(a, b, X, positive, lo, hi, _G0) for a, b, lo, hi in tasks if a == a_value]
    parts = [p for p in parts if p.size]
    return np.concatenate(parts) if parts else np.zeros((0, 5), dtype=np.int64)


def enumerate_forms(X: int, signature="all", checkpoint_dir=None, threads: int | None = None) -> np.ndarray:
    """Rows (a, b, c, d, D) of canonical maximal irreducible forms with 0 < |D| < X."""
    X = int(X)
    if X > ENUMERATION_CAP:
        raise ResourceError(f"bound {X} exceeds enumeration cap {ENUMERATION_CAP}")
    if X < 1:
        raise ValueError("X must be a positive integer")
    ckpt = Path(checkpoint_dir) if checkpoint_dir else None
    if ckpt:
        ckpt.mkdir(parents=True, exist_ok=True)
    workers = threads or thread_cap()
    results = []
    for positive in _signatures(signature):
        tasks = list(_tasks(X, positive))
        a_values = sorted({t[0] for t in tasks})
        tag = "r" if positive else "c"

        def run(a):
            path = ckpt / f"X{X}_{tag}_a{a}.npy" if ckpt else None
            if path and path.exists():
                return np.load(path)
            arr = _scan_partition(a, tasks, X, positive)
            if path:
                tmp = path.with_suffix(".tmp.npy")
                np.save(tmp, arr)
                os.replace(tmp, path)
            return arr

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(run, a_values))
        else:
            chunks = [run(a) for a in a_values]
        arr = np.concatenate(chunks) if chunks else np.zeros((0, 5), dtype=np.int64)
        _check_box(arr, X, positive)
        results.append(arr)
    forms = np.concatenate(results) if results else np.zeros((0, 5), dtype=np.int64)
    order = np.lexsort((forms[:, 3], forms[:, 2], forms[:, 1], forms[:, 0], np.abs(forms[:, 4])))
    return forms[order]


def enumerate_fields(X: int, signature="all", checkpoint_dir=None, threads: int | None = None) -> list[CubicFieldRecord]:
    """One record per cubic field with |d_K| < X, ordered by |d_K| then coefficients."""
    rows = enumerate_forms(X, signature, checkpoint_dir, threads)
    return [CubicFieldRecord(BinaryCubicForm(int(a), int(b), int(c), int(d)), int(D)) for a, b, c, d, D in rows]


def is_maximal_at(form, p: int) -> bool:
    a, b, c, d = (int(t) for t in getattr(form, "coeffs", form))
    return bool(_maximal_at(a, b, c, d, int(p)))


def is_maximal(form) -> bool:
    a, b, c, d = (int(t) for t in getattr(form, "coeffs", form))
    return bool(_maximal(a, b, c, d, _disc(a, b, c, d)))


def count_fields(X: int, signature, conditions: Iterable[tuple[int, SplittingSymbol]] = (), fields=None) -> int:
    conditions = [(int(p), SplittingSymbol.parse(s) if isinstance(s, str) else s) for p, s in conditions]
    if fields is None:
        fields = enumerate_fields(X, signature)
    else:
        want = _signatures(signature)
        fields = [f for f in fields if abs(f.d_K) < X and (f.d_K > 0) in want]
    return sum(1 for f in fields if all(form_symbol(f.form.coeffs, p) == s for p, s in conditions))


def maximal_form(form) -> BinaryCubicForm:
    """An equivalent form of a maximal overring, obtained by repeatedly removing index-p layers."""
    f = BinaryCubicForm(*(int(t) for t in getattr(form, "coeffs", form)))
    while True:
        D = f.disc
        if D == 0:
            raise ValueError("form has zero discriminant")
        bad = next((p for p in _square_primes(abs(D)) if not is_maximal_at(f, p)), None)
        if bad is None:
            return f
        f = _enlarge_at(f, bad)


def _square_primes(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % (p * p) == 0:
            out.append(p)
        while n % p == 0:
            n //= p
        p += 1
    return out


def _enlarge_at(f: BinaryCubicForm, p: int) -> BinaryCubicForm:
    a, b, c, d = f.coeffs
    if all(t % p == 0 for t in f.coeffs):
        return BinaryCubicForm(a // p, b // p, c // p, d // p)
    # move the multiple root to infinity, then (a, b, c, d) -> (a/p^2, b/p, c, p d)
    if not (a % p == 0 and b % p == 0):
        r = next(r for r in range(p) if f(r, 1) % p == 0 and (3 * a * r * r + 2 * b * r + c) % p == 0)
        f = f.transform((r, -1, 1, 0))
        a, b, c, d = f.coeffs
    if a % (p * p) or b % p:
        raise ConsistencyError(f"form {f} is maximal at {p}")
    return BinaryCubicForm(a // (p * p), b // p, c, p * d)
