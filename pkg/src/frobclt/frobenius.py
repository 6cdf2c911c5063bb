"""Splitting symbols and Artin traces a(p) of field records over ranges of primes.

For a record given by a monic polynomial f with field discriminant d_K, the
index [O_K : Z[theta]] is recovered exactly from disc(f) = index^2 * d_K.  At
primes not dividing the index, the factorization of f mod p (degrees and
multiplicities only) is the splitting symbol.  At index primes the symbol is
read off a maximal binary cubic form when the record carries one, and is
otherwise reported as unresolved.

Cubic families use a compiled kernel working directly on form coefficients:

* p | D: type (1^3) when the Hessian vanishes mod p, else (1^2 1);
* small p: count roots of F on P^1(F_p);
* large p: the Legendre symbol of D separates (1 2) from {(1 1 1), (3)} and
  x^p = x mod the monic associate decides between those two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numba
import numpy as np

from .densities import S3_NAMES, SplittingSymbol
from .errors import DataQualityError, ResourceError, UnresolvedPrimeError
from .fpoly import factor_degrees, is_square, poly_discriminant, reduce
from .threads import apply_thread_cap

PRIME_CAP = 10**9
UNRESOLVED = -1

# code order shared by the compiled kernel, the cache and the samplers
S3_SYMBOLS = (S3_NAMES["TS"], S3_NAMES["PS"], S3_NAMES["IN"], S3_NAMES["PR"], S3_NAMES["TR"])


def artin_trace(symbol: SplittingSymbol) -> int:
    """Number of primes of norm p above p, minus one."""
    return symbol.degree_one_count() - 1


S3_TRACES = np.array([artin_trace(s) for s in S3_SYMBOLS], dtype=np.int8)


# ---------------------------------------------------------------------------
# primes


@dataclass(frozen=True, eq=False)
class PrimeTable:
    bound: int
    primes: np.ndarray

    @property
    def pi(self) -> int:
        return int(self.primes.size)

    def __len__(self):
        return self.pi

    def __eq__(self, other):
        return isinstance(other, PrimeTable) and self.bound == other.bound and np.array_equal(self.primes, other.primes)


def sieve_primes(x: int, segment: int = 1 << 22) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to x (inclusive)."""
    x = int(x)
    if x > PRIME_CAP:
        raise ResourceError(f"prime bound {x} exceeds cap {PRIME_CAP}")
    if x < 2:
        return PrimeTable(max(x, 0), np.zeros(0, dtype=np.int64))
    root = math.isqrt(x)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for q in range(2, math.isqrt(root) + 1):
        if small[q]:
            small[q * q :: q] = False
    base = np.flatnonzero(small)
    chunks = [base]
    lo = root + 1
    while lo <= x:
        hi = min(lo + segment, x + 1)
        block = np.ones(hi - lo, dtype=bool)
        for q in base:
            start = max(q * q, (lo + q - 1) // q * q)
            block[start - lo :: q] = False
        chunks.append(np.flatnonzero(block) + lo)
        lo = hi
    return PrimeTable(x, np.concatenate(chunks).astype(np.int64))


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class FieldData:
    """Minimal field description: monic polynomial (ascending), d_K, optional cubic form."""

    poly: tuple[int, ...]
    d_K: int
    form: tuple[int, int, int, int] | None = None
    field_id: str = ""

    @property
    def degree(self) -> int:
        return len(self.poly) - 1


def _form_coeffs(record):
    form = getattr(record, "form", None)
    if form is None:
        return None
    return tuple(int(c) for c in getattr(form, "coeffs", form))


def field_index(record) -> int:
    """[O_K : Z[theta]] from disc(f) = index^2 d_K."""
    disc = poly_discriminant(record.poly)
    d_K = int(record.d_K)
    if d_K == 0 or disc % d_K:
        raise DataQualityError(f"disc(f)={disc} is not a multiple of d_K={d_K}")
    q = disc // d_K
    if not is_square(q):
        raise DataQualityError(f"disc(f)/d_K = {q} is not a perfect square")
    return math.isqrt(q)


def form_symbol(form, p: int) -> SplittingSymbol:
    """Splitting type of F = (a,b,c,d) on P^1 over F_p; valid when the ring of F is maximal at p."""
    a, b, c, d = (int(t) for t in form)
    affine = reduce([d, c, b, a], p)
    if not affine:
        raise UnresolvedPrimeError(f"form {form} vanishes identically mod {p}")
    pairs = list(factor_degrees(affine, p)) if len(affine) > 1 else []
    at_infinity = 3 - (len(affine) - 1)
    if at_infinity:
        pairs.append((at_infinity, 1))
    return SplittingSymbol(tuple(pairs))


def splitting_symbol(record, p: int, index: int | None = None) -> SplittingSymbol:
    p = int(p)
    form = _form_coeffs(record)
    if form is not None:
        return form_symbol(form, p)
    if index is None:
        index = field_index(record)
    if index % p == 0:
        raise UnresolvedPrimeError(f"p={p} divides the polynomial index {index}; no form available")
    return SplittingSymbol(tuple(factor_degrees(record.poly, p)))


# ---------------------------------------------------------------------------
# series containers


@dataclass(frozen=True, eq=False)
class TraceSeries:
    field_id: str
    x: int
    degree: int
    primes: np.ndarray
    a: np.ndarray  # int8, 0 at unresolved primes
    unresolved: np.ndarray  # bool
    symbols: tuple  # SplittingSymbol or None per prime

    def __len__(self):
        return int(self.primes.size)

    @property
    def pi(self) -> int:
        return len(self)

    @property
    def unresolved_count(self) -> int:
        return int(self.unresolved.sum())

    def entries(self) -> Iterator[tuple[int, SplittingSymbol | None, int | None]]:
        for p, s, a, u in zip(self.primes, self.symbols, self.a, self.unresolved):
            yield int(p), s, (None if u else int(a))

    def __eq__(self, other):
        return (
            isinstance(other, TraceSeries)
            and (self.field_id, self.x, self.degree) == (other.field_id, other.x, other.degree)
            and np.array_equal(self.primes, other.primes)
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.unresolved, other.unresolved)
            and self.symbols == other.symbols
        )

    @classmethod
    def from_entries(cls, field_id, x, degree, entries) -> "TraceSeries":
        entries = list(entries)
        primes = np.array([e[0] for e in entries], dtype=np.int64)
        symbols = tuple(e[1] for e in entries)
        unresolved = np.array([s is None for s in symbols], dtype=bool)
        a = np.array([0 if s is None else artin_trace(s) for s in symbols], dtype=np.int8)
        return cls(field_id, int(x), int(degree), primes, a, unresolved, symbols)


@dataclass(eq=False)
class TraceFamily:
    """Symbol codes for many fields over one shared prime list.

    codes[i, j] indexes symbol_table for field i at primes[j]; UNRESOLVED marks
    entries that could not be determined.
    """

    degree: int
    x: int
    primes: np.ndarray
    codes: np.ndarray
    symbol_table: tuple
    field_ids: list = field(default_factory=list)

    def __post_init__(self):
        self.trace_table = np.array([artin_trace(s) for s in self.symbol_table], dtype=np.int8)

    def __len__(self):
        return int(self.codes.shape[0])

    @property
    def unresolved(self) -> np.ndarray:
        return self.codes == UNRESOLVED

    @property
    def a(self) -> np.ndarray:
        out = self.trace_table[np.where(self.codes < 0, 0, self.codes)]
        out[self.codes < 0] = 0
        return out

    def prime_column(self, p: int) -> int:
        j = int(np.searchsorted(self.primes, p))
        if j >= self.primes.size or self.primes[j] != p:
            raise ValueError(f"{p} is not among the family's primes")
        return j

    def series(self, i: int) -> TraceSeries:
        row = self.codes[i]
        symbols = tuple(None if c < 0 else self.symbol_table[c] for c in row)
        a = np.where(row < 0, 0, self.trace_table[np.maximum(row, 0)]).astype(np.int8)
        fid = self.field_ids[i] if self.field_ids else str(i)
        return TraceSeries(fid, self.x, self.degree, self.primes.copy(), a, row < 0, symbols)

    def __iter__(self):
        return (self.series(i) for i in range(len(self)))


def trace_series(record, x: int, primes: PrimeTable | None = None) -> TraceSeries:
    table = primes if primes is not None else sieve_primes(x)
    ps = table.primes[table.primes <= x]
    fid = getattr(record, "field_id", "") or ""
    degree = getattr(record, "degree", None) or (len(record.poly) - 1)
    form = _form_coeffs(record)
    if form is not None and degree == 3:
        fam = cubic_trace_family([form], [cubic_form_disc(form)], x, ps, field_ids=[fid])
        return fam.series(0)
    index = field_index(record)
    entries = []
    for p in ps:
        try:
            sym = splitting_symbol(record, int(p), index=index)
        except UnresolvedPrimeError:
            sym = None
        entries.append((int(p), sym))
    return TraceSeries.from_entries(fid, x, degree, entries)


def cubic_form_disc(form) -> int:
    a, b, c, d = (int(t) for t in form)
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d


# ---------------------------------------------------------------------------
# compiled cubic kernel


@numba.njit(cache=True, nogil=True)
def _mulmod(x, y, p):
    return (x * y) % p


@numba.njit(cache=True, nogil=True)
def _powmod(base, e, p):
    result = 1
    base %= p
    while e > 0:
        if e & 1:
            result = _mulmod(result, base, p)
        base = _mulmod(base, base, p)
        e >>= 1
    return result


@numba.njit(cache=True, nogil=True)
def _cubic_mul(u0, u1, u2, v0, v1, v2, f0, f1, f2, p):
    # product mod the monic x^3 + f2 x^2 + f1 x + f0, inputs reduced mod p
    w0 = u0 * v0 % p
    w1 = (u0 * v1 + u1 * v0) % p
    w2 = (u0 * v2 + u1 * v1 + u2 * v0) % p
    w3 = (u1 * v2 + u2 * v1) % p
    w4 = u2 * v2 % p
    # x^4 = x * x^3 = -f2 x^3 - f1 x^2 - f0 x
    w3 = (w3 - w4 * f2) % p
    w2 = (w2 - w4 * f1) % p
    w1 = (w1 - w4 * f0) % p
    # x^3 = -f2 x^2 - f1 x - f0
    w2 = (w2 - w3 * f2) % p
    w1 = (w1 - w3 * f1) % p
    w0 = (w0 - w3 * f0) % p
    return w0, w1, w2


@numba.njit(cache=True, nogil=True)
def _cubic_code(a, b, c, d, D, p):
    if D % p == 0:
        P = (b * b - 3 * a * c) % p
        Q = (b * c - 9 * a * d) % p
        R = (c * c - 3 * b * d) % p
        if P == 0 and Q == 0 and R == 0:
            return 4
        return 3
    am, bm, cm, dm = a % p, b % p, c % p, d % p
    if p < 64:
        roots = 1 if am == 0 else 0
        for t in range(p):
            if ((((am * t + bm) * t + cm) * t) + dm) % p == 0:
                roots += 1
        if roots == 3:
            return 0
        if roots == 1:
            return 1
        return 2
    if _powmod(D % p, (p - 1) // 2, p) != 1:
        return 1
    if am == 0:
        return 0
    f2 = bm
    f1 = am * cm % p
    f0 = am * am % p * dm % p
    # x^p mod f by square and multiply
    r0, r1, r2 = 1, 0, 0
    s0, s1, s2 = 0, 1, 0
    e = p
    while e > 0:
        if e & 1:
            r0, r1, r2 = _cubic_mul(r0, r1, r2, s0, s1, s2, f0, f1, f2, p)
        s0, s1, s2 = _cubic_mul(s0, s1, s2, s0, s1, s2, f0, f1, f2, p)
        e >>= 1
    if r0 == 0 and r1 == 1 and r2 == 0:
        return 0
    return 2


@numba.njit(cache=True, parallel=True)
def _cubic_codes(A, B, C, Dc, disc, primes):
    n, m = A.size, primes.size
    out = np.empty((n, m), dtype=np.int8)
    for i in numba.prange(n):
        for j in range(m):
            out[i, j] = _cubic_code(A[i], B[i], C[i], Dc[i], disc[i], primes[j])
    return out


def cubic_trace_family(forms: Sequence, discs: Sequence[int], x: int, primes=None, field_ids=None) -> TraceFamily:
    """Symbol codes (S3_SYMBOLS order) for maximal cubic forms at every prime <= x."""
    if primes is None:
        primes = sieve_primes(x).primes
    primes = np.asarray(primes, dtype=np.int64)
    arr = np.asarray([tuple(f) for f in forms], dtype=np.int64).reshape(-1, 4)
    discs = np.asarray(discs, dtype=np.int64)
    apply_thread_cap()
    codes = _cubic_codes(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy(), discs, primes)
    return TraceFamily(3, int(x), primes, codes, S3_SYMBOLS, list(field_ids or []))
