"""Local splitting densities for families of S3, S4 and S5 fields.

A family is described prime by prime: at p an unramified field has a Frobenius
class C, a ramified one has a splitting type r_i.  The limiting proportion of
fields with prescribed behaviour at p is

    |C| / (|G| (1 + f(p)))        unramified,
    c_i(p) / (1 + f(p))           ramified,

where the ramified weights c_i(p) sum to the ramification mass f(p).  All
values here are exact Fractions so the normalisation is structural.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import zeta

from .errors import UnsupportedSymbolError
from .symchar import Partition, as_partition

GROUP_DEGREE = {"S3": 3, "S4": 4, "S5": 5}


def normalize_group(group) -> str:
    g = str(group).strip().upper().replace("_", "")
    if g in ("3", "4", "5"):
        g = "S" + g
    if g not in GROUP_DEGREE:
        raise ValueError(f"unsupported group {group!r}; expected one of S3, S4, S5")
    return g


@dataclass(frozen=True, order=True)
class SplittingSymbol:
    """Multiset of (e, f) pairs: p O_K = prod P_i^{e_i}, N(P_i) = p^{f_i}."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = []
        for e, f in self.pairs:
            e, f = int(e), int(f)
            if e < 1 or f < 1:
                raise ValueError(f"ramification index and residue degree must be >= 1: {(e, f)}")
            pairs.append((e, f))
        # canonical order: ramified first (by e desc), then residue degree asc
        pairs.sort(key=lambda ef: (-ef[0], ef[1]))
        object.__setattr__(self, "pairs", tuple(pairs))

    @classmethod
    def unramified(cls, cycle_type) -> "SplittingSymbol":
        return cls(tuple((1, f) for f in as_partition(cycle_type)))

    @classmethod
    def parse(cls, text: str) -> "SplittingSymbol":
        """Parse the usual notation: '1^2 1 1', '(1^2 1 1)', '11111', '2^2 1'.

        Tokens are f or f^e.  A run of bare digits like '1112' is read one
        digit per prime.
        """
        text = text.strip().strip("()").strip()
        if text.upper() in S3_NAMES:
            return S3_NAMES[text.upper()]
        pairs = []
        for token in text.replace(",", " ").split():
            for f, e in re.findall(r"(\d)(?:\^(\d+))?", token):
                pairs.append((int(e) if e else 1, int(f)))
        if not pairs:
            raise ValueError(f"cannot parse splitting symbol {text!r}")
        return cls(tuple(pairs))

    @property
    def degree(self) -> int:
        return sum(e * f for e, f in self.pairs)

    def is_unramified(self) -> bool:
        return all(e == 1 for e, _ in self.pairs)

    def cycle_type(self) -> Partition:
        if not self.is_unramified():
            raise ValueError(f"{self} is ramified; no Frobenius cycle type")
        return as_partition(f for _, f in self.pairs)

    def degree_one_count(self) -> int:
        """Number of primes above p of norm p."""
        return sum(1 for _, f in self.pairs if f == 1)

    def __str__(self):
        return " ".join(f"{f}^{e}" if e > 1 else f"{f}" for e, f in self.pairs)


def _sym(text):
    return SplittingSymbol.parse(text)


S3_NAMES = {
    "TS": SplittingSymbol(((1, 1), (1, 1), (1, 1))),
    "PS": SplittingSymbol(((1, 1), (1, 2))),
    "IN": SplittingSymbol(((1, 3),)),
    "PR": SplittingSymbol(((2, 1), (1, 1))),
    "TR": SplittingSymbol(((3, 1),)),
}

# (symbol, numerator, power of 1/p).  Unramified numerators are |C|/|G|.
_TABLES = {
    "S3": [
        ("1 1 1", Fraction(1, 6), 0),
        ("1 2", Fraction(3, 6), 0),
        ("3", Fraction(2, 6), 0),
        ("1^2 1", Fraction(1), 1),
        ("1^3", Fraction(1), 2),
    ],
    "S4": [
        ("1 1 1 1", Fraction(1, 24), 0),
        ("1 1 2", Fraction(1, 4), 0),
        ("1 3", Fraction(1, 3), 0),
        ("2 2", Fraction(1, 8), 0),
        ("4", Fraction(1, 4), 0),
        ("1^2 1 1", Fraction(1, 2), 1),
        ("1^2 2", Fraction(1, 2), 1),
        ("1^2 1^2", Fraction(1, 2), 2),
        ("2^2", Fraction(1, 2), 2),
        ("1^3 1", Fraction(1), 2),
        ("1^4", Fraction(1), 3),
    ],
    "S5": [
        ("1 1 1 1 1", Fraction(1, 120), 0),
        ("1 1 1 2", Fraction(1, 12), 0),
        ("1 2 2", Fraction(1, 8), 0),
        ("1 1 3", Fraction(1, 6), 0),
        ("2 3", Fraction(1, 6), 0),
        ("1 4", Fraction(1, 4), 0),
        ("5", Fraction(1, 5), 0),
        ("1^2 1 1 1", Fraction(1, 6), 1),
        ("1^2 1 2", Fraction(1, 2), 1),
        ("1^2 3", Fraction(1, 3), 1),
        ("1^2 1^2 1", Fraction(1, 2), 2),
        ("2^2 1", Fraction(1, 2), 2),
        ("1^3 1 1", Fraction(1, 2), 2),
        ("1^3 2", Fraction(1, 2), 2),
        ("1^3 1^2", Fraction(1), 3),
        ("1^4 1", Fraction(1), 3),
        ("1^5", Fraction(1), 4),
    ],
}

# f(p) as coefficients of p^-1, p^-2, ...
_MASS_COEFFS = {"S3": (1, 1), "S4": (1, 2, 1), "S5": (1, 2, 2, 1)}


@lru_cache(maxsize=None)
def admissible_symbols(group) -> tuple[SplittingSymbol, ...]:
    return tuple(_sym(s) for s, _, _ in _TABLES[normalize_group(group)])


@lru_cache(maxsize=None)
def _weights(group: str) -> dict:
    return {_sym(s): (num, k) for s, num, k in _TABLES[group]}


def _check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    return p


def ramification_mass(group, p: int) -> Fraction:
    group = normalize_group(group)
    p = _check_prime(p)
    return sum((Fraction(c, p ** (k + 1)) for k, c in enumerate(_MASS_COEFFS[group])), Fraction(0))


def local_weight(group, symbol: SplittingSymbol, p: int) -> Fraction:
    """Numerator of the density: |C|/|G| or c_i(p)."""
    group = normalize_group(group)
    try:
        num, k = _weights(group)[symbol]
    except KeyError:
        raise UnsupportedSymbolError(f"{symbol} is not an admissible splitting type for {group}") from None
    return num / Fraction(p) ** k


def density(group, symbol, p: int) -> Fraction:
    group = normalize_group(group)
    p = _check_prime(p)
    if isinstance(symbol, str):
        symbol = SplittingSymbol.parse(symbol)
    return local_weight(group, symbol, p) / (1 + ramification_mass(group, p))


def density_table(group, p: int) -> list[tuple[SplittingSymbol, Fraction]]:
    group = normalize_group(group)
    return [(s, density(group, s, p)) for s in admissible_symbols(group)]


def measure_total(group, p: int) -> Fraction:
    return sum((d for _, d in density_table(group, p)), Fraction(0))


def local_condition_product(group, conditions: Iterable[tuple[int, SplittingSymbol]]) -> Fraction:
    conditions = list(conditions)
    primes = [p for p, _ in conditions]
    if len(set(primes)) != len(primes):
        raise ValueError(f"repeated prime in local conditions: {primes}")
    out = Fraction(1)
    for p, sym in conditions:
        out *= density(group, sym, p)
    return out


# ---------------------------------------------------------------------------
# main-term constants

TT_C = {"-": 3.0, "+": 1.0}
TT_K = {"-": math.sqrt(3.0), "+": 1.0}
S4_D = (Fraction(1, 48), Fraction(1, 8), Fraction(1, 16))
S5_D = (Fraction(1, 240), Fraction(1, 24), Fraction(1, 16))
# error exponents (gamma, delta): documentation only
ERROR_EXPONENTS = {
    "S3": ("8/9 e_p", "7/9+eps"),
    "S4": ("2", "143/144+eps"),
    "S5": ("2-eps", "199/200+eps"),
}


@dataclass(frozen=True)
class MainTermConstant:
    group: str
    signature: int
    leading: float
    rational_factor: Fraction | None
    euler_product: float | None
    tail_bound: float
    secondary: float | None
    exponents: tuple[str, str]


def _cubic_sign(signature) -> str:
    if signature in ("-", "c", "complex", 1, "1"):
        return "-"
    if signature in ("+", "r", "real", 0, "0"):
        return "+"
    raise ValueError(f"cubic signature must be '+'/'-' (or r2 = 0/1), got {signature!r}")


@lru_cache(maxsize=8)
def _primes_upto(bound: int) -> np.ndarray:
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(bound) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.flatnonzero(sieve)


def euler_product(exponent_coeffs: Sequence[tuple[int, int]], prime_bound: int = 10**6) -> tuple[float, float]:
    """prod_{p <= B} (1 + sum c p^-k) and a bound on the omitted tail.

    The factors here are 1 + p^-2 + O(p^-3), so |log tail| <= sum_{n>B} 2 n^-2 < 2/B.
    """
    p = _primes_upto(prime_bound).astype(float)
    term = np.zeros_like(p)
    for coeff, k in exponent_coeffs:
        term += coeff * p ** (-k)
    value = float(np.exp(np.sum(np.log1p(term))))
    tail = value * math.expm1(2.0 / prime_bound)
    return value, tail


def main_term_constant(group, signature, prime_bound: int = 10**6) -> MainTermConstant:
    group = normalize_group(group)
    if group == "S3":
        sign = _cubic_sign(signature)
        lead = TT_C[sign] / (12.0 * float(zeta(3.0)))
        sec = 4.0 * TT_K[sign] / (5.0 * math.gamma(2.0 / 3.0) ** 3)
        return MainTermConstant(group, 1 if sign == "-" else 0, lead, None, None, 0.0, sec, ERROR_EXPONENTS[group])
    i = int(signature)
    if group == "S4":
        if i not in (0, 1, 2):
            raise ValueError("S4 signature index must be 0, 1 or 2")
        d, factors = S4_D[i], ((1, 2), (-1, 3), (-1, 4))
    else:
        if i not in (0, 1, 2):
            raise ValueError("S5 signature index must be 0, 1 or 2")
        d, factors = S5_D[i], ((1, 2), (-1, 4), (-1, 5))
    prod_value, tail = euler_product(factors, prime_bound)
    return MainTermConstant(group, i, float(d) * prod_value, d, prod_value, float(d) * tail, None, ERROR_EXPONENTS[group])


def main_term(group, signature, X: float, include_secondary: bool = False, prime_bound: int = 10**6) -> float:
    """Predicted number of fields with |d_K| < X and the given signature."""
    group = normalize_group(group)
    if include_secondary and group != "S3":
        raise ValueError("a secondary term is only available for cubic fields")
    if X < 0:
        raise ValueError("X must be nonnegative")
    if X == 0:
        return 0.0
    const = main_term_constant(group, signature, prime_bound)
    value = const.leading * X
    if include_secondary:
        value += const.secondary * X ** (5.0 / 6.0)
    return value
