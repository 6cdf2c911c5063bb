"""Exact character theory of the symmetric groups S_n.

Conjugacy classes and irreducible representations of S_n are both indexed by
partitions of n.  Character values come from the Murnaghan-Nakayama rule,
implemented on beta-sets (first-column hook lengths), which keeps everything
in exact integers.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterable

from .errors import ConsistencyError

MAX_DEGREE = 12
MAX_POWER = 20


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def as_partition(obj) -> Partition:
    if isinstance(obj, Partition):
        return obj
    return Partition(tuple(sorted((int(p) for p in obj), reverse=True)))


def _check_degree(n: int) -> None:
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree n={n} outside supported range 1..{MAX_DEGREE}")


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    """All partitions of n in lexicographically decreasing order."""
    _check_degree(n)
    return [Partition(p) for p in _partitions(n, n)]


def class_size(cycle_type) -> int:
    """Number of permutations in S_n with the given cycle type."""
    mu = as_partition(cycle_type)
    denom = prod(k ** m * factorial(m) for k, m in mu.multiplicities().items())
    return factorial(mu.n) // denom


def _beta_set(parts: tuple[int, ...]) -> tuple[int, ...]:
    length = len(parts)
    return tuple(p + length - 1 - i for i, p in enumerate(parts))


def _from_beta(beta) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    length = len(beta)
    parts = tuple(b - (length - 1 - i) for i, b in enumerate(beta))
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    members = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in members:
            continue
        # leg length = number of beads jumped over
        height = sum(1 for c in beta if target < c < b)
        new_beta = [c for c in beta if c != b] + [target]
        total += (-1) ** height * _mn(_from_beta(new_beta), rest)
    return total


def character_value(lam, mu) -> int:
    """chi_lambda evaluated on the class of cycle type mu."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.n != mu.n:
        raise ValueError(f"partitions of different sizes: {lam} vs {mu}")
    _check_degree(lam.n)
    return _mn(lam.parts, mu.parts)


def standard_char(cycle_type) -> int:
    """Character of the (n-1)-dimensional standard representation.

    This is the number of fixed points minus one.
    """
    mu = as_partition(cycle_type)
    return mu.parts.count(1) - 1


def trivial_multiplicity(n: int, r: int) -> int:
    """Multiplicity n_r of the trivial representation in rho^r (rho standard)."""
    _check_degree(n)
    if not 1 <= r <= MAX_POWER:
        raise ValueError(f"power r={r} outside supported range 1..{MAX_POWER}")
    total = sum(class_size(mu) * standard_char(mu) ** r for mu in partitions(n))
    order = factorial(n)
    if total % order:
        raise ConsistencyError(f"sum {total} not divisible by |S_{n}| = {order}")
    return total // order


@dataclass(frozen=True)
class ClassData:
    cycle_type: Partition
    size: int
    group_order: int


def conjugacy_classes(n: int) -> list[ClassData]:
    order = factorial(n)
    return [ClassData(mu, class_size(mu), order) for mu in partitions(n)]


@dataclass(frozen=True)
class CharacterValueTable:
    degree: int
    irreps: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]

    def __call__(self, lam, mu) -> int:
        i = self.irreps.index(as_partition(lam))
        j = self.classes.index(as_partition(mu))
        return self.values[i][j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("irrep/class," + ",".join(_label(mu) for mu in self.classes) + "\n")
        for lam, row in zip(self.irreps, self.values):
            buf.write(_label(lam) + "," + ",".join(map(str, row)) + "\n")
        return buf.getvalue()


def _label(p: Partition) -> str:
    return "(" + " ".join(map(str, p.parts)) + ")"


def character_table(n: int) -> CharacterValueTable:
    parts = tuple(partitions(n))
    values = tuple(tuple(character_value(lam, mu) for mu in parts) for lam in parts)
    return CharacterValueTable(n, parts, parts, values)


def cycle_type_of(perm: Iterable[int]) -> Partition:
    """Cycle type of a permutation given in one-line notation on 0..n-1."""
    perm = list(perm)
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return as_partition(lengths)
