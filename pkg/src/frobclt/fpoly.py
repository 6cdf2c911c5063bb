"""Integer and F_p polynomial helpers.

Polynomials are lists of coefficients in ascending degree.  Over F_p they are
kept reduced with no trailing zeros (the zero polynomial is []).  Degrees here
are at most a dozen, so plain Python integers are fast enough and never
overflow.
"""

from __future__ import annotations

from collections import defaultdict
from math import isqrt


# ---------------------------------------------------------------------------
# exact integer linear algebra


def integer_det(matrix) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    m = [list(map(int, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def poly_discriminant(coeffs) -> int:
    """Discriminant of an integer polynomial (ascending coefficients)."""
    f = [int(c) for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    n = len(f) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    df = [i * f[i] for i in range(1, n + 1)]
    # Sylvester matrix of f (deg n) and f' (deg n-1), descending coefficients
    fd, dd = f[::-1], df[::-1]
    size = 2 * n - 1
    rows = []
    for i in range(n - 1):
        rows.append([0] * i + fd + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + dd + [0] * (size - n - i))
    res = integer_det(rows)
    lead = f[-1]
    q, r = divmod(res, lead)
    if r:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return (-1) ** (n * (n - 1) // 2) * q


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# arithmetic in F_p[x]


def reduce(f, p: int) -> list[int]:
    g = [int(c) % p for c in f]
    while g and g[-1] == 0:
        g.pop()
    return g


def _sub(f, g, p):
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return reduce(out, p)


def _divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        c = f[-1] * inv % p
        q[shift] = c
        for i, b in enumerate(g):
            f[i + shift] = (f[i + shift] - c * b) % p
        while f and f[-1] == 0:
            f.pop()
    return reduce(q, p), f


def _monic(f, p):
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd(f, g, p) -> list[int]:
    while g:
        f, g = g, _divmod(f, g, p)[1]
    return _monic(f, p)


def derivative(f, p) -> list[int]:
    return reduce([i * f[i] for i in range(1, len(f))], p)


def _compose_frobenius_inverse(f, p):
    # f = g(x^p) over F_p; return g (coefficients are their own p-th roots)
    return [f[i] for i in range(0, len(f), p)]


def squarefree_decomposition(f, p: int) -> dict[int, list[int]]:
    """Map multiplicity e -> monic squarefree factor, with f = lc * prod g_e^e."""
    f = _monic(reduce(f, p), p)
    if len(f) <= 1:
        return {}
    out: dict[int, list[int]] = defaultdict(lambda: [1])
    _yun(f, p, 1, out)
    return {e: g for e, g in sorted(out.items()) if len(g) > 1}


def _yun(f, p, scale, out):
    df = derivative(f, p)
    if not df:
        # f is a p-th power
        _yun(_compose_frobenius_inverse(f, p), p, scale * p, out)
        return
    c = gcd(f, df, p)
    w = _divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c, p)
        z = _divmod(w, y, p)[0]
        if len(z) > 1:
            out[i * scale] = _mul(out[i * scale], z, p)
        i += 1
        w = y
        c = _divmod(c, y, p)[0]
    if len(c) > 1:
        # leftover is a p-th power
        _yun(_compose_frobenius_inverse(c, p), p, scale * p, out)


def distinct_degree_counts(f, p: int) -> list[int]:
    """Degrees of the irreducible factors of a squarefree monic f over F_p."""
    f = _monic(reduce(f, p), p)
    degrees: list[int] = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod_x_poly(h, p, f)
        g = gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            degrees.extend([d] * ((len(g) - 1) // d))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return sorted(degrees)


def powmod_x_poly(h, p: int, mod) -> list[int]:
    """h^p mod (mod) over F_p."""
    result, base, e = [1], _divmod(h, mod, p)[1], p
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), mod, p)[1]
        base = _divmod(_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def factor_degrees(f, p: int) -> list[tuple[int, int]]:
    """(e, degree) for every irreducible factor of f mod p, with multiplicity e."""
    out = []
    for e, g in squarefree_decomposition(f, p).items():
        out.extend((e, d) for d in distinct_degree_counts(g, p))
    return sorted(out)
