"""Exact integer polynomial tools: characteristic polynomials and certified real roots.

Polynomials are lists of integer coefficients in ascending power order.  All
arithmetic is exact; floating point only appears when a finished root bracket
is converted for the caller.
"""

from __future__ import annotations

import operator
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, PorecapError

_INT64_SAFE = 2**62


def _matmul_big(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(map(operator.mul, row, col)) for col in cols] for row in a]


def charpoly(rows: list[list[int]]) -> list[int]:
    """Coefficients of det(lambda*I - T), ascending powers, exact integers.

    Faddeev-LeVerrier recurrence; runs on int64 while a magnitude bound allows
    it and switches to Python integers before overflow is possible.
    """
    n = len(rows)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    if n == 0:
        return coeffs
    max_t = max((abs(v) for row in rows for v in row), default=0) or 1
    t_np = np.array(rows, dtype=np.int64)
    m_np: np.ndarray | None = np.eye(n, dtype=np.int64)
    t_big = [list(map(int, row)) for row in rows]
    m_big: list[list[int]] | None = None
    max_m = 1
    for step in range(1, n + 1):
        if m_np is not None and n * n * max_t * max_m >= _INT64_SAFE:
            m_big = [list(map(int, row)) for row in m_np]
            m_np = None
        if m_np is not None:
            tm_np = t_np @ m_np
            trace = int(np.trace(tm_np))
        else:
            tm_big = _matmul_big(t_big, m_big)
            trace = sum(tm_big[i][i] for i in range(n))
        if trace % step:
            raise PorecapError("internal: characteristic polynomial trace not divisible")
        ck = -(trace // step)
        coeffs[n - step] = ck
        if step == n:
            break
        if m_np is not None:
            m_np = tm_np + ck * np.eye(n, dtype=np.int64)
            max_m = int(np.abs(m_np).max())
        else:
            m_big = [
                [tm_big[i][j] + (ck if i == j else 0) for j in range(n)]
                for i in range(n)
            ]
            max_m = max(abs(v) for row in m_big for v in row) or 1
    return coeffs


def det_one_minus_z(rows: list[list[int]]) -> list[int]:
    """Coefficients of det(I - z*T), ascending powers of z; constant term is 1."""
    return list(reversed(charpoly(rows)))


def _trim(poly: list[int]) -> list[int]:
    out = list(poly)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _deriv(poly: list[int]) -> list[int]:
    if len(poly) <= 1:
        return [0]
    return [i * c for i, c in enumerate(poly)][1:]


def _content(poly: list[int]) -> int:
    g = 0
    for c in poly:
        g = _gcd_int(g, abs(c))
    return g or 1


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _primitive(poly: list[int]) -> list[int]:
    poly = _trim(poly)
    g = _content(poly)
    return [c // g for c in poly]


def _pseudo_rem(p: list[int], q: list[int]) -> list[int]:
    r = list(p)
    dq = len(q) - 1
    lc = q[-1]
    while True:
        r = _trim(r)
        if (len(r) - 1 < dq) or r == [0]:
            return r
        shift = len(r) - 1 - dq
        lead = r[-1]
        r = [c * lc for c in r]
        for j, qc in enumerate(q):
            r[shift + j] -= lead * qc


def poly_gcd(p: list[int], q: list[int]) -> list[int]:
    """Primitive gcd in Z[x] via the primitive pseudo-remainder sequence."""
    a, b = _primitive(p), _primitive(q)
    if a == [0]:
        return b
    if b == [0]:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b != [0]:
        r = _primitive(_pseudo_rem(a, b))
        a, b = b, r
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def _divexact(p: list[int], g: list[int]) -> list[int]:
    rem = [Fraction(c) for c in p]
    glc = Fraction(g[-1])
    quot = [Fraction(0)] * (len(p) - len(g) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + len(g) - 1] / glc
        quot[i] = c
        if c:
            for j, gc in enumerate(g):
                rem[i + j] -= c * gc
    if any(rem) or any(c.denominator != 1 for c in quot):
        raise PorecapError("internal: inexact polynomial division")
    return [int(c) for c in quot]


def squarefree_part(poly: list[int]) -> list[int]:
    """Same real roots, all simple: poly divided by gcd(poly, poly')."""
    p = _primitive(poly)
    if len(p) <= 2:
        return p
    g = poly_gcd(p, _deriv(p))
    if len(g) == 1:
        return p
    return _divexact(p, g)


def _sign_at(poly: list[int], z: Fraction) -> int:
    num, den = z.numerator, z.denominator
    acc = poly[-1]
    qpow = 1
    for c in reversed(poly[:-1]):
        qpow *= den
        acc = acc * num + c * qpow
    return (acc > 0) - (acc < 0)


def _variations(poly: list[int]) -> int:
    count = 0
    prev = 0
    for c in poly:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _shift1(poly: list[int]) -> list[int]:
    out = list(poly)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] += out[j + 1]
    return out


def _compose_affine(poly: list[int], p1: int, p2: int, q: int) -> list[int]:
    # q**deg * poly((p1 + p2*t) / q), exact integers
    acc = [poly[-1]]
    qpow = 1
    for c in reversed(poly[:-1]):
        qpow *= q
        new = [0] * (len(acc) + 1)
        for j, aj in enumerate(acc):
            new[j] += aj * p1
            new[j + 1] += aj * p2
        new[0] += c * qpow
        acc = new
    return acc


def _variations_open(poly: list[int], lo: Fraction, hi: Fraction) -> int:
    """Descartes bound on the number of roots in the open interval (lo, hi).

    Zero means certified root-free; the true count never exceeds the bound and
    has the same parity.  A root exactly at ``hi`` is not counted.
    """
    width = hi - lo
    q = lo.denominator * width.denominator
    p1 = lo.numerator * width.denominator
    p2 = width.numerator * lo.denominator
    mapped = _trim(_compose_affine(poly, p1, p2, q))
    shifted = _shift1(list(reversed(mapped)))
    while shifted and shifted[0] == 0:
        shifted = shifted[1:]
    return _variations(shifted)


def _sign_bisect(
    poly: list[int], lo: Fraction, hi: Fraction, tol: float
) -> tuple[Fraction, Fraction]:
    s_lo = _sign_at(poly, lo)
    while float(hi - lo) > tol:
        mid = (lo + hi) / 2
        s_mid = _sign_at(poly, mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _leftmost_root(
    poly: list[int], lo: Fraction, hi: Fraction, tol: float, depth: int = 0
) -> tuple[Fraction, Fraction] | None:
    """Bracket of the smallest root of a squarefree poly in (lo, hi), or None."""
    if depth > 200:
        raise ConvergenceError("root isolation exceeded recursion budget")
    v = _variations_open(poly, lo, hi)
    if v == 0:
        return None
    if v == 1:
        return _sign_bisect(poly, lo, hi, tol)
    mid = (lo + hi) / 2
    if _sign_at(poly, mid) == 0:
        found = _leftmost_root(poly, lo, mid, tol, depth + 1)
        return found if found is not None else (mid, mid)
    found = _leftmost_root(poly, lo, mid, tol, depth + 1)
    if found is not None:
        return found
    return _leftmost_root(poly, mid, hi, tol, depth + 1)


def smallest_positive_root(coeffs: list[int], tol: float = 1e-12) -> float:
    """Smallest root of the polynomial in (0, 1], certified, located to width ``tol``.

    Scans in steps of 1/1000 for a sign change of the squarefree part and
    bisects it, then certifies via a Descartes count that no smaller root was
    stepped over; on any ambiguity it falls back to exact leftmost-root
    isolation.
    """
    poly = _trim(coeffs)
    if len(poly) <= 1:
        raise PorecapError("polynomial is constant; no root in (0, 1]")
    sf = squarefree_part(poly)
    if _sign_at(sf, Fraction(0)) < 0:
        sf = [-c for c in sf]
    if sf[0] == 0:
        raise PorecapError("internal: unexpected root at z=0")
    bracket: tuple[Fraction, Fraction] | None = None
    prev = Fraction(0)
    for j in range(1, 1001):
        z = Fraction(j, 1000)
        sign = _sign_at(sf, z)
        if sign == 0:
            bracket = (z, z)
            break
        if sign < 0:
            bracket = _sign_bisect(sf, prev, z, tol)
            break
        prev = z
    if bracket is None:
        bracket = _leftmost_root(sf, Fraction(0), Fraction(1), tol)
        if bracket is None:
            raise PorecapError("no positive root found in (0, 1]")
    elif _variations_open(sf, Fraction(0), bracket[0]) > 0:
        earlier = _leftmost_root(sf, Fraction(0), bracket[0], tol)
        if earlier is not None:
            bracket = earlier
    return float((bracket[0] + bracket[1]) / 2)
