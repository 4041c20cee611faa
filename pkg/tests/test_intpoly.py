"""Exact characteristic polynomials and certified smallest positive roots."""

from fractions import Fraction

import pytest

import porecap.intpoly as intpoly
from porecap import ConvergenceError, PorecapError
from porecap.intpoly import (
    charpoly,
    det_one_minus_z,
    poly_gcd,
    smallest_positive_root,
    squarefree_part,
)


def test_charpoly_known_matrices():
    assert charpoly([[2]]) == [-2, 1]
    # defective Jordan block: (z - 2)^2 = z^2 - 4z + 4
    assert charpoly([[2, 1], [0, 2]]) == [4, -4, 1]
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert charpoly(ident) == [-1, 3, -3, 1]
    assert charpoly([[0, 1], [1, 0]]) == [-1, 0, 1]


def test_charpoly_matches_evaluation_oracle():
    """det(xI - A) evaluated at small integers agrees with the coefficients."""
    import random

    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        poly = charpoly(rows)
        assert len(poly) == n + 1 and poly[-1] == 1
        for x in range(-3, 4):
            shifted = [
                [(x if i == j else 0) - rows[i][j] for j in range(n)]
                for i in range(n)
            ]
            assert _det_fraction(shifted) == _eval_int(poly, x)


def _det_fraction(rows):
    n = len(rows)
    mat = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            factor = mat[r][col] * inv
            for c in range(col, n):
                mat[r][c] -= factor * mat[col][c]
    assert det.denominator == 1
    return det.numerator


def _eval_int(poly, x):
    acc = 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def test_charpoly_bigint_path_matches_hybrid(monkeypatch):
    import random

    rng = random.Random(23)
    rows = [[rng.randint(0, 9) for _ in range(6)] for _ in range(6)]
    fast = charpoly(rows)
    monkeypatch.setattr(intpoly, "_INT64_SAFE", 1)
    assert charpoly(rows) == fast


def test_det_one_minus_z():
    coeffs = det_one_minus_z([[2, 1], [0, 2]])
    # det(I - zA) = (1 - 2z)^2
    assert coeffs == [1, -4, 4]
    assert coeffs[0] == 1


def test_poly_gcd_and_squarefree():
    # (z - 1)^2 (z - 2) and its derivative share (z - 1)
    p = [-2, 5, -4, 1]
    sf = squarefree_part(p)
    assert _eval_int(sf, 1) == 0 and _eval_int(sf, 2) == 0
    assert len(sf) == 3
    g = poly_gcd([-1, 0, 1], [-1, 1])
    assert _eval_int(g, 1) == 0 and len(g) == 2
    assert squarefree_part([7]) == [7] or squarefree_part([7]) == [1]


def test_smallest_positive_root_simple():
    # 1 - 3z
    assert abs(smallest_positive_root([1, -3]) - 1 / 3) < 1e-12
    # (1 - 2z)(1 - z) = 1 - 3z + 2z^2, smaller root 1/2
    assert abs(smallest_positive_root([1, -3, 2]) - 0.5) < 1e-12


def test_smallest_positive_root_double_root():
    # (1 - 2z)^2 has a double root at 1/2; squarefree reduction must handle it
    assert abs(smallest_positive_root([1, -4, 4]) - 0.5) < 1e-12


def test_smallest_positive_root_near_grid_cluster():
    # two roots at 0.4995 and 0.5005 straddle the 1/1000 scan grid point 0.5
    poly = [24970005, -99940000, 100000000]
    assert abs(smallest_positive_root(poly) - 0.4995) < 1e-10


def test_smallest_positive_root_close_pair_certified():
    """A root pair inside one scan cell must not be skipped."""
    # (1000z - 499)(1000z - 501) = 10^6 z^2 - 10^6 z + 249999:
    # both roots sit strictly inside the cell (0.499, 0.501)... scan sees no
    # sign change at the 1/1000 grid, so the certificate search must find 0.499.
    poly = [249999, -1000000, 1000000]
    assert abs(smallest_positive_root(poly) - 0.499) < 1e-10


def test_smallest_positive_root_exact_grid_hit():
    # root exactly on a scan point: 1 - 2z at z = 0.5
    assert abs(smallest_positive_root([1, -2]) - 0.5) < 1e-15


def test_smallest_positive_root_errors():
    with pytest.raises(PorecapError, match="no positive root"):
        smallest_positive_root([1, 1])
    with pytest.raises(PorecapError):
        smallest_positive_root([5])
    with pytest.raises(PorecapError):
        smallest_positive_root([])


def test_variations_open_counts_roots():
    # (1 - 2z)(1 - 3z): both roots in (0, 1), none in (0, 0.3)
    poly = [1, -5, 6]
    assert intpoly._variations_open(poly, Fraction(0), Fraction(1)) == 2
    assert intpoly._variations_open(poly, Fraction(0), Fraction(3, 10)) == 0
    assert intpoly._variations_open(poly, Fraction(3, 10), Fraction(2, 5)) == 1


def test_leftmost_root_depth_cap():
    with pytest.raises(ConvergenceError):
        intpoly._leftmost_root([1, -2], Fraction(0), Fraction(1), 1e-12, 201)
