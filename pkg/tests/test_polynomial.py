from fractions import Fraction

import pytest

from vcremona.linalg import bilinear, congruent, det, inverse, solve, vector_gcd
from vcremona.polynomial import SparsePoly, X


def test_ring_ops():
    p = X(0) + 2 * X(1)
    assert p * p == X(0) ** 2 + 4 * X(0) * X(1) + 4 * X(1) ** 2
    assert (p - p).is_zero()
    assert (X(0) * X(1)).is_homogeneous(2)
    assert not (X(0) + 1).is_homogeneous()
    assert SparsePoly.const(0).degree == -1


def test_substitute():
    p = X(0) * X(1) - X(2) ** 2
    q = p.substitute([X(1), X(0), X(3), X(3), X(4), X(5)])
    assert q == X(0) * X(1) - X(3) ** 2


def test_render():
    assert str(X(2) * X(4) - X(3) ** 2) == "X2*X4 - X3^2"
    assert str(SparsePoly.const(Fraction(-1, 2))) == "-1/2"
    assert str(SparsePoly()) == "0"


def test_bad_exponent():
    with pytest.raises(ValueError):
        SparsePoly({(1, 0): 1})


def test_linalg():
    g = ((3, 1, 1), (1, 7, 0), (1, 0, 9))
    assert det(g) == 173
    assert det(((Fraction(1, 2), 1), (1, 2))) == 0
    inv = inverse(g)
    assert all(sum(g[i][k] * inv[k][j] for k in range(3)) == (i == j) for i in range(3) for j in range(3))
    assert solve(((2, 0), (0, 4)), (1, 1)) == (Fraction(1, 2), Fraction(1, 4))
    assert bilinear(g, (1, 0, 0), (0, 1, 0)) == 1
    assert congruent(g, ((1, 0, 0), (1, 1, 0))) == ((3, 4), (4, 12))
    assert vector_gcd((4, 6, -8)) == 2
