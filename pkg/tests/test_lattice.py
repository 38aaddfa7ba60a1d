from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from vcremona.lattice import (
    A2,
    E8,
    I21_2,
    K_V,
    U,
    AmbientVectors,
    BinaryForm,
    GramLattice,
    LatticeError,
    ambient_vector,
    discriminant_group,
    dual_basis,
    form_values,
    has_vector_of_norm,
    invariant_factors,
    is_positive_definite,
    is_primitive,
    isometry_exists,
    local_obstruction,
    representations,
    represents,
    short_vectors,
    smith_normal_form,
    vectors_of_norm,
)
from vcremona.linalg import det, identity, matmul, transpose

from oracles import box_vectors, brute_representations, determinantal_factors, exhaustive_box


# --- Smith normal form -------------------------------------------------------


def check_snf(m):
    d, u, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b % a == 0) if a else b == 0
    assert tuple(diag) == determinantal_factors(m)


def test_snf_examples():
    assert invariant_factors(K_V) == (1, 20)
    assert invariant_factors(A2) == (1, 3)
    assert invariant_factors(((2, 4, 4), (-6, 6, 12), (10, -4, -16))) == (2, 6, 12)
    assert invariant_factors(((0, 0), (0, 0))) == (0, 0)
    check_snf(((2, 4, 4), (-6, 6, 12), (10, -4, -16)))
    check_snf(((1, 2, 3),))
    check_snf(((0, 3), (6, 0), (4, 2)))


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-50, 50), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=1000, deadline=None)
@given(matrices)
def test_snf_property(m):
    check_snf(tuple(tuple(r) for r in m))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_disc_group_property(a):
    n = len(a)
    g = tuple(tuple(a[i][j] + a[j][i] for j in range(n)) for i in range(n))
    if det(g) == 0:
        with pytest.raises(LatticeError):
            discriminant_group(g)
        return
    dg = discriminant_group(g)
    assert dg.order == abs(det(g))
    for k, x in zip(dg.invariant_factors, dg.generators):
        # x lies in L*, has order exactly k in L*/L
        assert all(Fraction(sum(g[i][j] * x[j] for j in range(n))).denominator == 1 for i in range(n))
        assert all((k * c).denominator == 1 for c in x)
        for q in factorint(k):
            assert not all((k // q * c).denominator == 1 for c in x)
    dual = dual_basis(g)
    assert matmul(dual, g) == identity(n)


# --- lattice types -----------------------------------------------------------


def test_gram_lattice_validation():
    with pytest.raises(LatticeError):
        GramLattice(((3, 4), (5, 12)))
    with pytest.raises(LatticeError, match="degenerate"):
        GramLattice(((1, 1), (1, 1)))
    kv = GramLattice(K_V)
    assert kv.det == 20 and kv.rank == 2 and not kv.is_even
    assert GramLattice(E8).det == 1 and GramLattice(E8).is_even


def test_discriminant_examples():
    assert discriminant_group(K_V).invariant_factors == (20,)
    assert discriminant_group(K_V).is_cyclic
    assert discriminant_group(A2).order == 3
    assert discriminant_group(E8).invariant_factors == ()
    assert discriminant_group(((2, 0), (0, 2))).invariant_factors == (2, 2)
    assert not discriminant_group(((2, 0), (0, 2))).is_cyclic


def test_ambient_lattice():
    lat = GramLattice(I21_2)
    assert lat.rank == 23 and abs(lat.det) == 1
    h2 = ambient_vector(ones=(1, 1, 1))
    assert lat.norm(h2) == 3
    assert lat.norm(ambient_vector(e1=1, f1=3)) == 6


def test_saturation():
    assert is_primitive(((1, 0, 0), (0, 1, 0)))
    assert not is_primitive(((2, 0, 0), (0, 1, 0)))
    assert not is_primitive(((1, 1, 0), (1, -1, 0)))
    with pytest.raises(LatticeError, match="linearly dependent"):
        is_primitive(((1, 2), (2, 4)))
    v = AmbientVectors((ambient_vector(ones=(1, 1, 1)), ambient_vector(e1=1, f1=3, ones=(0, 1, 0))))
    assert v.gram() == ((3, 1), (1, 7))


# --- enumeration -------------------------------------------------------------


def test_short_vectors_match_box():
    for g, bound in ((A2, 6), (K_V, 12), (((3, 1, 1), (1, 7, 0), (1, 0, 9)), 12), (((2, 1, 0), (1, 2, 1), (0, 1, 2)), 6)):
        assert short_vectors(g, bound) == box_vectors(g, bound, 6)


def test_vectors_of_norm():
    assert len(vectors_of_norm(A2, 2)) == 6
    assert vectors_of_norm(A2, 2)[0] == (0, 1)
    assert len(vectors_of_norm(E8, 2)) == 240
    assert has_vector_of_norm(((3, 1, 1), (1, 7, 0), (1, 0, 9)), 3) == (True, (1, 0, 0))
    assert has_vector_of_norm(K_V, 2) == (False, None)
    assert has_vector_of_norm(A2, 0) == (False, None)
    with pytest.raises(LatticeError, match="positive definite"):
        has_vector_of_norm(U, 2)


def test_isometry():
    g = ((3, 1, 1), (1, 7, 0), (1, 0, 9))
    assert isometry_exists(g, g) == identity(3)
    t = isometry_exists(g, ((3, 4, 1), (4, 12, 1), (1, 1, 9)))
    assert t is not None
    assert matmul(matmul(transpose(t), g), t) == ((3, 4, 1), (4, 12, 1), (1, 1, 9))
    assert isometry_exists(((1, 0), (0, 6)), ((2, 0), (0, 3))) is None  # same det, different genus
    assert isometry_exists(((2, 1), (1, 3)), ((2, -1), (-1, 3))) is not None
    with pytest.raises(LatticeError, match="out of supported range"):
        isometry_exists(E8, E8)
    with pytest.raises(LatticeError, match="out of supported range"):
        isometry_exists(U, U)


# --- binary forms ------------------------------------------------------------


def test_representations_examples():
    f = BinaryForm(20, -98, 146)
    assert represents(f, 20) == (1, 0)
    assert represents(f, 146) == (0, 1)
    for n in (2, 6, 8, 14, 18, 26, 38, 42):
        assert represents(f, n) is None
    assert representations(BinaryForm(1, 0, 1), 25) == brute_representations(BinaryForm(1, 0, 1), 25, 6)
    with pytest.raises(LatticeError):
        representations(BinaryForm(1, 0, -1), 1)


def test_form_values_prefers_primitive():
    f = BinaryForm(1, 0, 1)
    vals = form_values(f, 25)
    assert vals[25] == (4, 3) or gcd(*vals[25]) == 1
    assert vals[4] == (2, 0)  # only non-primitive witnesses
    assert form_values(BinaryForm(20, -18, 18), 62)[62] == (2, 1)


def test_local_obstruction():
    assert local_obstruction(BinaryForm(1, 0, 1), 3) == 4  # 3 is not a sum of two squares mod 4
    assert local_obstruction(BinaryForm(1, 0, 1), 5) is None


forms = st.tuples(st.integers(1, 30), st.integers(-30, 30), st.integers(1, 30)).filter(
    lambda t: 4 * t[0] * t[2] - t[1] ** 2 > 0
)


@settings(max_examples=100, deadline=None)
@given(forms, st.integers(1, 120))
def test_representation_solver_property(abc, n):
    f = BinaryForm(*abc)
    assert representations(f, n) == brute_representations(f, n, exhaustive_box(f, n))
    vals = form_values(f, n)
    assert (n in vals) == bool(representations(f, n))
    if n in vals:
        assert f(*vals[n]) == n


def test_positive_definite():
    assert is_positive_definite(K_V)
    assert not is_positive_definite(U)
    assert not is_positive_definite(((1, 0), (0, 0)))
