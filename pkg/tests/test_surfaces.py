import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stokesleaf.laurent import LaurentScalar
from stokesleaf.surfaces import (
    NumericalDriftError,
    ShearPoint,
    SurfaceFamily,
    Word,
    boundary_monodromy_trace,
    boundary_prediction,
    build_generators,
    evaluate_word,
    generator_matrices,
    generator_word,
    geodesic_word_cfp,
    hole_perimeters,
    mat_det,
    mat_mul,
    mat_trace,
    perimeters,
    point_from_sums,
    random_point,
    specialization_check,
    stokes_matrix,
)

FAMILIES = [SurfaceFamily("an", n) for n in range(3, 7)] + [SurfaceFamily("cfp", n) for n in range(4, 7)]


def test_family_validation():
    assert SurfaceFamily("AN", 4).kind == "An"
    assert SurfaceFamily("cfp", 5).y_count == 4
    assert SurfaceFamily("an", 5).edges == ("Z1", "Z2", "Z3", "Z4", "Z5", "Y1", "Y2")
    with pytest.raises(ValueError):
        SurfaceFamily("cfp", 3)
    with pytest.raises(ValueError):
        SurfaceFamily("torus", 4)
    with pytest.raises(ValueError):
        ShearPoint(SurfaceFamily("an", 4), (0, 0, 0, 0), ())


def test_generator_constants():
    R, L, F, X, X_half = generator_matrices("symbolic", ("Z1",))
    one = LaurentScalar.constant(1, ("Z1",))
    assert mat_det(X("Z1")) == one
    assert mat_det(X_half("Z1")) == one
    R3 = mat_mul(mat_mul(R, R), R)
    assert R3 == tuple(LaurentScalar.constant(c, ("Z1",)) for c in (-1, 0, 0, -1))
    assert mat_mul(R, R) == L


@pytest.mark.parametrize("fam", FAMILIES, ids=str)
def test_generators_are_unimodular(fam):
    one = LaurentScalar.constant(1, fam.edges)
    for g in build_generators(fam):
        assert mat_det(g) == one
        if fam.kind == "An":
            assert mat_trace(g).is_zero()


def test_first_generator_is_F():
    for fam in FAMILIES:
        assert generator_word(fam, 1) == Word(("F",))


def test_an3_values():
    fam = SurfaceFamily("an", 3)
    S = stokes_matrix(fam, ShearPoint(fam, (1, 0, 0)))
    assert S.G(1, 2) == pytest.approx(2 * math.e + 1 / math.e, rel=1e-12)
    assert S.G(2, 3) == pytest.approx(3.0, rel=1e-12)
    assert S.G(1, 3) == pytest.approx(math.e + 2 / math.e, rel=1e-12)
    S0 = stokes_matrix(fam, ShearPoint(fam, (0, 0, 0)))
    assert np.allclose(S0.to_numpy(), [[1, 3, 3], [0, 1, 3], [0, 0, 1]])


def test_an_entry_is_minus_trace_of_product():
    fam = SurfaceFamily("an", 5)
    g = build_generators(fam)
    S = stokes_matrix(fam)
    for i, j in S.pairs():
        assert S.G(i, j) == -mat_trace(mat_mul(g[i - 1], g[j - 1]))


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_cfp_geodesic_words_match_entries(n):
    fam = SurfaceFamily("cfp", n)
    rng = np.random.default_rng(n)
    pt = random_point(fam, rng)
    S = stokes_matrix(fam, pt)
    for i, j in S.pairs():
        tr = mat_trace(evaluate_word(geodesic_word_cfp(i, j, n), pt))
        assert abs(tr - S.G(i, j)) <= 1e-9 * abs(S.G(i, j))


def test_cfp_geodesic_examples():
    n = 6
    assert geodesic_word_cfp(1, 2, n).letters == (("X", "Z1"), "L", ("X", "Z2"), "R")
    w = geodesic_word_cfp(2, 3, n)
    assert w.letters == (("X", "Z2"), "L", ("X", f"Y{n - 2}"), "L", ("X", "Z3"), "R", ("X", "Y1"), "R")
    assert len(geodesic_word_cfp(1, 3, n)) == 8


def test_word_inverse():
    fam = SurfaceFamily("cfp", 5)
    rng = np.random.default_rng(1)
    pt = random_point(fam, rng)
    w = generator_word(fam, 3) * generator_word(fam, 4)
    M = evaluate_word(w * w.inverse(), pt)
    assert np.allclose(M, (1, 0, 0, 1))


def test_drift_detection():
    fam = SurfaceFamily("an", 3)
    pt = ShearPoint(fam, (700.0, 0, 0))
    with pytest.raises((NumericalDriftError, OverflowError)):
        evaluate_word(Word(tuple([("X", "Z1"), "R"] * 3)), pt)


@given(st.lists(st.floats(-1.5, 1.5), min_size=3, max_size=3))
def test_symbolic_and_numeric_stokes_agree(Z):
    fam = SurfaceFamily("an", 3)
    pt = ShearPoint(fam, tuple(Z))
    Ssym = stokes_matrix(fam)
    Snum = stokes_matrix(fam, pt)
    for i, j in Ssym.pairs():
        v = Ssym.G(i, j).evaluate_shear(pt.coordinates())
        assert abs(v - Snum.G(i, j)) <= 1e-12 * abs(v)


def test_mpmath_backend():
    fam = SurfaceFamily("cfp", 4)
    pt = random_point(fam, np.random.default_rng(0))
    a = stokes_matrix(fam, pt).to_numpy()
    b = np.array(stokes_matrix(fam, pt, backend="mpmath").to_mpmath().tolist(), dtype=complex)
    assert np.allclose(a, b, rtol=1e-13)


def test_perimeters():
    fam = SurfaceFamily("an", 3)
    assert perimeters(fam, ShearPoint(fam, (1, 0, 0))) == 1
    fam6 = SurfaceFamily("cfp", 6)
    pt = ShearPoint(fam6, (1,) * 6, (0,) * 6)
    assert perimeters(fam6, pt) == (6, 0)
    assert hole_perimeters(fam6, pt) == (6, 6)
    fam4 = SurfaceFamily("an", 4)
    assert perimeters(fam4, ShearPoint(fam4, (0,) * 4, (0,))) == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_boundary_trace(n):
    fam = SurfaceFamily("an", n)
    zero = ShearPoint(fam, (0,) * n, (0,) * (n - 3))
    assert boundary_monodromy_trace(fam, zero) == pytest.approx(-2)
    pt = random_point(fam, np.random.default_rng(n))
    tr = boundary_monodromy_trace(fam, pt)
    assert abs(tr - boundary_prediction(pt)) <= 1e-10 * abs(tr)
    assert abs(tr + 2 * cmath.cosh(pt.total)) <= 1e-10 * abs(tr)


def test_boundary_trace_symbolic():
    fam = SurfaceFamily("an", 4)
    tr = boundary_monodromy_trace(fam)
    ones = {e: 1 for e in fam.edges}
    expected = -(LaurentScalar.monomial(fam.edges, {e: 4 for e in fam.edges})
                 + LaurentScalar.monomial(fam.edges, {e: -4 for e in fam.edges}))
    assert tr == expected and ones


@pytest.mark.parametrize("n", [4, 5])
def test_specialization(n):
    assert specialization_check(n).passed
    assert not specialization_check(n, double_z=False).passed


@pytest.mark.parametrize("fam", [SurfaceFamily("an", 5), SurfaceFamily("cfp", 6), SurfaceFamily("cfp", 5)], ids=str)
def test_point_from_sums_keeps_casimirs(fam):
    rng = np.random.default_rng(3)
    p = random_point(fam, rng)
    q = point_from_sums(fam, rng, p)
    a, b = hole_perimeters(fam, p), hole_perimeters(fam, q)
    assert np.allclose(np.atleast_1d(a), np.atleast_1d(b), atol=1e-12)
    assert p.Z != q.Z
