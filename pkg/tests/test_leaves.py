import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from stokesleaf.leaves import (
    ProfileError,
    bondal_dimension,
    characteristic_closed_form,
    characteristic_identity,
    generic_leaf_dimension,
    identification_rhs,
    isospectral_solve,
    isospectral_targets,
    jordan_profile,
    markov_element,
    markov_value,
    minkowski_vectors,
    monodromy_product,
    predicted_leaf_dimension,
    profile_from_blocks,
    random_generic_stokes,
    symmetric_rank,
    verify_jordan_theorems,
)
from stokesleaf.surfaces import ShearPoint, SurfaceFamily, random_point, stokes_matrix

E = math.e


def _np(M):
    return np.array(M.tolist(), dtype=complex)


def test_monodromy_product_examples():
    assert np.allclose(_np(monodromy_product(np.eye(4))), np.eye(4))
    S = np.array([[1, 3, 3], [0, 1, 3], [0, 0, 1]], dtype=float)
    M = _np(monodromy_product(S))
    assert np.allclose(M, [[1, 3, 3], [-3, -8, -6], [6, 15, 10]])
    assert np.trace(M) == pytest.approx(3)


def test_an3_profile():
    fam = SurfaceFamily("an", 3)
    S = stokes_matrix(fam, ShearPoint(fam, (1, 0, 0)), backend="mpmath")
    prof = jordan_profile(monodromy_product(S))
    eig = sorted(complex(l).real for l, k, m in prof.blocks)
    assert eig == pytest.approx([E ** -2, 1, E ** 2], rel=1e-12)
    assert prof.is_diagonal()
    M = _np(monodromy_product(S))
    assert np.trace(M).real == pytest.approx(E ** 2 + E ** -2 + 1, rel=1e-12)


def test_identity_profile():
    prof = jordan_profile(np.eye(3))
    assert prof.blocks == [(1, 1, 3)] or [(complex(l), k, m) for l, k, m in prof.blocks] == [(1, 1, 3)]


def test_jordan_block_detection():
    J = np.array([[-1, 1, 0], [0, -1, 0], [0, 0, 2]], dtype=float)
    P = np.array([[1, 2, 0], [0, 1, 3], [1, 0, 1]], dtype=float)
    M = P @ J @ np.linalg.inv(P)
    prof = jordan_profile(M, tol=1e-6)
    assert prof.block_sizes(-1, tol=1e-6) == [2]
    assert prof.block_sizes(2) == [1]


def test_tolerance_range():
    with pytest.raises(ValueError):
        jordan_profile(np.eye(2), tol=1e-2)


def test_bondal_examples():
    gen4 = profile_from_blocks([(2, 1, 1), (0.5, 1, 1), (3, 1, 1), (1 / 3, 1, 1)])
    assert bondal_dimension(gen4, 4)[1] == 4 == generic_leaf_dimension(4)
    an6 = profile_from_blocks([(-2, 1, 1), (-0.5, 1, 1), (-1, 2, 1), (-1, 1, 2)])
    assert bondal_dimension(an6, 6) == (7, 8)
    with pytest.raises(ProfileError):
        bondal_dimension(gen4, 5)


def test_cfp7_prediction():
    assert predicted_leaf_dimension(SurfaceFamily("cfp", 7)) == 14
    assert predicted_leaf_dimension(SurfaceFamily("cfp", 8)) == 16
    assert predicted_leaf_dimension(SurfaceFamily("an", 6)) == 8


@pytest.mark.parametrize("kind,n", [("an", 3), ("an", 4), ("an", 5), ("an", 6), ("cfp", 4),
                                    ("cfp", 5), ("cfp", 6), ("cfp", 7)])
def test_leaf_dimension_random_points(kind, n):
    fam = SurfaceFamily(kind, n)
    rng = np.random.default_rng(100 + n)
    for _ in range(3):
        p = random_point(fam, rng)
        S = stokes_matrix(fam, p, backend="mpmath")
        prof = jordan_profile(monodromy_product(S))
        assert bondal_dimension(prof, n)[1] == predicted_leaf_dimension(fam)
        chk = verify_jordan_theorems(fam, p)
        assert chk.passed(1e-8), chk.max_rel_error


def test_an4_has_block_at_minus_one():
    fam = SurfaceFamily("an", 4)
    p = random_point(fam, np.random.default_rng(5))
    chk = verify_jordan_theorems(fam, p)
    assert chk.profile.block_sizes(-1) == [2]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_generic_stokes(n):
    rng = np.random.default_rng(n)
    S = random_generic_stokes(n, rng)
    assert np.all(S == np.round(S))
    assert bondal_dimension(jordan_profile(monodromy_product(S)), n)[1] == generic_leaf_dimension(n)


@pytest.mark.parametrize("kind,n,r", [("an", 6, 3), ("an", 4, 3), ("cfp", 6, 4), ("cfp", 5, 4)])
def test_symmetric_rank(kind, n, r):
    fam = SurfaceFamily(kind, n)
    S = stokes_matrix(fam, random_point(fam, np.random.default_rng(n)), backend="mpmath")
    assert symmetric_rank(S.to_mpmath()) == r


def test_symmetric_rank_identity():
    assert symmetric_rank(np.eye(5)) == 5


@pytest.mark.parametrize("kind,n", [("an", 4), ("an", 5), ("cfp", 4), ("cfp", 5)])
def test_minkowski(kind, n):
    fam = SurfaceFamily(kind, n)
    p = random_point(fam, np.random.default_rng(1))
    mv = minkowski_vectors(fam, p)
    S = stokes_matrix(fam, p).to_numpy()
    assert np.allclose(np.diag(mv.gram), 2)
    assert np.allclose(mv.gram, S + S.T, rtol=1e-9)
    iu = np.triu_indices(n, 1)
    assert np.all((4 - 2 * (S + S.T))[iu].real < 0)
    assert mv.vectors.shape[1] == (3 if kind == "an" else 4)


def test_markov_examples():
    fam = SurfaceFamily("an", 3)
    rep = markov_element(ShearPoint(fam, (1, 0, 0)))
    assert complex(rep.M).real == pytest.approx((E - 1 / E) ** 2, rel=1e-12)
    assert complex(rep.M).real == pytest.approx(5.5243914, abs=1e-7)
    assert abs(markov_element(ShearPoint(fam, (0, 0, 0))).M) < 1e-12
    assert markov_value(3, 3, 3) == 0


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_markov_nonnegative(Z):
    rep = markov_element(ShearPoint(SurfaceFamily("an", 3), tuple(Z)))
    assert rep.residual <= 1e-9
    assert complex(rep.M).real >= -1e-9 * (1 + abs(rep.M))


def test_characteristic_examples():
    fam = SurfaceFamily("an", 3)
    assert characteristic_identity(fam, ShearPoint(fam, (1, 0, 0)), [2]) <= 1e-10
    fam4 = SurfaceFamily("an", 4)
    lam = mpmath.mpf(2)
    cf = characteristic_closed_form(fam4, ShearPoint(fam4, (0,) * 4, (0,)), lam)
    assert abs(cf - ((lam + 1 / lam) ** 2 - 4) * (lam - 1 / lam) ** 2) < 1e-40


@pytest.mark.parametrize("kind,n", [("an", 5), ("an", 6), ("cfp", 5), ("cfp", 6)])
def test_characteristic_random(kind, n):
    fam = SurfaceFamily(kind, n)
    rng = np.random.default_rng(n)
    p = random_point(fam, rng)
    lams = [cmath.exp(0.3 + 1j * t) for t in np.linspace(0.2, 6, 7)]
    assert characteristic_identity(fam, p, lams) <= 1e-8


def test_characteristic_rejects_unit_roots():
    fam = SurfaceFamily("an", 3)
    with pytest.raises(ValueError):
        characteristic_identity(fam, ShearPoint(fam, (0.1, 0, 0)), [1])


def test_isospectral_roundtrip():
    rng = np.random.default_rng(2)
    for _ in range(5):
        Z = rng.uniform(-1, 1, 3)
        G = identification_rhs(Z).real
        P = 2 * np.arccosh(G / 2)  # P_i = X_i + X_{i+1}
        X = np.linalg.solve([[1, 1, 0], [0, 1, 1], [1, 0, 1]], P)
        assert np.allclose(isospectral_targets(X), G)
        r = isospectral_solve(X)
        assert r.converged and r.residual <= 1e-10
        assert np.allclose(identification_rhs(r.Z), G, rtol=1e-10)


def test_isospectral_vanishing_perimeter_has_no_finite_root():
    r = isospectral_solve([0, 0, 1])
    assert r.markov == pytest.approx(-4)
    assert not r.converged


def test_isospectral_zero():
    r = isospectral_solve([0, 0, 0])
    assert r.markov == pytest.approx(-4)
    assert np.allclose(identification_rhs(r.Z), 2)
    assert not r.is_real


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_isospectral_reality_matches_markov(X):
    # a vanishing perimeter puts the only roots at infinity
    assume(min(abs(X[i] + X[(i + 1) % 3]) for i in range(3)) > 1e-3)
    r = isospectral_solve(X)
    assume(abs(r.markov) > 1e-6)
    assert r.converged
    assert r.is_real == (r.markov >= 0)
