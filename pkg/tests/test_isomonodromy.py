import numpy as np
import pytest
from hypothesis import given, strategies as st

from stokesleaf.isomonodromy import (
    FlowError,
    FlowState,
    MonodromyError,
    commutator_trace_report,
    dual_residues,
    dual_trace_symbolic,
    eigenvalue_drift,
    flow_compatibility,
    flow_rhs,
    hamiltonian,
    integrate_flow,
    lie_poisson_check,
    monodromy_matrices,
    mu_from_shear,
    pvi_experiment,
    pvi_reduction,
    pvi_y,
    random_q,
    random_unipotent,
    skew_with_spectrum,
    so_bracket,
)

seeds = st.integers(0, 2 ** 32 - 1)


def _state(n, seed, scale=1.0):
    return FlowState.random(n, np.random.default_rng(seed), scale)


def test_state_validation():
    with pytest.raises(FlowError):
        FlowState([0, 0, 1], np.zeros((3, 3)))
    with pytest.raises(FlowError):
        FlowState([0, 1, 2], np.ones((3, 3)))
    with pytest.raises(FlowError):
        FlowState([0, 1], np.zeros((3, 3)))


@given(st.integers(2, 6), seeds)
def test_flow_rhs_is_skew(n, seed):
    st_ = _state(n, seed)
    for i in range(n):
        F = flow_rhs(st_, i)
        assert np.abs(F + F.T).max() <= 1e-12 * (1 + np.abs(F).max())
        if n == 2:
            assert np.abs(F).max() <= 1e-14


def test_flow_rhs_zero():
    assert not flow_rhs(FlowState([0, 1, 2], np.zeros((3, 3))), 0).any()


@given(st.integers(3, 5), seeds)
def test_trace_v2_conserved_infinitesimally(n, seed):
    s = _state(n, seed)
    for i in range(n):
        # d/du_i Tr V^2 = 2 Tr(V F_i)
        assert abs(np.trace(s.V @ flow_rhs(s, i))) <= 1e-10 * (1 + np.abs(s.V).max() ** 3)


def test_hamiltonian_examples():
    V = np.zeros((3, 3))
    V[0, 1], V[1, 0] = 1, -1
    s = FlowState([0, 1, 2], V)
    assert hamiltonian(s, 0) == pytest.approx(-0.5)
    assert hamiltonian(FlowState([0, 1, 2], np.zeros((3, 3))), 1) == 0
    s2 = _state(4, 3)
    t = 1.7 - 0.2j
    assert hamiltonian(FlowState(s2.u, t * s2.V), 2) == pytest.approx(t ** 2 * hamiltonian(s2, 2))


def test_so_bracket_antisymmetry():
    V = _state(4, 1).V
    for a, b, c, d in np.ndindex(4, 4, 4, 4):
        assert so_bracket(V, a, b, c, d) == pytest.approx(-so_bracket(V, b, a, c, d))
        assert so_bracket(V, a, b, c, d) == pytest.approx(-so_bracket(V, a, b, d, c))
        assert so_bracket(V, a, b, c, d) == pytest.approx(-so_bracket(V, c, d, a, b))


@given(st.integers(3, 5), seeds)
def test_lie_poisson(n, seed):
    s = _state(n, seed)
    assert max(lie_poisson_check(s, i) for i in range(n)) <= 1e-10


def test_lie_poisson_zero():
    assert lie_poisson_check(FlowState([0, 1, 2], np.zeros((3, 3))), 1) == 0


def _off_path_state(n, seed):
    s = _state(n, seed, 0.5)
    u = s.u.copy()
    u[0] = 0
    u[1:] = u[1:] + 1j * np.where(u[1:].imag >= 0, 0.5, -0.5)
    return FlowState(u, s.V)


def test_integrate_constant():
    s = FlowState([0, 2j, -3j], np.zeros((3, 3)))
    tr = integrate_flow(s, 0, (0, 1), 0.1)
    assert all(not V.any() for V in tr.V)
    assert len(tr.times) == 11


def test_isospectrality_and_order():
    s = _off_path_state(4, 11)
    drift = eigenvalue_drift(integrate_flow(s, 0, (0, 1), 1e-3))
    assert drift <= 1e-6
    d1 = eigenvalue_drift(integrate_flow(s, 0, (0, 1), 0.05))
    d2 = eigenvalue_drift(integrate_flow(s, 0, (0, 1), 0.025))
    assert 8 <= d1 / d2 <= 40


def test_collision_detected():
    s = FlowState([0, 0.5, 3j], _state(3, 2).V)
    with pytest.raises(FlowError):
        integrate_flow(s, 0, (0, 1), 0.25)


def test_bad_step():
    s = _off_path_state(3, 1)
    with pytest.raises(ValueError):
        integrate_flow(s, 0, (0, 1), 0.3)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_flow_compatibility(seed):
    s = _state(4, seed)
    for i, j in [(0, 1), (1, 3), (2, 3)]:
        assert flow_compatibility(s, i, j) <= 1e-6


def test_dual_residue_examples():
    V = np.zeros((3, 3))
    V[0, 1], V[1, 0] = 2.0, -2.0
    res, rep = dual_residues(V)
    assert rep[0]["trace"] == pytest.approx(-4)
    for k, A in enumerate(res.A):
        assert not np.delete(A, k, axis=0).any()
    _, rep0 = dual_residues(np.zeros((4, 4)), 0.7)
    assert all(r["trace"] == 0 for r in rep0)


@given(st.integers(3, 6), seeds, st.complex_numbers(max_magnitude=3))
def test_dual_residue_traces(n, seed, nu):
    _, rep = dual_residues(_state(n, seed).V, nu)
    assert max(r["residual"] for r in rep) <= 1e-12 * (1 + max(abs(r["V_sq"]) for r in rep))


@pytest.mark.parametrize("n", [3, 4])
def test_dual_residue_symbolic(n):
    assert all(p.is_zero() for p in dual_trace_symbolic(n).values())


def test_monodromy_examples():
    rng = np.random.default_rng(4)
    S = random_unipotent(4, rng, integer=True)
    mt = monodromy_matrices(S, 1.0)
    assert mt.trace_identity_residual() <= 1e-12
    assert mt.determinant_residual() <= 1e-12
    mid = monodromy_matrices(np.eye(3), 1.0)
    assert np.allclose(mid.M_inf, -np.eye(3))
    for k, M in enumerate(mt.M):
        assert not np.delete(M - np.eye(4), k, axis=0).any()


def test_monodromy_rejects_roots():
    S = np.array([[1, 3], [0, 1]], dtype=float)
    # det(qS + S^T) = (q+1)^2 - 9q vanishes at the roots of q^2 - 7q + 1
    q = (7 + np.sqrt(45)) / 2
    with pytest.raises(MonodromyError):
        monodromy_matrices(S, q)


@given(st.integers(3, 6), seeds)
def test_monodromy_trace_identity(n, seed):
    rng = np.random.default_rng(seed)
    S = random_unipotent(n, rng)
    q = random_q(S, rng)
    mt = monodromy_matrices(S, q)
    assert mt.trace_identity_residual() <= 1e-10
    assert mt.determinant_residual() <= 1e-10 * max(1, abs(q))


def test_commutator_report_measures():
    rng = np.random.default_rng(1)
    samples = [random_unipotent(4, rng) for _ in range(3)]
    rep = commutator_trace_report(samples, 0.7, (1, 2, 3, 4))
    assert len(rep.ratios) == 3 and isinstance(rep.constant, bool)
    S = np.eye(4)
    rep0 = commutator_trace_report([S], 0.7, (1, 2, 3, 4))
    assert rep0.skipped and rep0.skipped[0]["reason"] == "zero denominator"
    with pytest.raises(ValueError):
        commutator_trace_report(samples, 0.7, (2, 1, 3, 4))


def test_skew_with_spectrum():
    V = skew_with_spectrum(0.3, np.random.default_rng(0))
    w = np.sort_complex(np.linalg.eigvals(V))
    assert np.allclose(sorted(abs(w)), [0, 0.3, 0.3], atol=1e-12)


def test_pvi_residual_and_order():
    a = pvi_experiment(0.3, step=1e-3)
    b = pvi_experiment(0.3, step=5e-4)
    assert a.residual <= 1e-3
    assert a.residual / b.residual >= 2


def test_pvi_uncorrected_map_fails():
    assert pvi_experiment(0.3, step=1e-3, variant="uncorrected").residual > 1e-3


def test_pvi_zero_trajectory_flagged():
    s = FlowState([0, 0.4, 1], np.zeros((3, 3)))
    tr = integrate_flow(s, 1, (0.4, 0.5), 1e-2)
    res = pvi_reduction(tr, 0.3)
    assert res.residual is None
    assert len(res.flagged) == len(tr.times)


def test_pvi_y_variants():
    y, den = pvi_y(0.5, 1.0, 0.0, 0.0, 0.3)
    assert y == 0 and den != 0
    with pytest.raises(ValueError):
        pvi_y(0.5, 1, 1, 1, 0.3, variant="other")


def test_mu_from_shear():
    assert mu_from_shear([np.pi, np.pi, 2 * np.pi]) == pytest.approx(-1j)
