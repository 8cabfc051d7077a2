"""Isomonodromic flow on skew matrices, dual residues and monodromy data.

The state is a pair ``(u, V)`` of distinct poles and a complex skew matrix.
Each coordinate ``u_i`` generates a commuting Hamiltonian flow

    dV/du_i = [V_i, V],   (V_i)_{ik} = V_{ik}/(u_i - u_k),  (V_i)_{ki} = V_{ki}/(u_i - u_k)

with Hamiltonian ``H_i = 1/2 sum_j V_ij^2 / (u_i - u_j)`` with respect to the
linear so(n) bracket.  For ``n = 3`` the flow in ``u_2`` reduces to a one
parameter family of Painleve VI equations, which :func:`pvi_reduction`
checks by finite differences.
"""
from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .laurent import LaurentScalar

__all__ = [
    "FlowState",
    "FlowError",
    "flow_rhs",
    "hamiltonian",
    "hamiltonian_gradient",
    "so_bracket",
    "lie_poisson_check",
    "lie_poisson_velocity",
    "Trajectory",
    "integrate_flow",
    "eigenvalue_drift",
    "flow_compatibility",
    "DualResidues",
    "dual_residues",
    "dual_trace_symbolic",
    "MonodromyTuple",
    "MonodromyError",
    "monodromy_matrices",
    "random_q",
    "random_unipotent",
    "CommutatorReport",
    "commutator_trace_report",
    "skew_with_spectrum",
    "mu_from_shear",
    "PVIResult",
    "pvi_y",
    "pvi_residual",
    "pvi_reduction",
    "pvi_experiment",
]

log = logging.getLogger(__name__)

SKEW_TOL = 1e-12


class FlowError(ValueError):
    """Invalid state or a step that hits coincident poles."""


class MonodromyError(ValueError):
    """``q`` is a root of ``det(qS + S^T) = 0``."""


def _check_distinct(u: np.ndarray, tol: float = 0.0) -> None:
    for i, j in combinations(range(len(u)), 2):
        if abs(u[i] - u[j]) <= tol:
            raise FlowError(f"coincident poles u[{i}] = u[{j}] = {u[i]}")


@dataclass(frozen=True)
class FlowState:
    """Distinct poles ``u`` and a complex skew matrix ``V``."""

    u: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex).reshape(-1)
        V = np.asarray(self.V, dtype=complex)
        n = len(u)
        if V.shape != (n, n):
            raise FlowError(f"V has shape {V.shape}, expected {(n, n)}")
        scale = max(1.0, float(np.abs(V).max(initial=0.0)))
        if np.abs(V + V.T).max(initial=0.0) > SKEW_TOL * scale:
            raise FlowError("V is not skew-symmetric")
        _check_distinct(u)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "V", V)

    @property
    def n(self) -> int:
        return len(self.u)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, scale: float = 1.0) -> "FlowState":
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        u = rng.normal(size=n) + 1j * rng.normal(size=n)
        return cls(u, scale * (A - A.T) / 2)


def _V_i(u: np.ndarray, V: np.ndarray, i: int) -> np.ndarray:
    n = len(u)
    Vi = np.zeros_like(V)
    for k in range(n):
        if k == i:
            continue
        d = u[i] - u[k]
        if d == 0:
            raise FlowError(f"coincident poles u[{i}] = u[{k}]")
        Vi[i, k] = V[i, k] / d
        Vi[k, i] = V[k, i] / d
    return Vi


def flow_rhs(state: FlowState, i: int) -> np.ndarray:
    """Velocity ``dV/du_i = [V_i, V]`` (a skew matrix)."""
    Vi = _V_i(state.u, state.V, i)
    return Vi @ state.V - state.V @ Vi


def hamiltonian(state: FlowState, i: int) -> complex:
    """``H_i = 1/2 sum_{j != i} V_ij^2 / (u_i - u_j)``."""
    u, V = state.u, state.V
    total = 0j
    for j in range(state.n):
        if j != i:
            total += V[i, j] ** 2 / (u[i] - u[j])
    return complex(total / 2)


def hamiltonian_gradient(state: FlowState, i: int) -> dict:
    """Partial derivatives of ``H_i`` in the independent entries ``V_cd``, ``c < d``."""
    u, V = state.u, state.V
    grad = {}
    for j in range(state.n):
        if j == i:
            continue
        c, d = min(i, j), max(i, j)
        grad[(c, d)] = V[c, d] / (u[i] - u[j])
    return grad


def so_bracket(V: np.ndarray, a: int, b: int, c: int, d: int) -> complex:
    """Linear bracket ``{V_ab, V_cd}`` on so(n).

    ``d_bc V_ad - d_ac V_bd - d_bd V_ac + d_ad V_bc``; antisymmetric under
    ``a <-> b`` and under ``c <-> d``.
    """
    out = 0j
    if b == c:
        out += V[a, d]
    if a == c:
        out -= V[b, d]
    if b == d:
        out -= V[a, c]
    if a == d:
        out += V[b, c]
    return out


def lie_poisson_velocity(state: FlowState, i: int) -> np.ndarray:
    """``{V, H_i}`` computed entrywise from :func:`so_bracket`."""
    grad = hamiltonian_gradient(state, i)
    n = state.n
    out = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            out[a, b] = sum(so_bracket(state.V, a, b, c, d) * g for (c, d), g in grad.items())
    return out


def lie_poisson_check(state: FlowState, i: int) -> float:
    """Max abs difference between ``{V, H_i}`` and :func:`flow_rhs`."""
    diff = lie_poisson_velocity(state, i) - flow_rhs(state, i)
    return float(np.abs(diff).max(initial=0.0))


@dataclass
class Trajectory:
    """Nodes of a fixed-step integration along one pole coordinate."""

    index: int
    times: np.ndarray
    u: list
    V: list
    skew_drift: list = field(default_factory=list)

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def states(self) -> Iterable[FlowState]:
        for u, V in zip(self.u, self.V):
            yield FlowState(u, V)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "times": [float(t) for t in self.times],
            "V": [[[[float(z.real), float(z.imag)] for z in row] for row in V] for V in self.V],
            "max_skew_drift": float(max(self.skew_drift, default=0.0)),
        }


def integrate_flow(state0: FlowState, index: int, t_span: tuple, step: float,
                   *, collision_tol: float = 1e-12) -> Trajectory:
    """Classical RK4 along ``u_index`` from ``t_span[0]`` to ``t_span[1]``.

    The starting value of ``u_index`` is overwritten with ``t_span[0]``.  After
    every step ``V`` is replaced by its skew part and the removed symmetric
    part is recorded in ``skew_drift``.
    """
    t0, t1 = (float(t_span[0]), float(t_span[1]))
    if step <= 0:
        raise ValueError("step must be positive")
    nsteps = int(round(abs(t1 - t0) / step))
    if nsteps == 0 or abs(nsteps * step - abs(t1 - t0)) > 1e-9 * max(1.0, abs(t1 - t0)):
        raise ValueError("t_span length must be a positive multiple of step")
    h = step if t1 >= t0 else -step
    u = state0.u.copy()
    u[index] = t0
    others = np.delete(u, index)

    def rhs(t, V):
        uu = u.copy()
        uu[index] = t
        Vi = _V_i(uu, V, index)
        return Vi @ V - V @ Vi

    def check(t):
        if np.min(np.abs(others - t)) <= collision_tol:
            raise FlowError(f"u[{index}] collides with another pole at {t}")

    V = state0.V.copy()
    times = [t0]
    us, Vs, drift = [u.copy()], [V.copy()], [0.0]
    t = t0
    check(t)
    for k in range(nsteps):
        check(t + h / 2)
        check(t + h)
        k1 = rhs(t, V)
        k2 = rhs(t + h / 2, V + h / 2 * k1)
        k3 = rhs(t + h / 2, V + h / 2 * k2)
        k4 = rhs(t + h, V + h * k3)
        V = V + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        sym = (V + V.T) / 2
        drift.append(float(np.abs(sym).max()))
        V = V - sym
        t = t0 + (k + 1) * h
        uu = u.copy()
        uu[index] = t
        times.append(t)
        us.append(uu)
        Vs.append(V.copy())
    if drift:
        log.debug("max skew drift %.3e over %d steps", max(drift), nsteps)
    return Trajectory(index, np.array(times), us, Vs, drift)


def _sorted_eigs(V: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvals(V)
    return w[np.lexsort((w.imag, w.real))]


def eigenvalue_drift(traj: Trajectory) -> float:
    """Max distance of the spectrum of ``V`` from its initial value."""
    from scipy.optimize import linear_sum_assignment

    w0 = np.linalg.eigvals(traj.V[0])
    worst = 0.0
    for V in traj.V[1:]:
        w = np.linalg.eigvals(V)
        cost = np.abs(w0[:, None] - w[None, :])
        r, c = linear_sum_assignment(cost)
        worst = max(worst, float(cost[r, c].max()))
    return worst


def flow_compatibility(state: FlowState, i: int, j: int, h: float = 1e-5) -> float:
    """Max entry of ``d_j(F_i) - d_i(F_j)`` with ``F_k = [V_k, V]`` (central differences).

    Derivatives are total: moving ``u_j`` also moves ``V`` along ``F_j``.
    """
    # second order accuracy needs the V-displacement to second order as well
    def shifted(k, s):
        st = state
        half = FlowState(st.u + s * h / 2 * _unit(st.n, k), st.V + s * h / 2 * flow_rhs(st, k))
        return FlowState(st.u + s * h * _unit(st.n, k), st.V + s * h * flow_rhs(half, k))

    def d(outer, inner):
        return (flow_rhs(shifted(outer, +1), inner) - flow_rhs(shifted(outer, -1), inner)) / (2 * h)

    return float(np.abs(d(j, i) - d(i, j)).max())


def _unit(n, k):
    e = np.zeros(n, dtype=complex)
    e[k] = 1
    return e


@dataclass(frozen=True)
class DualResidues:
    """Residues ``A_k = E_k (nu - 1/2 - V)``; only row ``k`` of ``A_k`` is nonzero."""

    nu: complex
    A: tuple

    def cross_traces(self) -> dict:
        return {(i, j): complex(np.trace(self.A[i] @ self.A[j]))
                for i, j in combinations(range(len(self.A)), 2)}


def dual_residues(V, nu: complex = 0.0) -> tuple[DualResidues, list]:
    """Build the dual residues and report ``Tr(A_i A_j)`` beside ``V_ij^2``.

    Returns
    -------
    residues : DualResidues
    report : list of dict
        One record per pair ``i < j`` with the trace, ``V_ij^2`` and the
        residual ``Tr(A_i A_j) + V_ij^2`` (which vanishes identically).
    """
    V = np.asarray(V, dtype=complex)
    n = V.shape[0]
    B = (nu - 0.5) * np.eye(n) - V
    A = []
    for k in range(n):
        Ak = np.zeros_like(B)
        Ak[k] = B[k]
        A.append(Ak)
    res = DualResidues(complex(nu), tuple(A))
    report = []
    for (i, j), tr in res.cross_traces().items():
        report.append({"i": i + 1, "j": j + 1, "trace": tr, "V_sq": complex(V[i, j] ** 2),
                       "residual": abs(tr + V[i, j] ** 2)})
    return res, report


def dual_trace_symbolic(n: int) -> dict:
    """Exact ``Tr(A_i A_j) + V_ij^2`` for a generic skew ``V`` and generic ``nu``.

    Entries ``v_ij`` (``i < j``) and ``nu`` are independent polynomial
    variables; the result maps each pair to its (zero) difference polynomial.
    """
    names = ["nu"] + [f"v{i}{j}" for i, j in combinations(range(1, n + 1), 2)]
    one = LaurentScalar.constant(1, names)
    zero = LaurentScalar.constant(0, names)

    def var(name):
        return LaurentScalar.monomial(names, {name: 1})

    def entry(a, b):
        if a == b:
            return zero
        if a < b:
            return var(f"v{a + 1}{b + 1}")
        return -var(f"v{b + 1}{a + 1}")

    half = LaurentScalar.constant(Fraction(1, 2), names)
    B = [[(var("nu") - half if a == b else zero) - entry(a, b) for b in range(n)] for a in range(n)]

    def A(k, a, b):
        return B[a][b] if a == k else zero

    out = {}
    for i, j in combinations(range(n), 2):
        tr = zero
        for a in range(n):
            for b in range(n):
                tr = tr + A(i, a, b) * A(j, b, a)
        out[(i + 1, j + 1)] = tr + entry(i, j) * entry(i, j) * one
    return out


@dataclass(frozen=True)
class MonodromyTuple:
    """``M_k = I - E_k (q S + S^T)`` and ``M_inf = -q^{-1} S^{-1} S^T``."""

    q: complex
    S: np.ndarray
    M: tuple
    M_inf: np.ndarray

    def trace_identity_residual(self) -> float:
        """Max relative residual of ``Tr(M_i M_j) = n - 2 - 2q + q S_ij^2``."""
        n = len(self.M)
        worst = 0.0
        for i, j in combinations(range(n), 2):
            lhs = np.trace(self.M[i] @ self.M[j])
            rhs = n - 2 - 2 * self.q + self.q * self.S[i, j] ** 2
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        return float(worst)

    def determinant_residual(self) -> float:
        return float(max(abs(np.linalg.det(Mk) + self.q) for Mk in self.M))


def monodromy_matrices(S, q: complex, *, det_tol: float = 1e-10) -> MonodromyTuple:
    """Monodromy matrices attached to a unit upper triangular ``S`` at parameter ``q``."""
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    C = q * S + S.T
    scale = max(1.0, float(np.prod(np.linalg.norm(C, axis=1))))
    if abs(np.linalg.det(C)) <= det_tol * scale:
        raise MonodromyError(f"det(qS + S^T) vanishes at q = {q}")
    I = np.eye(n, dtype=complex)
    M = []
    for k in range(n):
        Mk = I.copy()
        Mk[k] -= C[k]
        M.append(Mk)
    M_inf = -np.linalg.solve(S, S.T) / q
    return MonodromyTuple(complex(q), S, tuple(M), M_inf)


def random_unipotent(n: int, rng: np.random.Generator, *, integer: bool = False,
                     scale: float = 2.0) -> np.ndarray:
    """Random unit upper triangular matrix."""
    S = np.eye(n)
    iu = np.triu_indices(n, 1)
    if integer:
        S[iu] = rng.integers(-3, 4, size=len(iu[0]))
    else:
        S[iu] = rng.uniform(-scale, scale, size=len(iu[0]))
    return S


def random_q(S: np.ndarray, rng: np.random.Generator, *, min_gap: float = 1e-2,
             tries: int = 100) -> complex:
    """Draw ``q`` on the unit annulus away from roots of ``det(qS + S^T)``."""
    roots = np.linalg.eigvals(-np.linalg.solve(S, S.T))
    for _ in range(tries):
        q = complex(cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(0, 2 * np.pi)))
        if np.min(np.abs(roots - q)) > min_gap * max(1.0, abs(q)):
            return q
    raise MonodromyError("could not draw q away from the characteristic roots")


@dataclass
class CommutatorReport:
    """Measured ratios ``Tr([M_k,M_i][M_j,M_l]) / DU`` per sample."""

    indices: tuple
    q: complex
    ratios: list
    skipped: list
    constant: bool

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "q": [self.q.real, self.q.imag],
            "ratios": [[r.real, r.imag] for r in self.ratios],
            "skipped": self.skipped,
            "constant": self.constant,
        }


def commutator_trace_report(samples: Sequence[np.ndarray], q: complex, indices: tuple,
                            *, rel_tol: float = 1e-8, zero_tol: float = 1e-12) -> CommutatorReport:
    """Compare ``Tr([M_k,M_i][M_j,M_l])`` with ``(s_ij s_kl - s_il s_kj) s_ik s_jl``.

    Indices are 1-based with ``i < j < k < l``.  Nothing is asserted; the
    report records the ratios and whether they agree across samples.
    """
    i, j, k, l = (x - 1 for x in indices)
    if not (i < j < k < l):
        raise ValueError("indices must satisfy i < j < k < l")
    ratios, skipped = [], []
    for idx, S in enumerate(samples):
        S = np.asarray(S, dtype=complex)
        try:
            mt = monodromy_matrices(S, q)
        except MonodromyError as exc:
            skipped.append({"sample": idx, "reason": str(exc)})
            continue
        M = mt.M
        c1 = M[k] @ M[i] - M[i] @ M[k]
        c2 = M[j] @ M[l] - M[l] @ M[j]
        lhs = np.trace(c1 @ c2)
        s = lambda a, b: S[min(a, b), max(a, b)]
        den = (s(i, j) * s(k, l) - s(i, l) * s(k, j)) * s(i, k) * s(j, l)
        if abs(den) <= zero_tol:
            skipped.append({"sample": idx, "reason": "zero denominator"})
            continue
        ratios.append(complex(lhs / den))
    constant = bool(ratios) and all(abs(r - ratios[0]) <= rel_tol * max(1.0, abs(ratios[0]))
                                    for r in ratios)
    return CommutatorReport(tuple(indices), complex(q), ratios, skipped, constant)


# --- Painleve VI reduction (n = 3) -------------------------------------------------


def skew_with_spectrum(mu: complex, rng: np.random.Generator) -> np.ndarray:
    """Random 3x3 complex skew matrix with eigenvalues ``{mu, -mu, 0}``."""
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    A = A - A.T
    s2 = -(A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2)
    return A * (mu / np.sqrt(s2))


def mu_from_shear(Z: Sequence[complex]) -> complex:
    """Geometric choice ``mu = (Z1 + Z2 + Z3) / (4 pi i)``."""
    return complex(sum(Z)) / (4j * np.pi)


def pvi_y(t, V12, V13, V23, mu, *, variant: str = "corrected"):
    """Painleve VI coordinate ``y`` from the entries of ``V``.

    ``variant="corrected"`` uses ``N = V12 V23 - mu V13`` and the denominator
    ``(t-1)(mu^2 + V12^2)^2 + t N^2``, which solves the equation when ``V``
    has spectrum ``{mu, -mu, 0}``.  ``variant="uncorrected"`` keeps
    ``N = V12 V23 + mu V13`` and ``(t-1)(mu + V12^2) + t N^2``.

    Returns ``(y, denominator)``.
    """
    if variant == "corrected":
        N = V12 * V23 - mu * V13
        den = (t - 1) * (mu ** 2 + V12 ** 2) ** 2 + t * N ** 2
    elif variant == "uncorrected":
        N = V12 * V23 + mu * V13
        den = (t - 1) * (mu + V12 ** 2) + t * N ** 2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return t * N ** 2 / den, den


def pvi_residual(t: np.ndarray, y: np.ndarray, mu: complex) -> np.ndarray:
    """Pointwise residual of PVI at interior nodes of a uniform grid.

    Normalized by ``max(|y''|, 1)`` over the grid.  Parameters are
    ``alpha = (2 mu - 1)^2 / 2``, ``beta = gamma = 0``, ``delta = 1/2``.
    """
    h = t[1] - t[0]
    yd = (y[2:] - y[:-2]) / (2 * h)
    ydd = (y[2:] - 2 * y[1:-1] + y[:-2]) / h ** 2
    yy, tt = y[1:-1], t[1:-1]
    rhs = (0.5 * (1 / yy + 1 / (yy - 1) + 1 / (yy - tt)) * yd ** 2
           - (1 / tt + 1 / (tt - 1) + 1 / (yy - tt)) * yd
           + yy * (yy - 1) * (yy - tt) / (tt ** 2 * (tt - 1) ** 2)
           * ((2 * mu - 1) ** 2 / 2 + 0.5 * tt * (tt - 1) / (yy - tt) ** 2))
    return np.abs(ydd - rhs) / max(float(np.abs(ydd).max(initial=0.0)), 1.0)


@dataclass
class PVIResult:
    t: np.ndarray
    y: np.ndarray
    residual: float | None
    flagged: list

    def to_dict(self) -> dict:
        return {"residual": self.residual, "nodes": int(len(self.t)), "flagged": self.flagged}


def pvi_reduction(traj: Trajectory, mu: complex, *, variant: str = "corrected",
                  den_tol: float = 1e-8) -> PVIResult:
    """Map an ``n = 3`` trajectory in ``u_2`` to ``(t, y)`` and measure the PVI residual.

    Nodes whose ``y`` denominator is within ``den_tol`` of zero, or where
    ``y`` lands on a singular value ``0, 1, t``, are flagged; interior
    stencils touching a flagged node are dropped.  With every node flagged
    (e.g. ``V = 0``) the residual is ``None``.
    """
    if traj.index != 1 or len(traj.u[0]) != 3:
        raise ValueError("pvi_reduction needs an n = 3 trajectory in u_2")
    u = np.array(traj.u)
    V = np.array(traj.V)
    t = (u[:, 1] - u[:, 0]) / (u[:, 2] - u[:, 0])
    y, den = pvi_y(t, V[:, 0, 1], V[:, 0, 2], V[:, 1, 2], mu, variant=variant)
    bad = np.abs(den) <= den_tol
    bad |= np.abs(t) <= den_tol
    bad |= np.abs(t - 1) <= den_tol
    with np.errstate(all="ignore"):
        # fixed singularities of the equation
        for s in (0.0, 1.0, t):
            bad |= ~(np.abs(y - s) > den_tol)
    flagged = [int(k) for k in np.flatnonzero(bad)]
    if len(t) < 3:
        return PVIResult(t, y, None, flagged)
    ok = ~(bad[2:] | bad[1:-1] | bad[:-2])
    if not ok.any():
        return PVIResult(t, y, None, flagged)
    with np.errstate(all="ignore"):
        yy = np.where(bad, 0.5, y)
        r = pvi_residual(t, yy, mu)
    r = r[ok]
    if not np.all(np.isfinite(r)):
        return PVIResult(t, y, None, flagged)
    return PVIResult(t, y, float(r.max()), flagged)


def pvi_experiment(mu: complex = 0.3, *, seed: int = 4, step: float = 1e-3,
                   t_span: tuple = (0.4, 0.6), variant: str = "corrected") -> PVIResult:
    """Integrate a random spectrum-``{+-mu, 0}`` state in ``u_2`` and reduce it."""
    rng = np.random.default_rng(seed)
    V0 = skew_with_spectrum(mu, rng)
    state = FlowState(np.array([0.0, t_span[0], 1.0]), V0)
    traj = integrate_flow(state, 1, t_span, step)
    return pvi_reduction(traj, mu, variant=variant)
