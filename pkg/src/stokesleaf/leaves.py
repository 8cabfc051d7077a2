"""Spectra of ``S^{-T} S``, Jordan profiles and symplectic leaf dimensions.

Stokes matrices built from shear coordinates are badly conditioned (entries
grow like exponentials of coordinate sums), so the spectral routines work in
``mpmath`` at :data:`DEFAULT_DPS` digits.  Double-precision input is accepted
and promoted.
"""
from __future__ import annotations

import cmath
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
from scipy.optimize import linear_sum_assignment

from .surfaces import (
    MP_DPS,
    ShearPoint,
    StokesMatrix,
    SurfaceFamily,
    build_generators,
    spectral_exponents,
    stokes_matrix,
)

__all__ = [
    "DEFAULT_DPS",
    "JordanProfile",
    "ProfileError",
    "monodromy_product",
    "jordan_profile",
    "profile_from_blocks",
    "bondal_dimension",
    "generic_leaf_dimension",
    "predicted_leaf_dimension",
    "predicted_discrepancy",
    "theorem_blocks",
    "verify_jordan_theorems",
    "symmetric_rank",
    "MinkowskiVectors",
    "minkowski_vectors",
    "MarkovReport",
    "markov_element",
    "markov_value",
    "characteristic_closed_form",
    "characteristic_identity",
    "IsospectralResult",
    "identification_rhs",
    "isospectral_solve",
    "isospectral_targets",
    "random_generic_stokes",
]

DEFAULT_DPS = MP_DPS


class ProfileError(ValueError):
    """Jordan blocks that violate reciprocal pairing."""


def _mp(dps: int | None):
    return mpmath.workdps(dps or DEFAULT_DPS)


def _to_mp_matrix(S) -> mpmath.matrix:
    if isinstance(S, StokesMatrix):
        S = S.to_mpmath() if S.backend == "mpmath" else S.to_numpy()
    if isinstance(S, mpmath.matrix):
        return S.copy()
    A = np.asarray(S)
    return mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in A])


def monodromy_product(S, *, dps: int | None = None) -> mpmath.matrix:
    """``S^{-T} S`` by a triangular solve.

    ``S^T`` is unit lower triangular, so forward substitution is exact up to
    rounding at the working precision.
    """
    with _mp(dps):
        A = _to_mp_matrix(S)
        n = A.rows
        for i in range(n):
            if A[i, i] != 1 or any(A[i, j] != 0 for j in range(i)):
                raise ValueError("S must be unit upper triangular")
        M = mpmath.matrix(n, n)
        # solve S^T M = S column by column; (S^T)[i, k] = S[k, i]
        for c in range(n):
            for i in range(n):
                acc = A[i, c]
                for k in range(i):
                    acc -= A[k, i] * M[k, c]
                M[i, c] = acc
        return M


# -- Jordan profiles ---------------------------------------------------------------

@dataclass
class JordanProfile:
    """Jordan blocks of a matrix with Bondal pairing counts.

    Attributes
    ----------
    blocks : list of (eigenvalue, size, multiplicity)
    paired : dict
        ``(eigenvalue, k) -> n`` for reciprocal pairs of ``k``-blocks; each
        pair is listed once, under its representative eigenvalue.
    self_paired : dict
        ``(+1 or -1, k) -> m`` for blocks with eigenvalue ``(-1)^(k+1)``.
    flagged : bool
        True when two eigenvalue clusters are too close to separate reliably.
    """

    blocks: list
    paired: dict = field(default_factory=dict)
    self_paired: dict = field(default_factory=dict)
    flagged: bool = False
    notes: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return sum(k * m for _, k, m in self.blocks)

    def eigenvalues(self) -> list:
        out = []
        for lam, k, m in self.blocks:
            out += [lam] * (k * m)
        return out

    def block_sizes(self, target: complex, tol: float = 1e-8) -> list:
        out = []
        for lam, k, m in self.blocks:
            if abs(lam - target) <= tol * max(1.0, abs(target)):
                out += [k] * m
        return sorted(out)

    def is_diagonal(self) -> bool:
        return all(k == 1 for _, k, _ in self.blocks)


def _unit_sign(lam: complex, tol: float) -> int:
    """+1 or -1 when ``lam`` is numerically that value, else 0."""
    if abs(lam - 1) <= tol:
        return 1
    if abs(lam + 1) <= tol:
        return -1
    return 0


def profile_from_blocks(blocks: Iterable[tuple], tol: float = 1e-8) -> JordanProfile:
    """Group ``(eigenvalue, size[, multiplicity])`` blocks and compute pairings."""
    merged: list = []
    for b in blocks:
        lam, k = complex(b[0]), int(b[1])
        m = int(b[2]) if len(b) > 2 else 1
        for idx, (lam2, k2, m2) in enumerate(merged):
            if k2 == k and abs(lam2 - lam) <= tol * max(1.0, abs(lam)):
                merged[idx] = (lam2, k2, m2 + m)
                break
        else:
            merged.append((lam, k, m))
    paired, self_paired = {}, {}
    used = [False] * len(merged)
    for idx, (lam, k, m) in enumerate(merged):
        if used[idx]:
            continue
        s = _unit_sign(lam, tol)
        if s:
            used[idx] = True
            lam_exact = complex(s)
            if s == (-1) ** (k + 1):
                self_paired[(s, k)] = self_paired.get((s, k), 0) + m
            else:
                if m % 2:
                    raise ProfileError(f"odd number of {k}-blocks at {s} cannot pair")
                paired[(lam_exact, k)] = paired.get((lam_exact, k), 0) + m // 2
            continue
        inv = 1 / lam
        partner = None
        for jdx, (lam2, k2, m2) in enumerate(merged):
            if jdx != idx and not used[jdx] and k2 == k and abs(lam2 - inv) <= tol * max(1.0, abs(inv)):
                partner = jdx
                break
        if partner is None or merged[partner][2] != m:
            raise ProfileError(f"block J({lam:.6g}, {k}) has no reciprocal partner")
        used[idx] = used[partner] = True
        rep = lam if abs(lam) >= 1 else inv
        paired[(rep, k)] = m
    merged.sort(key=lambda b: (round(b[0].real, 9), round(b[0].imag, 9), b[1]))
    return JordanProfile(merged, paired, self_paired)


def _cluster(values: Sequence, tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: (float(values[i].real), float(values[i].imag)))
    clusters: list[list[int]] = []
    for i in order:
        for c in clusters:
            ref = sum(values[j] for j in c) / len(c)
            if abs(values[i] - ref) <= tol * max(1, abs(ref)):
                c.append(i)
                break
        else:
            clusters.append([i])
    return clusters


def _numerical_rank(A: mpmath.matrix, rel_tol) -> int:
    sv = mpmath.svd_c(A, compute_uv=False)
    vals = [abs(s) for s in sv]
    top = max(vals) if vals else 0
    if top == 0:
        return 0
    return sum(1 for s in vals if s > rel_tol * top)


def jordan_profile(M, tol: float = 1e-9, *, rank_tol=None, dps: int | None = None) -> JordanProfile:
    """Jordan structure from ranks of powers of ``M - lambda I``.

    Parameters
    ----------
    M : matrix (mpmath, numpy or nested lists)
    tol : float
        Relative distance below which eigenvalues are merged into one
        cluster; also used to recognise the eigenvalues +-1.
    rank_tol : optional
        Singular values below ``rank_tol * sigma_max`` count as zero.  The
        default ``10**(-0.4 * dps)`` sits between rounding noise and the
        genuine singular values of geodesic Stokes data.  Input that is not
        already an ``mpmath`` matrix carries only double precision, so the
        default drops to ``1e-10``; pass ``tol`` of about ``1e-6`` for
        defective blocks of such input, whose eigenvalues split by
        ``sqrt(eps)``.
    """
    if not 1e-12 <= tol <= 1e-4:
        raise ValueError("tol must lie in [1e-12, 1e-4]")
    with _mp(dps):
        dps_now = mpmath.mp.dps
        A = _to_mp_matrix(M)
        n = A.rows
        if rank_tol is None:
            rank_tol = mpmath.mpf(10) ** (-0.4 * dps_now) if isinstance(M, mpmath.matrix) else mpmath.mpf(1e-10)
        rank_tol = mpmath.mpf(rank_tol)
        ev = mpmath.eig(A, left=False, right=False)
        clusters = _cluster(ev, tol)
        means = [sum(ev[i] for i in c) / len(c) for c in clusters]
        flagged = any(
            abs(means[a] - means[b]) <= 10 * tol * max(1, abs(means[a]))
            for a in range(len(means)) for b in range(a + 1, len(means))
        )
        blocks = []
        notes = []
        I = mpmath.eye(n)
        for c, lam in zip(clusters, means):
            mult = len(c)
            N = A - lam * I
            P = N
            ranks = [n]
            for _ in range(mult):
                ranks.append(_numerical_rank(P, rank_tol))
                if n - ranks[-1] >= mult or ranks[-1] == ranks[-2]:
                    break
                P = P * N
            if n - ranks[-1] != mult:
                flagged = True
                notes.append(f"nullity {n - ranks[-1]} != multiplicity {mult} at {complex(lam):.6g}")
            at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
            for k in range(1, len(ranks)):
                exact = at_least[k - 1] - at_least[k]
                if exact > 0:
                    blocks.append((complex(lam), k, exact))
    try:
        prof = profile_from_blocks(blocks, tol=max(tol, 1e-12))
    except ProfileError as exc:
        prof = JordanProfile(blocks, flagged=True, notes=[str(exc)])
    prof.flagged = prof.flagged or flagged
    prof.notes += notes
    return prof


def bondal_dimension(profile: JordanProfile, n: int) -> tuple:
    """Bondal's ``d(S)`` and the leaf dimension ``n(n-1)/2 - d``.

    Reciprocal pairs ``J(lam, k) + J(1/lam, k)`` contribute through
    ``profile.paired`` and the self-paired blocks ``J((-1)^(k+1), k)``
    through ``profile.self_paired``.
    """
    if profile.size != n:
        raise ProfileError(f"profile has size {profile.size}, expected {n}")
    if profile.flagged:
        raise ProfileError("profile is flagged as unreliable: " + "; ".join(profile.notes))
    groups: dict = defaultdict(dict)
    for (lam, k), cnt in profile.paired.items():
        s = _unit_sign(lam, 1e-12)
        key = s if s else lam
        groups[key][k] = groups[key].get(k, 0) + cnt
    m = {1: {}, -1: {}}
    for (s, k), cnt in profile.self_paired.items():
        m[s][k] = m[s].get(k, 0) + cnt
    d = Fraction(0)
    for key, nk in groups.items():
        weight = 2 if key in (1, -1) else 1
        d += weight * sum(min(k, l) * nk[k] * nk[l] for k in nk for l in nk)
    for s in (1, -1):
        nk = groups.get(s, {})
        mk = m[s]
        d += 2 * sum(min(k, l) * nk[k] * mk[l] for k in nk for l in mk)
        d += Fraction(1, 2) * sum(min(k, l) * mk[k] * mk[l] for k in mk for l in mk)
        d += sum(k * nk[k] for k in nk)
    d -= Fraction(1, 2) * sum(m[1].values())
    if d.denominator != 1:
        raise ProfileError(f"non-integer d(S) = {d}")
    d = int(d)
    return d, n * (n - 1) // 2 - d



def generic_leaf_dimension(n: int) -> int:
    return n * (n - 1) // 2 - n // 2


def predicted_leaf_dimension(family: SurfaceFamily) -> int:
    n = family.n
    if family.kind == "An":
        return 2 * (n - 2)
    return 3 * n - 7 if n % 2 else 3 * n - 8


def predicted_discrepancy(family: SurfaceFamily) -> int:
    """Generic leaf dimension minus the family's leaf dimension."""
    n = family.n
    if family.kind == "An":
        return (n - 3) ** 2 // 2 if n % 2 else (n - 2) * (n - 4) // 2
    return (n - 3) * (n - 5) // 2 if n % 2 else (n - 4) ** 2 // 2


def theorem_blocks(family: SurfaceFamily, point: ShearPoint) -> list:
    """Predicted Jordan blocks ``(eigenvalue, size, multiplicity)`` of ``S^{-T} S``."""
    n = family.n
    exps = [complex(x) for x in spectral_exponents(family, point)]
    out = []
    if family.kind == "An":
        (a,) = exps
        if n % 2:
            out += [(cmath.exp(a), 1, 1), (cmath.exp(-a), 1, 1), (1, 1, 1)]
            if n > 3:
                out.append((-1, 1, n - 3))
        else:
            out += [(-cmath.exp(a), 1, 1), (-cmath.exp(-a), 1, 1), (-1, 2, 1)]
            if n > 4:
                out.append((-1, 1, n - 4))
    elif n % 2:
        (a,) = exps
        out += [(cmath.exp(a), 1, 1), (cmath.exp(-a), 1, 1), (1, 1, 1), (-1, 2, 1)]
        if n > 5:
            out.append((-1, 1, n - 5))
    else:
        for a in exps:
            out += [(-cmath.exp(a), 1, 1), (-cmath.exp(-a), 1, 1)]
        if n > 4:
            out.append((-1, 1, n - 4))
    return [(complex(l), k, m) for l, k, m in out]


@dataclass
class JordanCheck:
    family: SurfaceFamily
    point: ShearPoint
    profile: JordanProfile | None
    predicted: list
    max_rel_error: float = math.nan
    blocks_match: bool = False
    skipped: str | None = None

    def passed(self, tol: float) -> bool:
        return self.skipped is None and self.blocks_match and self.max_rel_error <= tol


def _multiset_error(observed: Sequence[complex], predicted: Sequence[complex]) -> float:
    if len(observed) != len(predicted):
        return math.inf
    C = np.array([[abs(o - p) / max(1.0, abs(p)) for p in predicted] for o in observed])
    r, c = linear_sum_assignment(C)
    return float(C[r, c].max()) if len(r) else 0.0


def verify_jordan_theorems(family: SurfaceFamily, point: ShearPoint, tol: float = 1e-8,
                           *, cluster_tol: float = 1e-9, dps: int | None = None,
                           S: StokesMatrix | None = None) -> JordanCheck:
    """Compare the computed Jordan structure of ``S^{-T} S`` with the prediction."""
    exps = [abs(complex(x)) for x in spectral_exponents(family, point)]
    predicted = theorem_blocks(family, point)
    degenerate = min(exps) < 10 * tol or (len(exps) == 2 and abs(exps[0] - exps[1]) < 10 * tol)
    if degenerate:
        return JordanCheck(family, point, None, predicted, skipped="degenerate Casimir values")
    with _mp(dps):
        S = S if S is not None else stokes_matrix(family, point, backend="mpmath")
        prof = jordan_profile(monodromy_product(S), cluster_tol)
    pred_prof = profile_from_blocks(predicted)
    err = _multiset_error(prof.eigenvalues(), pred_prof.eigenvalues())
    obs_struct = Counter()
    for lam, k, m in prof.blocks:
        obs_struct[(_unit_sign(lam, 1e-6), k)] += m
    pred_struct = Counter()
    for lam, k, m in pred_prof.blocks:
        pred_struct[(_unit_sign(lam, 1e-6), k)] += m
    return JordanCheck(family, point, prof, predicted, err,
                       (obs_struct == pred_struct) and not prof.flagged)


# -- rank, Minkowski, Markov ----------------------------------------------------------

def symmetric_rank(S, tol: float | None = None, *, dps: int | None = None) -> int:
    """Numerical rank of ``S + S^T`` (singular values above ``tol * largest``).

    With ``tol=None`` the threshold follows the input precision:
    ``10**(-0.4 * dps)`` for an mpmath matrix, ``1e-9`` otherwise.  Points
    near the locus where an eigenvalue of ``S^-T S`` approaches -1 have a
    genuinely small singular value, so a float threshold misreads them.
    """
    with _mp(dps):
        if tol is None:
            tol = mpmath.mpf(10) ** (-0.4 * mpmath.mp.dps) if isinstance(S, mpmath.matrix) else 1e-9
        A = _to_mp_matrix(S)
        return _numerical_rank(A + A.T, tol)


def _pauli():
    s = 1 / math.sqrt(2)
    return [
        np.array([[0, s], [-s, 0]]),
        np.array([[0, s], [s, 0]]),
        np.array([[s, 0], [0, -s]]),
        np.array([[s, 0], [0, s]]),
    ]


@dataclass
class MinkowskiVectors:
    """Pauli coordinates of the basis elements.

    ``gram[i, j] = <v_i, v_j>`` under ``eta``; this reproduces ``G_ij`` off
    the diagonal and 2 on it.
    """

    vectors: np.ndarray
    eta: np.ndarray
    gram: np.ndarray


def minkowski_vectors(family: SurfaceFamily, point: ShearPoint) -> MinkowskiVectors:
    """Expand each basis matrix as ``sum_a v_a sigma_a``.

    The quadratic form is ``diag(+, -, -, +)``: ``v_1`` multiplies the
    rotation generator and ``v_4`` the identity, both of which enter
    ``Tr(g_i g_j^{-1})`` with a positive sign.  For ``An`` the identity
    component vanishes and only the first three coordinates are returned.
    """
    gens = build_generators(family, point)
    sig = _pauli()
    norms = [np.trace(s @ s).real for s in sig]
    V = np.array([[np.trace(np.array(g, dtype=complex).reshape(2, 2) @ s) / nrm
                   for s, nrm in zip(sig, norms)] for g in gens])
    eta = np.diag([1.0, -1.0, -1.0, 1.0])
    if family.kind == "An":
        V4 = V[:, 3]
        if np.max(np.abs(V4)) > 1e-9 * max(1.0, np.max(np.abs(V))):
            raise ArithmeticError("An basis element with nonzero trace")
        V = V[:, :3]
        eta = eta[:3, :3]
    gram = V @ eta @ V.T
    return MinkowskiVectors(V, eta, gram)


@dataclass
class MarkovReport:
    a: complex
    b: complex
    c: complex
    M: complex
    predicted: complex

    @property
    def residual(self) -> float:
        return abs(self.M - self.predicted) / (1 + abs(self.predicted))


def markov_value(a, b, c):
    return a * b * c - a * a - b * b - c * c


def markov_element(point: ShearPoint) -> MarkovReport:
    """Markov element of ``(G12, G13, G23)`` for ``An`` with ``n = 3``."""
    fam = point.family
    if fam.kind != "An" or fam.n != 3:
        raise ValueError("Markov element is defined for An with n = 3")
    S = stokes_matrix(fam, point)
    a, b, c = S.G(1, 2), S.G(1, 3), S.G(2, 3)
    T = complex(point.total)
    pred = (cmath.exp(T) - cmath.exp(-T)) ** 2
    return MarkovReport(a, b, c, markov_value(a, b, c), pred)


# -- characteristic determinant -----------------------------------------------------

def _mp_casimirs(family: SurfaceFamily, point: ShearPoint):
    """Total coordinate sum and (even CFP) hole difference, summed in mpmath."""
    T = mpmath.fsum(mpmath.mpc(x) for x in point.Z + point.Y)
    if family.kind == "CFP" and family.n % 2 == 0:
        m = family.n - 3
        D = mpmath.fsum(mpmath.mpc(point.Y[k - 1]) - mpmath.mpc(point.Y[m + k - 1])
                        for k in range(1, m + 1, 2))
        return T, D
    return T, None


def characteristic_closed_form(family: SurfaceFamily, point: ShearPoint, lam):
    """Closed form of ``det(lam S + S^T / lam)`` in terms of the Casimirs."""
    n = family.n
    lam = mpmath.mpc(lam)
    p = lam + 1 / lam
    q = lam - 1 / lam
    T, D = _mp_casimirs(family, point)
    if D is not None:
        c1, c2 = mpmath.cosh((T + D) / 2), mpmath.cosh((T - D) / 2)
        core = (lam ** 2 - lam ** -2) ** 2 - 4 * c1 * c2 * (lam ** 2 + lam ** -2) + 4 * c1 ** 2 + 4 * c2 ** 2
        return q ** (n - 4) * core
    P = T if family.kind == "An" else T / 2
    if n % 2:
        return (p ** 2 + (mpmath.exp(P) - mpmath.exp(-P)) ** 2) * p * q ** (n - 3)
    return (p ** 2 - (mpmath.exp(P) + mpmath.exp(-P)) ** 2) * q ** (n - 2)


def characteristic_determinant(S, lam, *, dps: int | None = None):
    with _mp(dps):
        A = _to_mp_matrix(S)
        lam = mpmath.mpc(lam)
        return mpmath.det(lam * A + A.T / lam)


def characteristic_identity(family: SurfaceFamily, point: ShearPoint, lambdas: Iterable,
                            *, dps: int | None = None) -> float:
    """Max relative residual between ``det(lam S + S^T / lam)`` and its closed form."""
    worst = 0.0
    with _mp(dps):
        S = stokes_matrix(family, point, backend="mpmath")
        A = S.to_mpmath()
        for lam in lambdas:
            lam = mpmath.mpc(lam)
            for bad in (0, 1, -1, 1j, -1j):
                if abs(lam - bad) < 1e-6:
                    raise ValueError(f"lambda sample {complex(lam)} too close to {bad}")
            lhs = mpmath.det(lam * A + A.T / lam)
            rhs = characteristic_closed_form(family, point, lam)
            worst = max(worst, float(abs(lhs - rhs) / max(abs(rhs), mpmath.mpf(1e-300))))
    return worst


# -- isospectral identification -----------------------------------------------------

def identification_rhs(Z) -> np.ndarray:
    """``exp((Z_i+Z_{i+1})/2) + exp(-(Z_i+Z_{i+1})/2) + exp((Z_{i+1}-Z_i)/2)``, cyclic."""
    Z = np.asarray(Z, dtype=complex)
    Zn = np.roll(Z, -1)
    s = (Z + Zn) / 2
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(s) + np.exp(-s) + np.exp((Zn - Z) / 2)


def _identification_jacobian(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    J = np.zeros((3, 3), dtype=complex)
    for i in range(3):  # row i depends on Z_i and Z_{i+1}
        j = (i + 1) % 3
        s = (Z[i] + Z[j]) / 2
        d = (Z[j] - Z[i]) / 2
        with np.errstate(over="ignore", invalid="ignore"):
            sh = (np.exp(s) - np.exp(-s)) / 2
            J[i, i] += sh - np.exp(d) / 2
            J[i, j] += sh + np.exp(d) / 2
    return J


def isospectral_targets(X) -> np.ndarray:
    """Left-hand sides ``2 cosh(P_i / 2)`` with ``P_i = X_i + X_{i+1}``."""
    X = np.asarray(X, dtype=float)
    P = X + np.roll(X, -1)
    return 2 * np.cosh(P / 2)


@dataclass
class IsospectralResult:
    Z: np.ndarray
    residual: float
    converged: bool
    iterations: int
    markov: float

    @property
    def is_real(self) -> bool:
        return _real_representative(self.Z) is not None

    def real_representative(self):
        return _real_representative(self.Z)


def _real_representative(Z, tol: float = 1e-8):
    """Shift by the periods of the equations to a real solution, if possible.

    The equations are invariant under ``Z_i -> Z_i + 4 pi i`` and under the
    simultaneous shift of all three coordinates by ``2 pi i``.
    """
    Z = np.asarray(Z, dtype=complex)
    for base in (0.0, 2 * math.pi):
        im = Z.imag - base
        k = np.round(im / (4 * math.pi))
        if np.all(np.abs(im - 4 * math.pi * k) <= tol):
            return Z.real.copy()
    return None


def _newton(F, J, z0, target, tol, max_iter):
    z = np.array(z0, dtype=complex)
    r = F(z) - target
    err = np.max(np.abs(r)) / max(1.0, np.max(np.abs(target)))
    it = 0
    for it in range(1, max_iter + 1):
        if err <= tol:
            return z, err, it - 1
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                step = np.linalg.solve(J(z), r)
        except np.linalg.LinAlgError:
            return z, err, it
        if not np.all(np.isfinite(step)):
            return z, err, it
        t = 1.0
        while t > 1e-10:
            z_new = z - t * step
            r_new = F(z_new) - target
            err_new = np.max(np.abs(r_new)) / max(1.0, np.max(np.abs(target)))
            if np.isfinite(err_new) and err_new < err:
                break
            t /= 2
        else:
            return z, err, it
        z, r, err = z_new, r_new, err_new
    return z, err, max_iter


def isospectral_solve(X, *, tol: float = 1e-12, max_iter: int = 200, seed: int = 0) -> IsospectralResult:
    """Solve the isospectral identification for complex ``Z`` given real ``X``.

    Real starting points are tried first, so a real solution is returned
    whenever damped Newton finds one; otherwise complex starts are used.
    Any root is accepted (the map is many-to-one).
    """
    X = np.asarray(X, dtype=float)
    if X.shape != (3,) or not np.all(np.isfinite(X)):
        raise ValueError("X must be three finite reals")
    target = isospectral_targets(X).astype(complex)
    mk = float(markov_value(*target.real))
    rng = np.random.default_rng(seed)
    guess = np.arccosh(np.maximum((target.real - 1) / 2, 1.0))
    starts = [guess, -guess, np.zeros(3)]
    starts += [rng.uniform(-3, 3, 3) for _ in range(12)]
    best = None
    for z0 in starts:
        z, err, it = _newton(identification_rhs, _identification_jacobian, z0, target, tol, max_iter)
        if best is None or err < best[1]:
            best = (z, err, it)
        if err <= tol:
            return IsospectralResult(z, float(err), True, it, mk)
    for _ in range(40):
        z0 = rng.uniform(-3, 3, 3) + 1j * rng.uniform(-math.pi, math.pi, 3)
        z, err, it = _newton(identification_rhs, _identification_jacobian, z0, target, tol, max_iter)
        if err < best[1]:
            best = (z, err, it)
        if err <= tol:
            break
    z, err, it = best
    return IsospectralResult(z, float(err), bool(err <= tol), it, mk)


def random_generic_stokes(n: int, rng: np.random.Generator, *, bound: int = 3,
                          min_gap: float = 1e-3, max_tries: int = 1000) -> np.ndarray:
    """Random integer unit upper triangular ``S`` with simple spectrum of ``S^{-T} S``.

    Draws are rejected until the eigenvalues are pairwise separated by
    ``min_gap`` and, apart from the forced eigenvalue 1 for odd ``n``, stay
    away from ``+-1``.
    """
    iu = np.triu_indices(n, 1)
    for _ in range(max_tries):
        S = np.eye(n)
        S[iu] = rng.integers(-bound, bound + 1, size=len(iu[0]))
        w = np.linalg.eigvals(np.linalg.solve(S.T, S))
        gaps = np.abs(w[:, None] - w[None, :]) + np.eye(n) * 10
        if gaps.min() < min_gap:
            continue
        near_one = np.sum(np.abs(w - 1) < min_gap)
        near_minus = np.sum(np.abs(w + 1) < min_gap)
        if near_minus == 0 and near_one == n % 2:
            return S
    raise RuntimeError("could not draw a generic Stokes matrix")
