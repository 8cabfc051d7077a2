"""Goldman bracket on shear coordinates and the quadratic bracket on Stokes entries.

The coordinate bracket is constant: ``{X_a, X_b} = B[a, b]`` with ``B`` the
antisymmetrized sum over trivalent vertices ``(a1, a2, a3)`` of +1 on the
cyclic pairs ``(a1, a2), (a2, a3), (a3, a1)``.  On quarter-exponential
monomials it acts as ``{x^a, x^b} = (a^T B b / 16) x^(a+b)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .laurent import GaussianRational, LaurentScalar
from .surfaces import (
    SurfaceFamily,
    Word,
    evaluate_word,
    generator_word,
    mat_inv,
    mat_mul,
    mat_trace,
    stokes_matrix,
)

__all__ = [
    "FAMILY_KAPPA",
    "IncidenceForm",
    "IncidenceValidationError",
    "CalibrationError",
    "vertex_list",
    "incidence_form",
    "calibrate_incidence_form",
    "goldman_bracket",
    "linear_bracket",
    "du_reference_bracket",
    "reference_bracket",
    "bracket_identity",
    "skein_check",
    "random_word",
    "casimir_check",
    "trace_bracket_calibration",
    "jacobi_residual",
]

#: Scale of the reference bracket reproduced by each family's geodesic functions.
FAMILY_KAPPA = {"An": 2, "CFP": 1}


class IncidenceValidationError(ValueError):
    pass


class CalibrationError(ValueError):
    pass


@dataclass
class IncidenceForm:
    family: SurfaceFamily
    edges: tuple
    B: np.ndarray
    vertices: list = field(default_factory=list)

    def __post_init__(self):
        B = np.asarray(self.B, dtype=object)
        if B.shape != (len(self.edges), len(self.edges)):
            raise ValueError("B must be square over the edge set")
        if any(B[i, j] != -B[j, i] for i in range(len(B)) for j in range(len(B))):
            raise ValueError("B must be antisymmetric")
        self.B = B

    def entry(self, a: str, b: str):
        return self.B[self.edges.index(a), self.edges.index(b)]

    def row_sums(self) -> list:
        return [sum(row) for row in self.B]

    def as_int_array(self) -> np.ndarray:
        return np.array(self.B.tolist(), dtype=np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncidenceForm):
            return NotImplemented
        return self.edges == other.edges and bool(np.all(self.B == other.B))


def _comb(z_left: Sequence[str], y: Sequence[str]) -> list:
    """Vertices of a comb: pending edges ``z_left`` joined by inner edges ``y``."""
    n = len(z_left)
    if n == 3:
        return [tuple(z_left)]
    verts = [(z_left[0], z_left[1], y[0])]
    for j in range(2, n - 2):
        verts.append((y[j - 2], z_left[j], y[j - 1]))
    verts.append((y[n - 4], z_left[n - 2], z_left[n - 1]))
    return verts


def vertex_list(family: SurfaceFamily) -> list:
    """Cyclically ordered trivalent vertices of the family's fat graph."""
    z = family.z_names
    y = family.y_names
    if family.kind == "An":
        return _comb(z, y)
    m = family.n - 3
    return _comb(z, y[:m]) + _comb(z, y[m:])


def _form_from_vertices(family: SurfaceFamily, vertices: list) -> IncidenceForm:
    edges = family.edges
    pos = {e: i for i, e in enumerate(edges)}
    B = np.zeros((len(edges), len(edges)), dtype=object)
    B[:] = 0
    for a1, a2, a3 in vertices:
        for p, q in ((a1, a2), (a2, a3), (a3, a1)):
            B[pos[p], pos[q]] += 1
            B[pos[q], pos[p]] -= 1
    return IncidenceForm(family, edges, B, list(vertices))


def incidence_form(family: SurfaceFamily, *, validate: bool = True) -> IncidenceForm:
    """Coordinate bracket built from the vertex list.

    With ``validate=True`` the form is compared with the calibrated solution
    (n <= 6) and :class:`IncidenceValidationError` is raised on mismatch.
    Larger ``n`` are checked against the reference bracket on a sample of
    index pairs instead.
    """
    form = _form_from_vertices(family, vertex_list(family))
    if not validate:
        return form
    if family.n <= 6:
        cal = calibrate_incidence_form(family)
        if not cal.unique or not np.all(cal.form.B == form.B):
            raise IncidenceValidationError(f"vertex form of {family} disagrees with calibration")
    else:
        pairs = list(stokes_matrix(family).pairs())
        sample = [(pairs[0], p) for p in pairs[1:]] + [(pairs[-1], p) for p in pairs[:-1]]
        for a, b in sample:
            if not bracket_identity(family, a, b, form).is_zero():
                raise IncidenceValidationError(f"vertex form of {family} fails on {a}, {b}")
    return form


# -- brackets -----------------------------------------------------------------------

def _int_rows(form: IncidenceForm) -> list:
    return [list(r) for r in form.B.tolist()]


def goldman_bracket(f: LaurentScalar, g: LaurentScalar, form: IncidenceForm) -> LaurentScalar:
    """``sum_{a,b} B[a,b] df/dX_a dg/dX_b``, exact."""
    edges = form.edges
    f = f.extend(edges) if isinstance(f, LaurentScalar) else LaurentScalar.constant(f, edges)
    g = g.extend(edges) if isinstance(g, LaurentScalar) else LaurentScalar.constant(g, edges)
    rows = _int_rows(form)
    g_terms = []
    for eb, cb in g.items():
        Bb = [sum(r[k] * eb[k] for k in range(len(eb)) if eb[k]) for r in rows]
        g_terms.append((eb, cb, Bb))
    out: dict = {}
    for ea, ca in f.items():
        for eb, cb, Bb in g_terms:
            w = sum(x * y for x, y in zip(ea, Bb) if x)
            if not w:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            val = ca * cb * Fraction(w, 16)
            prev = out.get(key)
            out[key] = val if prev is None else prev + val
    return LaurentScalar(edges, {k: v for k, v in out.items() if v})


def linear_bracket(coefficients: Mapping[str, object], g: LaurentScalar,
                   form: IncidenceForm) -> LaurentScalar:
    """Bracket of the linear function ``sum c_a X_a`` with ``g``."""
    edges = form.edges
    unknown = set(coefficients) - set(edges)
    if unknown:
        raise KeyError(f"unknown coordinates {sorted(unknown)}")
    c = [Fraction(coefficients.get(e, 0)) for e in edges]
    cB = [sum(c[a] * form.B[a, b] for a in range(len(edges))) for b in range(len(edges))]
    g = g.extend(edges)
    out = {}
    for eb, cb in g.items():
        w = sum(x * y for x, y in zip(cB, eb) if y)
        if w:
            out[eb] = cb * (w / 4)
    return LaurentScalar(edges, out)


def _normalize(pair):
    i, k = pair
    if i == k:
        raise ValueError("index pair must have distinct entries")
    return (i, k) if i < k else (k, i)


def du_reference_bracket(a: tuple, b: tuple, G: Callable, kappa=1):
    """Quadratic bracket ``{G_a, G_b}`` on Stokes entries with crossing scale ``kappa``.

    ``G(i, j)`` returns the entry for 1-based ``i < j``.  Adjacent pairs carry
    ``kappa / 2``; linked pairs carry ``kappa``; disjoint and nested pairs
    commute.
    """
    (i, k), (j, l) = _normalize(a), _normalize(b)
    g = lambda x, y: G(min(x, y), max(x, y))
    if (i, k) == (j, l):
        return 0 * g(i, k)
    half = Fraction(1, 2) * kappa if isinstance(kappa, int) else kappa / 2
    if i < j < k < l:
        return kappa * (g(i, j) * g(k, l) - g(i, l) * g(k, j))
    if j < i < l < k:
        return -du_reference_bracket(b, a, G, kappa)
    if k == j:
        return half * (g(i, k) * g(k, l) - 2 * g(i, l))
    if l == i:
        return -du_reference_bracket(b, a, G, kappa)
    if k == l:
        if i < j:
            return -half * (g(i, k) * g(j, k) - 2 * g(i, j))
        return -du_reference_bracket(b, a, G, kappa)
    if i == j:
        if k < l:
            return -half * (g(i, k) * g(i, l) - 2 * g(k, l))
        return -du_reference_bracket(b, a, G, kappa)
    return 0 * g(i, k)


def reference_bracket(family: SurfaceFamily, a: tuple, b: tuple) -> LaurentScalar:
    S = stokes_matrix(family)
    return du_reference_bracket(a, b, S.G, FAMILY_KAPPA[family.kind])


def bracket_identity(family: SurfaceFamily, a: tuple, b: tuple,
                     form: IncidenceForm | None = None) -> LaurentScalar:
    """Difference polynomial ``{G_a, G_b} - reference``; zero when the identity holds."""
    form = form if form is not None else incidence_form(family, validate=False)
    S = stokes_matrix(family)
    lhs = goldman_bracket(S.G(*a), S.G(*b), form)
    return lhs - reference_bracket(family, a, b)


def jacobi_residual(f, g, h, form: IncidenceForm) -> LaurentScalar:
    gb = lambda x, y: goldman_bracket(x, y, form)
    return gb(f, gb(g, h)) + gb(g, gb(h, f)) + gb(h, gb(f, g))


# -- calibration ----------------------------------------------------------------------

@dataclass
class CalibrationResult:
    form: IncidenceForm
    unique: bool
    rank: int
    unknowns: int
    nullspace: list  # basis of the homogeneous solutions, as edge-pair -> Fraction maps
    equations: int

    @property
    def solution_dimension(self) -> int:
        return self.unknowns - self.rank


def _exact_solve(rows: list, rhs: list, n: int):
    """Reduced row echelon form over the rationals; returns (particular, nullspace, rank)."""
    M = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    for i in range(r, len(M)):
        if M[i][n]:
            raise CalibrationError("linear system for the coordinate bracket is infeasible")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    free = [c for c in range(n) if c not in pivots]
    null = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -M[i][fc]
        null.append(v)
    return x, null, len(pivots)


@lru_cache(maxsize=16)
def calibrate_incidence_form(family: SurfaceFamily, *, max_n: int = 6) -> CalibrationResult:
    """Solve for the skew matrix ``B`` making every geodesic bracket match the reference.

    Each monomial of each identity ``{G_a, G_b} = reference`` is one linear
    equation in the unknowns ``B[p, q]`` (p < q).  Independent equations are
    selected numerically, solved exactly over the rationals, and the solution
    is then checked exactly against all identities.
    """
    if family.n > max_n:
        raise ValueError(f"calibration is limited to n <= {max_n}")
    edges = family.edges
    E = len(edges)
    unknowns = list(itertools.combinations(range(E), 2))
    S = stokes_matrix(family)
    pairs = list(S.pairs())
    rows, rhs = [], []
    for a, b in itertools.combinations(pairs, 2):
        f, g = S.G(*a).extend(edges), S.G(*b).extend(edges)
        ref = reference_bracket(family, a, b).extend(edges)
        eqs: dict = {}
        for ea, ca in f.items():
            for eb, cb in g.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb * Fraction(1, 16)
                row = eqs.setdefault(key, [GaussianRational()] * len(unknowns))
                for u, (p, q) in enumerate(unknowns):
                    w = ea[p] * eb[q] - ea[q] * eb[p]
                    if w:
                        row[u] = row[u] + c * w
        ref_terms = ref.terms
        for key in set(ref_terms) - set(eqs):
            raise CalibrationError(f"reference monomial {key} unreachable for pair {a}, {b}")
        for key, row in eqs.items():
            target = ref_terms.get(key, GaussianRational())
            rows.append([x.re for x in row])
            rhs.append(target.re)
            if any(x.im for x in row) or target.im:
                rows.append([x.im for x in row])
                rhs.append(target.im)
    A = np.array([[float(x) for x in r] for r in rows])
    # pick a numerically independent subset of equations, then solve exactly
    _, R, piv = scipy.linalg.qr(A.T, pivoting=True, mode="economic")
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > diag[0] * 1e-10)) if diag.size else 0
    chosen = sorted(piv[:rank])
    x, null, exact_rank = _exact_solve([rows[i] for i in chosen], [rhs[i] for i in chosen], len(unknowns))
    B = np.zeros((E, E), dtype=object)
    B[:] = 0
    for (p, q), v in zip(unknowns, x):
        v = int(v) if v.denominator == 1 else v
        B[p, q], B[q, p] = v, -v
    form = IncidenceForm(family, edges, B, [])
    for a, b in itertools.combinations(pairs, 2):
        if not bracket_identity(family, a, b, form).is_zero():
            raise CalibrationError(f"calibrated form fails the identity on {a}, {b}")
    nullspace = [{(edges[p], edges[q]): v for (p, q), v in zip(unknowns, vec) if v} for vec in null]
    return CalibrationResult(form, not null, exact_rank, len(unknowns), nullspace, len(rows))


# -- skein and Casimirs ----------------------------------------------------------------

def skein_check(A, B, point=None, *, family: SurfaceFamily | None = None, backend: str | None = None):
    """``Tr A Tr B - Tr(AB) - Tr(AB^{-1})`` for unimodular ``A, B``.

    ``A`` and ``B`` may be words (evaluated symbolically when ``point`` is
    None) or already-evaluated 2x2 tuples.
    """
    if isinstance(A, Word):
        A = evaluate_word(A, point, family=family, backend=backend)
    if isinstance(B, Word):
        B = evaluate_word(B, point, family=family, backend=backend)
    return mat_trace(A) * mat_trace(B) - mat_trace(mat_mul(A, B)) - mat_trace(mat_mul(A, mat_inv(B)))


def random_word(family: SurfaceFamily, rng: np.random.Generator, max_length: int = 12) -> Word:
    """Random signed word over ``R, L, F`` and edge letters of the family."""
    length = int(rng.integers(1, max_length + 1))
    alphabet = ["R", "L", "F"] + [("X", e) for e in family.edges]
    if family.kind == "CFP":
        alphabet.append(("Xh", "Z1"))
    letters = tuple(alphabet[int(i)] for i in rng.integers(0, len(alphabet), length))
    return Word(letters, int(rng.choice([-1, 1])))


def casimir_functions(family: SurfaceFamily) -> dict:
    """Linear functions expected to Poisson-commute with every Stokes entry."""
    ones = {e: 1 for e in family.edges}
    out = {"total": ones}
    if family.kind == "CFP" and family.n % 2 == 0:
        m = family.n - 3
        D = {}
        for k in range(1, m + 1, 2):
            D[f"Y{k}"] = 1
            D[f"Y{m + k}"] = -1
        out["hole_difference"] = D
    return out


@dataclass
class CasimirReport:
    family: SurfaceFamily
    results: dict  # name -> {(i, j): term count of the bracket}

    def passed(self, name: str) -> bool:
        return all(v == 0 for v in self.results[name].values())


def casimir_check(family: SurfaceFamily, extra: Mapping[str, Mapping[str, object]] | None = None,
                  form: IncidenceForm | None = None) -> CasimirReport:
    """Brackets of linear coordinate functions with all Stokes entries.

    The report covers :func:`casimir_functions` plus any ``extra`` functions
    (for example single coordinates as negative controls).
    """
    form = form if form is not None else incidence_form(family, validate=False)
    S = stokes_matrix(family)
    funcs = dict(casimir_functions(family))
    funcs.update(extra or {})
    results = {}
    for name, coeffs in funcs.items():
        results[name] = {p: len(linear_bracket(coeffs, S.G(*p), form)) for p in S.pairs()}
    return CasimirReport(family, results)


@dataclass
class TraceCalibrationReport:
    ratios: dict  # (a, b) -> Fraction/GaussianRational or None when not proportional
    skipped: list

    @property
    def values(self) -> set:
        return {r for r in self.ratios.values() if r is not None}

    @property
    def constant(self) -> bool:
        return None not in self.ratios.values() and len(self.values) <= 1


def _proportionality(num: LaurentScalar, den: LaurentScalar):
    if num.is_zero():
        return GaussianRational(0)
    key, c = den.items()[-1]
    ratio = num.terms.get(key)
    if ratio is None:
        return None
    ratio = ratio / c
    return ratio if (num - den * ratio).is_zero() else None


def trace_bracket_calibration(family: SurfaceFamily, form: IncidenceForm | None = None,
                              max_n: int = 5) -> TraceCalibrationReport:
    """Ratio of ``{Tr A, Tr B}`` to ``(Tr AB - Tr AB^{-1}) / 2`` for ``A = g_i g_j``.

    Measurement only: reports each ratio when the two sides are proportional.
    """
    if family.n > max_n:
        raise ValueError(f"trace bracket calibration is limited to n <= {max_n}")
    form = form if form is not None else incidence_form(family, validate=False)
    elements = {}
    for i, j in itertools.combinations(range(1, family.n + 1), 2):
        w = generator_word(family, i) * generator_word(family, j)
        elements[(i, j)] = evaluate_word(w, family=family)
    ratios, skipped = {}, []
    for a, b in itertools.combinations(elements, 2):
        A, B = elements[a], elements[b]
        den = (mat_trace(mat_mul(A, B)) - mat_trace(mat_mul(A, mat_inv(B)))) * Fraction(1, 2)
        num = goldman_bracket(mat_trace(A), mat_trace(B), form)
        if den.is_zero():
            skipped.append((a, b))
            continue
        ratios[(a, b)] = _proportionality(num, den)
    return TraceCalibrationReport(ratios, skipped)
