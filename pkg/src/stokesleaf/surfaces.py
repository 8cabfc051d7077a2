"""Generator matrices, fat-graph words and Stokes matrices for two surface families.

Two families are supported:

``An``
    sphere with one hole and ``n`` orbifold points of order two; shear
    coordinates ``Z1..Zn`` on pending edges and ``Y1..Y(n-3)`` on inner edges.
``CFP``
    surface of genus ``floor((n-1)/2)`` with one (n odd) or two (n even)
    holes; coordinates ``Z1..Zn`` on vertical edges and ``Y1..Y(2n-6)`` on
    horizontal edges (``Y1..Y(n-3)`` bottom row, the rest top row).

Every scalar-valued routine runs in one of three backends: ``"symbolic"``
(exact :class:`~stokesleaf.laurent.LaurentScalar`), ``"complex"`` (double
precision) or ``"mpmath"`` (at least :data:`MP_DPS` digits).
The Stokes entry is ``G_ij = Tr(g_i g_j^{-1})``, which equals
``-Tr(g_i g_j)`` whenever ``g_j`` is traceless.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import contextlib

import mpmath
import numpy as np

from .laurent import LaurentScalar

__all__ = [
    "SurfaceFamily",
    "ShearPoint",
    "Word",
    "Mat2",
    "StokesMatrix",
    "NumericalDriftError",
    "generator_matrices",
    "generator_word",
    "generator_words",
    "build_generators",
    "evaluate_word",
    "geodesic_word_cfp",
    "pair_word",
    "stokes_matrix",
    "perimeters",
    "hole_perimeters",
    "spectral_exponents",
    "boundary_monodromy_trace",
    "BOUNDARY_EXPONENT_FACTOR",
    "BOUNDARY_SIGN",
    "boundary_prediction",
    "specialization_check",
    "random_point",
    "point_from_sums",
    "mat_mul",
    "mat_inv",
    "mat_trace",
    "mat_det",
]

#: ``Tr((g_1...g_n)^{-1}) = BOUNDARY_SIGN * 2 cosh(c/2)`` with ``c = factor * (sum Z + sum Y)``.
BOUNDARY_EXPONENT_FACTOR = 2
#: Overall sign of the boundary trace in this SL(2) lift; it does not depend on n.
BOUNDARY_SIGN = -1

DRIFT_TOL = 1e-8
# floor on the working precision of the mpmath backend
MP_DPS = 50


class NumericalDriftError(ArithmeticError):
    """A double-precision word product lost unimodularity."""


@dataclass(frozen=True)
class SurfaceFamily:
    kind: str
    n: int

    def __post_init__(self):
        kind = {"an": "An", "cfp": "CFP"}.get(str(self.kind).lower())
        if kind is None:
            raise ValueError(f"unknown family {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if kind == "CFP" and self.n < 4:
            raise ValueError("CFP family requires n >= 4")

    @property
    def y_count(self) -> int:
        return self.n - 3 if self.kind == "An" else 2 * self.n - 6

    @property
    def z_names(self) -> tuple[str, ...]:
        return tuple(f"Z{i}" for i in range(1, self.n + 1))

    @property
    def y_names(self) -> tuple[str, ...]:
        return tuple(f"Y{k}" for k in range(1, self.y_count + 1))

    @property
    def edges(self) -> tuple[str, ...]:
        return self.z_names + self.y_names

    @property
    def genus(self) -> int:
        return 0 if self.kind == "An" else (self.n - 1) // 2

    @property
    def holes(self) -> int:
        if self.kind == "An":
            return 1
        return 1 if self.n % 2 else 2

    def __str__(self) -> str:
        return f"{self.kind}(n={self.n})"


@dataclass(frozen=True)
class ShearPoint:
    """Numeric shear coordinates for a family."""

    family: SurfaceFamily
    Z: tuple
    Y: tuple = ()

    def __post_init__(self):
        Z, Y = tuple(self.Z), tuple(self.Y)
        if len(Z) != self.family.n or len(Y) != self.family.y_count:
            raise ValueError(
                f"{self.family} needs {self.family.n} Z and {self.family.y_count} Y values, "
                f"got {len(Z)} and {len(Y)}"
            )
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "Y", Y)
        for v in Z + Y:
            if not cmath.isfinite(complex(v)):
                raise ValueError("shear coordinates must be finite")

    @property
    def mode(self) -> str:
        if all(complex(v).imag == 0 for v in self.Z + self.Y):
            return "numeric-real"
        return "numeric-complex"

    def coordinates(self) -> dict:
        return dict(zip(self.family.edges, self.Z + self.Y))

    @property
    def total(self):
        """Sum of all shear coordinates."""
        return sum(self.Z) + sum(self.Y)


# -- 2x2 matrices over a generic scalar ring ------------------------------------

Mat2 = tuple  # (a, b, c, d) for [[a, b], [c, d]]


def mat_mul(A: Mat2, B: Mat2) -> Mat2:
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(A: Mat2):
    return A[0] * A[3] - A[1] * A[2]


def mat_inv(A: Mat2) -> Mat2:
    """Inverse of a unimodular matrix (the adjugate)."""
    a, b, c, d = A
    return (d, -b, -c, a)


def mat_trace(A: Mat2):
    return A[0] + A[3]


def mat_neg(A: Mat2) -> Mat2:
    return tuple(-x for x in A)


def mat_to_numpy(A: Mat2) -> np.ndarray:
    return np.array([[complex(A[0]), complex(A[1])], [complex(A[2]), complex(A[3])]])


# -- words ------------------------------------------------------------------------

_CONST = {
    "R": (1, 1, -1, 0),
    "L": (0, 1, -1, -1),
    "F": (0, 1, -1, 0),
}
# inverses up to sign: R^-1 = -L, L^-1 = -R, F^-1 = -F, X^-1 = -X
_INV = {"R": "L", "L": "R", "F": "F"}


@dataclass(frozen=True)
class Word:
    """Signed product of generator letters.

    Letters are ``"R"``, ``"L"``, ``"F"``, ``("X", edge)`` and
    ``("Xh", edge)``; the last one uses half the edge coordinate.
    """

    letters: tuple
    sign: int = 1

    def __post_init__(self):
        letters = tuple(tuple(x) if isinstance(x, list) else x for x in self.letters)
        if not letters:
            raise ValueError("empty word")
        for x in letters:
            if isinstance(x, tuple):
                if len(x) != 2 or x[0] not in ("X", "Xh"):
                    raise ValueError(f"bad letter {x!r}")
            elif x not in _CONST:
                raise ValueError(f"bad letter {x!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, self.sign * other.sign)

    def inverse(self) -> "Word":
        sign = self.sign * (-1) ** len(self.letters)
        letters = tuple(_INV[x] if isinstance(x, str) else x for x in reversed(self.letters))
        return Word(letters, sign)

    def edges(self) -> set:
        return {x[1] for x in self.letters if isinstance(x, tuple)}

    def __str__(self) -> str:
        body = " ".join(x if isinstance(x, str) else f"{x[0]}({x[1]})" for x in self.letters)
        return body if self.sign == 1 else f"-[{body}]"


def _X(e):
    return ("X", e)


def _an_word(i: int, n: int) -> Word:
    if i == 1:
        return Word(("F",))
    Z = lambda k: _X(f"Z{k}")
    Y = lambda k: _X(f"Y{k}")
    if i < n:
        top = [x for k in range(1, i - 1) for x in ("R", Y(k))]
        bottom = [x for k in range(i - 2, 0, -1) for x in (Y(k), "L")]
        core = ["L", Z(i), "F", Z(i), "R"]
    else:
        top = [x for k in range(1, n - 2) for x in ("R", Y(k))]
        bottom = [x for k in range(n - 3, 0, -1) for x in (Y(k), "L")]
        core = ["R", Z(n), "F", Z(n), "L"]
    return Word(tuple([Z(1)] + top + core + bottom + [Z(1)]), -1)


def _cfp_word(i: int, n: int) -> Word:
    if i == 1:
        return Word(("F",))
    h = ("Xh", "Z1")
    Y = lambda k: _X(f"Y{k}")
    last = n + i - 5 if i < n else 2 * n - 6
    top = [x for k in range(n - 2, last + 1) for x in ("R", Y(k))]
    low = i - 2 if i < n else n - 3
    bottom = [x for k in range(low, 0, -1) for x in (Y(k), "L")]
    core = ["L", _X(f"Z{i}"), "R"] if i < n else ["R", _X(f"Z{n}"), "L"]
    return Word(tuple([h] + top + core + bottom + [h]), -1)


def generator_word(family: SurfaceFamily, i: int) -> Word:
    """Word of the ``i``-th basis element (1-based)."""
    if not 1 <= i <= family.n:
        raise IndexError(f"generator index {i} out of range for {family}")
    return (_an_word if family.kind == "An" else _cfp_word)(i, family.n)


def generator_words(family: SurfaceFamily) -> list[Word]:
    return [generator_word(family, i) for i in range(1, family.n + 1)]


def pair_word(family: SurfaceFamily, i: int, j: int) -> Word:
    """Word of ``g_i g_j^{-1}``; its trace is the Stokes entry ``G_ij``."""
    return generator_word(family, i) * generator_word(family, j).inverse()


def geodesic_word_cfp(i: int, j: int, n: int) -> Word:
    """Fat-graph word of the closed geodesic through vertical edges ``i < j``.

    The trace of the returned word equals ``G_ij`` of the CFP Stokes matrix.
    """
    if n < 4:
        raise ValueError("CFP geodesic words need n >= 4")
    if not 1 <= i < j <= n:
        raise IndexError(f"need 1 <= i < j <= n, got ({i}, {j}, {n})")
    Z = lambda k: _X(f"Z{k}")
    Y = lambda k: _X(f"Y{k}")
    if (i, j) == (n - 1, n):
        return Word((Z(i), "L", Z(j), "R"))
    w = [Z(i)]
    last = n + j - 5 if j < n else 2 * n - 6
    top = list(range(n - 2 if i == 1 else n + i - 4, last + 1))
    closing = "R" if j == n else "L"
    if top:
        w.append("R" if i == 1 else "L")
        for t, k in enumerate(top):
            w += [Y(k), closing if t == len(top) - 1 else "R"]
    else:
        w.append(closing)
    w.append(Z(j))
    w.append("L" if j == n else "R")
    for k in range(min(j - 2, n - 3), (1 if i == 1 else i) - 1, -1):
        w += [Y(k), "L"]
    if i > 1:
        w += [Y(i - 1), "R"]
    return Word(tuple(w))


# -- evaluation -------------------------------------------------------------------

def _precision(backend: str | None):
    if backend == "mpmath":
        return mpmath.workdps(max(mpmath.mp.dps, MP_DPS))
    return contextlib.nullcontext()


def _scalar_tools(backend: str, variables: Sequence[str] = ()):
    """Return (const, expo) for a backend.

    ``expo(value_or_name, scale)`` gives ``exp(scale * coord)`` for a Fraction ``scale``.
    """
    if backend == "symbolic":
        variables = tuple(variables)
        const = lambda c: LaurentScalar.constant(c, variables)
        expo = lambda name, s: LaurentScalar.exp_of(variables, name, s)
    elif backend == "complex":
        const = complex
        expo = lambda v, s: cmath.exp(complex(v) * float(s))
    elif backend == "mpmath":
        const = mpmath.mpc
        expo = lambda v, s: mpmath.exp(mpmath.mpc(v) * s.numerator / s.denominator)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return const, expo


def generator_matrices(backend: str = "symbolic", variables: Sequence[str] = ()):
    """Constructors for the generators ``R, L, F, X, X_half``.

    Returns
    -------
    R, L, F : Mat2
    X, X_half : callable
        ``X(c)`` is ``[[0, -exp(c/2)], [exp(-c/2), 0]]`` and ``X_half(c)`` is
        ``X(c/2)``.  In the symbolic backend ``c`` is an edge name.
    """
    const, expo = _scalar_tools(backend, variables)
    mats = {k: tuple(const(x) for x in v) for k, v in _CONST.items()}
    zero = const(0)

    def X(c, scale=Fraction(1, 2)):
        return (zero, -expo(c, scale), expo(c, -scale), zero)

    def X_half(c):
        return X(c, Fraction(1, 4))

    return mats["R"], mats["L"], mats["F"], X, X_half


def evaluate_word(word: Word, point: ShearPoint | None = None, *, family: SurfaceFamily | None = None,
                  backend: str | None = None) -> Mat2:
    """Multiply the letters of ``word`` left to right.

    With ``point=None`` the product is symbolic over ``family.edges``.
    """
    if point is None:
        if family is None:
            raise ValueError("symbolic evaluation needs a family")
        backend = "symbolic"
        variables = family.edges
        lookup = lambda e: e
    else:
        backend = backend or "complex"
        variables = ()
        coords = point.coordinates()
        lookup = coords.__getitem__
    with _precision(backend):
        R, L, F, X, X_half = generator_matrices(backend, variables)
        table = {"R": R, "L": L, "F": F}
        M = None
        for x in word.letters:
            if isinstance(x, str):
                m = table[x]
            elif x[0] == "X":
                m = X(lookup(x[1]))
            else:
                m = X_half(lookup(x[1]))
            M = m if M is None else mat_mul(M, m)
        if word.sign == -1:
            M = mat_neg(M)
    if backend == "complex":
        drift = abs(mat_det(M) - 1)
        if not drift <= DRIFT_TOL:
            raise NumericalDriftError(f"|det - 1| = {drift:.3e} for word of length {len(word)}")
    return M


@lru_cache(maxsize=64)
def _symbolic_generators(family: SurfaceFamily) -> tuple:
    return tuple(evaluate_word(w, family=family) for w in generator_words(family))


def build_generators(family: SurfaceFamily, point: ShearPoint | None = None, *,
                     backend: str | None = None) -> list[Mat2]:
    """Basis matrices ``g_1..g_n`` (symbolic when ``point`` is None)."""
    if point is None:
        return list(_symbolic_generators(family))
    if point.family != family:
        raise ValueError("point belongs to a different family")
    return [evaluate_word(w, point, backend=backend) for w in generator_words(family)]


@dataclass
class StokesMatrix:
    """Unit upper-triangular matrix; ``entries[i][j]`` is 0-based."""

    n: int
    entries: list
    backend: str
    family: SurfaceFamily | None = None

    def G(self, i: int, j: int):
        """Entry ``G_ij`` for 1-based ``i < j``; symmetric in its arguments."""
        if i > j:
            i, j = j, i
        return self.entries[i - 1][j - 1]

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.entries])

    def to_mpmath(self):
        # mpc() rounds to the working precision, so keep the floor here too
        with _precision("mpmath"):
            return mpmath.matrix([[mpmath.mpc(x) if not isinstance(x, LaurentScalar) else x for x in row]
                                  for row in self.entries])

    def pairs(self) -> Iterable[tuple[int, int]]:
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                yield i, j


@lru_cache(maxsize=64)
def _symbolic_stokes(family: SurfaceFamily) -> tuple:
    g = _symbolic_generators(family)
    n = family.n
    one = LaurentScalar.constant(1, family.edges)
    zero = LaurentScalar.constant(0, family.edges)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(one)
            elif j < i:
                row.append(zero)
            else:
                row.append(mat_trace(mat_mul(g[i], mat_inv(g[j]))))
        rows.append(tuple(row))
    return tuple(rows)


def stokes_matrix(family: SurfaceFamily, point: ShearPoint | None = None, *,
                  backend: str | None = None) -> StokesMatrix:
    """Stokes matrix with ``G_ij = Tr(g_i g_j^{-1})`` above the diagonal."""
    n = family.n
    if point is None:
        return StokesMatrix(n, [list(r) for r in _symbolic_stokes(family)], "symbolic", family)
    backend = backend or "complex"
    g = build_generators(family, point, backend=backend)
    const, _ = _scalar_tools(backend)
    entries = [[const(1) if i == j else const(0) for j in range(n)] for i in range(n)]
    with _precision(backend):
        for i in range(n):
            for j in range(i + 1, n):
                entries[i][j] = mat_trace(mat_mul(g[i], mat_inv(g[j])))
    return StokesMatrix(n, entries, backend, family)


# -- perimeters and boundary ------------------------------------------------------

def _split_sums(point: ShearPoint):
    fam = point.family
    total = point.total
    if fam.kind == "CFP" and fam.n % 2 == 0:
        m = fam.n - 3
        Y = point.Y
        D = sum(Y[k - 1] - Y[m + k - 1] for k in range(1, m + 1, 2))
        return total, D
    return total, None


def perimeters(family: SurfaceFamily, point: ShearPoint):
    """Raw coordinate sums.

    Returns ``sum Z + sum Y`` except for even CFP, where the pair
    ``(sum Z, sum Y)`` is returned.  For even CFP these sums are *not*
    Casimirs of the bracket; use :func:`hole_perimeters` for the two
    boundary lengths.
    """
    if point.family != family:
        raise ValueError("point belongs to a different family")
    if family.kind == "CFP" and family.n % 2 == 0:
        return sum(point.Z), sum(point.Y)
    return point.total


def hole_perimeters(family: SurfaceFamily, point: ShearPoint):
    """Casimir combinations of the shear coordinates.

    One value ``T = sum Z + sum Y`` for ``An`` and odd ``CFP``; for even
    ``CFP`` the pair ``(T + D, T - D)`` with
    ``D = sum over odd k <= n-3 of (Y_k - Y_{n-3+k})``.
    """
    if point.family != family:
        raise ValueError("point belongs to a different family")
    T, D = _split_sums(point)
    if D is None:
        return T
    return T + D, T - D


def spectral_exponents(family: SurfaceFamily, point: ShearPoint) -> tuple:
    """Exponents ``a`` such that ``+-exp(+-a)`` are the non-unit eigenvalues of ``S^{-T} S``."""
    T, D = _split_sums(point)
    if family.kind == "An":
        return (BOUNDARY_EXPONENT_FACTOR * T,)
    if D is None:
        return (T,)
    return (T, D)


def boundary_monodromy_trace(family: SurfaceFamily, point: ShearPoint | None = None, *,
                             backend: str | None = None):
    """``Tr((g_1 g_2 ... g_n)^{-1})`` for the An family.

    Equals ``BOUNDARY_SIGN * 2 cosh(c / 2)`` with
    ``c = BOUNDARY_EXPONENT_FACTOR * (sum Z + sum Y)``.  Only the magnitude is
    meaningful in PSL(2); the sign records the lift chosen by the words.
    """
    if family.kind != "An":
        raise ValueError("boundary monodromy trace is defined for the An family")
    g = build_generators(family, point, backend=backend)
    M = g[0]
    for x in g[1:]:
        M = mat_mul(M, x)
    return mat_trace(mat_inv(M))


def boundary_prediction(point: ShearPoint) -> complex:
    c = BOUNDARY_EXPONENT_FACTOR * complex(point.total)
    return BOUNDARY_SIGN * 2 * cmath.cosh(c / 2)


# -- specialization ----------------------------------------------------------------

@dataclass
class SpecializationReport:
    n: int
    doubled: bool
    results: dict = field(default_factory=dict)  # (i, j) -> difference polynomial

    @property
    def passed(self) -> bool:
        return all(d.is_zero() for d in self.results.values())

    def failures(self) -> list:
        return [k for k, d in self.results.items() if not d.is_zero()]


def specialization_check(n: int, *, double_z: bool = True) -> SpecializationReport:
    """Compare An entries with CFP entries at ``(2Z, Y, Y)`` exactly.

    ``double_z=False`` substitutes ``Z`` undoubled (a negative control).
    """
    if n < 4:
        raise ValueError("specialization check needs n >= 4")
    an = SurfaceFamily("An", n)
    cfp = SurfaceFamily("CFP", n)
    images = {f"Z{i}": {f"Z{i}": 2 if double_z else 1} for i in range(1, n + 1)}
    m = n - 3
    for k in range(1, m + 1):
        images[f"Y{m + k}"] = {f"Y{k}": 1}
    S_an = stokes_matrix(an)
    S_cfp = stokes_matrix(cfp)
    report = SpecializationReport(n, double_z)
    for i, j in S_an.pairs():
        spec = S_cfp.G(i, j).monomial_map(images, an.edges)
        report.results[(i, j)] = S_an.G(i, j) - spec
    return report


# -- sampling ---------------------------------------------------------------------

def random_point(family: SurfaceFamily, rng: np.random.Generator, *, low: float = -1.5,
                 high: float = 1.5, min_exponent: float = 1e-3, max_tries: int = 1000) -> ShearPoint:
    """Uniform real shear point, rejecting draws with a near-zero Casimir."""
    for _ in range(max_tries):
        Z = rng.uniform(low, high, family.n)
        Y = rng.uniform(low, high, family.y_count)
        pt = ShearPoint(family, tuple(float(z) for z in Z), tuple(float(y) for y in Y))
        exps = [abs(x) for x in spectral_exponents(family, pt)]
        if min(exps) >= min_exponent:
            if len(exps) == 2 and abs(exps[0] - exps[1]) < min_exponent:
                continue
            return pt
    raise RuntimeError("could not draw a non-degenerate point")


def point_from_sums(family: SurfaceFamily, rng: np.random.Generator, point: ShearPoint) -> ShearPoint:
    """Another random point with the same Casimir values as ``point``."""
    while True:
        other = random_point(family, rng)
        Z = list(other.Z)
        Y = list(other.Y)
        if family.kind == "CFP" and family.n % 2 == 0:
            m = family.n - 3
            # Y_1 carries D with weight +1 and T with weight +1; Y_{m+1} carries D with -1
            T0, D0 = _split_sums(point)
            T1, D1 = _split_sums(other)
            a = ((T0 - T1) + (D0 - D1)) / 2
            b = ((T0 - T1) - (D0 - D1)) / 2
            Y[0] += a
            Y[m] += b
        else:
            Z[0] += point.total - other.total
        return ShearPoint(family, tuple(Z), tuple(Y))


def is_real_scalar(x, tol: float = 0.0) -> bool:
    return abs(complex(x).imag) <= tol


def finite(x) -> bool:
    return math.isfinite(abs(complex(x)))
