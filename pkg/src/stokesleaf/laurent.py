"""Exact multivariate Laurent polynomials with Gaussian-rational coefficients.

Variables are quarter-exponentials of shear coordinates: the variable named
``"Z1"`` stands for ``u = exp(Z1 / 4)``.  With this lattice both ``exp(Z / 2)``
(exponent 2) and ``exp(Z / 4)`` (exponent 1) are monomials, so every word in
the generator matrices stays inside one exact ring.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "GaussianRational",
    "LaurentScalar",
    "LaurentError",
    "MissingAssignmentError",
    "ZeroSubstitutionError",
    "UnknownCoordinateError",
    "as_coefficient",
]


class LaurentError(ValueError):
    """Base class for errors raised by this module."""


class MissingAssignmentError(LaurentError, KeyError):
    pass


class ZeroSubstitutionError(LaurentError, ZeroDivisionError):
    pass


class UnknownCoordinateError(LaurentError, KeyError):
    pass


class GaussianRational:
    """Immutable number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            other = as_coefficient(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __add__(self, other) -> "GaussianRational":
        other = as_coefficient(other)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        other = as_coefficient(other)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        return as_coefficient(other) - self

    def __mul__(self, other) -> "GaussianRational":
        other = as_coefficient(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        other = as_coefficient(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational._raw(num.re / den, num.im / den)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_mpc(self):
        import mpmath

        re = mpmath.mpf(self.re.numerator) / self.re.denominator
        im = mpmath.mpf(self.im.numerator) / self.im.denominator
        return mpmath.mpc(re, im)

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*i)"

    def serialize(self) -> str:
        re, im = str(self.re), str(self.im)
        if "/" in re or "/" in im:
            return f"{re} / {im}"
        return f"{re}/{im}"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        text = text.strip()
        if " / " in text:
            re, im = text.split(" / ")
        else:
            parts = text.split("/")
            if len(parts) != 2:
                raise LaurentError(f"cannot parse coefficient {text!r}")
            re, im = parts
        return cls(Fraction(re.strip()), Fraction(im.strip()))


_ZERO = GaussianRational()
_ONE = GaussianRational(1)


def as_coefficient(value) -> GaussianRational:
    """Convert ints, rationals and exactly representable complex numbers."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)):
        return GaussianRational._raw(Fraction(value), Fraction(0))
    if isinstance(value, float):
        return GaussianRational(Fraction(value))
    if isinstance(value, complex):
        return GaussianRational(Fraction(value.real), Fraction(value.imag))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _union(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    seen = dict.fromkeys(a)
    for name in b:
        seen.setdefault(name)
    return tuple(seen)


class LaurentScalar:
    """Laurent polynomial in quarter-exponential variables.

    Parameters
    ----------
    variables : sequence of str
        Ordered variable names.  Each name is a shear coordinate ``X`` and the
        variable itself is ``exp(X / 4)``.
    terms : mapping
        Exponent tuple -> coefficient.  Zero coefficients are dropped and
        equal exponents must not repeat.

    Notes
    -----
    Values are immutable.  Binary operations between polynomials over
    different variable lists act on the union of the lists, keeping the order
    of the left operand and appending new names from the right one.
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self._vars = tuple(variables)
        if len(set(self._vars)) != len(self._vars):
            raise LaurentError("duplicate variable names")
        k = len(self._vars)
        clean: dict[tuple[int, ...], GaussianRational] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != k:
                raise LaurentError(f"exponent tuple {exps} does not match {k} variables")
            c = as_coefficient(coeff)
            if c:
                clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, variables: tuple[str, ...], terms: dict) -> "LaurentScalar":
        obj = object.__new__(cls)
        obj._vars = variables
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value, variables: Sequence[str] = ()) -> "LaurentScalar":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Mapping[str, int] | Sequence[int],
                 coeff=1) -> "LaurentScalar":
        """Build ``coeff * prod(var**e)`` from a name->exponent map or a full tuple."""
        variables = tuple(variables)
        if isinstance(exponents, Mapping):
            unknown = set(exponents) - set(variables)
            if unknown:
                raise UnknownCoordinateError(f"unknown variables {sorted(unknown)}")
            exps = tuple(int(exponents.get(v, 0)) for v in variables)
        else:
            exps = tuple(exponents)
        return cls(variables, {exps: coeff})

    @classmethod
    def exp_of(cls, variables: Sequence[str], name: str, scale: Fraction | int = 1) -> "LaurentScalar":
        """``exp(scale * X)`` for coordinate ``X``; ``4 * scale`` must be an integer."""
        e = Fraction(scale) * 4
        if e.denominator != 1:
            raise LaurentError(f"exp({scale} * {name}) is off the quarter lattice")
        return cls.monomial(variables, {name: int(e)})

    # -- inspection ---------------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[tuple[int, ...], GaussianRational]:
        return dict(self._terms)

    def items(self):
        """Terms sorted lexicographically by exponent tuple."""
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        zero = (0,) * len(self._vars)
        return all(e == zero for e in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * len(self._vars), _ZERO)

    def support(self) -> tuple[str, ...]:
        """Variables that occur with a nonzero exponent."""
        used = [False] * len(self._vars)
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self._vars, used) if u)

    # -- variable bookkeeping -----------------------------------------------
    def extend(self, variables: Sequence[str]) -> "LaurentScalar":
        """Re-index over ``variables``, which must contain the current support."""
        variables = tuple(variables)
        if variables == self._vars:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        missing = [v for v in self.support() if v not in pos]
        if missing:
            raise UnknownCoordinateError(f"variables {missing} not in target list")
        idx = [pos.get(v) for v in self._vars]
        k = len(variables)
        out = {}
        for exps, c in self._terms.items():
            new = [0] * k
            for i, e in zip(idx, exps):
                if e:
                    new[i] = e
            out[tuple(new)] = c
        return LaurentScalar._from_clean(variables, out)

    def _align(self, other) -> tuple["LaurentScalar", "LaurentScalar"]:
        if not isinstance(other, LaurentScalar):
            other = LaurentScalar.constant(other, self._vars)
        if other._vars == self._vars:
            return self, other
        union = _union(self._vars, other._vars)
        return self.extend(union), other.extend(union)

    # -- ring operations ------------------------------------------------------
    def __add__(self, other) -> "LaurentScalar":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        out = dict(a._terms)
        for exps, c in b._terms.items():
            prev = out.get(exps)
            if prev is None:
                out[exps] = c
            else:
                s = prev + c
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return LaurentScalar._from_clean(a._vars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar._from_clean(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentScalar":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other) -> "LaurentScalar":
        return (-self) + other

    def __mul__(self, other) -> "LaurentScalar":
        if not isinstance(other, LaurentScalar):
            try:
                c = as_coefficient(other)
            except TypeError:
                return NotImplemented
            if not c:
                return LaurentScalar._from_clean(self._vars, {})
            return LaurentScalar._from_clean(self._vars, {e: v * c for e, v in self._terms.items()})
        a, b = self._align(other)
        out: dict = {}
        for ea, ca in a._terms.items():
            for eb, cb in b._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                prev = out.get(e)
                out[e] = ca * cb if prev is None else prev + ca * cb
        return LaurentScalar._from_clean(a._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LaurentScalar":
        if isinstance(other, LaurentScalar):
            if len(other._terms) != 1:
                raise LaurentError("division is only defined by monomials")
            return self * other.inverse()
        c = as_coefficient(other)
        return self * (_ONE / c)

    def inverse(self) -> "LaurentScalar":
        """Inverse of a monomial."""
        if len(self._terms) != 1:
            raise LaurentError("only monomials are invertible")
        (exps, c), = self._terms.items()
        return LaurentScalar._from_clean(self._vars, {tuple(-e for e in exps): _ONE / c})

    def __pow__(self, k: int) -> "LaurentScalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentScalar.constant(1, self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentScalar):
            try:
                other = LaurentScalar.constant(other, self._vars)
            except TypeError:
                return NotImplemented
        if other._vars != self._vars:
            try:
                a, b = self._align(other)
            except UnknownCoordinateError:
                return False
            return a._terms == b._terms
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            stripped = self.extend(tuple(sorted(self.support())))
            self._hash = hash((stripped._vars, frozenset(stripped._terms.items())))
        return self._hash

    # -- calculus and substitution -------------------------------------------
    def shear_derivative(self, coordinate: str) -> "LaurentScalar":
        """Derivative with respect to the shear coordinate ``coordinate``.

        A monomial with exponent ``e`` in ``exp(X / 4)`` picks up ``e / 4``.
        """
        try:
            i = self._vars.index(coordinate)
        except ValueError:
            raise UnknownCoordinateError(f"unknown coordinate {coordinate!r}") from None
        out = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                out[exps] = c * Fraction(e, 4)
        return LaurentScalar._from_clean(self._vars, out)

    def gradient(self) -> list["LaurentScalar"]:
        return [self.shear_derivative(v) for v in self._vars]

    def monomial_map(self, images: Mapping[str, Mapping[str, int]],
                     variables: Sequence[str]) -> "LaurentScalar":
        """Substitute each variable by a monomial in new variables.

        ``images[x] = {y: k, ...}`` replaces ``x`` by ``prod(y**k)``.  Variables
        without an image keep their name and must appear in ``variables``.
        """
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(variables)}
        rows = []
        for name in self._vars:
            img = images.get(name, {name: 1})
            row = [0] * len(variables)
            for y, k in img.items():
                if y not in pos:
                    raise UnknownCoordinateError(f"image variable {y!r} not in target list")
                row[pos[y]] += k
            rows.append(row)
        out: dict = {}
        for exps, c in self._terms.items():
            new = [0] * len(variables)
            for e, row in zip(exps, rows):
                if e:
                    for j, k in enumerate(row):
                        if k:
                            new[j] += e * k
            key = tuple(new)
            out[key] = out[key] + c if key in out else c
        return LaurentScalar._from_clean(variables, {e: c for e, c in out.items() if c})

    # -- numerics -------------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, complex], *, backend: str = "complex"):
        """Evaluate at given values of the quarter-exponential variables.

        Parameters
        ----------
        assignment : mapping
            Variable name -> nonzero value of ``exp(X / 4)``.
        backend : {"complex", "mpmath"}
            ``"mpmath"`` keeps the working precision of ``mpmath.mp``.

        Terms are summed in lexicographic order of exponent tuples so the
        double-precision result is reproducible bit for bit.
        """
        values = []
        for v in self._vars:
            if v not in assignment:
                if v in self.support():
                    raise MissingAssignmentError(f"no value for variable {v!r}")
                values.append(None)
            else:
                values.append(assignment[v])
        if backend == "mpmath":
            import mpmath

            conv, total = (lambda c: c.to_mpc()), mpmath.mpc(0)
            values = [None if x is None else mpmath.mpc(x) for x in values]
        elif backend == "complex":
            conv, total = complex, 0j
            values = [None if x is None else complex(x) for x in values]
        else:
            raise ValueError(f"unknown backend {backend!r}")
        for exps, c in sorted(self._terms.items()):
            term = conv(c)
            for x, e in zip(values, exps):
                if e:
                    if x == 0:
                        if e < 0:
                            raise ZeroSubstitutionError("zero value for a variable with negative exponent")
                    term = term * x ** e
            total = total + term
        return total

    def evaluate_shear(self, coordinates: Mapping[str, complex], *, backend: str = "complex"):
        """Evaluate at shear coordinates ``X`` (substituting ``exp(X / 4)``)."""
        if backend == "mpmath":
            import mpmath

            vals = {k: mpmath.exp(mpmath.mpc(v) / 4) for k, v in coordinates.items()}
        else:
            vals = {k: cmath.exp(complex(v) / 4) for k, v in coordinates.items()}
        return self.evaluate(vals, backend=backend)

    # -- text ---------------------------------------------------------------
    def serialize(self) -> str:
        """Header line of variable names, then ``re/im : e1,...,ek`` per term."""
        lines = [",".join(self._vars)]
        for exps, c in sorted(self._terms.items()):
            lines.append(f"{c.serialize()} : {','.join(str(e) for e in exps)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "LaurentScalar":
        lines = text.splitlines()
        if not lines:
            raise LaurentError("empty serialization")
        header = lines[0].strip()
        variables = tuple(v.strip() for v in header.split(",")) if header else ()
        terms: dict = {}
        for line in lines[1:]:
            if not line.strip():
                continue
            coeff, _, exps = line.rpartition(" : ")
            if not _:
                raise LaurentError(f"malformed term line {line!r}")
            key = tuple(int(e) for e in exps.split(",")) if exps.strip() else ()
            if key in terms:
                raise LaurentError(f"repeated exponent {key}")
            terms[key] = GaussianRational.parse(coeff)
        return cls(variables, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                (f"q{v}" if e == 1 else f"q{v}^{e}") for v, e in zip(self._vars, exps) if e
            )
            if not mono:
                parts.append(repr(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c!r}*{mono}")
        return " + ".join(parts)


def linear_combination(coeffs: Iterable, polys: Iterable[LaurentScalar]) -> LaurentScalar:
    total = None
    for c, p in zip(coeffs, polys):
        term = p * c
        total = term if total is None else total + term
    if total is None:
        raise LaurentError("empty combination")
    return total
