"""Exact exterior calculus on polynomial differential forms.

A ``PolyForm`` of degree q over R^n stores one rational polynomial per
strictly increasing multi-index; absent indices mean zero.  Every operation
here is exact, so complex identities (d d = 0, the Laplacian comparison,
star star = +-1) are tested by exact equality rather than tolerances.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import multiindex as mi
from .errors import DegreeError, DimensionMismatchError
from .polynomial import Poly, random_poly

MultiIndex = mi.MultiIndex


class PolyForm:
    """Degree-q differential form with polynomial coefficients."""

    __slots__ = ("n", "q", "coeffs")

    def __init__(self, n: int, q: int, coeffs: dict[MultiIndex, Poly] | None = None):
        if not 0 <= q <= n:
            # degenerate degrees are representable only as the zero form
            coeffs = coeffs or {}
            if any(not p.is_zero() for p in coeffs.values()):
                raise DegreeError(f"degree {q} out of range for n={n}")
        self.n = n
        self.q = q
        self.coeffs: dict[MultiIndex, Poly] = {}
        for I, p in (coeffs or {}).items():
            I = tuple(I)
            if len(I) != q:
                raise DegreeError(f"index {I} does not have length {q}")
            if not p.is_zero():
                self.coeffs[I] = p

    @classmethod
    def zero(cls, n: int, q: int) -> "PolyForm":
        return cls(n, max(0, min(q, n)), {})

    @classmethod
    def basis(cls, n: int, I: MultiIndex, coeff: Poly | None = None) -> "PolyForm":
        I = tuple(I)
        return cls(n, len(I), {I: coeff if coeff is not None else Poly.constant(n, 1)})

    def coefficient(self, I: MultiIndex) -> Poly:
        return self.coeffs.get(tuple(I), Poly(self.n))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self - other).is_zero() if (self.n, self.q) == (other.n, other.q) else False

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for I, p in other.coeffs.items():
            out[I] = out.get(I, Poly(self.n)) + p
        return PolyForm(self.n, self.q, out)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + other.scale(-1)

    def __neg__(self) -> "PolyForm":
        return self.scale(-1)

    def scale(self, factor) -> "PolyForm":
        return PolyForm(self.n, self.q, {I: p.scale(factor) for I, p in self.coeffs.items()})

    def _check_compatible(self, other: "PolyForm"):
        if self.n != other.n:
            raise DimensionMismatchError(f"ambient dimensions differ: {self.n} vs {other.n}")
        if self.q != other.q:
            raise DegreeError(f"form degrees differ: {self.q} vs {other.q}")

    def __repr__(self) -> str:
        if self.is_zero():
            return f"PolyForm(n={self.n}, q={self.q}, 0)"
        bits = [f"({p}) dx{list(I)}" for I, p in sorted(self.coeffs.items())]
        return f"PolyForm(n={self.n}, q={self.q}, " + " + ".join(bits) + ")"


def wedge(u: PolyForm, v: PolyForm) -> PolyForm:
    """Exterior product.  Degrees p+q > n clamp to the zero top-degree form."""
    if u.n != v.n:
        raise DimensionMismatchError(f"ambient dimensions differ: {u.n} vs {v.n}")
    n = u.n
    target = min(u.q + v.q, n)
    out: dict[MultiIndex, Poly] = {}
    if u.q + v.q <= n:
        for I, p in u.coeffs.items():
            for J, r in v.coeffs.items():
                sign, K = mi.merge_sign(I, J)
                if not sign:
                    continue
                term = (p * r).scale(sign)
                out[K] = out.get(K, Poly(n)) + term
    return PolyForm(n, target, out)


def hodge_star(u: PolyForm) -> PolyForm:
    """Hodge star for the Euclidean metric and standard orientation."""
    n = u.n
    out: dict[MultiIndex, Poly] = {}
    for I, p in u.coeffs.items():
        out[mi.complement(I, n)] = p.scale(mi.star_sign(I, n))
    return PolyForm(n, n - u.q, out)


def exterior_derivative(u: PolyForm) -> PolyForm:
    """d_q: sum over axes of (d coeff / d x_j) dx_j ^ dx_I; zero for q >= n."""
    n = u.n
    if u.q >= n:
        return PolyForm.zero(n, n)
    out: dict[MultiIndex, Poly] = {}
    for I, p in u.coeffs.items():
        for j in range(1, n + 1):
            sign, K = mi.insert_sign(j, I)
            if not sign:
                continue
            dp = p.diff(j)
            if dp.is_zero():
                continue
            out[K] = out.get(K, Poly(n)) + dp.scale(sign)
    return PolyForm(n, u.q + 1, out)


def codifferential(v: PolyForm) -> PolyForm:
    """d*_q on a (q+1)-form, literally (-1)^(n q + 1) star d star."""
    if v.q == 0:
        raise DegreeError("codifferential undefined on 0-forms")
    n, q = v.n, v.q - 1
    sign = (-1) ** (n * q + 1)
    return hodge_star(exterior_derivative(hodge_star(v))).scale(sign)


def componentwise_laplacian(u: PolyForm) -> PolyForm:
    """The matrix Laplace operator applied coefficientwise (no sign)."""
    return PolyForm(u.n, u.q, {I: p.laplacian() for I, p in u.coeffs.items()})


def hodge_laplacian(u: PolyForm) -> PolyForm:
    """d* d + d d*; equals minus the componentwise Laplacian."""
    out = PolyForm.zero(u.n, u.q)
    if u.q < u.n:
        out = out + codifferential(exterior_derivative(u))
    if u.q > 0:
        out = out + exterior_derivative(codifferential(u))
    return out


class MatrixCoefficient:
    """Constant symmetric matrix acting on the coefficient vector of q-forms.

    Stored as a k_q x k_q array of exact rationals in lexicographic
    multi-index order; equivalently the family ``{M^(I)}`` of constant
    q-forms with ``M^(I)_J`` the (I, J) entry.
    """

    __slots__ = ("n", "degree", "entries")

    def __init__(self, n: int, degree: int, entries):
        k = mi.count(n, degree)
        rows = [[Fraction(entries[i][j]) for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix coefficient must be symmetric")
        self.n = n
        self.degree = degree
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n: int, degree: int, scale=1) -> "MatrixCoefficient":
        k = mi.count(n, degree)
        return cls(n, degree, [[Fraction(scale) if i == j else Fraction(0) for j in range(k)] for i in range(k)])

    def is_positive(self) -> bool:
        """Smallest eigenvalue > 0, checked in floating point."""
        arr = np.array([[float(c) for c in row] for row in self.entries])
        if arr.size == 0:
            return True
        return bool(np.linalg.eigvalsh(arr).min() > 0)

    def as_forms(self) -> dict[MultiIndex, PolyForm]:
        """The family M^(I) of constant q-forms (rows of the matrix)."""
        idx = mi.indices(self.n, self.degree)
        fam = {}
        for i, I in enumerate(idx):
            fam[I] = PolyForm(
                self.n,
                self.degree,
                {J: Poly.constant(self.n, self.entries[i][j]) for j, J in enumerate(idx) if self.entries[i][j]},
            )
        return fam

    def matvec(self, u: PolyForm) -> PolyForm:
        """Direct matrix-vector product on the lexicographic coefficient vector."""
        self._check(u)
        idx = mi.indices(self.n, self.degree)
        out: dict[MultiIndex, Poly] = {}
        for i, I in enumerate(idx):
            acc = Poly(self.n)
            for j, J in enumerate(idx):
                if self.entries[i][j]:
                    acc = acc + u.coefficient(J).scale(self.entries[i][j])
            out[I] = acc
        return PolyForm(self.n, self.degree, out)

    def action_via_star(self, u: PolyForm) -> PolyForm:
        """The wedge/star route ``M u = sum_I star(u ^ star M^(I)) dx_I``."""
        self._check(u)
        out: dict[MultiIndex, Poly] = {}
        for I, MI in self.as_forms().items():
            scalar = hodge_star(wedge(u, hodge_star(MI)))
            out[I] = scalar.coefficient(())
        return PolyForm(self.n, self.degree, out)

    def _check(self, u: PolyForm):
        if u.n != self.n:
            raise DimensionMismatchError("matrix and form dimensions differ")
        if u.q != self.degree:
            raise DegreeError(f"matrix acts on degree {self.degree}, form has degree {u.q}")


def matrix_action(M: MatrixCoefficient, u: PolyForm, route: str = "matvec") -> PolyForm:
    if route == "matvec":
        return M.matvec(u)
    if route == "star":
        return M.action_via_star(u)
    raise ValueError(f"unknown route {route!r}")


def lame_laplacian(M: MatrixCoefficient | None, Mt: MatrixCoefficient | None, u: PolyForm) -> PolyForm:
    """d*_q M d_q u + d_{q-1} Mt d*_{q-1} u with constant coefficient matrices.

    ``M`` acts on (q+1)-forms, ``Mt`` on (q-1)-forms; None means identity.
    """
    n, q = u.n, u.q
    out = PolyForm.zero(n, q)
    if q < n:
        du = exterior_derivative(u)
        if M is not None:
            if M.degree != q + 1:
                raise DegreeError(f"upper matrix must act on degree {q + 1}")
            du = M.matvec(du)
        out = out + codifferential(du)
    if q > 0:
        su = codifferential(u)
        if Mt is not None:
            if Mt.degree != q - 1:
                raise DegreeError(f"lower matrix must act on degree {q - 1}")
            su = Mt.matvec(su)
        out = out + exterior_derivative(su)
    return out


def random_form(n: int, q: int, rng: random.Random, max_degree: int = 3) -> PolyForm:
    """Random polynomial form: every component gets a small random polynomial."""
    coeffs = {I: random_poly(n, rng, max_degree) for I in mi.indices(n, q)}
    return PolyForm(n, q, coeffs)
