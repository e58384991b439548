"""Multivariate polynomials with exact rational coefficients.

Small and purpose-built: the exact layer of the calculus must test operator
identities by exact equality, so coefficients are ``fractions.Fraction`` and
arithmetic never rounds.  Terms map exponent tuples to coefficients.
"""

from __future__ import annotations

import random
from fractions import Fraction

Exponents = tuple[int, ...]


class Poly:
    """Polynomial in n variables over the rationals."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Exponents, Fraction] | None = None):
        self.n = n
        self.terms: dict[Exponents, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, n: int, value) -> "Poly":
        return cls(n, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, n: int, axis: int) -> "Poly":
        """The coordinate polynomial x_axis, axis in 1..n."""
        e = [0] * n
        e[axis - 1] = 1
        return cls(n, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.n, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def scale(self, factor) -> "Poly":
        factor = Fraction(factor)
        return Poly(self.n, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.n, out)

    def diff(self, axis: int) -> "Poly":
        """Partial derivative with respect to x_axis (axis in 1..n)."""
        out: dict[Exponents, Fraction] = {}
        k = axis - 1
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                e2 = tuple(e2)
                out[e2] = out.get(e2, Fraction(0)) + c * e[k]
        return Poly(self.n, out)

    def laplacian(self) -> "Poly":
        out = Poly(self.n)
        for axis in range(1, self.n + 1):
            out = out + self.diff(axis).diff(axis)
        return out

    def eval(self, point):
        """Evaluate at a point (exact if coordinates are Fractions/ints)."""
        total = Fraction(0) if all(isinstance(p, (int, Fraction)) for p in point) else 0.0
        for e, c in self.terms.items():
            term = c if isinstance(total, Fraction) else float(c)
            for p, k in zip(point, e):
                for _ in range(k):
                    term = term * p
            total = total + term
        return total

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                f"x{i+1}^{k}" if k > 1 else f"x{i+1}" for i, k in enumerate(e) if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def random_poly(n: int, rng: random.Random, max_degree: int = 3) -> Poly:
    """Random polynomial with small integer coefficients, degree <= max_degree."""
    out = Poly(n)
    for _ in range(rng.randint(1, 4)):
        e = [0] * n
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            e[rng.randrange(n)] += 1
        c = rng.randint(-4, 4)
        if c:
            out = out + Poly(n, {tuple(e): Fraction(c)})
    return out
