"""Typed generators, words and integer-combination operator expressions.

A generator is one of the primitive operators of the calculus together with
its level subscript:

====  =========================  ==================
kind  meaning                    degree signature
====  =========================  ==================
d     exterior derivative d_q    q -> q+1
ds    codifferential d*_q        q+1 -> q
phi   Newtonian potential        q -> q
phimu fundamental sol. of the    q -> q
      level-q Lame operator
mat   coefficient matrix M_q     q+1 -> q+1
matt  coefficient matrix Mt_q    q-1 -> q-1
====  =========================  ==================

Words compose left-to-right as operator composition (the leftmost generator
acts last).  An expression is a finite integer combination of words sharing
one source/target degree; the identity is the empty word, the zero
expression has no terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeError

KINDS = ("d", "ds", "phi", "phimu", "mat", "matt")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True, order=True)
class Generator:
    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @property
    def src(self) -> int:
        k, q = self.kind, self.level
        if k == "d":
            return q
        if k == "ds":
            return q + 1
        if k == "phi" or k == "phimu":
            return q
        if k == "mat":
            return q + 1
        return q - 1  # matt

    @property
    def tgt(self) -> int:
        k, q = self.kind, self.level
        if k == "d":
            return q + 1
        if k == "ds":
            return q
        if k == "phi" or k == "phimu":
            return q
        if k == "mat":
            return q + 1
        return q - 1  # matt

    @property
    def adjoint(self) -> "Generator":
        if self.kind == "d":
            return Generator("ds", self.level)
        if self.kind == "ds":
            return Generator("d", self.level)
        return self  # phi, phimu, mat, matt are formally self-adjoint

    def __repr__(self) -> str:
        names = {"d": "d", "ds": "ds", "phi": "Phi", "phimu": "PhiMu", "mat": "M", "matt": "Mt"}
        return f"{names[self.kind]}{self.level}"


Word = tuple[Generator, ...]


def word_signature(word: Word) -> tuple[int, int]:
    """(source degree, target degree) of a composable word; raises if ill-typed."""
    if not word:
        raise DegreeError("empty word has no intrinsic signature")
    for left, right in zip(word, word[1:]):
        if left.src != right.tgt:
            raise DegreeError(f"illegal composition {left!r} after {right!r}")
    return word[-1].src, word[0].tgt


def word_key(word: Word):
    return (len(word), tuple((_KIND_RANK[g.kind], g.level) for g in word))


def word_repr(word: Word) -> str:
    return " ".join(repr(g) for g in word) if word else "I"


class Expression:
    """Integer combination of degree-consistent words with one signature."""

    __slots__ = ("src", "tgt", "terms")

    def __init__(self, src: int, tgt: int, terms: dict[Word, int] | None = None):
        self.src = src
        self.tgt = tgt
        self.terms: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            if not c:
                continue
            if w:
                s, t = word_signature(w)
                if (s, t) != (src, tgt):
                    raise DegreeError(
                        f"word {word_repr(w)} has signature {s}->{t}, expression is {src}->{tgt}"
                    )
            elif src != tgt:
                raise DegreeError("identity word requires src == tgt")
            self.terms[w] = self.terms.get(w, 0) + c
        self.terms = {w: c for w, c in self.terms.items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, src: int, tgt: int) -> "Expression":
        return cls(src, tgt, {})

    @classmethod
    def identity(cls, q: int) -> "Expression":
        return cls(q, q, {(): 1})

    @classmethod
    def from_generator(cls, g: Generator) -> "Expression":
        return cls(g.src, g.tgt, {(g,): 1})

    @classmethod
    def word(cls, gens) -> "Expression":
        w = tuple(gens)
        s, t = word_signature(w)
        return cls(s, t, {w: 1})

    # -- algebra -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check_shape(self, other: "Expression"):
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise DegreeError(
                f"signature mismatch: {self.src}->{self.tgt} vs {other.src}->{other.tgt}"
            )

    def __add__(self, other: "Expression") -> "Expression":
        self._check_shape(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return Expression(self.src, self.tgt, out)

    def __sub__(self, other: "Expression") -> "Expression":
        return self + other.scale(-1)

    def __neg__(self) -> "Expression":
        return self.scale(-1)

    def scale(self, c: int) -> "Expression":
        return Expression(self.src, self.tgt, {w: c * k for w, k in self.terms.items()})

    def compose(self, other: "Expression") -> "Expression":
        """self after other (matrix-product order: self @ other)."""
        if self.src != other.tgt:
            raise DegreeError(
                f"cannot compose {self.src}->{self.tgt} after {other.src}->{other.tgt}"
            )
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return Expression(other.src, self.tgt, out)

    def __matmul__(self, other: "Expression") -> "Expression":
        return self.compose(other)

    def adjoint(self) -> "Expression":
        out: dict[Word, int] = {}
        for w, c in self.terms.items():
            out[tuple(g.adjoint for g in reversed(w))] = c
        return Expression(self.tgt, self.src, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expression):
            return NotImplemented
        return (self.src, self.tgt) == (other.src, other.tgt) and self.terms == other.terms

    def __hash__(self):
        return hash((self.src, self.tgt, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=word_key):
            c = self.terms[w]
            coef = "" if c == 1 else ("-" if c == -1 else f"{c} ")
            text = coef + word_repr(w)
            bits.append(text if not bits or text.startswith("-") else "+ " + text)
        return " ".join(bits).replace("+ -", "- ")


# convenience constructors mirroring the notation of the calculus
def d(q: int) -> Expression:
    return Expression.from_generator(Generator("d", q))


def ds(q: int) -> Expression:
    return Expression.from_generator(Generator("ds", q))


def phi(q: int) -> Expression:
    return Expression.from_generator(Generator("phi", q))


def phimu(q: int) -> Expression:
    return Expression.from_generator(Generator("phimu", q))


def mat(q: int) -> Expression:
    return Expression.from_generator(Generator("mat", q))


def matt(q: int) -> Expression:
    return Expression.from_generator(Generator("matt", q))


def ident(q: int) -> Expression:
    return Expression.identity(q)


def zero(src: int, tgt: int | None = None) -> Expression:
    return Expression.zero(src, src if tgt is None else tgt)


def laplacian(q: int) -> Expression:
    """Hodge Laplacian at degree q, eagerly expanded into d* d + d d*."""
    return (ds(q) @ d(q)) + (d(q - 1) @ ds(q - 1))


def lame(q: int, abstract: bool = True) -> Expression:
    """Level-q Lame operator d* M d + d Mt d* (plain Laplacian if not abstract)."""
    if not abstract:
        return laplacian(q)
    return (ds(q) @ mat(q) @ d(q)) + (d(q - 1) @ matt(q) @ ds(q - 1))
