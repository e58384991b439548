"""Block operator matrices: the Stokes blocks and their fundamental solutions.

Blocks are indexed so that row r (0-based) outputs forms of degree q - r and
column c inputs forms of degree q - c; the unknown column is
``u = (u_q, ..., u_0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeError, UnsupportedConfigurationError
from . import generators as G
from .generators import Expression
from .rewrite import DEFAULT_BUDGET, normalize

# documented sign mutations for the negative-control suite: flipping any one
# of these block signs must break the right-inverse identity
SIGN_MUTATIONS = {
    1: (0, 0),  # velocity/velocity block
    2: (0, 1),  # velocity/pressure block
    3: (1, 0),  # pressure/velocity block
    4: (1, 1),  # pressure/pressure block
    5: (2, 1),  # first lower chain block (needs q >= 2)
}


@dataclass(frozen=True)
class BlockMatrix:
    """Matrix of operator expressions with a consistent degree signature."""

    row_degrees: tuple[int, ...]
    col_degrees: tuple[int, ...]
    entries: tuple[tuple[Expression, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.entries):
            if len(row) != len(self.col_degrees):
                raise DegreeError("ragged block matrix")
            for j, e in enumerate(row):
                if (e.src, e.tgt) != (self.col_degrees[j], self.row_degrees[i]):
                    raise DegreeError(
                        f"block ({i},{j}) maps {e.src}->{e.tgt}, expected "
                        f"{self.col_degrees[j]}->{self.row_degrees[i]}"
                    )

    @classmethod
    def build(cls, row_degrees, col_degrees, fill) -> "BlockMatrix":
        rows = tuple(
            tuple(fill(i, j) for j in range(len(col_degrees)))
            for i in range(len(row_degrees))
        )
        return cls(tuple(row_degrees), tuple(col_degrees), rows)

    @classmethod
    def identity(cls, degrees) -> "BlockMatrix":
        degrees = tuple(degrees)
        return cls.build(
            degrees,
            degrees,
            lambda i, j: G.ident(degrees[i]) if i == j else G.zero(degrees[j], degrees[i]),
        )

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.col_degrees != other.row_degrees:
            raise DegreeError("block signatures incompatible for product")

        def fill(i, j):
            acc = G.zero(other.col_degrees[j], self.row_degrees[i])
            for k in range(len(self.col_degrees)):
                acc = acc + self.entries[i][k] @ other.entries[k][j]
            return acc

        return BlockMatrix.build(self.row_degrees, other.col_degrees, fill)

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        if (self.row_degrees, self.col_degrees) != (other.row_degrees, other.col_degrees):
            raise DegreeError("block signatures incompatible for sum")
        return BlockMatrix.build(
            self.row_degrees,
            self.col_degrees,
            lambda i, j: self.entries[i][j] + other.entries[i][j],
        )

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return self + other.scale(-1)

    def scale(self, c: int) -> "BlockMatrix":
        return BlockMatrix.build(
            self.row_degrees, self.col_degrees, lambda i, j: self.entries[i][j].scale(c)
        )

    def adjoint(self) -> "BlockMatrix":
        return BlockMatrix.build(
            self.col_degrees,
            self.row_degrees,
            lambda i, j: self.entries[j][i].adjoint(),
        )

    def normalized(self, n: int, budget: int = DEFAULT_BUDGET) -> "BlockMatrix":
        return BlockMatrix.build(
            self.row_degrees,
            self.col_degrees,
            lambda i, j: normalize(self.entries[i][j], n, budget),
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __repr__(self) -> str:
        lines = []
        for row in self.entries:
            lines.append("[ " + " | ".join(repr(e) for e in row) + " ]")
        return "\n".join(lines)


def _check_range(n: int, q: int, j0: int):
    if not 1 <= j0 <= q <= n:
        raise DegreeError(f"need 1 <= j0 <= q <= n, got j0={j0}, q={q}, n={n}")


def build_stokes(n: int, q: int, j0: int | None = None, abstract: bool = True) -> BlockMatrix:
    """The tridiagonal (q+1) x (q+1) Stokes block matrix.

    Diagonal block r carries the level q-r Lame operator, eagerly expanded,
    zeroed below level j0; the super/sub diagonals are d and d*.
    """
    j0 = q if j0 is None else j0
    _check_range(n, q, j0)
    degs = tuple(range(q, -1, -1))

    def fill(i, j):
        m = q - i
        if i == j:
            return G.lame(m, abstract=abstract) if m >= j0 else G.zero(m, m)
        if j == i + 1:
            return G.d(m - 1)
        if j == i - 1:
            return G.ds(m)
        return G.zero(q - j, m)

    return BlockMatrix.build(degs, degs, fill)


def build_psi_right(
    n: int, q: int, abstract: bool = True, mutation: int | None = None
) -> BlockMatrix:
    """Right fundamental solution blocks (lowest q-1 Lame levels must vanish).

    In the identity-matrix mode the level-q fundamental solution is the plain
    potential and the coefficient matrices disappear.
    """
    _check_range(n, q, q)
    degs = tuple(range(q, -1, -1))
    pm = G.phimu(q) if abstract else G.phi(q)

    def fill(i, j):
        if i == 0 and j == 0:
            if abstract:
                return G.ds(q) @ G.mat(q) @ G.d(q) @ pm @ pm
            return G.ds(q) @ G.d(q) @ pm @ pm
        if i == 1 and j == 0:
            head = G.ds(q - 1) @ G.phi(q) @ G.d(q - 1)
            mid = G.matt(q) if abstract else G.ident(q - 1)
            return head @ mid @ G.ds(q - 1) @ pm
        if i == 1 and j == 1:
            head = G.ds(q - 1) @ G.phi(q) @ G.d(q - 1)
            mid = G.matt(q) if abstract else G.ident(q - 1)
            return (head @ mid @ head).scale(-1)
        if j == i + 1:
            m = q - i - 1
            return G.d(m) @ G.phi(m)
        if j == i - 1 and i >= 2:
            m = q - i + 1
            return G.phi(m - 1) @ G.ds(m - 1)
        return G.zero(q - j, q - i)

    psi = BlockMatrix.build(degs, degs, fill)
    if mutation is not None:
        if mutation not in SIGN_MUTATIONS:
            raise UnsupportedConfigurationError(f"unknown mutation {mutation}")
        i, j = SIGN_MUTATIONS[mutation]
        if i >= q + 1 or j >= q + 1:
            raise UnsupportedConfigurationError(f"mutation {mutation} needs q >= {max(i, j)}")
        rows = [list(r) for r in psi.entries]
        rows[i][j] = rows[i][j].scale(-1)
        psi = BlockMatrix(psi.row_degrees, psi.col_degrees, tuple(tuple(r) for r in rows))
    return psi


def build_psi_left(n: int, q: int, abstract: bool = True) -> BlockMatrix:
    """Left fundamental solution: adjoint of the right one."""
    return build_psi_right(n, q, abstract=abstract).adjoint()


def build_defect(n: int, q: int, abstract: bool = True, budget: int = DEFAULT_BUDGET) -> BlockMatrix:
    """The smoothing defect A with Psi_right S = I - A."""
    s = build_stokes(n, q, abstract=abstract)
    psi = build_psi_right(n, q, abstract=abstract)
    prod = (psi @ s).normalized(n, budget)
    return (BlockMatrix.identity(prod.row_degrees) - prod).normalized(n, budget)


def defect_closed_form(n: int, q: int, abstract: bool = True) -> BlockMatrix:
    """The defect blocks in closed form (only the three listed entries live)."""
    _check_range(n, q, q)
    degs = tuple(range(q, -1, -1))
    pm = G.phimu(q) if abstract else G.phi(q)
    dmd = (G.ds(q) @ G.mat(q) @ G.d(q)) if abstract else (G.ds(q) @ G.d(q))
    mid = G.matt(q) if abstract else G.ident(q - 1)

    def fill(i, j):
        if i == 0 and j == 0:
            return G.ds(q) @ G.d(q) @ G.phi(q) - dmd @ pm
        if i == 0 and j == 1:
            return (dmd @ pm @ pm @ G.d(q - 1)).scale(-1)
        if i == 1 and j == 1:
            return (
                G.ds(q - 1) @ G.d(q - 1) @ G.phi(q - 1)
                - G.ds(q - 1) @ G.phi(q) @ G.d(q - 1) @ mid @ G.ds(q - 1) @ pm @ G.d(q - 1)
            )
        return G.zero(q - j, q - i)

    return BlockMatrix.build(degs, degs, fill)


def build_psi_bilateral(
    n: int, q: int, abstract: bool = True, budget: int = DEFAULT_BUDGET
) -> BlockMatrix:
    """Bilateral fundamental solution Psi_right + H with H = A Psi_right*."""
    psi = build_psi_right(n, q, abstract=abstract)
    defect = build_defect(n, q, abstract=abstract, budget=budget)
    correction = defect @ psi.adjoint()
    return (psi + correction).normalized(n, budget)


def check_commute_condition(mt_forms) -> bool:
    """True iff every supplied coefficient form is closed (d of it vanishes).

    ``mt_forms`` is the family of (q-1)-forms identifying the lower matrix;
    closedness of all of them is equivalent to d Mt d == 0.
    """
    from ..forms import exterior_derivative

    return all(exterior_derivative(f).is_zero() for f in mt_forms)
