"""Grid-sampled differential forms and the discrete calculus on them.

Forms live on a rectangular node grid.  Derivatives are second-order central
differences.  Two boundary policies exist:

* ``shrink=False`` extends the data by zeros, which is exact for forms that
  vanish on a margin of nodes (the compactly supported case).  With the
  plain Riemann-sum pairing the discrete adjoint of the central difference
  is then exactly its negative, so (d u, v) = (u, d* v) holds to rounding.
* ``shrink=True`` drops one boundary ring per derivative and never invents
  data; it is used on potential fields, which do not vanish at the edge.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import multiindex as mi
from .errors import DegreeError, DimensionMismatchError, SupportError

MultiIndex = mi.MultiIndex


@dataclass(frozen=True)
class GridSpec:
    """Rectangular node grid: origin, spacing and node count per axis."""

    origin: tuple[float, ...]
    spacing: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.origin) == len(self.spacing) == len(self.counts)):
            raise DimensionMismatchError("origin/spacing/counts lengths differ")
        if any(h <= 0 for h in self.spacing):
            raise ValueError("grid spacing must be positive")

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axes(self) -> list[np.ndarray]:
        return [
            o + h * np.arange(c)
            for o, h, c in zip(self.origin, self.spacing, self.counts)
        ]

    def meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def expand(self, rings: int) -> "GridSpec":
        """Grid grown by `rings` nodes on every face."""
        return GridSpec(
            tuple(o - rings * h for o, h in zip(self.origin, self.spacing)),
            self.spacing,
            tuple(c + 2 * rings for c in self.counts),
        )

    def shrink(self, rings: int) -> "GridSpec":
        if any(c <= 2 * rings for c in self.counts):
            raise ValueError("grid too small to shrink")
        return GridSpec(
            tuple(o + rings * h for o, h in zip(self.origin, self.spacing)),
            self.spacing,
            tuple(c - 2 * rings for c in self.counts),
        )

    def offset_of(self, inner: "GridSpec") -> tuple[int, ...]:
        """Node offset of `inner`'s origin inside this grid (must align)."""
        if inner.spacing != self.spacing:
            raise DimensionMismatchError("grids have different spacing")
        off = []
        for oo, oi, h, cs, ci in zip(self.origin, inner.origin, self.spacing, self.counts, inner.counts):
            k = (oi - oo) / h
            ki = int(round(k))
            if abs(k - ki) > 1e-9 or ki < 0 or ki + ci > cs:
                raise DimensionMismatchError("inner grid does not align inside outer grid")
            off.append(ki)
        return tuple(off)


class GridForm:
    """Degree-q form sampled at grid nodes.

    Coefficients are stored as one stacked array of shape ``(k_q, *counts)``
    with components in lexicographic multi-index order.
    """

    __slots__ = ("n", "q", "grid", "comps")

    def __init__(self, grid: GridSpec, q: int, comps: np.ndarray | None = None):
        n = grid.n
        if not 0 <= q <= n:
            raise DegreeError(f"degree {q} out of range for n={n}")
        k = mi.count(n, q)
        if comps is None:
            comps = np.zeros((k, *grid.counts))
        comps = np.asarray(comps, dtype=float)
        if comps.shape != (k, *grid.counts):
            raise DimensionMismatchError(
                f"component array has shape {comps.shape}, expected {(k, *grid.counts)}"
            )
        self.n = n
        self.q = q
        self.grid = grid
        self.comps = comps

    def copy(self) -> "GridForm":
        return GridForm(self.grid, self.q, self.comps.copy())

    def component(self, I: MultiIndex) -> np.ndarray:
        return self.comps[mi.index_position(self.n, self.q)[tuple(I)]]

    def __add__(self, other: "GridForm") -> "GridForm":
        self._check(other)
        return GridForm(self.grid, self.q, self.comps + other.comps)

    def __sub__(self, other: "GridForm") -> "GridForm":
        self._check(other)
        return GridForm(self.grid, self.q, self.comps - other.comps)

    def scale(self, c: float) -> "GridForm":
        return GridForm(self.grid, self.q, self.comps * c)

    def max_norm(self) -> float:
        return float(np.abs(self.comps).max()) if self.comps.size else 0.0

    def support_margin(self) -> int:
        """Widest zero margin present on every face (capped at min count // 2)."""
        cap = min(self.grid.counts) // 2
        for m in range(cap, 0, -1):
            shell = self.comps.copy()
            shell[(slice(None),) + tuple(slice(m, c - m) for c in self.grid.counts)] = 0.0
            if not shell.any():
                return m
        return 0

    def _check(self, other: "GridForm"):
        if self.grid != other.grid:
            raise DimensionMismatchError("grid forms live on different grids")
        if self.q != other.q:
            raise DegreeError("grid forms have different degrees")


def require_margin(u: GridForm, margin: int = 2):
    if u.support_margin() < margin:
        raise SupportError(f"grid form must vanish on a {margin}-node margin")


def crop(u: GridForm, target: GridSpec) -> GridForm:
    """Restrict to an aligned subgrid."""
    off = u.grid.offset_of(target)
    sl = (slice(None),) + tuple(slice(o, o + c) for o, c in zip(off, target.counts))
    return GridForm(target, u.q, u.comps[sl].copy())


def embed(u: GridForm, outer: GridSpec) -> GridForm:
    """Zero-pad onto an aligned supergrid."""
    off = outer.offset_of(u.grid)
    out = np.zeros((u.comps.shape[0], *outer.counts))
    sl = (slice(None),) + tuple(slice(o, o + c) for o, c in zip(off, u.grid.counts))
    out[sl] = u.comps
    return GridForm(outer, u.q, out)


def _central_diff(arr: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Central difference along a component-array axis (axis >= 1), with
    zero-extension at the two boundary nodes."""
    out = np.zeros_like(arr)
    lo = [slice(None)] * arr.ndim
    hi = [slice(None)] * arr.ndim
    mid = [slice(None)] * arr.ndim
    lo[axis] = slice(0, -2)
    hi[axis] = slice(2, None)
    mid[axis] = slice(1, -1)
    out[tuple(mid)] = (arr[tuple(hi)] - arr[tuple(lo)]) / (2.0 * h)
    # one-node rim: zero-extension semantics (missing neighbour treated as 0)
    first = [slice(None)] * arr.ndim
    second = [slice(None)] * arr.ndim
    first[axis] = 0
    second[axis] = 1
    out[tuple(first)] = arr[tuple(second)] / (2.0 * h)
    last = [slice(None)] * arr.ndim
    nextlast = [slice(None)] * arr.ndim
    last[axis] = -1
    nextlast[axis] = -2
    out[tuple(last)] = -arr[tuple(nextlast)] / (2.0 * h)
    return out


def _diff_component(u: GridForm, comp_index: int, j: int) -> np.ndarray:
    """D_j of one component (zero-extension at the rim; crop if not wanted)."""
    return _central_diff(u.comps[comp_index][None, ...], j, u.grid.spacing[j - 1])[0]


def exterior_derivative(u: GridForm, shrink: bool = False) -> GridForm:
    """Grid d_q by central differences; q >= n gives the zero top form."""
    n = u.n
    if u.q >= n:
        out_grid = u.grid.shrink(1) if shrink else u.grid
        return GridForm(out_grid, n)
    idx_in = mi.indices(n, u.q)
    pos_out = mi.index_position(n, u.q + 1)
    out = np.zeros((mi.count(n, u.q + 1), *u.grid.counts))
    for ci, I in enumerate(idx_in):
        for j in range(1, n + 1):
            sign, K = mi.insert_sign(j, I)
            if not sign:
                continue
            out[pos_out[K]] += sign * _diff_component(u, ci, j)
    res = GridForm(u.grid, u.q + 1, out)
    return crop(res, u.grid.shrink(1)) if shrink else res


def hodge_star(u: GridForm) -> GridForm:
    """Pointwise star: component permutation with signs, grid unchanged."""
    n = u.n
    out = np.zeros((mi.count(n, n - u.q), *u.grid.counts))
    pos_out = mi.index_position(n, n - u.q)
    for ci, I in enumerate(mi.indices(n, u.q)):
        out[pos_out[mi.complement(I, n)]] = mi.star_sign(I, n) * u.comps[ci]
    return GridForm(u.grid, n - u.q, out)


def codifferential(v: GridForm, shrink: bool = False) -> GridForm:
    """d*_q on a (q+1)-form, literally (-1)^(n q + 1) star d star."""
    if v.q == 0:
        raise DegreeError("codifferential undefined on 0-forms")
    n, q = v.n, v.q - 1
    sign = (-1) ** (n * q + 1)
    return hodge_star(exterior_derivative(hodge_star(v), shrink=shrink)).scale(sign)


def hodge_laplacian(u: GridForm, shrink: bool = False) -> GridForm:
    """d* d + d d* (each composition consumes two rings when shrinking)."""
    rings = 2 if shrink else 0
    target = u.grid.shrink(rings) if rings else u.grid
    out = GridForm(target, u.q)
    if u.q < u.n:
        out = out + codifferential(exterior_derivative(u, shrink=shrink), shrink=shrink)
    if u.q > 0:
        out = out + exterior_derivative(codifferential(u, shrink=shrink), shrink=shrink)
    return out


def componentwise_laplacian(u: GridForm, shrink: bool = False) -> GridForm:
    """Plain 5/7-point-style Laplacian built from repeated central differences."""
    comps = []
    for ci in range(u.comps.shape[0]):
        acc = np.zeros_like(u.comps[ci])
        for j in range(1, u.n + 1):
            first = _diff_component(u, ci, j)
            acc += _central_diff(first[None, ...], j, u.grid.spacing[j - 1])[0]
        comps.append(acc)
    res = GridForm(u.grid, u.q, np.stack(comps))
    return crop(res, u.grid.shrink(2)) if shrink else res


def pairing(u: GridForm, v: GridForm) -> float:
    """Discrete L2 pairing: plain Riemann sum of the coefficient products."""
    u._check(v)
    return float(np.sum(u.comps * v.comps) * u.grid.cell_volume)


def matrix_action(entries: np.ndarray, u: GridForm) -> GridForm:
    """Constant matrix acting on the stacked coefficient vector."""
    entries = np.asarray(entries, dtype=float)
    k = u.comps.shape[0]
    if entries.shape != (k, k):
        raise DegreeError(f"matrix shape {entries.shape} does not match k_q={k}")
    out = np.einsum("ij,j...->i...", entries, u.comps)
    return GridForm(u.grid, u.q, out)


def matrix_action_via_star(entries: np.ndarray, u: GridForm) -> GridForm:
    """Star/wedge route for the matrix action; agrees with matrix_action.

    Computes ``sum_I star(u ^ star M^(I)) dx_I`` with constant rows M^(I).
    The arithmetic per component is the same multiply/add sequence as the
    direct product, so the two routes agree bitwise.
    """
    entries = np.asarray(entries, dtype=float)
    n, q = u.n, u.q
    idx = mi.indices(n, q)
    out = np.zeros_like(u.comps)
    for i, I in enumerate(idx):
        # star M^(I) has coefficient entries[i][j] * star_sign(J) at J^c;
        # wedging u_J dx_J against it hits the top form with merge sign,
        # and star of the top form multiplies by star_sign(full) = +1.
        acc = np.zeros_like(u.comps[0])
        for j, J in enumerate(idx):
            s1 = mi.star_sign(J, n)
            s2, K = mi.merge_sign(J, mi.complement(J, n))
            assert K == tuple(range(1, n + 1))
            acc = acc + u.comps[j] * ((s1 * s2) * entries[i][j])
        out[i] = acc
    return GridForm(u.grid, q, out)


# ---------------------------------------------------------------------------
# DRFORM/1 file format


def write_drform(u: GridForm, fh) -> None:
    """Write the DRFORM/1 text format."""
    g = u.grid
    dims = ",".join(str(c) for c in g.counts)
    hs = ",".join(repr(float(h)) for h in g.spacing)
    os_ = ",".join(repr(float(o)) for o in g.origin)
    fh.write(f"DRFORM 1 n={u.n} q={u.q} dims={dims} h={hs} origin={os_}\n")
    for I in mi.indices(u.n, u.q):
        fh.write("I=" + ",".join(str(i) for i in I) + "\n")
        flat = u.component(I).reshape(-1)
        fh.write(" ".join(repr(float(x)) for x in flat) + "\n")


def read_drform(fh) -> GridForm:
    """Read the DRFORM/1 text format."""
    header = fh.readline().split()
    if len(header) < 2 or header[0] != "DRFORM" or header[1] != "1":
        raise ValueError("not a DRFORM/1 stream")
    fields = dict(part.split("=", 1) for part in header[2:])
    n = int(fields["n"])
    q = int(fields["q"])
    counts = tuple(int(x) for x in fields["dims"].split(","))
    spacing = tuple(float(x) for x in fields["h"].split(","))
    origin = tuple(float(x) for x in fields["origin"].split(","))
    grid = GridSpec(origin, spacing, counts)
    body = fh.read().split("\n")
    pos = 0
    comps = np.zeros((mi.count(n, q), *counts))
    pos_of = mi.index_position(n, q)
    expected = int(np.prod(counts))
    while pos < len(body):
        line = body[pos].strip()
        pos += 1
        if not line:
            continue
        if not line.startswith("I="):
            raise ValueError(f"expected an I= line, got {line[:30]!r}")
        I = tuple(int(x) for x in line[2:].split(",") if x)
        values: list[float] = []
        while pos < len(body) and len(values) < expected:
            values.extend(float(x) for x in body[pos].split())
            pos += 1
        if len(values) != expected:
            raise ValueError(f"component {I}: expected {expected} values, got {len(values)}")
        comps[pos_of[I]] = np.array(values).reshape(counts)
    return GridForm(grid, q, comps)


def drform_dumps(u: GridForm) -> str:
    buf = io.StringIO()
    write_drform(u, buf)
    return buf.getvalue()


def drform_loads(text: str) -> GridForm:
    return read_drform(io.StringIO(text))
