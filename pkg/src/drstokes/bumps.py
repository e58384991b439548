"""Smooth compactly supported bump fields with closed-form derivatives.

The basic profile is the classic mollifier factor exp(-1/(1-t^2)) truncated
at |t| >= 1, taken as a tensor product over axes.  All first and second
partials are available analytically, which lets tests resample a field and
its exact derivatives on any grid.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import multiindex as mi
from .grid import GridForm, GridSpec


def _profile(t: np.ndarray):
    """exp(-1/(1-t^2)) on |t|<1 (0 outside) with first two derivatives."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1.0
    val = np.zeros_like(t)
    d1 = np.zeros_like(t)
    d2 = np.zeros_like(t)
    ti = t[inside]
    w = 1.0 - ti * ti
    f = np.exp(-1.0 / w)
    s = -2.0 * ti / (w * w)
    sp = (-2.0 - 6.0 * ti * ti) / (w**3)
    val[inside] = f
    d1[inside] = f * s
    d2[inside] = f * (s * s + sp)
    return val, d1, d2


@dataclass(frozen=True)
class Bump:
    """Tensor-product bump: amp * prod_j profile((x_j - c_j)/r_j)."""

    center: tuple[float, ...]
    radii: tuple[float, ...]
    amplitude: float = 1.0

    @property
    def n(self) -> int:
        return len(self.center)

    def _factors(self, pts: np.ndarray):
        # pts: (m, n); returns per-axis (val, d1, d2) with chain-rule scaling
        vals, d1s, d2s = [], [], []
        for j in range(self.n):
            t = (pts[:, j] - self.center[j]) / self.radii[j]
            v, d1, d2 = _profile(t)
            vals.append(v)
            d1s.append(d1 / self.radii[j])
            d2s.append(d2 / self.radii[j] ** 2)
        return vals, d1s, d2s

    def value(self, pts: np.ndarray) -> np.ndarray:
        vals, _, _ = self._factors(np.asarray(pts, dtype=float))
        out = np.full(len(pts), self.amplitude)
        for v in vals:
            out = out * v
        return out

    def grad(self, pts: np.ndarray) -> np.ndarray:
        """Gradient, shape (m, n)."""
        pts = np.asarray(pts, dtype=float)
        vals, d1s, _ = self._factors(pts)
        out = np.empty((len(pts), self.n))
        for j in range(self.n):
            g = np.full(len(pts), self.amplitude)
            for k in range(self.n):
                g = g * (d1s[k] if k == j else vals[k])
            out[:, j] = g
        return out

    def hess(self, pts: np.ndarray) -> np.ndarray:
        """Hessian, shape (m, n, n)."""
        pts = np.asarray(pts, dtype=float)
        vals, d1s, d2s = self._factors(pts)
        out = np.empty((len(pts), self.n, self.n))
        for a in range(self.n):
            for b in range(a, self.n):
                g = np.full(len(pts), self.amplitude)
                for k in range(self.n):
                    if k == a == b:
                        g = g * d2s[k]
                    elif k in (a, b):
                        g = g * d1s[k]
                    else:
                        g = g * vals[k]
                out[:, a, b] = g
                out[:, b, a] = g
        return out


@dataclass(frozen=True)
class BumpForm:
    """Degree-q form whose components are bumps (or zero)."""

    n: int
    q: int
    parts: tuple[tuple[mi.MultiIndex, Bump], ...]

    def components(self) -> dict[mi.MultiIndex, list[Bump]]:
        out: dict[mi.MultiIndex, list[Bump]] = {}
        for I, b in self.parts:
            out.setdefault(tuple(I), []).append(b)
        return out

    def sample(self, grid: GridSpec) -> GridForm:
        pts = np.stack([ax.reshape(-1) for ax in grid.meshgrid()], axis=1)
        comps = np.zeros((mi.count(self.n, self.q), *grid.counts))
        pos = mi.index_position(self.n, self.q)
        for I, bumps in self.components().items():
            acc = np.zeros(len(pts))
            for b in bumps:
                acc += b.value(pts)
            comps[pos[I]] = acc.reshape(grid.counts)
        return GridForm(grid, self.q, comps)

    def sample_d(self, grid: GridSpec) -> GridForm:
        """Exact exterior derivative sampled on the grid."""
        n = self.n
        if self.q >= n:
            return GridForm(grid, n)
        pts = np.stack([ax.reshape(-1) for ax in grid.meshgrid()], axis=1)
        comps = np.zeros((mi.count(n, self.q + 1), *grid.counts))
        pos = mi.index_position(n, self.q + 1)
        for I, bumps in self.components().items():
            grads = sum(b.grad(pts) for b in bumps)
            for j in range(1, n + 1):
                sign, K = mi.insert_sign(j, I)
                if not sign:
                    continue
                comps[pos[K]] += sign * grads[:, j - 1].reshape(grid.counts)
        return GridForm(grid, self.q + 1, comps)

    def sample_dstar(self, grid: GridSpec) -> GridForm:
        """Exact codifferential sampled on the grid.

        Uses the coefficient formula obtained from (-1)^(nq+1) star d star:
        (d* v)_I = -sum_{j not in I} sign(j, I) (d v_{I u j} / d x_j).
        """
        n = self.n
        if self.q == 0:
            raise ValueError("codifferential undefined on 0-forms")
        pts = np.stack([ax.reshape(-1) for ax in grid.meshgrid()], axis=1)
        comps = np.zeros((mi.count(n, self.q - 1), *grid.counts))
        pos = mi.index_position(n, self.q - 1)
        for K, bumps in self.components().items():
            grads = sum(b.grad(pts) for b in bumps)
            for j in K:
                I = tuple(i for i in K if i != j)
                sign, _ = mi.insert_sign(j, I)
                comps[pos[I]] += -sign * grads[:, j - 1].reshape(grid.counts)
        return GridForm(grid, self.q - 1, comps)


def random_bump_form(
    n: int,
    q: int,
    rng: random.Random,
    box: tuple[float, float] = (0.0, 1.0),
    support_fraction: float = 0.5,
) -> BumpForm:
    """Random bump form supported well inside the box (all components filled)."""
    lo, hi = box
    width = hi - lo
    parts = []
    for I in mi.indices(n, q):
        center = tuple(lo + width * (0.5 + 0.15 * (rng.random() - 0.5)) for _ in range(n))
        radii = tuple(width * support_fraction * (0.35 + 0.15 * rng.random()) for _ in range(n))
        amp = rng.uniform(0.4, 1.0) * (1 if rng.random() < 0.5 else -1)
        parts.append((I, Bump(center, radii, amp)))
    return BumpForm(n, q, tuple(parts))


def centered_bump_form(n: int, q: int, box: tuple[float, float] = (0.0, 1.0), support_fraction: float = 0.55) -> BumpForm:
    lo, hi = box
    width = hi - lo
    c = (lo + hi) / 2.0
    parts = []
    for k, I in enumerate(mi.indices(n, q)):
        amp = 1.0 if k % 2 == 0 else -0.6
        parts.append((I, Bump((c,) * n, (width * support_fraction / 2,) * n, amp)))
    return BumpForm(n, q, tuple(parts))
