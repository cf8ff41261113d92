"""Brute-force reference computations for tests.

Everything here is built on plain gauge evaluation and scipy; nothing calls
the simplex kernel or the subdifferential machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "GridSpec",
    "brute_min_1d",
    "brute_subgradient_check",
    "brute_polar_eval",
    "brute_line_minimum",
]


@dataclass(frozen=True)
class GridSpec:
    """Box ``prod [lo_i, hi_i]`` sampled on a tensor grid, or by seeded uniform
    draws when the tensor grid would exceed ``max_points``."""

    bounds: tuple
    resolution: tuple
    seed: int = 0
    max_points: int = 4096

    def __post_init__(self):
        if len(self.bounds) != len(self.resolution):
            raise ValueError("bounds and resolution need one entry per axis")
        if any(r < 16 for r in self.resolution):
            raise ValueError("resolution must be at least 16 per axis")
        if not np.all(np.isfinite(np.asarray(self.bounds, dtype=float))):
            raise ValueError("bounds must be finite")

    @classmethod
    def cube(cls, d: int, half_width: float, resolution: int = 16, seed: int = 0, max_points: int = 4096):
        return cls(((-half_width, half_width),) * d, (resolution,) * d, seed, max_points)

    def points(self) -> np.ndarray:
        total = int(np.prod(self.resolution))
        if total <= self.max_points:
            axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(self.bounds, self.resolution)]
            return np.array(list(itertools.product(*axes)))
        rng = np.random.default_rng(self.seed)
        lo = np.array([b[0] for b in self.bounds], dtype=float)
        hi = np.array([b[1] for b in self.bounds], dtype=float)
        return lo + (hi - lo) * rng.random((self.max_points, len(self.bounds)))


def brute_min_1d(f, bracket, resolution: int = 2001, rounds: int = 60):
    """Dense scan of ``f`` on ``bracket``, then repeated zooming scans.

    Each round rescans the two cells around the best sample with 21 points,
    shrinking the window tenfold, so unimodal functions (smooth or kinked)
    are located to rounding.  A bounded Brent search is also tried; the
    better of the two is returned.
    """
    a, b = map(float, bracket)
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise ValueError("bracket must be a finite interval")
    grid = np.linspace(a, b, resolution)
    vals = np.array([f(t) for t in grid])
    k = int(np.argmin(vals))
    best_t, best_v = float(grid[k]), float(vals[k])
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, resolution - 1)]
    wlo, whi = lo, hi
    for _ in range(rounds):
        if whi - wlo <= 4e-16 * max(1.0, abs(wlo), abs(whi)):
            break
        sub = np.linspace(wlo, whi, 21)
        sv = np.array([f(t) for t in sub])
        j = int(np.argmin(sv))
        if sv[j] < best_v:
            best_t, best_v = float(sub[j]), float(sv[j])
        wlo, whi = sub[max(j - 1, 0)], sub[min(j + 1, 20)]
    if hi > lo:
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        if res.fun < best_v:
            best_t, best_v = float(res.x), float(res.fun)
    return best_t, best_v


def brute_line_minimum(g, x, y, resolution: int = 2001):
    """``min_lam gamma(x + lam y)`` over the bracket outside which it exceeds ``gamma(x)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        return 0.0, g.eval(x)
    ny = float(np.max(np.abs(y)))
    u = y / ny
    bound = (g.eval(x) + g.eval(-x)) / min(g.eval(u), g.eval(-u))
    if bound == 0.0:
        return 0.0, 0.0
    t, v = brute_min_1d(lambda t: g.eval(x + t * u), (-bound, bound), resolution)
    return t / ny, v


def brute_subgradient_check(g, x, eps: float, xstar, grid: GridSpec | None = None, tol: float = 1e-9) -> bool:
    """Check ``<x*, y - x> <= gamma(y) - gamma(x) + eps`` on a deterministic set of ``y``.

    The set is the grid box (default: cube of half-width ``4 (1 + |x|)``),
    the ray ``t x`` for ``t`` in ``[0, 4]`` and the points ``x +- r e_j`` for
    ``r`` between ``1e-4`` and ``1e2``.
    """
    x = np.asarray(x, dtype=float)
    xs = np.asarray(xstar, dtype=float)
    d = x.size
    if grid is None:
        grid = GridSpec.cube(d, 4.0 * (1.0 + float(np.linalg.norm(x))))
    ys = [grid.points()]
    ys.append(np.outer(np.linspace(0.0, 4.0, 33), x))
    radii = np.logspace(-4, 2, 13)
    rng = np.random.default_rng(grid.seed)
    dirs = np.vstack([np.eye(d), -np.eye(d), rng.normal(size=(4 * d, d))])
    ys.append((x[None, None, :] + radii[:, None, None] * dirs[None, :, :]).reshape(-1, d))
    Y = np.vstack(ys)
    gx = g.eval(x)
    vals = np.array([g.eval(y) for y in Y])
    slack = vals - gx + eps + tol * (1.0 + abs(gx) + np.linalg.norm(Y, axis=1))
    return bool(np.all((Y - x) @ xs <= slack))


def brute_polar_eval(g, xstar, samples: int = 20000, seed: int = 0) -> float:
    """Lower estimate of ``max{<x*, u> : gamma(u) <= 1}`` from sampled boundary points.

    In the plane the boundary is scanned by angle; otherwise by seeded random
    directions.  Converges from below as ``samples`` grows.
    """
    xs = np.asarray(xstar, dtype=float)
    d = xs.size
    if d == 2:
        th = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        dirs = np.column_stack([np.cos(th), np.sin(th)])
    else:
        dirs = np.random.default_rng(seed).normal(size=(samples, d))
    dirs = np.vstack([dirs, xs[None, :]]) if np.any(xs) else dirs
    best = 0.0
    for u in dirs:
        gu = g.eval(u)
        best = max(best, float(xs @ u) / gu)
    return best
