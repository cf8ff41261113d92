"""Directional derivatives, eps-subdifferential oracles and gradients of gauges."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gauges import Gauge, as_vector

__all__ = [
    "golden_section",
    "directional_derivative",
    "slope_directional_derivative",
    "SubdifferentialOracle",
    "subdifferential",
    "gateaux_gradient",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 200):
    """Minimise a unimodal function on ``[a, b]``; returns ``(argmin, min)``.

    The endpoints are included in the comparison so that monotone functions
    report the correct boundary minimiser.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = min(((fc, c), (fd, d), (f(a), a), (f(b), b)))
    return best[1], best[0]


def directional_derivative(g: Gauge, x, y, eps: float = 0.0, method: str = "exact") -> float:
    """``gamma'_eps(x; y) = inf_{lam > 0} (gamma(x + lam y) - gamma(x) + eps) / lam``.

    ``method="exact"`` evaluates the support function of the eps-subdifferential
    (LP for polytopes, closed form for ellipsoids); ``method="slope"``
    minimises the slope function directly and never touches the subdifferential.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if method == "exact":
        return g._eps_argmax(x, y, float(eps))[0]
    if method == "slope":
        return _slope_derivative(g, x, y, float(eps))
    raise ValueError(f"unknown method {method!r}")


def slope_directional_derivative(g: Gauge, x, y, eps: float = 0.0) -> float:
    return directional_derivative(g, x, y, eps, method="slope")


def _slope_derivative(g: Gauge, x, y, eps):
    if not np.any(y):
        return 0.0
    gx = g._value(x)
    gy = g._value(y)
    if not np.any(x):
        return gy
    if eps == 0.0:
        return _richardson_derivative(g, x, y, gx)

    def slope(t):
        lam = math.exp(t)
        return (g._value(x + lam * y) - gx + eps) / lam

    # beyond lam_max the slope is within 1e-10 of gamma(y) from below
    C = gx + g._value(-x)
    lam_max = max(1.0, 1e10 * C / max(gy, 1e-300))
    _, m = golden_section(slope, math.log(1e-12), math.log(lam_max), tol=1e-12)
    return min(m, gy)


def _richardson_derivative(g, x, y, gx):
    # a tiny fixed step would be all roundoff, so extrapolate instead: Romberg
    # table over h_k = h0 / 2^k, keeping the entry most stable between rows
    # (piecewise-linear gauges settle in column 0, smooth ones further right)
    h = 0.05 * np.linalg.norm(x) / np.linalg.norm(y)
    rows: list[list[float]] = []
    best, best_err = None, math.inf
    for k in range(22):
        row = [(g._value(x + h * y) - gx) / h]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - rows[-1][j - 1]) / (2.0**j - 1.0))
        if rows:
            for j in range(min(len(rows[-1]), 8)):
                err = abs(row[j] - rows[-1][j])
                if err < best_err:
                    best, best_err = row[j], err
        if best is not None and best_err <= 1e-13 * (1.0 + abs(best)):
            break
        rows.append(row)
        h *= 0.5
    return best


@dataclass(frozen=True)
class SubdifferentialOracle:
    """``factor * (eps-subdifferential of g at x)`` accessed through its support function."""

    gauge: Gauge
    x: np.ndarray
    eps: float = 0.0
    factor: float = 1.0
    _dim: int = field(init=False, repr=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x, self.gauge.dim))
        object.__setattr__(self, "_dim", self.gauge.dim)
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        if self.factor < 0:
            raise ValueError("factor must be non-negative")

    def support(self, u) -> float:
        if self.factor == 0.0:
            return 0.0
        u = as_vector(u, self._dim, "u")
        return self.factor * self.gauge._eps_argmax(self.x, u, self.eps)[0]

    def extreme_point(self, u) -> np.ndarray:
        if self.factor == 0.0:
            return np.zeros(self._dim)
        u = as_vector(u, self._dim, "u")
        return self.factor * self.gauge._eps_argmax(self.x, u, self.eps)[1]

    def value_interval(self, u) -> tuple[float, float]:
        """``{<x*, u> : x* in the set}`` as ``(lo, hi)``."""
        u = as_vector(u, self._dim, "u")
        return -self.support(-u), self.support(u)


def subdifferential(g: Gauge, x, eps: float = 0.0) -> SubdifferentialOracle:
    return SubdifferentialOracle(g, x, float(eps))


def gateaux_gradient(g: Gauge, x, tol: float = 1e-9):
    """The unique subgradient at ``x != 0``, or ``None`` where the gauge has a kink."""
    x = as_vector(x, g.dim)
    if not np.any(x):
        raise ValueError("the subdifferential at 0 is the whole polar ball")
    oracle = subdifferential(g, x)
    grad = np.empty(g.dim)
    for j in range(g.dim):
        e = np.zeros(g.dim)
        e[j] = 1.0
        hi = oracle.support(e)
        lo = -oracle.support(-e)
        if hi - lo > tol:
            return None
        grad[j] = 0.5 * (hi + lo)
    return grad
