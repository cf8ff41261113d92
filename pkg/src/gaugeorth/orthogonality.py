"""Birkhoff and isosceles orthogonality in gauge spaces.

Conventions: ``x`` is eps-Birkhoff orthogonal to ``y`` when
``gamma(x) <= gamma(x + lam y) + eps`` for every real ``lam``; ``y`` is
isosceles orthogonal to ``x`` when ``gamma(y + x) == gamma(y - x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import SubdifferentialOracle, golden_section
from .gauges import Ellipsoid, Gauge, PolytopeH, PolytopeV, as_vector
from .lp import solve_linear_fractional

__all__ = [
    "AlphaInterval",
    "DualTestResult",
    "Weight",
    "line_minimum",
    "birkhoff_slack",
    "birkhoff_test",
    "birkhoff_dual_test",
    "right_alpha_interval",
    "left_alpha_interval",
    "duality_map",
    "semi_inner_superior",
    "semi_inner_inferior",
    "isosceles_function",
    "isosceles_test",
    "isosceles_alpha_interval",
    "isosceles_right_existence_search",
]

ALPHA_TOL = 1e-12


@dataclass(frozen=True)
class AlphaInterval:
    """Closed interval ``[lo, hi]`` of admissible orthogonality parameters."""

    lo: float
    hi: float
    certificates: tuple | None = None
    bracket: tuple[float, float] | None = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if self.lo > self.hi:
            # bisection noise on a degenerate interval
            mid = 0.5 * (self.lo + self.hi)
            object.__setattr__(self, "lo", mid)
            object.__setattr__(self, "hi", mid)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, alpha: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= alpha <= self.hi + tol

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class DualTestResult:
    orthogonal: bool
    certificate: np.ndarray | None = None
    lower: float = 0.0
    upper: float = 0.0

    def __bool__(self):
        return self.orthogonal


@dataclass(frozen=True)
class Weight:
    """Weight function ``phi`` of a duality mapping; ``psi`` is its antiderivative."""

    kind: str = "constant_one"
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant_one", "identity", "power"):
            raise ValueError(f"unknown weight {self.kind!r}")
        if self.kind == "power" and not self.p > 0:
            raise ValueError("power weight needs p > 0")

    @classmethod
    def constant_one(cls):
        return cls("constant_one")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def power(cls, p: float):
        return cls("power", float(p))

    def phi(self, t: float) -> float:
        if self.kind == "constant_one":
            return 1.0
        if self.kind == "identity":
            return float(t)
        return float(t) ** self.p

    def psi(self, t: float) -> float:
        if self.kind == "constant_one":
            return float(t)
        if self.kind == "identity":
            return 0.5 * t * t
        return float(t) ** (self.p + 1.0) / (self.p + 1.0)


# --- Birkhoff orthogonality -------------------------------------------------


def line_minimum(g: Gauge, x, y) -> tuple[float, float]:
    """Minimiser and minimum of ``lam -> gamma(x + lam y)``."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if not np.any(y):
        return 0.0, g._value(x)
    # search along a unit-size direction so gamma(y) cannot underflow
    ny = float(np.max(np.abs(y)))
    u = y / ny
    gx, gmx = g._value(x), g._value(-x)
    bound = (gx + gmx) / min(g._value(u), g._value(-u))
    if bound == 0.0:
        return 0.0, 0.0
    t, m = golden_section(lambda t: g._value(x + t * u), -bound, bound, tol=1e-13)
    return t / ny, m


def birkhoff_slack(g: Gauge, x, y, eps: float = 0.0) -> float:
    """``gamma(x) - eps - min_lam gamma(x + lam y)``; orthogonal iff ``<= 0``."""
    _, m = line_minimum(g, x, y)
    return g.eval(x) - eps - m


def birkhoff_test(g: Gauge, x, y, eps: float = 0.0, tol: float = 1e-9) -> bool:
    """Is ``x`` eps-Birkhoff orthogonal to ``y``?  Decided by 1D minimisation."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return birkhoff_slack(g, x, y, eps) <= tol


def birkhoff_dual_test(g: Gauge, x, y, eps: float = 0.0, tol: float = 1e-9) -> DualTestResult:
    """Decide eps-Birkhoff orthogonality through the eps-subdifferential at ``x``.

    Orthogonal iff some eps-subgradient annihilates ``y``; the returned
    certificate is such a functional.
    """
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps >= g._value(x):
        raise ValueError("dual test needs 0 <= eps < gamma(x)")
    hi, x_hi = g._eps_argmax(x, y, eps)
    lo_neg, x_lo = g._eps_argmax(x, -y, eps)
    lo = -lo_neg
    if not (lo <= tol and hi >= -tol):
        return DualTestResult(False, None, lo, hi)
    if hi - lo <= 1e-15 * (1.0 + abs(hi)):
        cert = x_hi
    else:
        theta = min(max(hi / (hi - lo), 0.0), 1.0)
        cert = theta * x_lo + (1.0 - theta) * x_hi
    return DualTestResult(True, cert, lo, hi)


def _bisect(pred, a: float, b: float, tol: float = ALPHA_TOL) -> float:
    """Boundary of a monotone predicate with ``pred(a)`` false and ``pred(b)`` true."""
    for _ in range(200):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        m = 0.5 * (a + b)
        if pred(m):
            b = m
        else:
            a = m
    return 0.5 * (a + b)


def _right_bound(g, x, y, eps):
    return max(g._value(y), g._value(-y)) / (g._value(x) - eps)


def _check_right(g, x, eps):
    if not np.any(x):
        raise ValueError("x must be non-zero")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps >= g._value(x):
        raise ValueError("interval needs 0 <= eps < gamma(x); beyond that every alpha qualifies")


def _normalise_certificate(g, xs):
    p = g._polar_value(xs)
    return xs / p if p > 0 else xs


def right_alpha_interval(g: Gauge, x, y, eps: float = 0.0, method: str = "auto") -> AlphaInterval:
    """``{alpha : x is eps-Birkhoff orthogonal to alpha x + y}``.

    Methods: ``"fractional"`` (extrema of ``-<x*,y>/<x*,x>`` over the
    eps-subdifferential, polytopes only), ``"dual"`` (bisection on the signs of
    directional derivatives) and ``"primal"`` (bisection on
    :func:`birkhoff_test`).  ``"auto"`` picks fractional for polytopes and
    dual for ellipsoids.
    """
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    eps = float(eps)
    _check_right(g, x, eps)
    if method == "auto":
        method = "dual" if isinstance(g, Ellipsoid) else "fractional"
    if method == "fractional":
        return _right_fractional(g, x, y, eps)
    if method == "dual":
        return _right_dual(g, x, y, eps)
    if method == "primal":
        return _right_primal(g, x, y, eps)
    raise ValueError(f"unknown method {method!r}")


def _right_fractional(g, x, y, eps):
    gx = g._value(x)
    N = None
    if isinstance(g, PolytopeH):
        N = g.effective_normals
    elif isinstance(g, PolytopeV):
        N = g.facet_normals
    if N is not None:
        if eps == 0.0:
            # the subdifferential is the convex hull of the active normals
            vals = N @ x
            N = N[vals >= vals.max() - 1e-12 * (1.0 + abs(vals.max()))]
            res = solve_linear_fractional(
                -(N @ y), 0.0, N @ x, 0.0, A_eq=np.ones((1, len(N))), b_eq=np.ones(1),
            )
        else:
            res = solve_linear_fractional(
                -(N @ y), 0.0, N @ x, 0.0,
                A_ub=-(N @ x)[None, :], b_ub=np.array([-(gx - eps)]),
                A_eq=np.ones((1, len(N))), b_eq=np.ones(1),
            )
        cert_lo, cert_hi = N.T @ res.argmin, N.T @ res.argmax
    elif isinstance(g, PolytopeV):
        # LP in x* directly when the hull is unavailable
        V = g.effective_vertices
        res = solve_linear_fractional(
            -y, 0.0, x, 0.0,
            A_ub=np.vstack([V, -x[None, :]]), b_ub=np.append(np.ones(len(V)), -(gx - eps)),
            free=np.ones(g.dim, bool),
        )
        cert_lo, cert_hi = res.argmin, res.argmax
    else:
        raise ValueError("fractional method needs a polytope gauge")
    certs = (_normalise_certificate(g, cert_lo), _normalise_certificate(g, cert_hi))
    return AlphaInterval(res.min_value, res.max_value, certs)


def _right_dual(g, x, y, eps):
    gx = g._value(x)
    if eps == 0.0:
        # gamma'(x; alpha x + y) = alpha gamma(x) + gamma'(x; y)
        hi_val, x_hi = g._eps_argmax(x, y, 0.0)
        lo_neg, x_lo = g._eps_argmax(x, -y, 0.0)
        lo, hi = -hi_val / gx, lo_neg / gx
        certs = (_normalise_certificate(g, x_hi), _normalise_certificate(g, x_lo))
        return AlphaInterval(lo, hi, certs)
    B = _right_bound(g, x, y, eps) + 1.0
    lo = _bisect(lambda a: g._eps_argmax(x, a * x + y, eps)[0] >= 0.0, -B, B)
    hi = _bisect(lambda a: g._eps_argmax(x, -(a * x + y), eps)[0] < 0.0, -B, B)
    x_lo = g._eps_argmax(x, lo * x + y, eps)[1]
    x_hi = g._eps_argmax(x, -(hi * x + y), eps)[1]
    certs = (_normalise_certificate(g, x_lo), _normalise_certificate(g, x_hi))
    return AlphaInterval(lo, hi, certs)


def _right_primal(g, x, y, eps, rtol=1e-15):
    # The slack of a degenerate interval at a smooth point grows only
    # quadratically in alpha, so it is accepted at roundoff level.  If no
    # probe passes, the sign bisection on the line minimiser has shrunk onto
    # the degenerate interval itself.
    gx = g._value(x)
    tol = rtol * (1.0 + gx)

    def probe(al):
        lam, m = line_minimum(g, x, al * x + y)
        return lam, gx - eps - m <= tol

    B = _right_bound(g, x, y, eps) + 1.0
    a, b = -B, B
    inside = None
    for _ in range(200):
        mid = 0.5 * (a + b)
        lam, ok_mid = probe(mid)
        if ok_mid:
            inside = mid
            break
        if abs(b - a) <= ALPHA_TOL * (1.0 + abs(a) + abs(b)):
            return AlphaInterval(mid, mid)
        # descent direction tells on which side of the interval mid lies
        if lam > 0:
            a = mid
        else:
            b = mid
    if inside is None:
        raise ArithmeticError("no admissible alpha found")

    def ok(al):
        return probe(al)[1]

    lo = _bisect(ok, a, inside)
    hi = _bisect(lambda al: not ok(al), inside, b)
    return AlphaInterval(lo, hi)


def left_alpha_interval(g: Gauge, x, y, eps: float = 0.0, method: str = "derivative",
                        tol: float = 1e-9) -> AlphaInterval:
    """``{alpha : alpha x + y is eps-Birkhoff orthogonal to x}``.

    This is the sublevel set ``{alpha : gamma(alpha x + y) <= min + eps}``.
    ``"derivative"`` bisects on the signs of the one-sided eps-derivatives
    along ``x``; ``"sublevel"`` golden-section minimises and then bisects on
    the sublevel inequality with slack ``tol``.
    """
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    eps = float(eps)
    if not np.any(x):
        raise ValueError("x must be non-zero")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    A = (2.0 * max(g._value(y), g._value(-y)) + eps) / min(g._value(x), g._value(-x)) + 1.0
    if method == "derivative":
        # derivatives along a flat piece of the sphere are zero up to rounding
        band = 1e-12 * (g._value(x) + g._value(-x))
        lo = _bisect(lambda a: g._eps_argmax(a * x + y, x, eps)[0] >= -band, -A, A)
        hi = _bisect(lambda a: g._eps_argmax(a * x + y, -x, eps)[0] < -band, -A, A)
        return AlphaInterval(lo, hi)
    if method == "sublevel":
        def h(a):
            return g._value(a * x + y)

        amin, m = golden_section(h, -A, A, tol=1e-13)
        level = m + eps + tol
        lo = _bisect(lambda a: h(a) <= level, -A, amin)
        hi = _bisect(lambda a: h(a) > level, amin, A)
        return AlphaInterval(lo, hi)
    raise ValueError(f"unknown method {method!r}")


# --- duality mappings and semi-inner products -------------------------------


def duality_map(g: Gauge, x, w: Weight = Weight()) -> SubdifferentialOracle:
    """Oracle for ``phi(gamma(x)) * (subdifferential of gamma at x)``.

    At ``x = 0`` this is the ``phi(0)``-scaled polar ball, or ``{0}`` when
    ``phi(0) = 0``.
    """
    x = as_vector(x, g.dim)
    return SubdifferentialOracle(g, x, 0.0, w.phi(g._value(x)))


def semi_inner_superior(g: Gauge, y, x) -> float:
    """``(y, x)_s = gamma(x) * gamma'(x; y)``."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    gx = g._value(x)
    return 0.0 if gx == 0.0 else gx * g._eps_argmax(x, y, 0.0)[0]


def semi_inner_inferior(g: Gauge, y, x) -> float:
    """``(y, x)_i = -gamma(x) * gamma'(x; -y)``."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    gx = g._value(x)
    return 0.0 if gx == 0.0 else -gx * g._eps_argmax(x, -y, 0.0)[0]


# --- isosceles orthogonality ------------------------------------------------


def isosceles_test(g: Gauge, y, x, tol: float = 1e-9) -> bool:
    """Is ``y`` isosceles orthogonal to ``x``?"""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    return abs(g._value(y + x) - g._value(y - x)) <= tol


def isosceles_function(g: Gauge, x, y):
    """``f(alpha) = gamma(alpha x + y + x) - gamma(alpha x + y - x)``, non-decreasing."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    return lambda a: g._value((a + 1.0) * x + y) - g._value((a - 1.0) * x + y)


def isosceles_alpha_interval(g: Gauge, x, y, rtol: float = 4e-15) -> AlphaInterval:
    """``{alpha : alpha x + y is isosceles orthogonal to x}``, a compact interval.

    ``f`` tends to ``2 gamma(x)`` and ``-2 gamma(-x)`` at the two ends; the
    bracket is expanded geometrically from ``|alpha| = 1`` until ``f`` has
    the limiting signs there, and both endpoints are found by bisection.
    ``f`` counts as zero within ``rtol`` relative to the two gauge values.
    The final bracket is stored on the result.
    """
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if not np.any(x):
        raise ValueError("x must be non-zero")
    def sign(a):
        # -1, 0, +1 for f(a) with a zero band of relative width rtol
        u = g._value((a + 1.0) * x + y)
        v = g._value((a - 1.0) * x + y)
        band = rtol * (1.0 + u + v)
        return 1 if u - v > band else (-1 if u - v < -band else 0)

    R = 1.0
    while sign(R) <= 0:
        R *= 2.0
    L = 1.0
    while sign(-L) >= 0:
        L *= 2.0
    lo = _bisect(lambda a: sign(a) >= 0, -L, R, ALPHA_TOL * 1e-2)
    hi = _bisect(lambda a: sign(a) > 0, -L, R, ALPHA_TOL * 1e-2)
    return AlphaInterval(lo, hi, bracket=(-L, R))


def isosceles_right_existence_search(g: Gauge, x, y, bound: float = 10.0,
                                     samples: int = 2001, tol: float = 1e-10) -> list[float]:
    """Zeros of ``alpha -> gamma(x + (alpha x + y)) - gamma(x - (alpha x + y))`` on a grid.

    Exploratory: an empty list means no zero was found in ``[-bound, bound]``.
    """
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if not np.any(x):
        raise ValueError("x must be non-zero")

    def phi(a):
        z = a * x + y
        return g._value(x + z) - g._value(x - z)

    grid = np.linspace(-bound, bound, samples)
    vals = np.array([phi(a) for a in grid])
    roots: list[float] = []
    for k in range(samples):
        if abs(vals[k]) <= tol:
            roots.append(float(grid[k]))
        if k + 1 < samples and vals[k] * vals[k + 1] < 0 and abs(vals[k + 1]) > tol and abs(vals[k]) > tol:
            a, b = grid[k], grid[k + 1]
            sa = np.sign(vals[k])
            for _ in range(100):
                m = 0.5 * (a + b)
                if np.sign(phi(m)) == sa:
                    a = m
                else:
                    b = m
                if b - a <= 1e-13 * (1.0 + abs(m)):
                    break
            roots.append(0.5 * (a + b))
    merged: list[float] = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-8:
            merged.append(r)
    return merged
