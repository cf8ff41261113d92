"""Unit-ball diagnostics, planar sections, bisectors and cones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .gauges import Ellipsoid, Gauge, PolytopeH, PolytopeV, as_vector
from .lp import LinearProgram, NumericalError, solve_lp
from .orthogonality import AlphaInterval, birkhoff_slack, isosceles_alpha_interval

__all__ = [
    "SmoothnessReport",
    "RotundityReport",
    "smoothness_check",
    "rotundity_check",
    "Section2D",
    "section2d",
    "max_parallel_segment",
    "m_value",
    "unique_bisector_guarantee",
    "BisectorEntry",
    "bisector_sample",
    "circle_directions",
    "Cone",
    "make_cone",
    "cone_membership",
    "ReversalReport",
    "rotated_polar_gauge",
    "boundary_reversal_check_2d",
]

ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


def _polytope_normals(g: Gauge) -> np.ndarray:
    if isinstance(g, PolytopeH):
        return g.effective_normals
    if isinstance(g, PolytopeV):
        N = g.facet_normals
        if N is None:
            raise NumericalError("could not compute the facets of the vertex hull")
        return N
    raise TypeError("polytope gauge expected")


def _need_2d_plus(g):
    if g.dim < 2:
        raise ValueError("needs dimension >= 2")


# --- smoothness and rotundity -----------------------------------------------


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    witness: tuple | None = None  # (x, x1*, x2*)

    def __bool__(self):
        return self.smooth


@dataclass(frozen=True)
class RotundityReport:
    rotund: bool
    witness: tuple | None = None  # (y, z) on one face of the sphere

    def __bool__(self):
        return self.rotund


def smoothness_check(g: Gauge) -> SmoothnessReport:
    """Ellipsoids are smooth; polytopes are not, with a vertex and two subgradients."""
    _need_2d_plus(g)
    if isinstance(g, Ellipsoid):
        return SmoothnessReport(True)
    e = np.zeros(g.dim)
    e[-1] = 1.0
    if isinstance(g, PolytopeH):
        N = g.effective_normals
        res = solve_lp(LinearProgram(e, "max", N, np.ones(len(N)), free=np.ones(g.dim, bool)))
        if not res.optimal:
            raise NumericalError(f"vertex LP returned {res.status}")
        x = res.x
        active = [N[i] for i in g.active_facets(x, 1e-9)]
        first = active[0]
        for a in active[1:]:
            if np.linalg.norm(a - first) > 1e-9:
                return SmoothnessReport(False, (x, first.copy(), a.copy()))
        raise NumericalError("vertex with a single active facet")
    V = g.effective_vertices
    scores = V @ e
    x = V[int(np.argmax(scores))].copy()
    # two subgradients at a vertex: extreme points in opposite probe directions
    for j in range(g.dim):
        u = np.zeros(g.dim)
        u[j] = 1.0
        hi, s1 = g._eps_argmax(x, u, 0.0)
        lo, s2 = g._eps_argmax(x, -u, 0.0)
        if hi + lo > 1e-9:
            return SmoothnessReport(False, (x, s1, s2))
    raise NumericalError("no kink found at a vertex")


def rotundity_check(g: Gauge) -> RotundityReport:
    """Ellipsoids are rotund; polytopes are not, with two points of one facet."""
    _need_2d_plus(g)
    if isinstance(g, Ellipsoid):
        return RotundityReport(True)
    N = _polytope_normals(g)
    free = np.ones(g.dim, bool)
    for a in N:
        # extreme points of the face {N x <= 1, <a, x> = 1} along a direction in it
        P = np.eye(g.dim) - np.outer(a, a) / (a @ a)
        u = P[int(np.argmax(np.linalg.norm(P, axis=1)))]
        ends = []
        for sense in ("min", "max"):
            res = solve_lp(LinearProgram(u, sense, N, np.ones(len(N)), a[None, :], np.ones(1), free))
            if not res.optimal:
                break
            ends.append(res.x)
        if len(ends) == 2 and np.linalg.norm(ends[1] - ends[0]) > 1e-9:
            p, q = ends
            return RotundityReport(False, (0.5 * (p + q), p + 0.75 * (q - p)))
    raise NumericalError("no facet with two distinct points found")


# --- sections and M_y(x) -----------------------------------------------------


@dataclass(frozen=True)
class Section2D:
    """Boundary of the unit ball in the half-flat ``{s x + t y : t >= 0}``.

    ``points`` are ``(s, t)`` coordinates ordered counterclockwise from the
    ``+x`` crossing to the ``-x`` crossing.  Polytope sections are exact
    polylines; ellipsoid sections are sampled arcs (``sampled=True``).
    """

    xhat: np.ndarray
    yhat: np.ndarray
    points: np.ndarray
    sampled: bool
    half_flat_clip: bool = True

    def vectors(self) -> np.ndarray:
        return self.points[:, :1] * self.xhat + self.points[:, 1:] * self.yhat


def _polygon_from_normals(P: np.ndarray) -> np.ndarray:
    """Vertices (counterclockwise) of ``{v in R^2 : P v <= 1}`` for a bounded polygon."""
    hv = ConvexHull(P).vertices  # counterclockwise in 2D
    verts = []
    for i, j in zip(hv, np.roll(hv, -1)):
        verts.append(np.linalg.solve(np.vstack([P[i], P[j]]), np.ones(2)))
    verts = np.array(verts)
    ang = np.arctan2(verts[:, 1], verts[:, 0])
    return verts[np.argsort(ang, kind="stable")]


def _check_independent(x, y):
    if np.linalg.matrix_rank(np.vstack([x, y]), tol=1e-12 * (1 + np.abs([x, y]).max())) < 2:
        raise ValueError("x and y must be linearly independent")


def section2d(g: Gauge, x, y, n: int = 720) -> Section2D:
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    _check_independent(x, y)
    right = np.array([1.0 / g._value(x), 0.0])
    left = np.array([-1.0 / g._value(-x), 0.0])
    if isinstance(g, Ellipsoid):
        th = np.linspace(0.0, np.pi, n)
        pts = []
        for a in th:
            d = np.array([np.cos(a), np.sin(a)])
            pts.append(d / g._value(d[0] * x + d[1] * y))
        pts = np.array(pts)
        pts[0], pts[-1] = right, left
        return Section2D(x, y, pts, True)
    N = _polytope_normals(g)
    verts = _polygon_from_normals(np.column_stack([N @ x, N @ y]))
    scale = 1.0 + np.abs(verts).max()
    upper = [v for v in verts if v[1] > 1e-12 * scale]
    pts = [right]
    for v in upper:
        if np.linalg.norm(v - pts[-1]) > 1e-12:
            pts.append(v)
    if np.linalg.norm(left - pts[-1]) > 1e-12:
        pts.append(left)
    return Section2D(x, y, np.array(pts), False)


def max_parallel_segment(sec: Section2D, g: Gauge, x) -> float:
    """Longest boundary segment of the section parallel to ``x``, measured by the gauge."""
    if sec.sampled:
        return 0.0
    x = as_vector(x, g.dim)
    best = 0.0
    for p, q in zip(sec.points[:-1], sec.points[1:]):
        d = q - p
        length = float(np.hypot(*d))
        if length > 0 and abs(d[1]) <= 1e-9 * length:
            best = max(best, abs(d[0]) * g._value(x))
    return best


def m_value(g: Gauge, x, y) -> float:
    """``M_y(x)``: longest ``x``-parallel segment of the unit sphere in the half-flat."""
    if isinstance(g, Ellipsoid):
        # a strictly convex sphere contains no segment; only validate the flat
        _check_independent(as_vector(x, g.dim), as_vector(y, g.dim, "y"))
        return 0.0
    return max_parallel_segment(section2d(g, x, y), g, x)


def unique_bisector_guarantee(g: Gauge, x, y, tol: float = 1e-9) -> bool:
    """Sufficient condition for a unique ``alpha`` with ``(y + alpha x)`` isosceles orthogonal to ``x``."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim, "y")
    if not (np.any(x) and np.any(y)):
        raise ValueError("x and y must be non-zero")
    return m_value(g, x, y) <= 2.0 * g._value(x) / g._value(y) + tol


# --- bisectors ---------------------------------------------------------------


@dataclass(frozen=True)
class BisectorEntry:
    direction: np.ndarray
    interval: AlphaInterval
    points: tuple  # (lo x + y, hi x + y)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.points[0] + self.points[1])


def bisector_sample(g: Gauge, x, directions) -> list[BisectorEntry]:
    """Points ``alpha x + y`` of the bisector of ``-x`` and ``x`` along each direction ``y``.

    Non-degenerate intervals are kept as segments.
    """
    x = as_vector(x, g.dim)
    if not np.any(x):
        raise ValueError("x must be non-zero")
    out = []
    for y in directions:
        y = as_vector(y, g.dim, "direction")
        if not np.any(y):
            raise ValueError("directions must be non-zero")
        iv = isosceles_alpha_interval(g, x, y)
        out.append(BisectorEntry(y, iv, (iv.lo * x + y, iv.hi * x + y)))
    return out


def circle_directions(n: int) -> np.ndarray:
    """``n`` unit directions at angles ``2 pi (k + 1/2) / n``."""
    th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    return np.column_stack([np.cos(th), np.sin(th)])


# --- cones -------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """``C(x, x*) = {z : <x*, z - x> = gamma(z - x)}``."""

    apex: np.ndarray
    functional: np.ndarray


def make_cone(g: Gauge, x, xstar) -> Cone:
    x = as_vector(x, g.dim)
    xs = as_vector(xstar, g.dim, "xstar")
    p = g._polar_value(xs)
    if p <= 0:
        raise ValueError("functional must be non-zero")
    return Cone(x, xs / p)


def cone_membership(g: Gauge, cone: Cone, z, tol: float = 1e-9) -> bool:
    if abs(g._polar_value(cone.functional) - 1.0) > 1e-7:
        raise ValueError("cone functional must have polar value 1")
    w = as_vector(z, g.dim, "z") - cone.apex
    gw = g._value(w)
    return abs(cone.functional @ w - gw) <= tol * (1.0 + gw)


# --- planar reversal ---------------------------------------------------------


@dataclass(frozen=True)
class ReversalReport:
    """Largest Birkhoff violations of ``c ⊥ c'`` (under the gauge) and of
    ``c' ⊥ c`` (under the rotated polar gauge) over the sampled points."""

    max_slack_forward: float
    max_slack_reversed: float
    n_points: int
    orientation: str

    @property
    def max_slack(self) -> float:
        return max(self.max_slack_forward, self.max_slack_reversed)


def rotated_polar_gauge(g: Gauge) -> Gauge:
    """``gamma° o rho`` with ``rho`` the counterclockwise quarter turn."""
    if g.dim != 2:
        raise ValueError("planar gauges only")
    return g.polar().linear_map(ROT90)


def _boundary_samples(g: Gauge, n: int):
    """Boundary points with forward tangents, counterclockwise."""
    if isinstance(g, Ellipsoid):
        pts, tans = [], []
        for a in 2.0 * np.pi * np.arange(n) / n:
            d = np.array([np.cos(a), np.sin(a)])
            p = d / g._value(d)
            nrm = g._Q @ (p - g._c)
            pts.append(p)
            tans.append(ROT90 @ nrm)
        return pts, tans
    verts = _polygon_from_normals(_polytope_normals(g))
    pts, tans = [], []
    for p, q in zip(verts, np.roll(verts, -1, axis=0)):
        pts += [p, 0.5 * (p + q)]
        tans += [q - p, q - p]
    return pts, tans


def boundary_reversal_check_2d(g: Gauge, n: int = 720, orientation: str = "clockwise") -> ReversalReport:
    """Check ``c(t) ⊥_B c'(t;1)`` under the gauge and ``c'(t;1) ⊥_B c(t)`` under
    ``gamma° o rho`` along the unit circle of a planar gauge.

    ``n`` is the number of samples on ellipsoids; polytopes use every vertex
    and edge midpoint, with the outgoing edge as the tangent at a vertex.
    The reversed relation holds for the clockwise traversal of the circle.
    """
    if g.dim != 2:
        raise ValueError("planar gauges only")
    if orientation not in ("clockwise", "counterclockwise"):
        raise ValueError("orientation must be 'clockwise' or 'counterclockwise'")
    pts, tans = _boundary_samples(g, n)
    if orientation == "clockwise":
        if isinstance(g, Ellipsoid):
            tans = [-t for t in tans]
        else:
            # walk the vertex list backwards: outgoing edges point to the previous vertex
            verts = pts[0::2]
            pts, tans = [], []
            m = len(verts)
            for k in range(m):
                p, q = verts[k], verts[k - 1]
                pts += [p, 0.5 * (p + q)]
                tans += [q - p, q - p]
    h = rotated_polar_gauge(g)
    fwd = max(birkhoff_slack(g, p, t) for p, t in zip(pts, tans))
    rev = max(birkhoff_slack(h, t, p) for p, t in zip(pts, tans))
    return ReversalReport(max(fwd, 0.0), max(rev, 0.0), len(pts), orientation)
