"""Gauge backends: H-polytopes, V-polytopes and shifted ellipsoids.

A gauge is stored together with a positive scale factor ``scale``; the value
is ``scale * gamma(x)`` where ``gamma`` is the Minkowski functional of the
stored unit ball.  Internally every backend works with "effective" data in
which the scale has been folded in, so the scale never has to be threaded
through the numerical routines.
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .lp import LinearProgram, NumericalError, solve_lp

__all__ = [
    "Gauge",
    "PolytopeH",
    "PolytopeV",
    "Ellipsoid",
    "GaugeValidationError",
    "DimensionError",
    "as_vector",
    "reverse",
    "scale",
    "gauge_from_dict",
    "load_gauge",
    "dump_gauge",
    "triangle_gauge",
    "euclidean_gauge",
]


class GaugeValidationError(ValueError):
    """A gauge descriptor violates one of its invariants."""


class DimensionError(ValueError):
    """A vector does not match the dimension of the gauge."""


def as_vector(x, dim: int | None = None, name: str = "x") -> np.ndarray:
    if type(x) is np.ndarray and x.dtype == np.float64 and x.ndim == 1:
        v = x
    else:
        v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise DimensionError(f"{name} must be a vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionError(f"{name} has dimension {v.size}, gauge has dimension {dim}")
    if not np.isfinite(v).all():
        raise ValueError(f"{name} has non-finite coordinates")
    return v


def _origin_interior(points: np.ndarray) -> bool:
    """True iff 0 lies in the interior of conv(points)."""
    m, d = points.shape
    if m < d + 1 or np.linalg.matrix_rank(points) < d:
        return False
    # max s  s.t.  sum w_i p_i = 0, sum w_i = 1, w_i >= s
    c = np.zeros(m + 1)
    c[-1] = 1.0
    A_eq = np.zeros((d + 1, m + 1))
    A_eq[:d, :m] = points.T
    A_eq[d, :m] = 1.0
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1.0
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    free = np.zeros(m + 1, dtype=bool)
    free[-1] = True
    res = solve_lp(LinearProgram(c, "max", A_ub, np.zeros(m), A_eq, b_eq, free), lexicographic=False)
    return res.optimal and res.value > 1e-12


def _check_scale(scale) -> float:
    s = float(scale)
    if not math.isfinite(s) or s <= 0.0:
        raise GaugeValidationError(f"scale must be a positive finite number, got {scale!r}")
    return s


class Gauge(ABC):
    """Common interface of the three backends."""

    scale: float

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def _value(self, x: np.ndarray) -> float: ...

    @abstractmethod
    def _polar_value(self, xs: np.ndarray) -> float: ...

    @abstractmethod
    def _eps_argmax(self, x: np.ndarray, u: np.ndarray, eps: float) -> tuple[float, np.ndarray]:
        """max of <x*, u> over the eps-subdifferential at x, and a maximiser."""

    @abstractmethod
    def reversed(self) -> "Gauge": ...

    @abstractmethod
    def scaled(self, factor: float) -> "Gauge": ...

    @abstractmethod
    def polar(self) -> "Gauge":
        """The polar gauge as a descriptor of the dual backend."""

    @abstractmethod
    def linear_map(self, A) -> "Gauge":
        """Descriptor of ``x -> gamma(A x)`` for an invertible matrix ``A``."""

    @abstractmethod
    def to_dict(self) -> dict: ...

    @property
    def smooth(self) -> bool:
        return False

    def eval(self, x) -> float:
        return self._value(as_vector(x, self.dim))

    __call__ = eval

    def polar_eval(self, xstar) -> float:
        return self._polar_value(as_vector(xstar, self.dim, "xstar"))

    def is_symmetric(self, samples: int = 64, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        for v in rng.normal(size=(samples, self.dim)):
            if abs(self._value(v) - self._value(-v)) > 1e-9 * (1.0 + self._value(v)):
                return False
        return True


def _facet_eps_argmax(N, x, u, eps):
    """Maximise ``<x*, u>`` over ``{x* in conv(N) : <x*, x> >= max N x - eps}``."""
    if eps == 0.0 or not np.any(x):
        vals = N @ x
        top = vals.max()
        idx = np.arange(len(N)) if not np.any(x) else np.nonzero(vals >= top - 1e-12 * (1.0 + abs(top)))[0]
        scores = N[idx] @ u
        k = idx[int(np.argmax(scores))]
        return float(N[k] @ u), N[k].copy()
    m = len(N)
    gx = max(float(np.max(N @ x)), 0.0)
    res = solve_lp(
        LinearProgram(N @ u, "max", -(N @ x)[None, :], np.array([-(gx - eps)]), np.ones((1, m)), np.ones(1)),
        lexicographic=False,
    )
    if not res.optimal:
        raise NumericalError(f"subdifferential LP returned {res.status}")
    return res.value, N.T @ res.x


class PolytopeH(Gauge):
    """Unit ball ``{x : <a_i, x> <= 1}``; ``gamma(x) = max_i <a_i, x>``."""

    kind = "polytope_h"

    def __init__(self, normals, scale: float = 1.0, validate: bool = True):
        A = np.atleast_2d(np.asarray(normals, dtype=float))
        if A.ndim != 2 or A.shape[0] == 0:
            raise GaugeValidationError("normals must be a non-empty list of vectors")
        if not np.all(np.isfinite(A)):
            raise GaugeValidationError("normals must be finite")
        self.normals = A
        self.normals.setflags(write=False)
        self.scale = _check_scale(scale)
        if validate and not _origin_interior(A):
            raise GaugeValidationError(
                "normals must positively span R^d (max_i <a_i, x> > 0 for all x != 0)"
            )
        self._N = self.scale * A

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def effective_normals(self) -> np.ndarray:
        return self._N

    def _value(self, x):
        if not x.any():
            return 0.0
        return float((self._N @ x).max())

    @cached_property
    def _polar_gauge(self):
        return PolytopeV(self._N, validate=False)

    def _polar_value(self, xs):
        return self._polar_gauge._value(xs)

    def lp_polar_value(self, xs) -> float:
        """Polar value from the LP over the unit ball (independent of the hull)."""
        xs = as_vector(xs, self.dim, "xstar")
        res = solve_lp(
            LinearProgram(xs, "max", self._N, np.ones(len(self._N)), free=np.ones(self.dim, bool)),
            lexicographic=False,
        )
        if not res.optimal:
            raise NumericalError(f"polar LP returned {res.status}")
        return max(res.value, 0.0)

    def active_facets(self, x, tol: float = 1e-12) -> np.ndarray:
        vals = self._N @ x
        top = vals.max()
        return np.nonzero(vals >= top - tol * (1.0 + abs(top)))[0]

    def _eps_argmax(self, x, u, eps):
        return _facet_eps_argmax(self._N, x, u, eps)

    def reversed(self):
        return PolytopeH(-self.normals, self.scale, validate=False)

    def scaled(self, factor):
        return PolytopeH(self.normals, self.scale * _check_scale(factor), validate=False)

    def polar(self):
        return PolytopeV(self.normals, 1.0 / self.scale, validate=False)

    def linear_map(self, A):
        A = np.asarray(A, dtype=float)
        return PolytopeH(self.normals @ A, self.scale)

    def to_dict(self):
        d = {"type": self.kind, "normals": self.normals.tolist()}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d

    def __repr__(self):
        return f"PolytopeH({len(self.normals)} normals, dim={self.dim}, scale={self.scale:g})"


class PolytopeV(Gauge):
    """Unit ball ``conv{v_i}``; ``gamma(x) = min{sum u_i : x = sum u_i v_i, u >= 0}``."""

    kind = "polytope_v"

    def __init__(self, vertices, scale: float = 1.0, validate: bool = True):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.ndim != 2 or V.shape[0] == 0:
            raise GaugeValidationError("vertices must be a non-empty list of vectors")
        if not np.all(np.isfinite(V)):
            raise GaugeValidationError("vertices must be finite")
        self.vertices = V
        self.vertices.setflags(write=False)
        self.scale = _check_scale(scale)
        if validate and not _origin_interior(V):
            raise GaugeValidationError("0 must lie in the interior of conv(vertices)")
        self._V = V / self.scale

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def effective_vertices(self) -> np.ndarray:
        return self._V

    @cached_property
    def facet_normals(self) -> np.ndarray | None:
        """Normals ``a_i`` with ``conv(V) = {<a_i, x> <= 1}``, via qhull (None if it fails)."""
        V = self._V
        if self.dim == 1:
            return np.array([[1.0 / V.max()], [1.0 / V.min()]])
        try:
            hull = ConvexHull(V)
        except QhullError:
            return None
        eq = hull.equations  # n.x + off <= 0 with off < 0 for interior origin
        return eq[:, :-1] / (-eq[:, -1:])

    def _value(self, x):
        if not x.any():
            return 0.0
        A = self.facet_normals
        if A is not None:
            return max(float((A @ x).max()), 0.0)
        return self.lp_value(x)

    def lp_value(self, x) -> float:
        """Gauge value from the decomposition LP (independent of the hull)."""
        x = as_vector(x, self.dim)
        if not np.any(x):
            return 0.0
        m = len(self._V)
        res = solve_lp(LinearProgram(np.ones(m), "min", A_eq=self._V.T, b_eq=x), lexicographic=False)
        if not res.optimal:
            raise NumericalError(f"gauge LP returned {res.status}")
        return max(res.value, 0.0)

    def _polar_value(self, xs):
        return max(float(np.max(self._V @ xs)), 0.0)

    def _eps_argmax(self, x, u, eps):
        # the hull normals are the vertices of the polar ball
        A = self.facet_normals
        if A is not None:
            return _facet_eps_argmax(A, x, u, eps)
        return self.lp_eps_argmax(x, u, eps)

    def lp_eps_argmax(self, x, u, eps: float = 0.0):
        """Support of the eps-subdifferential from the LP in ``x*`` (independent of the hull)."""
        x = as_vector(x, self.dim)
        u = as_vector(u, self.dim, "u")
        V = self._V
        gx = self.lp_value(x)
        A_ub = np.vstack([V, -x[None, :]])
        b_ub = np.append(np.ones(len(V)), -(gx - eps))
        free = np.ones(self.dim, bool)
        res = solve_lp(LinearProgram(u, "max", A_ub, b_ub, free=free), lexicographic=False)
        for slack in (1e-12, 1e-10):
            if res.optimal:
                break
            # at eps = 0 the feasible set is a face of the polar ball; phase 1
            # may miss it by rounding
            b_ub[-1] = -(gx - eps) + slack * (1.0 + gx)
            res = solve_lp(LinearProgram(u, "max", A_ub, b_ub, free=free), lexicographic=False)
        if not res.optimal:
            raise NumericalError(f"subdifferential LP returned {res.status}")
        return res.value, res.x

    def reversed(self):
        return PolytopeV(-self.vertices, self.scale, validate=False)

    def scaled(self, factor):
        return PolytopeV(self.vertices, self.scale * _check_scale(factor), validate=False)

    def polar(self):
        return PolytopeH(self.vertices, 1.0 / self.scale, validate=False)

    def linear_map(self, A):
        A = np.asarray(A, dtype=float)
        return PolytopeV(np.linalg.solve(A, self.vertices.T).T, self.scale)

    def to_dict(self):
        d = {"type": self.kind, "vertices": self.vertices.tolist()}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d

    def __repr__(self):
        return f"PolytopeV({len(self.vertices)} vertices, dim={self.dim}, scale={self.scale:g})"


class Ellipsoid(Gauge):
    """Unit ball ``{x : (x - c)^T Q (x - c) <= 1}`` with ``c^T Q c < 1``."""

    kind = "ellipsoid"

    def __init__(self, Q, c=None, scale: float = 1.0, validate: bool = True):
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise GaugeValidationError("Q must be a square matrix")
        d = Q.shape[0]
        c = np.zeros(d) if c is None else np.atleast_1d(np.asarray(c, dtype=float))
        if c.shape != (d,):
            raise GaugeValidationError(f"c must have dimension {d}")
        if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(c))):
            raise GaugeValidationError("Q and c must be finite")
        if validate and not np.allclose(Q, Q.T, rtol=1e-10, atol=1e-12):
            raise GaugeValidationError("Q must be symmetric")
        Q = 0.5 * (Q + Q.T)
        try:
            np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            raise GaugeValidationError("Q must be positive definite") from None
        if c @ Q @ c >= 1.0:
            raise GaugeValidationError("origin must be interior: c^T Q c < 1")
        self.Q = Q
        self.c = c
        self.Q.setflags(write=False)
        self.c.setflags(write=False)
        self.scale = _check_scale(scale)
        self._Q = self.scale**2 * Q
        self._c = c / self.scale

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @property
    def smooth(self) -> bool:
        return True

    @cached_property
    def _Qinv(self):
        return np.linalg.inv(self._Q)

    @cached_property
    def _polar_params(self):
        """(Q', c', L) of the polar ellipsoid, with Q' = L L^T."""
        M = self._Qinv - np.outer(self._c, self._c)
        Minv_c = np.linalg.solve(M, self._c)
        Qp = M / (1.0 + self._c @ Minv_c)
        Qp = 0.5 * (Qp + Qp.T)
        return Qp, -Minv_c, np.linalg.cholesky(Qp)

    def _value(self, x):
        if not x.any():
            return 0.0
        Qx = self._Q @ x
        a = float(x @ Qx)
        b = float(self._c @ Qx)
        k = float(self._c @ self._Q @ self._c) - 1.0  # < 0
        s = math.sqrt(b * b - a * k)
        return a / (b + s) if b >= 0.0 else (s - b) / (-k)

    def _polar_value(self, xs):
        return float(xs @ self._c + math.sqrt(max(xs @ self._Qinv @ xs, 0.0)))

    def gradient(self, x) -> np.ndarray:
        """Gradient of the gauge at ``x != 0`` (closed form)."""
        x = as_vector(x, self.dim)
        g = self._value(x)
        if g == 0.0:
            raise ValueError("gauge is not differentiable at 0")
        p = x / g
        n = self._Q @ (p - self._c)
        return n / (n @ p)

    def _eps_argmax(self, x, u, eps):
        # polar ball = {c' + L^{-T} z : |z| <= 1}; cut by <x, x*> >= gamma(x) - eps
        _, cp, L = self._polar_params
        p = np.linalg.solve(L, u)
        q = np.linalg.solve(L, x)
        pn = float(np.linalg.norm(p))
        qn = float(np.linalg.norm(q))
        # gamma(x) = <x, c'> + |q|, so the cut is <q, z> >= |q| - eps
        r = qn - eps
        z = p / pn if pn > 0.0 else np.zeros_like(p)
        if qn > 0.0 and z @ q < r:
            z0 = (r / qn**2) * q
            rho = math.sqrt(max(0.0, eps * (2.0 * qn - eps))) / qn
            perp = p - (p @ q / qn**2) * q
            pp = float(np.linalg.norm(perp))
            if pp > 1e-14 * max(pn, 1.0):
                z = z0 + rho * perp / pp
            else:
                z = z0
        xstar = cp + np.linalg.solve(L.T, z)
        return float(u @ xstar), xstar

    def polar_ellipsoid(self) -> "Ellipsoid":
        Qp, cp, _ = self._polar_params
        return Ellipsoid(Qp, cp, validate=False)

    def reversed(self):
        return Ellipsoid(self.Q, -self.c, self.scale, validate=False)

    def scaled(self, factor):
        return Ellipsoid(self.Q, self.c, self.scale * _check_scale(factor), validate=False)

    def polar(self):
        base = Ellipsoid(self.Q, self.c, validate=False)
        Qp, cp, _ = base._polar_params
        return Ellipsoid(Qp, cp, 1.0 / self.scale, validate=False)

    def linear_map(self, A):
        A = np.asarray(A, dtype=float)
        return Ellipsoid(A.T @ self.Q @ A, np.linalg.solve(A, self.c), self.scale, validate=False)

    def to_dict(self):
        d = {"type": self.kind, "Q": self.Q.tolist(), "c": self.c.tolist()}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d

    def __repr__(self):
        return f"Ellipsoid(dim={self.dim}, c={self.c.tolist()}, scale={self.scale:g})"


def reverse(g: Gauge) -> Gauge:
    """The reversed gauge ``x -> gamma(-x)``."""
    return g.reversed()


def scale(g: Gauge, factor: float) -> Gauge:
    """The proportional gauge ``factor * gamma``."""
    return g.scaled(factor)


def gauge_from_dict(data: dict) -> Gauge:
    if not isinstance(data, dict) or "type" not in data:
        raise GaugeValidationError("gauge description needs a 'type' field")
    kind = data["type"]
    sc = data.get("scale", 1.0)
    try:
        if kind == "polytope_h":
            return PolytopeH(data["normals"], sc)
        if kind == "polytope_v":
            return PolytopeV(data["vertices"], sc)
        if kind == "ellipsoid":
            return Ellipsoid(data["Q"], data.get("c"), sc)
    except KeyError as exc:
        raise GaugeValidationError(f"gauge of type {kind!r} is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GaugeValidationError):
            raise
        raise GaugeValidationError(f"malformed {kind} description: {exc}") from None
    raise GaugeValidationError(f"unknown gauge type {kind!r}")


def load_gauge(path) -> Gauge:
    with open(Path(path)) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GaugeValidationError(f"gauge file is not valid JSON: {exc}") from None
    return gauge_from_dict(data)


def dump_gauge(g: Gauge, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(g.to_dict(), fh, indent=2)
        fh.write("\n")


def triangle_gauge() -> PolytopeH:
    """``max{-x2, x2 - x1, x2 + x1}``: unit ball with vertices (0,1), (-2,-1), (2,-1)."""
    return PolytopeH([[0.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])


def euclidean_gauge(d: int = 2) -> Ellipsoid:
    return Ellipsoid(np.eye(d))
