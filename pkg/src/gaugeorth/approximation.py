"""eps-best approximation and eps-best co-approximation in linear subspaces.

Distances are measured as ``gamma(u - y)`` for ``u`` in the subspace, i.e.
from the target ``y`` to the approximant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .calculus import gateaux_gradient
from .gauges import Ellipsoid, Gauge, PolytopeH, PolytopeV, as_vector
from .lp import LinearProgram, NumericalError, solve_lp
from .orthogonality import birkhoff_test

__all__ = [
    "Subspace",
    "BestApproxResult",
    "best_approximation",
    "best_approx_membership",
    "annihilating_support",
    "certificate_exists",
    "coapprox_membership_sampled",
    "coapprox_sufficient_test",
]


class Subspace:
    """Linear subspace spanned by the rows of ``basis``."""

    def __init__(self, basis):
        B = np.atleast_2d(np.asarray(basis, dtype=float))
        if B.ndim != 2 or B.shape[0] == 0:
            raise ValueError("a subspace needs at least one basis vector")
        if not np.all(np.isfinite(B)):
            raise ValueError("basis vectors must be finite")
        s = np.linalg.svd(B, compute_uv=False)
        if s[-1] <= 1e-10 * max(s[0], 1.0):
            raise ValueError("basis vectors must be linearly independent")
        self.basis = B
        self.basis.setflags(write=False)
        self.orthonormal = np.linalg.qr(B.T)[0].T  # rows span the same space

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def matrix(self) -> np.ndarray:
        """``d x k`` matrix whose columns are the basis vectors."""
        return self.basis.T

    def point(self, coeffs) -> np.ndarray:
        return self.basis.T @ np.asarray(coeffs, dtype=float)

    def coordinates(self, x) -> np.ndarray:
        return np.linalg.lstsq(self.basis.T, np.asarray(x, dtype=float), rcond=None)[0]

    def residual(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.orthonormal.T @ (self.orthonormal @ x)))

    def contains(self, x, tol: float = 1e-9) -> bool:
        return self.residual(x) <= tol * (1.0 + np.linalg.norm(x))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


@dataclass(frozen=True)
class BestApproxResult:
    point: np.ndarray
    value: float
    certificate: np.ndarray
    coefficients: np.ndarray


def _check(g: Gauge, U: Subspace, y):
    if U.ambient_dim != g.dim:
        raise ValueError(f"subspace lives in R^{U.ambient_dim}, gauge in R^{g.dim}")
    if U.dim >= g.dim:
        raise ValueError("subspace must be proper")
    y = as_vector(y, g.dim, "y")
    if U.contains(y):
        raise ValueError("y lies in the subspace; its distance is 0")
    return y


def _check_member(g: Gauge, U: Subspace, x):
    x = as_vector(x, g.dim)
    if not U.contains(x, 1e-8):
        raise ValueError("x must lie in the subspace")
    return x


def annihilating_support(g: Gauge, U: Subspace, z) -> tuple[float, np.ndarray]:
    """max of ``<x*, z>`` over ``{gamma°(x*) <= 1, x* orthogonal to U}`` and a maximiser.

    By duality this equals the distance ``min_u gamma(z + u)`` of ``z`` to ``U``.
    """
    z = as_vector(z, g.dim, "z")
    B = U.matrix
    if isinstance(g, PolytopeH):
        N = g.effective_normals
        m = len(N)
        A_eq = np.vstack([B.T @ N.T, np.ones((1, m))])
        b_eq = np.append(np.zeros(U.dim), 1.0)
        res = solve_lp(LinearProgram(N @ z, "max", A_eq=A_eq, b_eq=b_eq))
        if not res.optimal:
            raise NumericalError(f"annihilator LP returned {res.status}")
        return res.value, N.T @ res.x
    if isinstance(g, PolytopeV):
        V = g.effective_vertices
        res = solve_lp(
            LinearProgram(z, "max", V, np.ones(len(V)), B.T, np.zeros(U.dim), np.ones(g.dim, bool))
        )
        if not res.optimal:
            raise NumericalError(f"annihilator LP returned {res.status}")
        return res.value, res.x
    if isinstance(g, Ellipsoid):
        # polar ball {c' + L^{-T} s : |s| <= 1}; B^T x* = 0 is an affine slice in s
        _, cp, L = g._polar_params
        M = np.linalg.solve(L, B).T  # B^T L^{-T}
        s0 = np.linalg.lstsq(M, -B.T @ cp, rcond=None)[0]
        ns = np.linalg.svd(M)[2][U.dim:]  # orthonormal basis of null(M)
        p = np.linalg.solve(L, z)
        pn = ns.T @ (ns @ p)
        rho = math.sqrt(max(0.0, 1.0 - s0 @ s0))
        norm = np.linalg.norm(pn)
        s = s0 + (rho * pn / norm if norm > 0 else 0.0)
        xs = cp + np.linalg.solve(L.T, s)
        return float(z @ xs), xs
    raise TypeError(f"unsupported gauge {type(g).__name__}")


def best_approximation(g: Gauge, U: Subspace, y, eps: float = 0.0, method: str = "auto") -> BestApproxResult:
    """A minimiser of ``gamma(u - y)`` over ``u in U`` with a dual certificate.

    The point is also an eps-best approximation for every ``eps >= 0``; the
    whole eps-set is available through :func:`best_approx_membership`.
    Ellipsoids are solved in closed form (``method="closed_form"``) or by
    Armijo gradient descent (``method="descent"``).
    """
    y = _check(g, U, y)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    B = U.matrix
    k = U.dim
    if isinstance(g, PolytopeH):
        N = g.effective_normals
        m = len(N)
        # variables (c, t): min t s.t. N (B c - y) <= t
        A_ub = np.hstack([N @ B, -np.ones((m, 1))])
        free = np.ones(k + 1, bool)
        res = solve_lp(LinearProgram(np.append(np.zeros(k), 1.0), "min", A_ub, N @ y, free=free))
        coeffs = res.x[:k]
    elif isinstance(g, PolytopeV):
        V = g.effective_vertices
        m = len(V)
        # variables (c, u): min sum u s.t. B c - V^T u = y, u >= 0
        free = np.append(np.ones(k, bool), np.zeros(m, bool))
        res = solve_lp(
            LinearProgram(np.append(np.zeros(k), np.ones(m)), "min", A_eq=np.hstack([B, -V.T]), b_eq=y, free=free)
        )
        coeffs = res.x[:k]
    elif isinstance(g, Ellipsoid):
        if method in ("auto", "closed_form"):
            coeffs = _ellipsoid_closed_form(g, B, y)
        elif method == "descent":
            coeffs = _descent(g, B, y)
        else:
            raise ValueError(f"unknown method {method!r}")
        res = None
    else:
        raise TypeError(f"unsupported gauge {type(g).__name__}")
    if res is not None and not res.optimal:
        raise NumericalError(f"best approximation LP returned {res.status}")
    point = B @ coeffs
    z = point - y
    value = g._value(z)
    if isinstance(g, Ellipsoid):
        cert = g.gradient(z)
    else:
        _, cert = annihilating_support(g, U, z)
    p = g._polar_value(cert)
    if p > 0:
        cert = cert / p
    return BestApproxResult(point, value, cert, coeffs)


def _ellipsoid_closed_form(g: Ellipsoid, B, y):
    # gamma(z) <= r  iff  (z - r c)^T Q (z - r c) <= r^2; minimise over the
    # subspace with the Q-orthogonal projection and solve for the smallest r
    Q, c = g._Q, g._c
    G = B.T @ Q @ B
    P = Q - Q @ B @ np.linalg.solve(G, B.T @ Q)
    a = 1.0 - c @ P @ c
    b = c @ P @ y
    r = (b + math.sqrt(b * b + a * (y @ P @ y))) / a
    return np.linalg.solve(G, B.T @ Q @ (y + r * c))


def _descent(g: Gauge, B, y, max_iter: int = 10_000, step_tol: float = 1e-10):
    def f(cf):
        return g._value(B @ cf - y)

    coeffs = np.zeros(B.shape[1])
    fc = f(coeffs)
    t = 1.0
    for _ in range(max_iter):
        grad = gateaux_gradient(g, B @ coeffs - y)
        if grad is None:
            raise NumericalError("gauge not differentiable along the descent path")
        d = -(B.T @ grad)
        gn = float(d @ d)
        if gn == 0.0:
            return coeffs
        t = min(1.0, 4.0 * t)
        while True:
            trial = coeffs + t * d
            ft = f(trial)
            if ft <= fc - 1e-4 * t * gn:
                break
            t *= 0.5
            if t * math.sqrt(gn) < step_tol:
                return coeffs
        coeffs, fc = trial, ft
        if t * math.sqrt(gn) < step_tol:
            return coeffs
    raise NumericalError("descent did not converge in 10^4 iterations")


def best_approx_membership(g: Gauge, U: Subspace, y, eps: float, x, tol: float = 1e-9) -> bool:
    """Is ``x in U`` an eps-best approximation of ``y``?  Decided by distance."""
    y = _check(g, U, y)
    x = _check_member(g, U, x)
    dist = best_approximation(g, U, y).value
    return g._value(x - y) <= dist + eps + tol


def certificate_exists(g: Gauge, U: Subspace, y, eps: float, x, tol: float = 1e-9):
    """Look for ``x*`` with ``gamma°(x*) = 1``, ``x*`` orthogonal to ``U`` and
    ``x*`` an eps-subgradient at ``x - y``.  Returns the functional or ``None``."""
    y = _check(g, U, y)
    x = _check_member(g, U, x)
    z = x - y
    value, xs = annihilating_support(g, U, z)
    if value < g._value(z) - eps - tol:
        return None
    p = g._polar_value(xs)
    return xs / p if p > 0 else xs


def _grid(k: int, n: int) -> np.ndarray:
    axis = np.linspace(-1.0, 1.0, n)
    return np.array(list(itertools.product(axis, repeat=k)))


def coapprox_membership_sampled(g: Gauge, U: Subspace, y, eps: float, x, samples: int = 41,
                                radius: float | None = None, tol: float = 1e-9) -> bool:
    """Sampled check of ``gamma(x - z) <= gamma(y - z) + eps`` for ``z`` in a box of ``U``.

    A necessary condition only: ``False`` comes with a violating ``z`` on the
    grid, ``True`` means no violation was found.  The grid is
    ``samples`` points per axis in orthonormal coordinates of ``U`` on
    ``[-radius, radius]`` (default ``8 * max(gamma(y), gamma(-y), |y|)``).
    """
    y = as_vector(y, g.dim, "y")
    x = _check_member(g, U, x)
    if radius is None:
        radius = 8.0 * max(g._value(y), g._value(-y), float(np.linalg.norm(y)))
    for cf in _grid(U.dim, samples) * radius:
        z = U.orthonormal.T @ cf
        if g._value(x - z) > g._value(y - z) + eps + tol:
            return False
    return True


def _sphere_directions(k: int, n: int) -> np.ndarray:
    if k == 1:
        return np.array([[1.0], [-1.0]])
    if k == 2:
        th = 2.0 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(th), np.sin(th)])
    pts = _grid(k, max(3, int(round(n ** (1.0 / (k - 1)))) + 1))
    pts = pts[np.linalg.norm(pts, axis=1) > 0]
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def coapprox_sufficient_test(g: Gauge, U: Subspace, y, x, eps: float = 0.0, samples: int = 64,
                             tol: float = 1e-9) -> bool:
    """Sampled check of ``z ⊥_B^eps (y - x)`` for all ``z`` in ``U``.

    When the condition holds for all of ``U``, ``x`` is an eps-best
    co-approximation of ``y``.  For ``eps = 0`` the relation is invariant
    under positive scaling of ``z``, so the basis vectors, their negatives
    and a direction grid on the unit sphere of ``U`` are tested; for
    ``eps > 0`` the directions are tested at several radii.
    """
    y = as_vector(y, g.dim, "y")
    x = _check_member(g, U, x)
    w = y - x
    dirs = [b for b in U.basis] + [-b for b in U.basis]
    dirs += [U.orthonormal.T @ c for c in _sphere_directions(U.dim, samples)]
    if eps == 0.0:
        zs = dirs
    else:
        base = max(g._value(y), g._value(-y), g._value(w), g._value(-w))
        zs = [r * base * d / np.linalg.norm(d) for r in (0.125, 0.5, 1.0, 2.0, 8.0) for d in dirs]
    return all(birkhoff_test(g, z, w, eps, tol) for z in zs)
