"""Dense two-phase simplex and Charnes-Cooper linear-fractional programming.

The solver targets desk-scale problems (a few dozen variables and a few hundred
rows).  Pivoting follows Bland's rule so runs are deterministic and cannot
cycle.  When the optimal face is not a single vertex, the lexicographically
smallest optimal vertex is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LinearProgram",
    "LPResult",
    "NumericalError",
    "FractionalResult",
    "solve_lp",
    "solve_linear_fractional",
]

MAX_VARIABLES = 64
MAX_CONSTRAINTS = 256

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-10
_FEAS_TOL = 1e-9


class NumericalError(RuntimeError):
    """The simplex iteration broke down (iteration cap, inconsistent phase 1)."""


@dataclass(frozen=True)
class LinearProgram:
    """``min``/``max`` of ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are non-negative unless flagged in ``free``.
    """

    c: np.ndarray
    sense: str = "min"
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    free: np.ndarray | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        n = c.size
        object.__setattr__(self, "c", c)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for a_name, b_name in (("A_ub", "b_ub"), ("A_eq", "b_eq")):
            A, b = getattr(self, a_name), getattr(self, b_name)
            if A is None and b is None:
                A, b = np.zeros((0, n)), np.zeros(0)
            elif A is None or b is None:
                raise ValueError(f"{a_name} and {b_name} must be given together")
            A = np.atleast_2d(np.asarray(A, dtype=float))
            b = np.atleast_1d(np.asarray(b, dtype=float))
            if A.size == 0:
                A = A.reshape(0, n)
            if A.shape[1] != n or A.shape[0] != b.size:
                raise ValueError(
                    f"{a_name} has shape {A.shape}, expected (len({b_name})={b.size}, {n})"
                )
            object.__setattr__(self, a_name, A)
            object.__setattr__(self, b_name, b)
        free = np.zeros(n, dtype=bool) if self.free is None else np.asarray(self.free, bool)
        if free.shape != (n,):
            raise ValueError("free mask must have one entry per variable")
        object.__setattr__(self, "free", free)
        if n > MAX_VARIABLES or self.A_ub.shape[0] + self.A_eq.shape[0] > MAX_CONSTRAINTS:
            raise ValueError(
                f"program exceeds desk scale ({MAX_VARIABLES} variables, "
                f"{MAX_CONSTRAINTS} constraints)"
            )
        arrays = [c, self.A_ub, self.b_ub, self.A_eq, self.b_eq]
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ValueError("linear program data must be finite")

    @property
    def n(self) -> int:
        return self.c.size


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float | None = None
    x: np.ndarray | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Simplex tableau for ``min c x, A x = b, x >= 0`` with ``b >= 0``."""

    def __init__(self, A, b, max_iter):
        m, n = A.shape
        self.m, self.n = m, n
        # columns: n structural, m artificial, rhs
        T = np.zeros((m + 1, n + m + 1))
        T[:m, :n] = A
        T[:m, n : n + m] = np.eye(m)
        T[:m, -1] = b
        self.T = T
        self.basis = list(range(n, n + m))
        self.max_iter = max_iter

    def _pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j

    def set_cost(self, cost):
        """Install a cost row (length n + m) and price out the basis."""
        T = self.T
        T[-1, :-1] = cost
        T[-1, -1] = 0.0
        for r, j in enumerate(self.basis):
            if T[-1, j] != 0.0:
                T[-1] -= T[-1, j] * T[r]

    def run(self, allowed):
        """Iterate with Bland's rule over columns in ``allowed``; True if bounded."""
        T = self.T
        m = self.m
        scale = max(1.0, np.abs(T[-1, :-1]).max(initial=0.0))
        for _ in range(self.max_iter):
            rc = T[-1, :-1]
            enter = -1
            for j in allowed:
                if rc[j] < -_COST_TOL * scale:
                    enter = j
                    break
            if enter < 0:
                return True
            col = T[:m, enter]
            rows = np.nonzero(col > _PIVOT_TOL)[0]
            if rows.size == 0:
                return False
            ratios = T[rows, -1] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            leave = min(ties, key=lambda r: self.basis[r])
            self._pivot(leave, enter)
        raise NumericalError("simplex iteration limit reached")

    def solution(self):
        x = np.zeros(self.T.shape[1] - 1)
        for r, j in enumerate(self.basis):
            x[j] = self.T[r, -1]
        return x[: self.n]


def _standard_form(p: LinearProgram):
    """Return (A, b, c, recover) with ``x_orig = recover(x_std)``."""
    n = p.n
    free_idx = np.nonzero(p.free)[0]
    # structural columns: x (n), negative parts of free vars, slacks for A_ub
    n_free = free_idx.size
    m_ub, m_eq = p.A_ub.shape[0], p.A_eq.shape[0]
    ncol = n + n_free + m_ub
    A = np.zeros((m_ub + m_eq, ncol))
    A[:m_ub, :n] = p.A_ub
    A[m_ub:, :n] = p.A_eq
    A[:, n : n + n_free] = -A[:, free_idx]
    A[:m_ub, n + n_free :] = np.eye(m_ub)
    b = np.concatenate([p.b_ub, p.b_eq])
    sign = 1.0 if p.sense == "min" else -1.0
    c = np.zeros(ncol)
    c[:n] = sign * p.c
    c[n : n + n_free] = -sign * p.c[free_idx]
    neg = b < 0
    A[neg] *= -1.0
    b = np.where(neg, -b, b)

    def recover(xs):
        x = xs[:n].copy()
        x[free_idx] -= xs[n : n + n_free]
        return x

    return A, b, c, recover


def _simplex(p: LinearProgram):
    """Core two-phase solve; returns (status, x, dual_degenerate)."""
    A, b, c, recover = _standard_form(p)
    m, ncol = A.shape
    if m == 0:
        if np.any(c < -_COST_TOL):
            return "unbounded", None, False
        return "optimal", recover(np.zeros(ncol)), bool(np.any(np.abs(c) <= _COST_TOL))
    tab = _Tableau(A, b, max_iter=200 * (m + ncol) + 1000)
    # phase 1: minimise the sum of artificials
    cost1 = np.zeros(ncol + m)
    cost1[ncol:] = 1.0
    tab.set_cost(cost1)
    tab.run(range(ncol + m))
    infeas = -tab.T[-1, -1]
    if infeas > _FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        return "infeasible", None, False
    # drive artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        j = tab.basis[r]
        if j < ncol:
            keep.append(r)
            continue
        row = tab.T[r, :ncol]
        cand = np.nonzero(np.abs(row) > 1e-9)[0]
        if cand.size:
            tab._pivot(r, int(cand[0]))
            keep.append(r)
    if len(keep) < m:
        T = tab.T
        tab.T = np.vstack([T[keep], T[-1:]])
        tab.basis = [tab.basis[r] for r in keep]
        tab.m = len(keep)
    if any(j >= ncol for j in tab.basis):
        raise NumericalError("artificial variable stuck in basis after phase 1")
    cost2 = np.zeros(ncol + m)
    cost2[:ncol] = c
    tab.set_cost(cost2)
    if not tab.run(range(ncol)):
        return "unbounded", None, False
    x = tab.solution()
    rc = tab.T[-1, :ncol]
    nonbasic = np.setdiff1d(np.arange(ncol), tab.basis)
    scale = max(1.0, np.abs(c).max(initial=0.0))
    degenerate = bool(np.any(np.abs(rc[nonbasic]) <= 1e-9 * scale))
    return "optimal", recover(x), degenerate


def _lexicographic_refine(p: LinearProgram, x: np.ndarray, value: float) -> np.ndarray:
    """Among optimal points, return the lexicographically smallest vertex."""
    rows_eq = [p.A_eq, p.c[None, :]]
    rhs_eq = [p.b_eq, np.array([value])]
    for j in range(p.n):
        e = np.zeros(p.n)
        e[j] = 1.0
        sub = LinearProgram(
            e, "min", p.A_ub, p.b_ub, np.vstack(rows_eq), np.concatenate(rhs_eq), p.free
        )
        status, xj, _ = _simplex(sub)
        if status != "optimal":
            break
        x = xj
        rows_eq.append(e[None, :])
        rhs_eq.append(np.array([xj[j]]))
    return x


def solve_lp(p: LinearProgram, lexicographic: bool = True) -> LPResult:
    """Solve a small dense linear program.

    Returns an :class:`LPResult` whose ``status`` is ``"optimal"``,
    ``"infeasible"`` or ``"unbounded"``.  Breakdown of the iteration raises
    :class:`NumericalError` rather than being reported as infeasibility.
    """
    status, x, degenerate = _simplex(p)
    if status != "optimal":
        return LPResult(status)
    value = float(p.c @ x)
    if lexicographic and degenerate:
        x = _lexicographic_refine(p, x, value)
        value = float(p.c @ x)
    return LPResult("optimal", value, x)


@dataclass(frozen=True)
class FractionalResult:
    min_value: float
    max_value: float
    argmin: np.ndarray
    argmax: np.ndarray
    extra: dict = field(default_factory=dict)


def solve_linear_fractional(
    num: np.ndarray,
    num0: float,
    den: np.ndarray,
    den0: float,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    free=None,
) -> FractionalResult:
    """Both extrema of ``(num @ w + num0) / (den @ w + den0)`` over a polyhedron.

    The feasible set is ``{w : A_ub w <= b_ub, A_eq w = b_eq}`` with ``w >= 0``
    except where ``free`` is set; it must be bounded.  Charnes-Cooper scaling
    ``z = t w``, ``t = 1/(den @ w + den0)`` turns each extremum into one LP.
    Raises ``ValueError`` when the denominator is not positive on the set.
    """
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    n = num.size
    base = LinearProgram(np.zeros(n), "min", A_ub, b_ub, A_eq, b_eq, free)
    den_min = solve_lp(LinearProgram(den, "min", base.A_ub, base.b_ub, base.A_eq, base.b_eq, base.free), lexicographic=False)
    if den_min.status == "infeasible":
        raise ValueError("feasible set is empty")
    if den_min.status == "unbounded" or den_min.value + den0 <= 0.0:
        raise ValueError("denominator must be positive on the feasible set")

    # variables (z, t); t >= 0
    m_ub, m_eq = base.A_ub.shape[0], base.A_eq.shape[0]
    A_ub2 = np.hstack([base.A_ub, -base.b_ub[:, None]]) if m_ub else None
    b_ub2 = np.zeros(m_ub) if m_ub else None
    A_eq2 = np.vstack(
        [np.hstack([base.A_eq, -base.b_eq[:, None]]), np.append(den, den0)[None, :]]
    )
    b_eq2 = np.zeros(m_eq + 1)
    b_eq2[-1] = 1.0
    free2 = np.append(base.free, False)
    obj = np.append(num, num0)

    out = {}
    for sense in ("min", "max"):
        res = solve_lp(LinearProgram(obj, sense, A_ub2, b_ub2, A_eq2, b_eq2, free2))
        if res.status != "optimal":
            raise NumericalError(f"Charnes-Cooper {sense} problem returned {res.status}")
        z, t = res.x[:n], res.x[n]
        if t <= 0.0:
            raise NumericalError("Charnes-Cooper scaling variable vanished")
        out[sense] = (res.value, z / t)
    return FractionalResult(out["min"][0], out["max"][0], out["min"][1], out["max"][1])
