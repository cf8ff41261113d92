import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from gaugeorth.lp import LinearProgram, NumericalError, solve_linear_fractional, solve_lp

TRIANGLE_NORMALS = np.array([[0.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])
FREE2 = np.ones(2, bool)


def test_simplex_vertex():
    res = solve_lp(LinearProgram([1, 0], "max", A_eq=[[1, 1]], b_eq=[1]))
    assert res.optimal
    assert res.value == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(res.x, [1, 0], atol=1e-12)


def test_triangle_rightmost_vertex():
    res = solve_lp(LinearProgram([1, 0], "max", TRIANGLE_NORMALS, np.ones(3), free=FREE2))
    assert res.value == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(res.x, [2, -1], atol=1e-12)


def test_infeasible():
    res = solve_lp(LinearProgram([1, 0], "max", A_ub=[[-1, 0]], b_ub=[-2], A_eq=[[1, 1]], b_eq=[1]))
    assert res.status == "infeasible"
    assert res.x is None


def test_unbounded():
    res = solve_lp(LinearProgram([1, 1], "max", A_ub=[[1, -1]], b_ub=[1]))
    assert res.status == "unbounded"


def test_lexicographic_tie_break():
    # optimal face is the top edge of the box; smallest vertex is (0, 1)
    res = solve_lp(LinearProgram([0, 1], "max", A_ub=[[1, 0], [0, 1]], b_ub=[1, 1]))
    np.testing.assert_allclose(res.x, [0, 1], atol=1e-12)
    # triangle apex is unique, bottom edge is a tie resolved to (-2, -1)
    res = solve_lp(LinearProgram([0, -1], "max", TRIANGLE_NORMALS, np.ones(3), free=FREE2))
    np.testing.assert_allclose(res.x, [-2, -1], atol=1e-12)


def test_free_variables_and_negative_rhs():
    # min x1 + x2 s.t. x1 - x2 = -3, x1 >= -5 (x free)
    res = solve_lp(LinearProgram([1, 1], "min", A_ub=[[-1, 0]], b_ub=[5], A_eq=[[1, -1]], b_eq=[-3], free=FREE2))
    assert res.value == pytest.approx(-7.0)
    np.testing.assert_allclose(res.x, [-5, -2], atol=1e-12)


def test_shape_validation():
    with pytest.raises(ValueError, match="shape"):
        LinearProgram([1, 2], A_ub=[[1, 2, 3]], b_ub=[1])
    with pytest.raises(ValueError, match="desk scale"):
        LinearProgram(np.ones(65))
    with pytest.raises(ValueError, match="finite"):
        LinearProgram([1, np.nan])
    with pytest.raises(ValueError, match="sense"):
        LinearProgram([1], "maximise")


def test_numerical_error_is_distinct():
    assert issubclass(NumericalError, RuntimeError)
    assert not issubclass(NumericalError, ValueError)


def _random_lp(rng):
    n = int(rng.integers(2, 7))
    m = int(rng.integers(1, 9))
    A = rng.normal(size=(m, n))
    x0 = rng.random(n)
    b = A @ x0 + rng.random(m)
    box = np.vstack([np.eye(n)])
    A = np.vstack([A, box])
    b = np.append(b, np.full(n, 5.0))
    c = rng.normal(size=n)
    return c, A, b


def test_matches_scipy_on_random_programs():
    rng = np.random.default_rng(7)
    for _ in range(150):
        c, A, b = _random_lp(rng)
        ours = solve_lp(LinearProgram(c, "min", A, b))
        ref = linprog(c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
        assert ours.optimal and ref.status == 0
        assert ours.value == pytest.approx(ref.fun, rel=1e-9, abs=1e-9)
        assert np.all(A @ ours.x <= b + 1e-9)


def test_perturbed_objective_is_stable():
    rng = np.random.default_rng(8)
    for _ in range(50):
        c, A, b = _random_lp(rng)
        v1 = solve_lp(LinearProgram(c, "min", A, b)).value
        v2 = solve_lp(LinearProgram(c + 1e-12 * rng.normal(size=c.size), "min", A, b)).value
        assert abs(v1 - v2) <= 1e-9


def test_optimum_is_a_vertex():
    rng = np.random.default_rng(9)
    for _ in range(50):
        c, A, b = _random_lp(rng)
        x = solve_lp(LinearProgram(c, "min", A, b)).x
        active = np.vstack([A[np.abs(A @ x - b) <= 1e-9], np.eye(x.size)[np.abs(x) <= 1e-9]])
        assert np.linalg.matrix_rank(active, tol=1e-9) == x.size


class TestFractional:
    def test_triangle_apex_interval(self):
        # -x1*/x2* over conv{(-1,1),(1,1)}, in convex-combination weights w
        A = np.array([[-1.0, 1.0], [1.0, 1.0]])  # rows are the generators
        res = solve_linear_fractional(-A[:, 0], 0.0, A[:, 1], 0.0, A_eq=np.ones((1, 2)), b_eq=[1])
        assert res.min_value == pytest.approx(-1.0)
        assert res.max_value == pytest.approx(1.0)

    def test_constant_denominator_reduces_to_lp(self):
        rng = np.random.default_rng(10)
        c, A, b = _random_lp(rng)
        res = solve_linear_fractional(c, 0.0, np.zeros(c.size), 2.0, A_ub=A, b_ub=b)
        lo = solve_lp(LinearProgram(c, "min", A, b)).value
        hi = solve_lp(LinearProgram(c, "max", A, b)).value
        assert res.min_value == pytest.approx(lo / 2)
        assert res.max_value == pytest.approx(hi / 2)

    def test_singleton(self):
        res = solve_linear_fractional([1.0, 2.0], 1.0, [1.0, 1.0], 1.0, A_eq=np.eye(2), b_eq=[1.0, 3.0])
        assert res.min_value == pytest.approx(res.max_value)
        assert res.min_value == pytest.approx(8.0 / 5.0)

    def test_nonpositive_denominator_rejected(self):
        with pytest.raises(ValueError, match="denominator"):
            solve_linear_fractional([1.0], 0.0, [1.0], -0.5, A_ub=[[1.0]], b_ub=[1.0])

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            solve_linear_fractional([1.0], 0.0, [1.0], 1.0, A_ub=[[1.0]], b_ub=[-1.0])

    def test_matches_vertex_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            k = int(rng.integers(2, 6))
            gens = rng.normal(size=(k, 2))
            num = rng.normal(size=2)
            den = rng.normal(size=2) * 0.2
            den0 = 1.0 + np.abs(den).sum() * np.abs(gens).max()
            # variables: convex weights over the generators
            res = solve_linear_fractional(gens @ num, 0.0, gens @ den, den0, A_eq=np.ones((1, k)), b_eq=[1])
            ratios = [(g @ num) / (g @ den + den0) for g in gens]
            assert res.min_value == pytest.approx(min(ratios), abs=1e-9)
            assert res.max_value == pytest.approx(max(ratios), abs=1e-9)


def test_degenerate_box_corners():
    # highly degenerate: many redundant constraints through one vertex
    rows = [r for r in itertools.product([0, 1], repeat=2) if any(r)]
    A = np.array(rows, dtype=float)
    res = solve_lp(LinearProgram([-1, -1], "min", A, np.array([1.0, 1.0, 2.0])))
    assert res.value == pytest.approx(-2.0)
