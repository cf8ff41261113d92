"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``[PASS]`` or ``[FAIL]`` line for its criterion,
visible even under captured output.
"""

import itertools
from contextlib import contextmanager

import numpy as np
import pytest

from gaugeorth import (
    PolytopeH,
    Subspace,
    Weight,
    best_approx_membership,
    best_approximation,
    birkhoff_dual_test,
    birkhoff_slack,
    birkhoff_test,
    boundary_reversal_check_2d,
    certificate_exists,
    circle_directions,
    coapprox_membership_sampled,
    cone_membership,
    directional_derivative,
    duality_map,
    isosceles_alpha_interval,
    isosceles_function,
    isosceles_test,
    left_alpha_interval,
    line_minimum,
    make_cone,
    right_alpha_interval,
    rotundity_check,
    semi_inner_inferior,
    semi_inner_superior,
    slope_directional_derivative,
    smoothness_check,
    subdifferential,
    triangle_gauge,
    unique_bisector_guarantee,
)
from gaugeorth.oracle import brute_subgradient_check

from conftest import ellipsoid_test_gauges, polytope_test_gauges, random_gauge, random_polytope_h

X_AXIS = Subspace([[1.0, 0.0]])


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n[FAIL] criterion {number:>2}: {title}")
            raise
        with capsys.disabled():
            print(f"\n[PASS] criterion {number:>2}: {title}")

    return run


def _grid2(lo=-2, hi=2, n=9):
    pts = np.linspace(lo, hi, n)
    return [np.array(p) for p in itertools.product(pts, pts) if any(p)]


def _bisect(pred, inside, outside, tol=1e-10):
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if pred(mid):
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def _unit_directions(d, n, seed):
    if d == 2:
        return circle_directions(n)
    v = np.random.default_rng(seed).normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1)[:, None]


def test_criterion_01_triangle_counterexample(criterion):
    with criterion(1, "triangle counterexample"):
        g = triangle_gauge()
        # (i) unit-ball vertices
        verts = g.polar().facet_normals
        expected = np.array([[0, 1], [-2, -1], [2, -1]], dtype=float)
        for v in expected:
            assert np.min(np.linalg.norm(verts - v, axis=1)) <= 1e-9
        assert len(verts) == 3
        for v in expected:
            assert g.eval(v) == pytest.approx(1.0, abs=1e-9)
        # (ii) co-approximation boundary of y = (0, 1) in the x-axis
        y = np.array([0.0, 1.0])

        def member(t):
            return coapprox_membership_sampled(g, X_AXIS, y, 0.0, [t, 0.0])

        assert _bisect(member, 0.0, 2.0, 1e-8) == pytest.approx(1.0, abs=1e-6)
        assert _bisect(member, 0.0, -2.0, 1e-8) == pytest.approx(-1.0, abs=1e-6)
        # (iii) exact witness values
        z, w, x = np.array([1.0, 0.0]), np.array([0.0, -0.5]), np.zeros(2)
        assert g.eval(w - z) == 0.5
        assert g.eval(x - z) == 1.0
        # (iv) z is not orthogonal to y - x; the line minimum sits at -0.5
        assert not birkhoff_test(g, z, y - x)
        lam, m = line_minimum(g, z, y - x)
        assert lam == pytest.approx(-0.5, abs=1e-9) and m == pytest.approx(0.5, abs=1e-12)
        assert g.eval(z - 0.5 * (y - x)) == 0.5


def test_criterion_02_birkhoff_primal_dual(criterion):
    with criterion(2, "eps-Birkhoff: 1D minimisation vs LP certificate, 1200 instances"):
        rng = np.random.default_rng(2002)
        n = outside_band = orthogonal = 0
        for k in range(1200):
            d = int(rng.integers(2, 5))
            g = random_polytope_h(rng, d, m_lo=max(4, d + 1), m_hi=12)
            assert 4 <= len(g.normals) <= 12
            x = rng.normal(size=d)
            eps = float(rng.choice([0.0, 0.1, 0.5])) * g.eval(x)
            if k % 2:
                # half the instances are built orthogonal: y annihilated by an eps-subgradient
                xs = subdifferential(g, x, eps).extreme_point(rng.normal(size=d))
                y = rng.normal(size=d)
                y -= (xs @ y) / (xs @ xs) * xs
            else:
                y = rng.normal(size=d)
            primal = birkhoff_test(g, x, y, eps)
            dual = bool(birkhoff_dual_test(g, x, y, eps))
            n += 1
            orthogonal += primal
            if primal != dual:
                assert abs(birkhoff_slack(g, x, y, eps)) <= 1e-6
            else:
                outside_band += 1
        assert n >= 1000
        assert 0.2 * n < orthogonal < 0.9 * n


def test_criterion_03_interval_cross_validation(criterion):
    with criterion(3, "right interval: fractional LP vs outer bisection, 200 instances"):
        rng = np.random.default_rng(3003)
        for k in range(200):
            d = int(rng.integers(2, 5))
            g = random_polytope_h(rng, d, m_hi=12)
            x, y = rng.normal(size=(2, d))
            gx = g.eval(x)
            eps = 0.0 if k % 2 == 0 else float(rng.choice([0.1, 0.3])) * gx
            iv = right_alpha_interval(g, x, y, eps, method="fractional")
            bound = max(g.eval(y), g.eval(-y)) / (gx - eps)
            # independent inside point: the semi-inner-product projection
            a0 = -semi_inner_superior(g, y, x) / gx**2

            def ok(a):
                return birkhoff_test(g, x, a * x + y, eps)

            assert ok(a0)
            hi = _bisect(ok, a0, bound + 1.0)
            lo = _bisect(ok, a0, -bound - 1.0)
            assert iv.lo == pytest.approx(lo, abs=1e-6)
            assert iv.hi == pytest.approx(hi, abs=1e-6)
            for a in (iv.lo, iv.hi):
                assert abs(a) <= bound + 1e-9
            if eps == 0.0:
                dd_plus = directional_derivative(g, x, y)
                dd_minus = directional_derivative(g, x, -y)
                for a in (iv.lo, iv.hi):
                    assert -dd_minus - 1e-7 <= -a * gx <= dd_plus + 1e-7


def test_criterion_04_smooth_rotund_dichotomy(criterion):
    with criterion(4, "smoothness/rotundity dichotomy"):
        for g in polytope_test_gauges():
            sm = smoothness_check(g)
            assert not sm.smooth
            x, s1, s2 = sm.witness
            assert np.linalg.norm(s1 - s2) > 1e-9
            for s in (s1, s2):
                assert g.polar_eval(s) == pytest.approx(1.0, abs=1e-9)
                assert s @ x == pytest.approx(g.eval(x), abs=1e-9)
                assert brute_subgradient_check(g, x, 0.0, s)
            assert right_alpha_interval(g, x, s1 - s2).width >= 1e-6

            ro = rotundity_check(g)
            assert not ro.rotund
            p, q = ro.witness
            for v in (p, q, 0.5 * (p + q)):
                assert g.eval(v) == pytest.approx(1.0, abs=1e-9)
            assert left_alpha_interval(g, q - p, p).width >= 1e-6

        rng = np.random.default_rng(4004)
        gauges = ellipsoid_test_gauges()
        sampled = 0
        for g in gauges:
            assert smoothness_check(g).smooth and rotundity_check(g).rotund
            for x, y in rng.normal(size=(200 // len(gauges), 2, g.dim)):
                assert right_alpha_interval(g, x, y).width <= 1e-8
                assert left_alpha_interval(g, x, y).width <= 1e-8
                sampled += 1
        assert sampled >= 200


def test_criterion_05_subdifferential_identities(criterion):
    with criterion(5, "subdifferential identities"):
        rng = np.random.default_rng(5005)
        # support value equals the eps-directional derivative (slope minimisation)
        for g in polytope_test_gauges() + ellipsoid_test_gauges():
            for _ in range(6):
                x, u = rng.normal(size=(2, g.dim))
                for eps in (0.0, 0.3 * g.eval(x)):
                    s = subdifferential(g, x, eps).support(u)
                    assert s == pytest.approx(slope_directional_derivative(g, x, u, eps), abs=1e-6)
        # extreme points satisfy the subgradient inequality by brute force
        checked = 0
        while checked < 500:
            g = random_gauge(rng, int(rng.integers(2, 4)))
            x = rng.normal(size=g.dim)
            eps = float(rng.choice([0.0, 0.2, 0.6])) * g.eval(x)
            o = subdifferential(g, x, eps)
            for u in rng.normal(size=(5, g.dim)):
                assert brute_subgradient_check(g, x, eps, o.extreme_point(u), tol=1e-8)
                checked += 1
        # rescaling between two duality mappings
        for w1, w2 in ((Weight.constant_one(), Weight.identity()), (Weight.power(0.5), Weight.power(3.0))):
            for g in polytope_test_gauges() + ellipsoid_test_gauges():
                x = rng.normal(size=g.dim)
                t = g.eval(x)
                J1, J2 = duality_map(g, x, w1), duality_map(g, x, w2)
                for u in rng.normal(size=(5, g.dim)):
                    lhs = w2.phi(t) * J1.support(u)
                    rhs = w1.phi(t) * J2.support(u)
                    assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, abs(lhs)))


def test_criterion_06_semi_inner_products(criterion):
    with criterion(6, "semi-inner products, 500 pairs"):
        rng = np.random.default_rng(6006)
        decided = orth = 0
        for k in range(500):
            g = random_gauge(rng, int(rng.integers(2, 5)))
            x, y = rng.normal(size=(2, g.dim))
            if k % 2:
                # push half the pairs into the orthogonal set
                iv = right_alpha_interval(g, x, y)
                y = (iv.lo + rng.random() * iv.width) * x + y
            gx = g.eval(x)
            s, i = semi_inner_superior(g, y, x), semi_inner_inferior(g, y, x)
            assert semi_inner_superior(g, x, x) == pytest.approx(gx**2, abs=1e-7)
            assert semi_inner_inferior(g, x, x) == pytest.approx(gx**2, abs=1e-7)
            assert s <= gx * g.eval(y) + 1e-7
            assert i >= -gx * g.eval(-y) - 1e-7
            slack = birkhoff_slack(g, x, y)
            if abs(slack) <= 1e-7:
                assert i <= 1e-7 and s >= -1e-7
                orth += 1
                continue
            assert (slack <= 0) == (i <= 0 <= s)
            decided += 1
        assert decided > 100 and orth > 100


def test_criterion_07_isosceles(criterion):
    with criterion(7, "isosceles orthogonality"):
        rng = np.random.default_rng(7007)
        # monotone f
        for _ in range(1000):
            g = random_gauge(rng, int(rng.integers(2, 5)))
            x, y = rng.normal(size=(2, g.dim))
            a1, a2 = np.sort(rng.normal(scale=3, size=2))
            f = isosceles_function(g, x, y)
            assert f(a1) <= f(a2) + 1e-9
        # bracket ends carry the limiting signs
        for g in polytope_test_gauges() + ellipsoid_test_gauges():
            for x, y in rng.normal(size=(5, 2, g.dim)):
                iv = isosceles_alpha_interval(g, x, y)
                f = isosceles_function(g, x, y)
                L, R = iv.bracket
                assert f(L) < 0 < f(R)
                assert -2 * g.eval(-x) - 1e-9 <= f(L) and f(R) <= 2 * g.eval(x) + 1e-9
                assert abs(f(iv.lo)) <= 1e-9 and abs(f(iv.hi)) <= 1e-9
        # cone inclusion on members built over a facet
        checked = 0
        for g in polytope_test_gauges():
            p, q = rotundity_check(g).witness
            N = g.effective_normals if isinstance(g, PolytopeH) else g.facet_normals
            m = 0.5 * (p + q)
            xs = N[int(np.argmax(N @ m))]
            for theta in (0.25, 0.5, 1.0):
                x = theta * (q - p) / 2
                for r in (1.0, 2.0, 3.0):
                    z = r * m
                    if cone_membership(g, make_cone(g, x, xs), z) and cone_membership(g, make_cone(g, -x, xs), z):
                        assert isosceles_test(g, z, x, tol=1e-9)
                        checked += 1
        assert checked >= len(polytope_test_gauges())
        # uniqueness guarantee on a 20 x 20 direction grid
        guaranteed = 0
        for idx, g in enumerate(polytope_test_gauges() + ellipsoid_test_gauges()):
            X = _unit_directions(g.dim, 20, 100 + idx)
            Y = _unit_directions(g.dim, 20, 200 + idx)
            for x in X:
                for y in Y:
                    if np.linalg.norm(y - (y @ x) * x) <= 1e-9:
                        continue
                    if unique_bisector_guarantee(g, x, y):
                        guaranteed += 1
                        assert isosceles_alpha_interval(g, x, y).width <= 1e-8
        assert guaranteed > 0


def test_criterion_08_asymmetry_witnesses(criterion):
    with criterion(8, "asymmetry witnesses for the triangle gauge"):
        g = triangle_gauge()
        pts = _grid2()
        pairs = list(itertools.product(pts, pts))
        assert any(birkhoff_test(g, x, y) and not birkhoff_test(g, y, x) for x, y in pairs)
        assert any(isosceles_test(g, x, y) and not isosceles_test(g, y, x) for x, y in pairs)
        coarse = _grid2(n=7)
        left_violation = False
        for z in coarse:
            left = [x for x in coarse if birkhoff_test(g, x, z)]
            if any(not birkhoff_test(g, x + y, z) for x, y in itertools.combinations(left, 2)):
                left_violation = True
                break
        assert left_violation
        assert any(birkhoff_test(g, x, y) and not isosceles_test(g, x, y) for x, y in pairs)
        assert any(isosceles_test(g, x, y) and not birkhoff_test(g, x, y) for x, y in pairs)


def test_criterion_09_planar_reversal(criterion):
    with criterion(9, "planar reversal along the unit circle"):
        from gaugeorth import Ellipsoid

        tri = boundary_reversal_check_2d(triangle_gauge())
        assert tri.n_points == 6 and tri.max_slack <= 1e-7
        disk = boundary_reversal_check_2d(Ellipsoid(np.eye(2), [0.5, 0.0]), n=720)
        assert disk.n_points == 720 and disk.max_slack <= 1e-7


def test_criterion_10_best_approximation(criterion):
    with criterion(10, "best approximation certificates, 200 instances"):
        rng = np.random.default_rng(1010)
        members = {True: 0, False: 0}
        for k in range(200):
            d = int(rng.integers(2, 5))
            g = random_gauge(rng, d)
            U = Subspace(rng.normal(size=(int(rng.integers(1, d)), d)))
            y = rng.normal(size=d)
            res = best_approximation(g, U, y)
            xs = res.certificate
            assert g.polar_eval(xs) == pytest.approx(1.0, abs=1e-7)
            assert np.max(np.abs(U.matrix.T @ xs)) <= 1e-7
            assert xs @ (res.point - y) == pytest.approx(g.eval(res.point - y), abs=1e-7)
            if k % 4 == 0:
                assert brute_subgradient_check(g, res.point - y, 1e-7, xs, tol=1e-7)
            if isinstance(g, PolytopeH) or hasattr(g, "vertices"):
                x = res.point + U.orthonormal.T @ rng.normal(scale=0.4, size=U.dim)
                eps = float(rng.choice([0.0, 0.05, 0.3]))
                if abs(g.eval(x - y) - res.value - eps) < 1e-6:
                    continue
                member = best_approx_membership(g, U, y, eps, x)
                cert = certificate_exists(g, U, y, eps, x)
                assert member == (cert is not None)
                members[member] += 1
        assert members[True] > 5 and members[False] > 5
