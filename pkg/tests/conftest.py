import json

import numpy as np
import pytest

from gaugeorth import Ellipsoid, GaugeValidationError, PolytopeH, PolytopeV, triangle_gauge

TRIANGLE_NORMALS = [[0.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]
TRIANGLE_VERTICES = [[0.0, 1.0], [-2.0, -1.0], [2.0, -1.0]]


def random_polytope_h(rng, d, m_lo=None, m_hi=12):
    m_lo = d + 1 if m_lo is None else m_lo
    while True:
        m = int(rng.integers(m_lo, m_hi + 1))
        try:
            return PolytopeH(rng.normal(size=(m, d)) + 0.3 * rng.normal(size=d))
        except GaugeValidationError:
            continue


def random_polytope_v(rng, d, m_lo=None, m_hi=12):
    m_lo = d + 1 if m_lo is None else m_lo
    while True:
        m = int(rng.integers(m_lo, m_hi + 1))
        try:
            return PolytopeV(rng.normal(size=(m, d)) + 0.3 * rng.normal(size=d))
        except GaugeValidationError:
            continue


def random_ellipsoid(rng, d):
    A = rng.normal(size=(d, d))
    Q = A @ A.T + 0.5 * np.eye(d)
    c = rng.normal(size=d)
    # keep c^T Q c <= 0.5 so the origin is well inside
    c *= np.sqrt(0.5 * rng.random() / (c @ Q @ c))
    return Ellipsoid(Q, c)


def random_gauge(rng, d, kinds=("h", "v", "e")):
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "h":
        return random_polytope_h(rng, d)
    if kind == "v":
        return random_polytope_v(rng, d)
    return random_ellipsoid(rng, d)


def polytope_test_gauges():
    rng = np.random.default_rng(20240)
    return [
        triangle_gauge(),
        PolytopeV(TRIANGLE_VERTICES),
        PolytopeH([[1, 0], [0, 1], [-1, 0], [0, -1]]),
        PolytopeH([[1.0, 0.2], [0.1, 1.0], [-0.7, 0.5], [-0.4, -0.9], [0.6, -0.8]]),
        random_polytope_h(rng, 3, 6),
        random_polytope_v(rng, 3, 6),
        random_polytope_h(rng, 4, 8),
    ]


def ellipsoid_test_gauges():
    rng = np.random.default_rng(20241)
    return [
        Ellipsoid(np.eye(2)),
        Ellipsoid(np.eye(2), [0.5, 0.0]),
        Ellipsoid([[2.0, 0.3], [0.3, 0.5]], [0.2, -0.4]),
        random_ellipsoid(rng, 3),
        random_ellipsoid(rng, 4),
    ]


@pytest.fixture
def triangle():
    return triangle_gauge()


@pytest.fixture
def triangle_v():
    return PolytopeV(TRIANGLE_VERTICES)


@pytest.fixture
def circle():
    return Ellipsoid(np.eye(2))


@pytest.fixture
def shifted_disk():
    return Ellipsoid(np.eye(2), [0.5, 0.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gauge_files(tmp_path):
    files = {
        "triangle": {"type": "polytope_h", "normals": TRIANGLE_NORMALS},
        "triangle_v": {"type": "polytope_v", "vertices": TRIANGLE_VERTICES},
        "circle": {"type": "ellipsoid", "Q": [[1, 0], [0, 1]], "c": [0, 0]},
        "disk": {"type": "ellipsoid", "Q": [[1, 0], [0, 1]], "c": [0.5, 0]},
        "cube3": {"type": "polytope_h", "normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]},
    }
    out = {}
    for name, data in files.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        out[name] = str(p)
    return out
