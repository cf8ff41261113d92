"""Right, left and isosceles parameter intervals on three kinds of gauges."""

import numpy as np

from gaugeorth import (
    Ellipsoid,
    PolytopeV,
    isosceles_alpha_interval,
    left_alpha_interval,
    right_alpha_interval,
    triangle_gauge,
)

gauges = {
    "triangle (H)": triangle_gauge(),
    "pentagon (V)": PolytopeV([[1.0, 0.2], [0.3, 1.1], [-0.9, 0.6], [-0.7, -0.8], [0.6, -0.9]]),
    "shifted disk": Ellipsoid(np.eye(2), [0.5, 0.0]),
}
pairs = [((0.0, 1.0), (1.0, 0.0)), ((1.0, 0.0), (0.0, 1.0)), ((1.0, 0.5), (-0.3, 1.0))]

for name, g in gauges.items():
    print(name)
    for x, y in pairs:
        x, y = np.array(x), np.array(y)
        r = right_alpha_interval(g, x, y)
        r_eps = right_alpha_interval(g, x, y, 0.25 * g.eval(x))
        left = left_alpha_interval(g, x, y)
        iso = isosceles_alpha_interval(g, x, y)
        print(f"  x={x} y={y}")
        print(f"    right       [{r.lo:+.6f}, {r.hi:+.6f}]   eps=gamma(x)/4: [{r_eps.lo:+.6f}, {r_eps.hi:+.6f}]")
        print(f"    left        [{left.lo:+.6f}, {left.hi:+.6f}]")
        print(f"    isosceles   [{iso.lo:+.6f}, {iso.hi:+.6f}]")
