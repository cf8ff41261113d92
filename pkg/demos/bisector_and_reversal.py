"""Sample the bisector of -x and x, then check planar orthogonality reversal."""

import numpy as np

from gaugeorth import (
    Ellipsoid,
    bisector_sample,
    boundary_reversal_check_2d,
    circle_directions,
    triangle_gauge,
    unique_bisector_guarantee,
)

x = np.array([1.0, 0.0])
for name, g in (("triangle", triangle_gauge()), ("shifted disk", Ellipsoid(np.eye(2), [0.5, 0.0]))):
    print(name)
    for e in bisector_sample(g, x, circle_directions(8)):
        kind = "segment" if e.interval.width > 1e-9 else "point"
        print(f"  direction {np.round(e.direction, 3) + 0.0}: {kind} {(np.round(e.points, 6) + 0.0).tolist()}"
              f"  guaranteed unique: {unique_bisector_guarantee(g, x, e.direction)}")
    for orientation in ("clockwise", "counterclockwise"):
        rep = boundary_reversal_check_2d(g, orientation=orientation)
        print(f"  reversal ({orientation}): max slack {rep.max_slack:.3e} over {rep.n_points} points")
