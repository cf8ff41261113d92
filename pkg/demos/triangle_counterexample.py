"""Walk through the asymmetric triangle gauge max(-x2, x2 - x1, x2 + x1).

Best approximation and co-approximation of y = (0, 1) in the x-axis differ,
and the Birkhoff condition fails for a genuine co-approximation.
"""

import numpy as np

from gaugeorth import (
    Subspace,
    best_approx_membership,
    best_approximation,
    birkhoff_test,
    coapprox_membership_sampled,
    coapprox_sufficient_test,
    line_minimum,
    triangle_gauge,
)

g = triangle_gauge()
U = Subspace([[1.0, 0.0]])
y = np.array([0.0, 1.0])

print("unit ball vertices:")
for v in g.polar().facet_normals:
    print("  ", v, "gamma =", g.eval(v))

res = best_approximation(g, U, y)
print("\ndistance from y to the x-axis:", res.value)
print("one minimiser:", res.point, " certificate:", res.certificate)
best = [float(t) for t in np.linspace(-3, 3, 13) if best_approx_membership(g, U, y, 0.0, [t, 0.0])]
print("best approximations on a grid of the axis:", best)

co = [float(t) for t in np.linspace(-3, 3, 13) if coapprox_membership_sampled(g, U, y, 0.0, [t, 0.0])]
print("co-approximations on the same grid:      ", co)

z = np.array([1.0, 0.0])
lam, m = line_minimum(g, z, y)
print(f"\nmin over lambda of gamma(z + lambda y) = {m} at lambda = {lam}; gamma(z) = {g.eval(z)}")
print("z Birkhoff orthogonal to y:", birkhoff_test(g, z, y))
print("origin passes the sufficient test:", coapprox_sufficient_test(g, U, y, [0.0, 0.0]))
