"""
Directional jets through a smooth map
=====================================

Push first- and second-order directional derivatives through a planar
polynomial map and compare the analytic route against the pure
finite-difference oracle.
"""

import numpy as np

from bdp import fd_oracle, polynomial_map, push_jet1, push_jet2

# f(x, y) = (x + 0.3 x y, y - 0.2 x^2)
m = polynomial_map(
    [
        [(1.0, (1, 0)), (0.3, (1, 1))],
        [(1.0, (0, 1)), (-0.2, (2, 0))],
    ],
    name="demo-quadratic",
)

x = np.array([0.4, -0.1])
u = np.array([1.0, 0.0])
v = np.array([0.6, 0.8])

j1 = push_jet1(m, x, v)
print("value      ", j1.value)
print("D f(x)·v   ", j1.deriv)

j2 = push_jet2(m, x, u, v)
print("D² f(x)(u,v)", j2.second)

ref = fd_oracle(m, x, u, v)
print("oracle gap  first  %.3e" % np.linalg.norm(j2.first - ref.first))
print("oracle gap  second %.3e" % np.linalg.norm(j2.second - ref.second))
