# The discrete operators and why they conserve mass.
#
# Nodes include the walls. Boundary nodes own half a cell, the Laplacian
# uses mirror ghosts, and taxis fluxes through the wall are zero. Against
# trapezoidal weights both operators then sum to zero up to round-off.

import numpy as np

from alarmtaxis import ATTRACT, REPEL, Field, build_grid, integrate, laplacian, taxis_divergence

rng = np.random.default_rng(0)

for ndim, n in ((1, 41), (2, 21), (3, 11)):
    g = build_grid(ndim, n, -0.5, 0.5)
    f = Field(g, rng.uniform(0, 3, g.shape))
    phi = Field(g, rng.normal(size=g.shape))
    print(f"{ndim}D, {g.size} nodes: "
          f"int lap f = {integrate(laplacian(f)):+.2e}, "
          f"int div(f grad phi) = {integrate(taxis_divergence(f, phi, ATTRACT, 1.0)):+.2e}")

# Second differences are exact on quadratics away from the walls
g = build_grid(1, 11, 0.0, 1.0)
x = g.axis(0)
print("lap x^2 at interior nodes:", np.round(laplacian(Field(g, x**2)).values[1:-1], 10))

# Sign convention: ATTRACT moves the carrier up the potential gradient.
# With a bump in the potential at the centre, mass flows towards it.
g = build_grid(1, 7, 0.0, 1.0)
bump = Field(g, [0, 0, 0, 1, 0, 0, 0])
ones = Field.constant(g, 1.0)
print("attract:", taxis_divergence(ones, bump, ATTRACT, 1.0).values)
print("repel:  ", taxis_divergence(ones, bump, REPEL, 1.0).values)
