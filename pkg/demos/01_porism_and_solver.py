"""Closing Poncelet polygons by tuning one parameter of the inner circle."""
import math

import numpy as np

from ponceletkit import InnerTemplate, circle, find_periodic_family, rotation_number, unit_circle

# Start with a fixed outer circle and an inner circle centered at (0.2, 0).
# Shrinking the inner circle lowers the rotation number of the Poncelet map.
for r in (0.3, 0.5, 0.7, 0.74, 0.78):
    print(f"inner radius {r:.2f}: rotation number {rotation_number(unit_circle(), circle((0.2, 0), r), 2000):.6f}")

# The solver finds the radius at which pentagons close up.
fam = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)
print("solved radius", fam.parameter, "closure defect", fam.closure_defect)

# Porism: every starting point now closes after five steps.
rng = np.random.default_rng(0)
for t in rng.uniform(0, 2 * math.pi, 5):
    chord, _ = fam.closure_at(float(t))
    print(f"start {t:.3f}: gap after 5 steps {chord:.2e}")

# Classical checks. Triangles: d^2 = R(R - 2r).  Quadrilaterals: Fuss's relation.
tri = find_periodic_family(unit_circle(), InnerTemplate(radius=0.4, free="offset"), 3, 1)
print("triangle offset", tri.parameter, "vs sqrt(0.2) =", math.sqrt(0.2))
quad = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 4, 1)
print("quad radius", quad.parameter, "Fuss residual",
      1 / 0.8**2 + 1 / 1.2**2 - 1 / quad.parameter**2)

# Star polygons use k > 1.
star = find_periodic_family(unit_circle(), InnerTemplate(free="radius"), 5, 2)
print("pentagram radius", star.parameter, "cos(2pi/5) =", math.cos(2 * math.pi / 5))
