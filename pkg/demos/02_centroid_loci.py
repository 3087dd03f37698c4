"""Where do the centroids of a spinning Poncelet polygon go?"""
import numpy as np

from ponceletkit import InnerTemplate, conic_from_ellipse, find_periodic_family, unit_circle
from ponceletkit.locus import verify_theorem_main

fam = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)

# Vertex centroid (cm0) and area centroid (cm2) each trace a circle, and not the same one.
for kind in ("cm0", "cm2", "cm1"):
    fit = verify_theorem_main(fam, kind, 256).fit
    print(f"{kind}: center ({fit.u:.6f}, {fit.v:.6f}) radius {fit.radius:.6e} max residual {fit.max_residual:.1e}")

# The perimeter centroid cm1 is a circle too when both conics are circles.
# With an elliptical inner conic it visibly is not.
skew = find_periodic_family(unit_circle(), InnerTemplate(center=(0.1, 0.1), aspect=0.5, tilt=0.5, free="radius"), 3, 1)
for kind in ("cm0", "cm1", "cm2"):
    print(f"skewed triangles, {kind}: max residual {verify_theorem_main(skew, kind).fit.max_residual:.1e}")

# With an elliptical outer conic the world-frame locus is an ellipse homothetic to it.
outer = conic_from_ellipse((0.0, 0.0), (2.0, 1.0), 0.0)
ell = find_periodic_family(outer, InnerTemplate(center=(0.3, 0.05), radius=1.0, aspect=0.6, free="radius"), 5, 1)
res = verify_theorem_main(ell, "cm0")
center, (a, b), tilt = res.world_ellipse
print("world locus ellipse: center", np.round(center, 6), "axes", (a, b), "ratio", b / a, "tilt", tilt)
