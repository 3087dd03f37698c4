"""Contact polygons: a fixed centroid for circles, and a Poncelet family of their own."""
import numpy as np

from ponceletkit import InnerTemplate, find_periodic_family, unit_circle
from ponceletkit.conics import dual_conic_wrt
from ponceletkit.locus import dual_family, verify_dual_poncelet, weill_points

tri = find_periodic_family(unit_circle(), InnerTemplate(radius=0.4, free="offset"), 3, 1)
pts = weill_points(tri, 64)
print("vertex centroid of the contact triangle, first samples:\n", pts[:4])
print("spread over the family:", np.ptp(pts, axis=0))
print("closed form I + (r/3R)(I - O):", tri.parameter * (1 + 0.4 / 3))

# The contact polygons are inscribed in the inner circle and circumscribe the polar dual
# of the outer conic with respect to the inner one.
fam = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)
print("dual conic:", dual_conic_wrt(fam.outer, fam.inner))
rep = verify_dual_poncelet(fam)
print("worst tangency defect of contact edges:", rep.measured)
print("that pair closes on its own:", dual_family(fam).closure_defect)
