"""An invariant measure for the Poncelet map of two circles."""
import math

from ponceletkit import InnerTemplate, circle, find_periodic_family, unit_circle
from ponceletkit.dynamics import measure_of_arc, step_measures

fam = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)

# Arcs swept by one step have the same measure wherever they start.
mu = step_measures(fam.outer, fam.inner, 0.0, 20)
print("step measures:", mu[:5], "relative spread", (mu.max() - mu.min()) / mu.mean())
print("five steps make a full turn:", 5 * mu.mean(), "=", measure_of_arc(fam.outer, fam.inner, 0, 2 * math.pi))

# Not a periodic pair: the measure is still invariant, so the map is conjugate to a rotation.
mu = step_measures(unit_circle(), circle((0.3, 0.1), 0.37), 1.0, 20)
print("irrational-looking pair, relative spread", (mu.max() - mu.min()) / mu.mean())
