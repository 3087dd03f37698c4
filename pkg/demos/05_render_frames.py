"""Write an SVG animation of the spinning pentagon with its cm0 trace."""
import pathlib
import sys

from ponceletkit import InnerTemplate, find_periodic_family, unit_circle
from ponceletkit.svg import render_frames

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "frames")
out.mkdir(exist_ok=True)
fam = find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)
for j, doc in enumerate(render_frames(fam, 60, "cm0", contact=True)):
    (out / f"frame_{j:04d}.svg").write_text(doc)
print("wrote 60 frames to", out)
