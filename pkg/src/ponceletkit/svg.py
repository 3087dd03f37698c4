"""SVG frames of a spinning Poncelet polygon, drawn in the normalized frame."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .centers import CenterKind, center_of_mass, tangency_polygon
from .conics import Conic
from .dynamics import PonceletFamily
from .errors import CenterError

VIEWBOX = "-1.2 -1.2 2.4 2.4"
MARKER_COLORS = {CenterKind.CM0: "#d62728", CenterKind.CM1: "#2ca02c", CenterKind.CM2: "#1f77b4"}


def _n(x: float) -> str:
    s = format(float(x), ".10g")
    return "0" if s == "-0" else s


def _ellipse(c: Conic, cls: str) -> str:
    (cx, cy), (a, b), tilt = c.ellipse_params
    return (f'<ellipse class="{cls}" cx="{_n(cx)}" cy="{_n(cy)}" rx="{_n(a)}" ry="{_n(b)}" '
            f'transform="rotate({_n(math.degrees(tilt))} {_n(cx)} {_n(cy)})"/>')


def _path(points: np.ndarray, cls: str) -> str:
    pts = " L ".join(f"{_n(x)},{_n(y)}" for x, y in points)
    return f'<path class="{cls}" d="M {pts} Z"/>'


def render_frame(family: PonceletFamily, t: float, trace: Sequence = (), trace_kind: Optional[CenterKind] = None,
                 contact: bool = False) -> str:
    """One SVG document: both conics, ``P_t``, optionally ``Q_t``, centroid markers and the trace so far."""
    P = family.orbit_polygon(t)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{VIEWBOX}" width="600" height="600">',
        "<style>ellipse{fill:none;stroke:#444;stroke-width:0.006}"
        ".poncelet{fill:none;stroke:#000;stroke-width:0.008}"
        ".contact{fill:none;stroke:#888;stroke-width:0.005;stroke-dasharray:0.02 0.01}"
        ".trace{fill:none;stroke:#d62728;stroke-width:0.004}</style>",
        '<g transform="scale(1,-1)">',
        _ellipse(family.outer_normalized, "outer"),
        _ellipse(family.inner_normalized, "inner"),
        _path(P.vertices, "poncelet"),
    ]
    if contact:
        parts.append(_path(tangency_polygon(P, family.inner_normalized).vertices, "contact"))
    if len(trace):
        pts = " ".join(f"{_n(x)},{_n(y)}" for x, y in trace)
        cls = f"trace {trace_kind.value}" if trace_kind else "trace"
        parts.append(f'<polyline class="{cls}" points="{pts}"/>')
    for kind in CenterKind:
        try:
            x, y = center_of_mass(P, kind)
        except CenterError:
            continue
        parts.append(f'<circle class="marker {kind.value}" cx="{_n(x)}" cy="{_n(y)}" r="0.012" '
                     f'fill="{MARKER_COLORS[kind]}"/>')
    parts += ["</g>", "</svg>"]
    return "\n".join(parts) + "\n"


def render_frames(family: PonceletFamily, frames: int, trace_kind: Optional[CenterKind | str] = None,
                  contact: bool = False) -> list[str]:
    """``frames`` documents at ``t = 2 pi j / frames``, each carrying the trace up to frame ``j``."""
    if frames < 1:
        raise ValueError("frames must be at least 1")
    kind = CenterKind(trace_kind) if trace_kind else None
    docs, trace = [], []
    for j in range(frames):
        t = 2.0 * math.pi * j / frames
        if kind is not None:
            P = family.orbit_polygon(t)
            trace.append(center_of_mass(tangency_polygon(P, family.inner_normalized) if contact else P, kind))
        docs.append(render_frame(family, t, trace, kind, contact))
    return docs
