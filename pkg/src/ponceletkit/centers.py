"""Centers of mass of closed polygons, possibly self-intersecting.

Three centers are offered: the vertex centroid (CM0), the centroid of the
boundary with uniform linear density (CM1), and the centroid of the lamina
(CM2), where the area of a non-embedded polygon is counted with sign and
multiplicity.  Sums go through ``math.fsum``.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .conics import AffineMap, Conic, Line, evaluate, pole_of_line, tangency_defect
from .errors import EdgeNotTangent, ZeroPerimeter, ZeroSignedArea


class CenterKind(str, Enum):
    CM0 = "cm0"
    CM1 = "cm1"
    CM2 = "cm2"


class Polygon:
    """Closed polygon with cyclically indexed vertices, shape ``(n, 2)``."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError(f"polygon needs at least 3 planar vertices, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("polygon vertices must be finite")
        v.setflags(write=False)
        self.vertices = v

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Polygon(n={len(self)}, vertices={self.vertices.tolist()})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def next_vertices(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0)

    @property
    def side_lengths(self) -> np.ndarray:
        d = self.next_vertices - self.vertices
        return np.hypot(d[:, 0], d[:, 1])

    @property
    def cross_terms(self) -> np.ndarray:
        """``x_i y_{i+1} - x_{i+1} y_i``."""
        v, w = self.vertices, self.next_vertices
        return v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]

    @property
    def perimeter(self) -> float:
        return math.fsum(self.side_lengths)

    @property
    def signed_area(self) -> float:
        return 0.5 * math.fsum(self.cross_terms)

    @property
    def diameter(self) -> float:
        v = self.vertices
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff**2, axis=-1))))

    def reversed(self) -> "Polygon":
        return Polygon(self.vertices[::-1])

    def rolled(self, shift: int) -> "Polygon":
        return Polygon(np.roll(self.vertices, shift, axis=0))

    def transformed(self, phi: AffineMap) -> "Polygon":
        return Polygon(phi(self.vertices))

    def edges(self) -> list[Line]:
        return [Line.through(p, q) for p, q in zip(self.vertices, self.next_vertices)]


def _fsum_rows(weights: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(weights * points[:, 0]), math.fsum(weights * points[:, 1])])


def center_of_mass(P: Polygon, kind: CenterKind | str = CenterKind.CM0) -> np.ndarray:
    """CM0, CM1 or CM2 of ``P``.

    CM1 and CM2 are evaluated after translating the vertex centroid to the
    origin; the formulas are translation-equivariant, so this changes only
    rounding.
    """
    kind = CenterKind(kind)
    v = P.vertices
    n = len(v)
    origin = np.array([math.fsum(v[:, 0]) / n, math.fsum(v[:, 1]) / n])
    if kind is CenterKind.CM0:
        return origin

    Q = Polygon(v - origin)
    mids = Q.vertices + Q.next_vertices
    if kind is CenterKind.CM1:
        lengths = Q.side_lengths
        L = math.fsum(lengths)
        if not L > 1e-12:
            raise ZeroPerimeter(f"perimeter L(P) = {L:.3e} vanishes")
        return origin + _fsum_rows(lengths, mids) / (2.0 * L)

    d = Q.cross_terms
    A = 0.5 * math.fsum(d)
    if abs(A) < 1e-12 * Q.diameter**2 or A == 0.0:
        raise ZeroSignedArea(f"signed area A(P) = {A:.3e} vanishes relative to diameter {Q.diameter:.3e}")
    return origin + _fsum_rows(d, mids) / (6.0 * A)


def tangency_polygon(P: Polygon, inner: Conic, tol: float = 1e-8) -> Polygon:
    """Polygon of contact points of the sides of ``P`` with ``inner``.

    Raises ``EdgeNotTangent`` naming the first side whose dual-form defect
    exceeds ``tol``.
    """
    contacts = []
    for i, line in enumerate(P.edges()):
        defect = tangency_defect(inner, line)
        if defect > tol:
            raise EdgeNotTangent(i, defect)
        q = pole_of_line(inner, line)
        contacts.append(q)
    Q = Polygon(contacts)
    worst = float(np.max(np.abs(evaluate(inner, Q.vertices))))
    if worst > 1e-9:
        raise EdgeNotTangent(int(np.argmax(np.abs(evaluate(inner, Q.vertices)))), worst)
    return Q
