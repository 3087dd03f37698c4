"""The Poncelet map on flags, rotation numbers, the invariant arc measure,
and the solver that tunes an inner conic until the map becomes periodic.

A flag is a vertex on the outer conic together with a line through it that
is tangent to the inner conic.  ``sigma`` slides the vertex along the line
to the other intersection with the outer conic, ``tau`` swaps the line for
the second tangent through the vertex, and the Poncelet map is
``tau o sigma``.  Every vertex also carries a continuous lift of its polar
angle in the frame where the outer conic is the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .centers import Polygon
from .conics import (
    AffineMap,
    Conic,
    Line,
    circle,
    conic_from_ellipse,
    evaluate,
    is_nested,
    normalize_outer,
    normalizing_map,
    other_intersection,
    tangent_lines_from_point,
)
from .errors import (
    Degenerate,
    InteriorPoint,
    NoBracket,
    NotACircle,
    NotCertified,
    QuadratureFailure,
    VertexInsideInner,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class Flag:
    """A vertex on the outer conic, the tangent line attached to it, and its lifted angle.

    ``line`` is the line the next ``sigma`` travels along; it is ``None``
    for a bare starting vertex.
    """

    vertex: np.ndarray
    line: Optional[Line]
    lifted_angle: float


class PonceletMap:
    """Poncelet dynamics for a fixed pair (outer, inner).

    The pair may live in any affine frame; lifted angles are always measured
    in the frame that sends ``outer`` to the unit circle.
    """

    def __init__(self, outer: Conic, inner: Conic):
        self.outer = outer
        self.inner = inner
        self.phi = normalizing_map(outer)
        self._phi_inv = self.phi.inverse()
        self._inner_center = inner.center

    def vertex_at(self, angle: float) -> np.ndarray:
        return self._phi_inv(np.array([math.cos(angle), math.sin(angle)]))

    def angle_of(self, p) -> float:
        q = self.phi(p)
        return math.atan2(q[1], q[0])

    def start(self, angle: float) -> Flag:
        return Flag(self.vertex_at(angle), None, float(angle))

    def _snap(self, p) -> np.ndarray:
        q = self.phi(p)
        return self._phi_inv(q / math.hypot(q[0], q[1]))

    def _tangents(self, p) -> list[Line]:
        if evaluate(self.inner, p) <= 0.0:
            raise VertexInsideInner(f"vertex {np.asarray(p).tolist()} is not outside the inner conic")
        lines = tangent_lines_from_point(self.inner, p)
        if not lines:
            raise VertexInsideInner(f"no tangent from {np.asarray(p).tolist()} to the inner conic")
        return lines

    def _inner_on_left(self, p, q) -> bool:
        d = np.asarray(q) - p
        w = self._inner_center - p
        return d[0] * w[1] - d[1] * w[0] > 0

    def ccw_line(self, p) -> Line:
        """The tangent through ``p`` whose chord keeps the inner conic on its left."""
        lines = self._tangents(p)
        for line in lines:
            q = other_intersection(self.outer, p, line)
            if self._inner_on_left(p, q):
                return line
        return lines[0]

    def sigma(self, f: Flag) -> Flag:
        line = f.line if f.line is not None else self.ccw_line(f.vertex)
        q = self._snap(other_intersection(self.outer, f.vertex, line))
        delta = (self.angle_of(q) - f.lifted_angle) % TWO_PI
        if not self._inner_on_left(f.vertex, q) and delta > 0:
            delta -= TWO_PI
        return Flag(q, line, f.lifted_angle + delta)

    def tau(self, f: Flag) -> Flag:
        lines = self._tangents(f.vertex)
        if f.line is None:
            return replace(f, line=self.ccw_line(f.vertex))
        if len(lines) == 1:
            return replace(f, line=lines[0])

        def gap(line):
            return min(np.linalg.norm(line.l - f.line.l), np.linalg.norm(line.l + f.line.l))

        return replace(f, line=max(lines, key=gap))

    def step(self, f: Flag) -> Flag:
        return self.tau(self.sigma(f))

    def orbit(self, angle: float, steps: int) -> list[Flag]:
        flags = [self.start(angle)]
        for _ in range(steps):
            flags.append(self.step(flags[-1]))
        return flags

    def lift_after(self, angle: float, steps: int) -> float:
        f = self.start(angle)
        for _ in range(steps):
            f = self.step(f)
        return f.lifted_angle


def poncelet_step(outer: Conic, inner: Conic, f: Flag) -> Flag:
    """One application of ``tau o sigma``; a bare vertex first picks its counterclockwise tangent."""
    return PonceletMap(outer, inner).step(f)


def rotation_number(outer: Conic, inner: Conic, iterations: int = 1000, start: float = 0.0) -> float:
    """Average lifted-angle advance per step over ``iterations`` steps, divided by 2 pi."""
    if iterations < 1:
        raise ValueError("iterations must be positive")
    lift = PonceletMap(outer, inner).lift_after(start, iterations)
    return (lift - start) / (TWO_PI * iterations)


def closure_defects(pmap: PonceletMap, n: int, k: int, t: float) -> tuple[float, float]:
    """(chordal, angular) closure defects of the n-step orbit starting at angle ``t``.

    The chordal defect is measured in the unit-circle frame.  The angular
    defect is signed: ``lift_n - t - 2 pi k``.
    """
    lift = pmap.lift_after(t, n)
    ang = lift - t - TWO_PI * k
    return abs(2.0 * math.sin(0.5 * ang)), ang


def tangent_length(inner: Conic, point) -> float:
    """Length of the tangent segment from ``point`` to the circle ``inner``."""
    if not inner.is_circle():
        raise NotACircle("tangent_length needs a circular inner conic")
    r = inner.ellipse_params.semi_axes[0]
    d2 = float(np.sum((np.asarray(point, dtype=float) - inner.center) ** 2))
    if d2 < r * r * (1.0 - 1e-12):
        raise InteriorPoint(f"{point} lies inside the circle")
    return math.sqrt(max(d2 - r * r, 0.0))


def measure_of_arc(outer: Conic, inner: Conic, theta1: float, theta2: float, tol: float = 1e-12) -> float:
    """Integral of arc length over tangent length along the outer circle from ``theta1`` to ``theta2``.

    Both conics must be circles with ``inner`` strictly inside ``outer``.
    """
    if not (outer.is_circle() and inner.is_circle()):
        raise NotACircle("the invariant measure is only defined here for pairs of circles")
    R = outer.ellipse_params.semi_axes[0]
    c = outer.center
    ci = inner.center
    r2 = inner.ellipse_params.semi_axes[0] ** 2
    if math.hypot(*(ci - c)) + math.sqrt(r2) >= R:
        raise InteriorPoint("inner circle is not strictly inside the outer one")

    def density(th):
        dx = c[0] + R * math.cos(th) - ci[0]
        dy = c[1] + R * math.sin(th) - ci[1]
        return R / math.sqrt(dx * dx + dy * dy - r2)

    val, err = quad(density, theta1, theta2, epsabs=tol, epsrel=0.0, limit=500)
    if not err <= tol:
        raise QuadratureFailure(f"quadrature error estimate {err:.3e} exceeds {tol:.1e}")
    return val


def step_measures(outer: Conic, inner: Conic, start: float, steps: int) -> np.ndarray:
    """Invariant measure of each arc ``[A_i, A_{i+1}]`` along a Poncelet orbit."""
    pmap = PonceletMap(outer, inner)
    lifts = [f.lifted_angle for f in pmap.orbit(start, steps)]
    return np.array([measure_of_arc(outer, inner, a, b) for a, b in zip(lifts[:-1], lifts[1:])])


def _check_nk(n: int, k: int) -> None:
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if not (1 <= k and 2 * k < n and math.gcd(n, k) == 1):
        raise ValueError(f"winding k={k} must satisfy 1 <= k < n/2 and gcd(n, k) = 1")


@dataclass(frozen=True, eq=False)
class PonceletFamily:
    """A certified pair of nested ellipses carrying an (n, k) Poncelet family.

    The family parameter ``t`` is the polar angle of the starting vertex in
    the frame ``phi`` that sends ``outer`` to the unit circle.
    """

    outer: Conic
    inner: Conic
    n: int
    k: int
    rho: float
    closure_defect: float
    angular_defect: float
    phi: AffineMap
    parameter: Optional[float] = None
    inner_normalized: Conic = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "inner_normalized", normalize_outer(self.outer, self.inner)[1])

    @property
    def outer_normalized(self) -> Conic:
        return conic_from_ellipse((0.0, 0.0), (1.0, 1.0))

    def pmap(self) -> PonceletMap:
        return PonceletMap(self.outer_normalized, self.inner_normalized)

    def orbit_polygon(self, t: float, frame: Literal["normalized", "world"] = "normalized") -> Polygon:
        """The Poncelet n-gon whose first vertex sits at angle ``t``."""
        flags = self.pmap().orbit(t, self.n - 1)
        P = Polygon(np.array([f.vertex for f in flags]))
        if frame == "world":
            return P.transformed(self.phi.inverse())
        return P

    def closure_at(self, t: float) -> tuple[float, float]:
        return closure_defects(self.pmap(), self.n, self.k, t)


def certify_family(outer: Conic, inner: Conic, n: int, k: int = 1, tol: float = 1e-8,
                   parameter: Optional[float] = None) -> PonceletFamily:
    """Check nesting and closure of (outer, inner) for period ``n`` and winding ``k``."""
    _check_nk(n, k)
    nested, clearance = is_nested(outer, inner)
    if not nested or clearance < 1e-6:
        raise Degenerate(f"inner conic is not strictly inside the outer one (clearance {clearance:.3e})")
    phi, inner_n = normalize_outer(outer, inner)
    pmap = PonceletMap(conic_from_ellipse((0.0, 0.0), (1.0, 1.0)), inner_n)
    chord, ang = closure_defects(pmap, n, k, 0.0)
    if not chord < tol:
        raise NotCertified(f"closure defect {chord:.3e} exceeds {tol:.1e} for (n, k) = ({n}, {k})")
    iters = n * math.ceil(1000 / n)
    rho = (pmap.lift_after(0.0, iters)) / (TWO_PI * iters)
    return PonceletFamily(outer, inner, n, k, rho, chord, ang, phi, parameter)


@dataclass(frozen=True)
class InnerTemplate:
    """An inner ellipse with one free parameter.

    ``free="radius"`` varies the major semi-axis (the minor one follows via
    ``aspect``); ``free="offset"`` moves the center along ``direction``
    from ``center``.
    """

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.5
    aspect: float = 1.0
    tilt: float = 0.0
    direction: tuple[float, float] = (1.0, 0.0)
    free: Literal["radius", "offset", "none"] = "radius"

    def conic(self, value: Optional[float] = None) -> Conic:
        center = np.asarray(self.center, dtype=float)
        radius = self.radius
        if self.free == "radius" and value is not None:
            radius = value
        elif self.free == "offset" and value is not None:
            d = np.asarray(self.direction, dtype=float)
            center = center + value * d / np.linalg.norm(d)
        return conic_from_ellipse(center, (radius, radius * self.aspect), self.tilt)


def _nested_limit(outer: Conic, template: InnerTemplate) -> float:
    """Largest free-parameter value that keeps the template inside ``outer``."""
    base = 0.0 if template.free == "offset" else 1e-3
    if not is_nested(outer, template.conic(base))[0]:
        raise Degenerate("template is not nested inside the outer conic even at its smallest size")
    lo, hi = base, 2.0 * max(outer.ellipse_params.semi_axes) + 2.0 * math.hypot(*template.center) + 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        try:
            ok = is_nested(outer, template.conic(mid))[0]
        except Exception:
            ok = False
        lo, hi = (mid, hi) if ok else (lo, mid)
    return lo


def find_periodic_family(outer: Conic, template: InnerTemplate, n: int, k: int = 1,
                         scan: int = 32, tol: float = 1e-8) -> PonceletFamily:
    """Solve the template's free parameter so the Poncelet map has rotation number k/n.

    The sign of ``rho - k/n`` equals the sign of the angular closure defect
    at any start (porism), so a scan up to just short of the nesting limit
    locates the single sign change and Brent's method polishes the defect to machine precision.
    """
    _check_nk(n, k)
    if template.free not in ("radius", "offset"):
        raise ValueError("template has no free parameter")
    limit = _nested_limit(outer, template)
    lo, hi = (0.05 * limit, 0.95 * limit) if template.free == "radius" else (0.0, 0.95 * limit)
    unit = conic_from_ellipse((0.0, 0.0), (1.0, 1.0))

    def defect(value: float) -> float:
        _, inner_n = normalize_outer(outer, template.conic(value))
        return closure_defects(PonceletMap(unit, inner_n), n, k, 0.0)[1]

    # extra points toward the nesting limit, where high-n families live
    grid = np.concatenate([np.linspace(lo, hi, scan), limit * (1.0 - np.array([0.02, 6e-3, 2e-3, 6e-4, 2e-4, 1e-4]))])
    vals = np.array([defect(v) for v in grid])
    signs = np.sign(vals)
    if np.any(signs == 0):
        root = float(grid[np.flatnonzero(signs == 0)[0]])
    else:
        changes = np.flatnonzero(signs[1:] != signs[:-1])
        if len(changes) != 1:
            raise NoBracket(f"rho - {k}/{n} changes sign {len(changes)} times on [{lo:.6g}, {grid[-1]:.6g}]")
        i = int(changes[0])
        root = brentq(defect, grid[i], grid[i + 1], xtol=1e-15, rtol=8.9e-16, maxiter=200)
    return certify_family(outer, template.conic(root), n, k, tol=tol, parameter=root)
