"""Real projective conics, lines, polarity and affine normalization.

A conic is stored as its symmetric 3x3 matrix ``M`` acting on homogeneous
points ``(x, y, 1)``.  The matrix is scaled to unit Frobenius norm and its
sign is fixed so that the quadratic form is negative inside an ellipse.
All objects are immutable; all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NonPositiveAxis, NotOnConic, PointAtInfinity, SingularConic

DET_EPS = 1e-12
DISC_EPS = 1e-12
ON_CONIC_TOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def homogeneous(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape == (2,):
        return np.array([p[0], p[1], 1.0])
    return np.concatenate([p, np.ones(p.shape[:-1] + (1,))], axis=-1)


class ConicKind(str, Enum):
    ELLIPSE = "ellipse"
    DEGENERATE = "degenerate"
    NON_ELLIPSE = "non-ellipse"


class EllipseParams(NamedTuple):
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    tilt: float


class Conic:
    """Symmetric 3x3 quadratic form with cached ellipse parameters.

    Parameters
    ----------
    matrix : array_like, shape (3, 3)
        Any nonzero matrix; it is symmetrized and normalized.
    """

    __slots__ = ("M", "kind", "ellipse_params", "_dual")

    def __init__(self, matrix):
        M = np.array(matrix, dtype=float)
        if M.shape != (3, 3):
            raise ValueError(f"conic matrix must be 3x3, got {M.shape}")
        M = 0.5 * (M + M.T)
        norm = np.linalg.norm(M)
        if not np.isfinite(norm) or norm == 0.0:
            raise SingularConic("conic matrix is zero or not finite")
        M = M / norm
        tr = M[0, 0] + M[1, 1]
        if tr < 0 or (tr == 0 and M[2, 2] > 0):
            M = -M
        self.M = _frozen(M)
        adj = _adjugate(M)
        self._dual = _frozen(adj / np.linalg.norm(adj)) if np.any(adj) else _frozen(adj)

        det_m = np.linalg.det(M)
        det_a = M[0, 0] * M[1, 1] - M[0, 1] ** 2
        if abs(det_m) < DET_EPS:
            self.kind = ConicKind.DEGENERATE
            self.ellipse_params = None
        elif det_a > 0 and det_m / det_a < 0:
            self.kind = ConicKind.ELLIPSE
            self.ellipse_params = _ellipse_params(M, det_m / det_a)
        else:
            self.kind = ConicKind.NON_ELLIPSE
            self.ellipse_params = None

    def __repr__(self):
        if self.ellipse_params is not None:
            c, ax, tilt = self.ellipse_params
            return f"Conic(ellipse center={c}, semi_axes={ax}, tilt={tilt:.6g})"
        return f"Conic({self.kind.value}, M={self.M.tolist()})"

    @property
    def is_ellipse(self) -> bool:
        return self.kind is ConicKind.ELLIPSE

    def is_circle(self, rtol: float = 1e-9) -> bool:
        if not self.is_ellipse:
            return False
        a, b = self.ellipse_params.semi_axes
        return a - b <= rtol * a

    @property
    def center(self) -> np.ndarray:
        return np.array(self.ellipse_params.center)

    def dual_matrix(self) -> np.ndarray:
        """Adjugate of ``M`` scaled to unit Frobenius norm (the line conic)."""
        return self._dual

    def distance_to(self, other: "Conic") -> float:
        """Frobenius distance between the normalized matrices."""
        return float(np.linalg.norm(self.M - other.M))


def _adjugate(M: np.ndarray) -> np.ndarray:
    C = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = M[np.ix_(rows, cols)]
            C[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return C.T


def _ellipse_params(M: np.ndarray, c_center: float) -> EllipseParams:
    A = M[:2, :2]
    center = np.linalg.solve(A, -M[:2, 2])
    # (p - center)^T A (p - center) = -c_center on the ellipse
    lam, vec = np.linalg.eigh(A / (-c_center))
    a, b = 1.0 / math.sqrt(lam[0]), 1.0 / math.sqrt(lam[1])
    if a - b <= 1e-12 * a:
        tilt = 0.0
    else:
        tilt = math.atan2(vec[1, 0], vec[0, 0]) % math.pi
    return EllipseParams((float(center[0]), float(center[1])), (a, b), tilt)


def unit_circle() -> Conic:
    return Conic(np.diag([1.0, 1.0, -1.0]))


def conic_from_ellipse(center: Sequence[float], semi_axes: Sequence[float], tilt: float = 0.0) -> Conic:
    """Conic through the ellipse with given center, semi-axes and tilt (radians).

    The semi-axes may be passed in either order; ``tilt`` is the angle of
    the first one.
    """
    a, b = map(float, semi_axes)
    if not (a > 0 and b > 0):
        raise NonPositiveAxis(f"semi-axes must be positive, got {(a, b)}")
    c, s = math.cos(tilt), math.sin(tilt)
    R = np.array([[c, -s], [s, c]])
    A = R @ np.diag([1.0 / a**2, 1.0 / b**2]) @ R.T
    x0 = np.asarray(center, dtype=float)
    M = np.empty((3, 3))
    M[:2, :2] = A
    M[:2, 2] = M[2, :2] = -A @ x0
    M[2, 2] = x0 @ A @ x0 - 1.0
    return Conic(M)


def circle(center: Sequence[float], radius: float) -> Conic:
    return conic_from_ellipse(center, (radius, radius), 0.0)


def evaluate(c: Conic, p) -> float | np.ndarray:
    """Value of the normalized quadratic form at ``(p, 1)``; works on stacks of points."""
    ph = homogeneous(p)
    return np.einsum("...i,ij,...j->...", ph, c.M, ph)


@dataclass(frozen=True, eq=False)
class Line:
    """Affine line ``l[0] x + l[1] y + l[2] = 0`` with ``|(l[0], l[1])| = 1``."""

    l: np.ndarray

    def __post_init__(self):
        v = np.array(self.l, dtype=float).reshape(3)
        n = math.hypot(v[0], v[1])
        if n < 1e-300 or not np.all(np.isfinite(v)):
            raise PointAtInfinity(f"not an affine line: {v.tolist()}")
        object.__setattr__(self, "l", _frozen(v / n))

    @classmethod
    def through(cls, p, q) -> "Line":
        return cls(np.cross(homogeneous(p), homogeneous(q)))

    @property
    def direction(self) -> np.ndarray:
        return np.array([-self.l[1], self.l[0]])

    def at(self, p) -> float:
        """Signed distance of ``p`` from the line."""
        return float(self.l @ homogeneous(p))

    def same_as(self, other: "Line", tol: float = 1e-9) -> bool:
        return min(np.linalg.norm(self.l - other.l), np.linalg.norm(self.l + other.l)) < tol


def tangency_defect(c: Conic, line: Line) -> float:
    """|l^T M* l| with the dual matrix normalized; zero iff ``line`` is tangent to ``c``."""
    return abs(float(line.l @ c.dual_matrix() @ line.l))


def tangent_lines_from_point(c: Conic, p) -> list[Line]:
    """Lines through ``p`` tangent to ``c``: two outside, one on the conic, none inside.

    The pencil of lines through ``p`` is spanned by an orthonormal basis of
    the plane orthogonal to ``(p, 1)``; restricting the dual conic to it
    leaves a binary quadratic form whose isotropic directions are the
    tangents.
    """
    ph = homogeneous(p)
    _, _, vt = np.linalg.svd(ph[None, :])
    B = vt[1:].T
    Q = B.T @ c.dual_matrix() @ B
    disc = Q[0, 1] ** 2 - Q[0, 0] * Q[1, 1]
    mu, V = np.linalg.eigh(Q)
    if disc < -DISC_EPS:
        return []
    if disc <= DISC_EPS:
        w = V[:, np.argmin(np.abs(mu))]
        return [Line(B @ w)]
    # mu[0] < 0 < mu[1]
    s0, s1 = math.sqrt(mu[1]), math.sqrt(-mu[0])
    return [Line(B @ (V @ np.array([s0, s1]))), Line(B @ (V @ np.array([s0, -s1])))]


def other_intersection(c: Conic, p, line: Line) -> np.ndarray:
    """Second intersection of ``line`` (through ``p``) with ``c``, ``p`` being the first.

    Along ``q = p + s d`` the form is ``a s^2 + b s + f``.  The root near 0
    belongs to ``p``; the far one is ``q_/a`` with ``q_ = -(b + sign(b) sqrt(disc))/2``,
    which is free of cancellation.  A tangent line gives back ``p``.
    """
    p = np.asarray(p, dtype=float)
    f = float(evaluate(c, p))
    if abs(f) > ON_CONIC_TOL:
        raise NotOnConic(f"point {p.tolist()} is off the conic (value {f:.3e})")
    if abs(line.at(p)) > ON_CONIC_TOL:
        raise NotOnConic(f"line does not pass through {p.tolist()}")
    d = line.direction
    ph = homogeneous(p)
    a = float(d @ c.M[:2, :2] @ d)
    b = 2.0 * float(d @ (c.M[:2, :] @ ph))
    if a == 0.0:
        return p.copy()
    disc = b * b - 4.0 * a * f
    # f carries rounding of order eps |ph|^2 (|M| = 1); a discriminant below
    # what that noise can produce is a double root: the line touches the conic
    noise = 64.0 * np.finfo(float).eps * float(ph @ ph)
    if disc <= 4.0 * abs(a) * noise:
        return p - (0.5 * b / a) * d
    q_ = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    return p + (q_ / a) * d


def polar_of_point(c: Conic, p) -> Line:
    return Line(c.M @ homogeneous(p))


def pole_of_line(c: Conic, line: Line) -> np.ndarray:
    """Pole of ``line``; for a tangent line this is the contact point."""
    x = np.linalg.solve(c.M, line.l)
    x = x / np.linalg.norm(x)
    if abs(x[2]) < 1e-12:
        raise PointAtInfinity(f"pole of {line.l.tolist()} is at infinity")
    return x[:2] / x[2]


def dual_conic_wrt(outer: Conic, inner: Conic) -> Conic:
    """Polar dual of ``outer`` with respect to ``inner``: the conic ``inner outer^-1 inner``.

    Its tangent lines are the ``inner``-polars of the points of ``outer``.
    """
    if abs(np.linalg.det(outer.M)) < DET_EPS:
        raise SingularConic("outer conic is not invertible")
    G = inner.M @ np.linalg.solve(outer.M, inner.M)
    return Conic(G)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``p -> linear @ p + translation``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        L = np.array(self.linear, dtype=float).reshape(2, 2)
        t = np.array(self.translation, dtype=float).reshape(2)
        if abs(np.linalg.det(L)) < DET_EPS:
            raise SingularConic("affine map is not invertible")
        object.__setattr__(self, "linear", _frozen(L))
        object.__setattr__(self, "translation", _frozen(t))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def similarity(cls, angle: float, scale: float, translation) -> "AffineMap":
        c, s = math.cos(angle), math.sin(angle)
        return cls(scale * np.array([[c, -s], [s, c]]), translation)

    def __call__(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float) @ self.linear.T + self.translation

    def matrix(self) -> np.ndarray:
        H = np.eye(3)
        H[:2, :2] = self.linear
        H[:2, 2] = self.translation
        return H

    def inverse(self) -> "AffineMap":
        Li = np.linalg.inv(self.linear)
        return AffineMap(Li, -Li @ self.translation)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other`` (apply ``other`` first)."""
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    def is_similarity(self, tol: float = 1e-12) -> bool:
        G = self.linear.T @ self.linear
        return abs(G[0, 1]) <= tol * G[0, 0] and abs(G[0, 0] - G[1, 1]) <= tol * G[0, 0]


def push_forward(c: Conic, phi: AffineMap) -> Conic:
    """Image of ``c`` under ``phi``."""
    Hi = np.linalg.inv(phi.matrix())
    return Conic(Hi.T @ c.M @ Hi)


def push_forward_line(line: Line, phi: AffineMap) -> Line:
    return Line(np.linalg.inv(phi.matrix()).T @ line.l)


def normalizing_map(c: Conic) -> AffineMap:
    """Affine map taking the ellipse ``c`` onto the unit circle at the origin."""
    if not c.is_ellipse:
        raise SingularConic(f"cannot normalize a {c.kind.value} conic")
    (cx, cy), (a, b), tilt = c.ellipse_params
    co, si = math.cos(tilt), math.sin(tilt)
    L = np.diag([1.0 / a, 1.0 / b]) @ np.array([[co, si], [-si, co]])
    return AffineMap(L, -L @ np.array([cx, cy]))


def normalize_outer(outer: Conic, inner: Conic) -> tuple[AffineMap, Conic]:
    """Translate, rotate and scale so ``outer`` becomes the unit circle; return the map and image of ``inner``."""
    phi = normalizing_map(outer)
    return phi, push_forward(inner, phi)


def is_nested(outer: Conic, inner: Conic, samples: int = 720) -> tuple[bool, float]:
    """Whether ``inner`` lies strictly inside ``outer``, and the minimum clearance.

    Clearance is measured in the frame normalizing ``outer`` as
    ``1 - max |p|`` over ``inner``; it is negative when they cross.
    """
    phi, inner_n = normalize_outer(outer, inner)
    if not inner_n.is_ellipse:
        return False, -math.inf
    (cx, cy), (a, b), tilt = inner_n.ellipse_params
    th = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)

    def radius(theta):
        x = a * np.cos(theta)
        y = b * np.sin(theta)
        co, si = math.cos(tilt), math.sin(tilt)
        return np.hypot(cx + co * x - si * y, cy + si * x + co * y)

    r = radius(th)
    i = int(np.argmax(r))
    # bounded polish of the farthest sample
    step = 2 * math.pi / samples
    res = minimize_scalar(lambda s: -radius(s), bounds=(th[i] - step, th[i] + step), method="bounded",
                          options={"xatol": 1e-12})
    rmax = max(float(r[i]), float(-res.fun))
    clearance = 1.0 - rmax
    return clearance > 0, clearance
