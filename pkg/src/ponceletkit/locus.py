"""Centroid loci of Poncelet families and the checks built on them.

Loci are fitted in the frame where the outer conic is the unit circle.
CM0 and CM2 commute with affine maps, so a circle there is an ellipse
homothetic to the outer conic in the world frame; the falsifiable part of
every check is therefore the normalized-frame residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .centers import CenterKind, Polygon, center_of_mass, tangency_polygon
from .conics import (
    Conic,
    EllipseParams,
    dual_conic_wrt,
    normalizing_map,
    tangency_defect,
)
from .dynamics import PonceletFamily, certify_family, step_measures
from .errors import CollinearPoints, LocusError, PonceletError

POINT_LOCUS_SPREAD = 1e-9


@dataclass(frozen=True)
class LocusSample:
    t: float
    point: np.ndarray
    point_world: np.ndarray


@dataclass(frozen=True)
class CircleFit:
    """Best-fit circle; ``radius == 0`` marks a point locus."""

    u: float
    v: float
    radius: float
    rms_residual: float
    max_residual: float
    refined: bool = True

    @property
    def center(self) -> np.ndarray:
        return np.array([self.u, self.v])

    def residuals(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return np.abs(np.hypot(p[:, 0] - self.u, p[:, 1] - self.v) - self.radius)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one named check.

    Negative controls carry ``"negative control"`` in their name and pass
    when the measured value exceeds the tolerance.
    """

    check: str
    measured: float
    tolerance: float
    passed: bool
    context: str = ""
    skipped: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.passed or self.skipped

    def to_dict(self) -> dict:
        d = {"check": self.check, "measured": self.measured, "tolerance": self.tolerance, "pass": self.passed}
        if self.skipped:
            d["skipped"] = True
        if self.context:
            d["context"] = self.context
        return d


def describe(family: PonceletFamily) -> str:
    def g(x: float) -> str:
        return f"{x + 0.0:.6g}"  # + 0.0 folds -0 into 0

    (cx, cy), (a, b), tilt = family.outer.ellipse_params
    (ix, iy), (ia, ib), itilt = family.inner.ellipse_params
    return (f"n={family.n} k={family.k} outer=({g(cx)},{g(cy)};{g(a)},{g(b)};{g(tilt)}) "
            f"inner=({g(ix)},{g(iy)};{g(ia)},{g(ib)};{g(itilt)})")


def sample_grid(m: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(m) / m


def _polygons(family: PonceletFamily, t: float, contact: bool) -> tuple[Polygon, Polygon]:
    P = family.orbit_polygon(t)
    Pw = P.transformed(family.phi.inverse())
    if contact:
        return tangency_polygon(P, family.inner_normalized), tangency_polygon(Pw, family.inner)
    return P, Pw


def sample_locus(family: PonceletFamily, kind: CenterKind | str, m: int = 256,
                 use_contact_polygon: bool = False) -> list[LocusSample]:
    """Centroids of ``P_t`` (or of its contact polygon) at ``t = 2 pi j / m``.

    ``point`` is the centroid of the normalized-frame polygon and
    ``point_world`` that of the world-frame polygon.  For CM0 and CM2 the
    two are related by the normalizing map; for CM1 they are not unless
    that map is a similarity.
    """
    if m < 1:
        raise ValueError("m must be positive")
    kind = CenterKind(kind)
    out = []
    for t in sample_grid(m):
        try:
            P, Pw = _polygons(family, float(t), use_contact_polygon)
            out.append(LocusSample(float(t), center_of_mass(P, kind), center_of_mass(Pw, kind)))
        except PonceletError as exc:
            raise LocusError(float(t), exc) from exc
    return out


def fit_circle(points: Sequence) -> CircleFit:
    """Algebraic (Kasa) circle fit refined by orthogonal-distance least squares."""
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2 or len(p) < 3:
        raise ValueError("need at least 3 planar points")
    mean = p.mean(axis=0)
    q = p - mean
    spread = float(np.max(np.hypot(q[:, 0], q[:, 1])))
    if spread < POINT_LOCUS_SPREAD:
        return CircleFit(float(mean[0]), float(mean[1]), 0.0, 0.0, 0.0)

    q = q / spread
    A = np.column_stack([q, np.ones(len(q))])
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] < 1e-10 * s[0]:
        raise CollinearPoints("points are collinear; no finite circle fits them")
    coef, *_ = np.linalg.lstsq(A, -(q**2).sum(axis=1), rcond=None)
    c0 = -0.5 * coef[:2]
    r0 = math.sqrt(max(c0 @ c0 - coef[2], 0.0))

    def resid(x):
        return np.hypot(q[:, 0] - x[0], q[:, 1] - x[1]) - x[2]

    def jac(x):
        dx, dy = q[:, 0] - x[0], q[:, 1] - x[1]
        d = np.hypot(dx, dy)
        d[d == 0] = 1.0
        return np.column_stack([-dx / d, -dy / d, -np.ones(len(q))])

    x0 = np.array([c0[0], c0[1], r0])
    refined = True
    try:
        sol = least_squares(resid, x0, jac=jac, method="lm", xtol=1e-14, ftol=1e-15, gtol=1e-15, max_nfev=50)
        x = sol.x if sol.cost <= 0.5 * float(resid(x0) @ resid(x0)) else x0
        refined = sol.status > 0
    except (ValueError, np.linalg.LinAlgError):
        x, refined = x0, False

    center = mean + spread * x[:2]
    radius = abs(float(x[2])) * spread
    res = np.abs(np.hypot(p[:, 0] - center[0], p[:, 1] - center[1]) - radius)
    return CircleFit(float(center[0]), float(center[1]), radius,
                     float(math.sqrt(np.mean(res**2))), float(res.max()), refined)


def homothetic(a: Conic, b: Conic, rtol: float = 1e-9) -> bool:
    """Same axis ratio and orientation (any centers); two circles always qualify."""
    if a.is_circle(rtol) and b.is_circle(rtol):
        return True
    (_, (a1, b1), t1), (_, (a2, b2), t2) = a.ellipse_params, b.ellipse_params
    if a.is_circle(rtol) or b.is_circle(rtol):
        return False
    dt = abs(t1 - t2) % math.pi
    return abs(b1 / a1 - b2 / a2) <= rtol and min(dt, math.pi - dt) <= 1e-9


@dataclass(frozen=True)
class MainResult:
    report: VerificationReport
    fit: CircleFit
    world_ellipse: EllipseParams
    samples: list[LocusSample] = field(repr=False, default_factory=list)


def world_ellipse(family: PonceletFamily, fit: CircleFit) -> EllipseParams:
    """Image of a normalized-frame circle in the world frame: homothetic to the outer conic."""
    _, (a, b), tilt = family.outer.ellipse_params
    c = family.phi.inverse()(fit.center)
    return EllipseParams((float(c[0]), float(c[1])), (fit.radius * a, fit.radius * b), tilt)


def verify_theorem_main(family: PonceletFamily, kind: CenterKind | str = CenterKind.CM0,
                        m: int = 256, tol: float = 1e-6) -> MainResult:
    """Fit the centroid locus; CM0/CM2 pass on a small residual, CM1 (negative control) on a large one."""
    kind = CenterKind(kind)
    samples = sample_locus(family, kind, m)
    fit = fit_circle([s.point for s in samples])
    if kind is CenterKind.CM1:
        report = VerificationReport(f"main:{kind.value} (negative control)", fit.max_residual, 1e3 * tol,
                                    fit.max_residual > 1e3 * tol, describe(family))
    else:
        report = VerificationReport(f"main:{kind.value}", fit.max_residual, tol, fit.max_residual < tol,
                                    describe(family))
    return MainResult(report, fit, world_ellipse(family, fit), samples)


def weill_points(family: PonceletFamily, m: int) -> np.ndarray:
    return np.array([s.point_world for s in sample_locus(family, CenterKind.CM0, m, use_contact_polygon=True)])


def max_pairwise_distance(points) -> float:
    p = np.asarray(points, dtype=float)
    d = p[:, None, :] - p[None, :, :]
    return float(np.sqrt(np.max(np.sum(d**2, axis=-1))))


def verify_weill(family: PonceletFamily, m: int = 256, tol: float = 1e-8,
                 check_hypothesis: bool = True) -> VerificationReport:
    """Spread of the contact-polygon vertex centroid over the family.

    Without homothetic conics the check is skipped unless
    ``check_hypothesis`` is False, in which case the spread is still
    measured and judged against ``tol``.
    """
    if check_hypothesis and not homothetic(family.outer, family.inner):
        return VerificationReport("weill", math.nan, tol, False, "hypothesis-not-met, skipped", skipped=True)
    pts = weill_points(family, m)
    spread = max_pairwise_distance(pts)
    point = pts.mean(axis=0)
    return VerificationReport("weill", spread, tol, spread < tol, describe(family),
                              details={"weill_point": point.tolist()})


def verify_dual_poncelet(family: PonceletFamily, m: int = 64, tol: float = 1e-8,
                         fit_tol: float = 1e-6) -> VerificationReport:
    """Contact polygons are Poncelet for the polar dual of the outer conic w.r.t. the inner one.

    Also fits CM0 and CM2 of the contact polygons in the frame normalizing
    the inner conic, where they should be circles.
    """
    dual = dual_conic_wrt(family.outer, family.inner)
    psi = normalizing_map(family.inner)
    worst = 0.0
    cm0, cm2 = [], []
    for t in sample_grid(m):
        P = family.orbit_polygon(float(t), "world")
        try:
            Q = tangency_polygon(P, family.inner)
        except PonceletError as exc:
            raise LocusError(float(t), exc) from exc
        worst = max(worst, max(tangency_defect(dual, e) for e in Q.edges()))
        Qn = Q.transformed(psi)
        cm0.append(center_of_mass(Qn, CenterKind.CM0))
        cm2.append(center_of_mass(Qn, CenterKind.CM2))
    fit0, fit2 = fit_circle(cm0), fit_circle(cm2)
    passed = worst < tol and fit0.max_residual < fit_tol and fit2.max_residual < fit_tol
    return VerificationReport("dual", worst, tol, passed, describe(family),
                              details={"cm0_fit": fit0, "cm2_fit": fit2, "dual_conic": dual})


def dual_family(family: PonceletFamily, tol: float = 1e-8) -> PonceletFamily:
    """The (inner, dual) pair on which the contact polygons live, certified for the same (n, k)."""
    return certify_family(family.inner, dual_conic_wrt(family.outer, family.inner), family.n, family.k, tol=tol)


def verify_porism(family: PonceletFamily, samples: int = 32, seed: int = 0,
                  tol: float = 1e-8) -> VerificationReport:
    """Closure defect at seeded random starting angles."""
    rng = np.random.default_rng(seed)
    ts = rng.uniform(0.0, 2.0 * math.pi, samples)
    worst = max(family.closure_at(float(t))[0] for t in ts)
    return VerificationReport("porism", worst, tol, worst < tol, f"{describe(family)} seed={seed}")


def verify_measure(family: PonceletFamily, steps: int = 100, start: float = 0.0,
                   tol: float = 1e-6) -> VerificationReport:
    """Relative variation of the invariant measure of consecutive step arcs (circle pairs only)."""
    outer, inner = family.outer_normalized, family.inner_normalized
    if not inner.is_circle():
        return VerificationReport("measure", math.nan, tol, False, "hypothesis-not-met, skipped", skipped=True)
    mu = step_measures(outer, inner, start, steps)
    spread = float((mu.max() - mu.min()) / mu.mean())
    return VerificationReport("measure", spread, tol, spread < tol, describe(family),
                              details={"step_measure": float(mu.mean())})


SUITES = ("porism", "main", "weill", "dual", "measure")


def run_suite(family: PonceletFamily, suite: str = "all", m: int = 256, seed: int = 0,
              tol_closure: float = 1e-8, tol_fit: float = 1e-6) -> list[VerificationReport]:
    names = SUITES if suite == "all" else (suite,)
    reports: list[VerificationReport] = []
    for name in names:
        if name == "porism":
            reports.append(verify_porism(family, 32, seed, tol_closure))
        elif name == "main":
            for kind in CenterKind:
                reports.append(verify_theorem_main(family, kind, m, tol_fit).report)
        elif name == "weill":
            reports.append(verify_weill(family, m, tol_closure))
        elif name == "dual":
            reports.append(verify_dual_poncelet(family, min(m, 64), tol_closure, tol_fit))
        elif name == "measure":
            reports.append(verify_measure(family, 100, 0.0, tol_fit))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return reports
