"""Family JSON, locus CSV and report JSON files."""

from __future__ import annotations

import json
import logging
import math
from typing import Iterable

import numpy as np

from .conics import Conic
from .dynamics import PonceletFamily, certify_family
from .errors import MissingFamily
from .locus import CircleFit, LocusSample, VerificationReport

log = logging.getLogger(__name__)

FAMILY_FORMAT = "ponceletkit-family/1"


def _conic_dict(c: Conic) -> dict:
    d = {"matrix": [float(x) for x in c.M.ravel()]}
    if c.ellipse_params is not None:
        center, axes, tilt = c.ellipse_params
        d.update(center=list(center), semi_axes=list(axes), tilt=tilt)
    return d


def family_to_dict(family: PonceletFamily) -> dict:
    return {
        "format": FAMILY_FORMAT,
        "n": family.n,
        "k": family.k,
        "rho": family.rho,
        "closure_defect": family.closure_defect,
        "angular_defect": family.angular_defect,
        "parameter": family.parameter,
        "outer": _conic_dict(family.outer),
        "inner": _conic_dict(family.inner),
        "phi": {"linear": [float(x) for x in family.phi.linear.ravel()],
                "translation": [float(x) for x in family.phi.translation]},
    }


def dumps_family(family: PonceletFamily) -> str:
    return json.dumps(family_to_dict(family), indent=2) + "\n"


def family_from_dict(d: dict, tol: float = 1e-8) -> PonceletFamily:
    """Rebuild a family and re-certify its closure.

    A stored ``closure_defect`` that disagrees with the recomputed one by
    more than ``tol`` is logged and replaced.
    """
    try:
        outer = Conic(np.reshape(d["outer"]["matrix"], (3, 3)))
        inner = Conic(np.reshape(d["inner"]["matrix"], (3, 3)))
        n, k = int(d["n"]), int(d["k"])
        stored = float(d["closure_defect"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MissingFamily(f"malformed family record: {exc}") from None
    family = certify_family(outer, inner, n, k, tol=tol, parameter=d.get("parameter"))
    if not abs(stored - family.closure_defect) <= tol:
        log.warning("stored closure_defect %.3e disagrees with recomputed %.3e; re-certified",
                    stored, family.closure_defect)
    return family


def load_family(path: str, tol: float = 1e-8) -> PonceletFamily:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except FileNotFoundError:
        raise MissingFamily(f"family file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise MissingFamily(f"cannot read family file {path}: {exc}") from None
    return family_from_dict(d, tol)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def locus_csv(samples: Iterable[LocusSample], fit: CircleFit | None = None, verdict: str = "") -> str:
    rows = ["t,x,y,x_world,y_world"]
    for s in samples:
        rows.append(",".join(fmt(v) for v in (s.t, s.point[0], s.point[1], s.point_world[0], s.point_world[1])))
    if fit is not None:
        rows.append(f"# fit u={fmt(fit.u)} v={fmt(fit.v)} radius={fmt(fit.radius)} "
                    f"rms_residual={fmt(fit.rms_residual)} max_residual={fmt(fit.max_residual)} "
                    f"refined={str(fit.refined).lower()}")
        if verdict:
            rows.append(f"# verdict {verdict}")
    return "\n".join(rows) + "\n"


def read_locus_csv(text: str) -> tuple[np.ndarray, dict]:
    """Parse rows into an ``(m, 5)`` array and the fit summary into a dict."""
    data, fit = [], {}
    lines = text.strip().splitlines()
    if not lines or lines[0] != "t,x,y,x_world,y_world":
        raise ValueError("not a locus CSV")
    for line in lines[1:]:
        if line.startswith("# fit "):
            for item in line[6:].split():
                key, val = item.split("=")
                fit[key] = val if key == "refined" else float(val)
        elif line.startswith("# verdict "):
            fit["verdict"] = line[10:]
        elif line:
            data.append([float(x) for x in line.split(",")])
    return np.array(data), fit


def fit_to_dict(fit: CircleFit) -> dict:
    return {"u": fit.u, "v": fit.v, "radius": fit.radius, "rms_residual": fit.rms_residual,
            "max_residual": fit.max_residual, "refined": fit.refined}


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def reports_json(reports: Iterable[VerificationReport]) -> str:
    out = [{k: _clean(v) for k, v in r.to_dict().items()} for r in reports]
    return json.dumps(out, indent=2) + "\n"
