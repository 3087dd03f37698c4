"""Run configuration: a flat ``key = value`` file with [outer], [inner] and [run] sections.

Example::

    [outer]
    center = 0, 0
    axes = 1, 1
    tilt = 0

    [inner]
    center = 0.2, 0
    radius = 0.5
    aspect = 1
    tilt = 0
    direction = 1, 0
    free = radius

    [run]
    n = 5
    k = 1
    samples = 256
    tol_closure = 1e-08
    tol_fit = 1e-06
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Optional

from .conics import Conic, conic_from_ellipse
from .dynamics import InnerTemplate
from .errors import ConfigParse

DEFAULT_TOLERANCES = {"closure": 1e-8, "fit": 1e-6}


@dataclass(frozen=True)
class EllipseSpec:
    center: tuple[float, float] = (0.0, 0.0)
    axes: tuple[float, float] = (1.0, 1.0)
    tilt: float = 0.0

    def conic(self) -> Conic:
        return conic_from_ellipse(self.center, self.axes, self.tilt)


@dataclass(frozen=True)
class RunConfig:
    outer: EllipseSpec
    inner: InnerTemplate
    n: int
    k: int = 1
    samples: int = 256
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    family_out: Optional[str] = None

    def __post_init__(self):
        if self.n < 3:
            raise ConfigParse(f"[run] n: must be >= 3, got {self.n}")
        if math.gcd(self.n, self.k) != 1 or not 1 <= self.k < self.n / 2:
            raise ConfigParse(f"[run] k: need 1 <= k < n/2 and gcd(n, k) = 1, got n={self.n}, k={self.k}")
        if self.samples < 1:
            raise ConfigParse(f"[run] samples: must be positive, got {self.samples}")


def _pair(s: str) -> str:
    return f"{s[0]!r}, {s[1]!r}"


def emit_config(cfg: RunConfig) -> str:
    """Serialize ``cfg``; floats use ``repr`` so parsing gives back the same doubles."""
    o, i = cfg.outer, cfg.inner
    lines = [
        "[outer]",
        f"center = {_pair(o.center)}",
        f"axes = {_pair(o.axes)}",
        f"tilt = {o.tilt!r}",
        "",
        "[inner]",
        f"center = {_pair(i.center)}",
        f"radius = {i.radius!r}",
        f"aspect = {i.aspect!r}",
        f"tilt = {i.tilt!r}",
        f"direction = {_pair(i.direction)}",
        f"free = {i.free}",
        "",
        "[run]",
        f"n = {cfg.n}",
        f"k = {cfg.k}",
        f"samples = {cfg.samples}",
    ]
    for name in sorted(cfg.tolerances):
        lines.append(f"tol_{name} = {cfg.tolerances[name]!r}")
    if cfg.family_out:
        lines.append(f"family_out = {cfg.family_out}")
    return "\n".join(lines) + "\n"


class _Reader:
    def __init__(self, cp: configparser.ConfigParser):
        self.cp = cp

    def raw(self, section: str, key: str, default=None):
        if not self.cp.has_section(section):
            if default is not None:
                return default
            raise ConfigParse(f"missing section [{section}]")
        if not self.cp.has_option(section, key):
            if default is not None:
                return default
            raise ConfigParse(f"[{section}] {key}: missing required field")
        return self.cp.get(section, key)

    def number(self, section, key, default=None, cast=float):
        v = self.raw(section, key, default)
        if not isinstance(v, str):
            return v
        try:
            x = cast(v.strip())
        except ValueError:
            raise ConfigParse(f"[{section}] {key}: expected a number, got {v!r}") from None
        if cast is float and not math.isfinite(x):
            raise ConfigParse(f"[{section}] {key}: must be finite")
        return x

    def pair(self, section, key, default=None):
        v = self.raw(section, key, default)
        if not isinstance(v, str):
            return v
        parts = [p for p in v.replace(",", " ").split()]
        try:
            xy = tuple(float(p) for p in parts)
        except ValueError:
            raise ConfigParse(f"[{section}] {key}: expected two numbers, got {v!r}") from None
        if len(xy) != 2:
            raise ConfigParse(f"[{section}] {key}: expected two numbers, got {v!r}")
        return xy


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigParse(str(exc).splitlines()[0]) from None
    r = _Reader(cp)
    outer = EllipseSpec(r.pair("outer", "center", (0.0, 0.0)), r.pair("outer", "axes"),
                        r.number("outer", "tilt", 0.0))
    free = r.raw("inner", "free", "none").strip()
    if free not in ("radius", "offset", "none"):
        raise ConfigParse(f"[inner] free: expected radius, offset or none, got {free!r}")
    if free == "radius":
        radius = r.number("inner", "radius", 0.5)
    else:
        radius = r.number("inner", "radius")
    inner = InnerTemplate(
        center=r.pair("inner", "center", (0.0, 0.0)),
        radius=radius,
        aspect=r.number("inner", "aspect", 1.0),
        tilt=r.number("inner", "tilt", 0.0),
        direction=r.pair("inner", "direction", (1.0, 0.0)),
        free=free,
    )
    if not (inner.radius > 0 and inner.aspect > 0):
        raise ConfigParse("[inner] radius/aspect: must be positive")
    if not all(a > 0 for a in outer.axes):
        raise ConfigParse("[outer] axes: must be positive")
    tolerances = dict(DEFAULT_TOLERANCES)
    if cp.has_section("run"):
        for key in cp.options("run"):
            if key.startswith("tol_"):
                tolerances[key[4:]] = r.number("run", key)
    family_out = cp.get("run", "family_out", fallback=None) if cp.has_section("run") else None
    return RunConfig(
        outer=outer,
        inner=inner,
        n=r.number("run", "n", cast=int),
        k=r.number("run", "k", 1, cast=int),
        samples=r.number("run", "samples", 256, cast=int),
        tolerances=tolerances,
        family_out=family_out,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParse(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
