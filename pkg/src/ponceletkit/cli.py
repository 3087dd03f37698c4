"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import serialize
from .centers import CenterKind
from .config import load_config
from .dynamics import certify_family, find_periodic_family
from .errors import ConfigParse, DynamicsError, LocusError, MissingFamily, PonceletError
from .locus import fit_circle, run_suite, sample_locus
from .svg import render_frames

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("ponceletkit")


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def cmd_find(args) -> int:
    cfg = load_config(args.config)
    tol = args.tol_closure if args.tol_closure is not None else cfg.tolerances["closure"]
    outer = cfg.outer.conic()
    if cfg.inner.free == "none":
        family = certify_family(outer, cfg.inner.conic(), cfg.n, cfg.k, tol=tol)
    else:
        family = find_periodic_family(outer, cfg.inner, cfg.n, cfg.k, tol=tol)
    _write(args.out or cfg.family_out, serialize.dumps_family(family))
    log.info("found (n, k) = (%d, %d): parameter=%r rho=%r closure_defect=%.3e",
             family.n, family.k, family.parameter, family.rho, family.closure_defect)
    return EXIT_OK


def _verdict(kind: CenterKind, max_residual: float, tol: float) -> str:
    if kind is CenterKind.CM1:
        return "non-circular (expected)" if max_residual > 1e3 * tol else "circular (unexpected for cm1)"
    return "circle" if max_residual < tol else "non-circular"


def cmd_locus(args) -> int:
    family = serialize.load_family(args.family, args.tol_closure)
    kind = CenterKind(args.kind)
    samples = sample_locus(family, kind, args.samples, use_contact_polygon=args.contact)
    fit = fit_circle([s.point for s in samples])
    verdict = _verdict(kind, fit.max_residual, args.tol_fit)
    if args.out and args.out.endswith(".json"):
        import json

        doc = {"kind": kind.value, "contact": args.contact,
               "samples": [{"t": s.t, "x": float(s.point[0]), "y": float(s.point[1]),
                            "x_world": float(s.point_world[0]), "y_world": float(s.point_world[1])}
                           for s in samples],
               "fit": serialize.fit_to_dict(fit), "verdict": verdict}
        _write(args.out, json.dumps(doc, indent=2) + "\n")
    else:
        _write(args.out, serialize.locus_csv(samples, fit, verdict))
    log.info("%s locus: radius=%.6g max_residual=%.3e (%s)", kind.value, fit.radius, fit.max_residual, verdict)
    return EXIT_OK


def _table(reports) -> str:
    lines = [f"{'check':32s} {'measured':>12s} {'tolerance':>10s}  verdict"]
    for r in reports:
        verdict = "SKIPPED" if r.skipped else ("PASS" if r.passed else "FAIL")
        lines.append(f"{r.check:32s} {r.measured:12.3e} {r.tolerance:10.1e}  {verdict}"
                     + (f"  ({r.context})" if r.skipped else ""))
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    family = serialize.load_family(args.family, args.tol_closure)
    reports = run_suite(family, args.suite, args.samples, args.seed, args.tol_closure, args.tol_fit)
    if args.out:
        _write(args.out, serialize.reports_json(reports))
        sys.stdout.write(_table(reports))
    else:
        sys.stdout.write(serialize.reports_json(reports))
        sys.stderr.write(_table(reports))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY


def cmd_render(args) -> int:
    if args.frames < 1:
        raise UsageError("--frames must be at least 1")
    family = serialize.load_family(args.family, args.tol_closure)
    docs = render_frames(family, args.frames, args.trace, args.contact)
    try:
        os.makedirs(args.out_dir, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {args.out_dir}: {exc.strerror}") from None
    for j, doc in enumerate(docs):
        _write(os.path.join(args.out_dir, f"frame_{j:04d}.svg"), doc)
    log.info("wrote %d frames to %s", len(docs), args.out_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random starts (default 0)")
    common.add_argument("--tol-closure", type=float, default=argparse.SUPPRESS)
    common.add_argument("--tol-fit", type=float, default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="ponceletkit", parents=[common],
                                description="Poncelet families, centroid loci and their verification.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("find", parents=[common], help="solve a config for an (n, k) family")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_find)

    s = sub.add_parser("locus", parents=[common], help="sample and fit a centroid locus")
    s.add_argument("--family", required=True)
    s.add_argument("--kind", choices=[k.value for k in CenterKind], default="cm0")
    s.add_argument("--contact", action="store_true", help="use the contact polygon Q_t")
    s.add_argument("--samples", type=int, default=256)
    s.add_argument("--out")
    s.set_defaults(func=cmd_locus)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--family", required=True)
    s.add_argument("--suite", choices=["porism", "main", "weill", "dual", "measure", "all"], default="all")
    s.add_argument("--samples", type=int, default=256)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render", parents=[common], help="write SVG frames")
    s.add_argument("--family", required=True)
    s.add_argument("--frames", type=int, required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--trace", choices=[k.value for k in CenterKind])
    s.add_argument("--contact", action="store_true")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name, default in (("seed", 0), ("tol_closure", None), ("tol_fit", 1e-6), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.command != "find" and args.tol_closure is None:
        args.tol_closure = 1e-8
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigParse, MissingFamily) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DynamicsError, LocusError, PonceletError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
