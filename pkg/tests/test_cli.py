import json
import math
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ponceletkit.cli import main
from ponceletkit.config import EllipseSpec, RunConfig, emit_config, parse_config
from ponceletkit.dynamics import InnerTemplate
from ponceletkit.errors import ConfigParse
from ponceletkit.locus import fit_circle, verify_theorem_main
from ponceletkit.serialize import read_locus_csv

ECCENTRIC = """\
[outer]
center = 0, 0
axes = 1, 1

[inner]
center = 0.2, 0
free = radius

[run]
n = 5
k = 1
"""

REGULAR = ECCENTRIC.replace("center = 0.2, 0", "center = 0, 0")

WEILL = """\
[outer]
axes = 1, 1

[inner]
radius = 0.4
free = offset

[run]
n = 3
"""


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    for name, text in (("ecc", ECCENTRIC), ("reg", REGULAR), ("weill", WEILL)):
        (d / f"{name}.ini").write_text(text)
        assert main(["find", "--config", str(d / f"{name}.ini"), "--out", str(d / f"{name}.json")]) == 0
    return d


class TestConfig:
    def test_parse(self):
        cfg = parse_config(ECCENTRIC)
        assert cfg.n == 5 and cfg.k == 1 and cfg.samples == 256
        assert cfg.inner.center == (0.2, 0.0) and cfg.inner.free == "radius"
        assert cfg.tolerances == {"closure": 1e-8, "fit": 1e-6}

    @given(
        st.tuples(st.floats(-5, 5), st.floats(-5, 5)),
        st.tuples(st.floats(0.1, 5), st.floats(0.1, 5)),
        st.floats(-3, 3),
        st.floats(0.01, 2),
        st.sampled_from(["radius", "offset", "none"]),
        st.sampled_from([(3, 1), (5, 2), (7, 3), (8, 3)]),
        st.floats(1e-14, 1e-2),
    )
    def test_round_trip(self, center, axes, tilt, radius, free, nk, tol):
        cfg = RunConfig(EllipseSpec(center, axes, tilt),
                        InnerTemplate(center=center, radius=radius, aspect=0.5, tilt=tilt, free=free),
                        nk[0], nk[1], 64, {"closure": tol, "fit": 1e-6}, "fam.json")
        assert parse_config(emit_config(cfg)) == cfg

    def test_missing_n_names_field(self):
        with pytest.raises(ConfigParse, match=r"\[run\] n"):
            parse_config(ECCENTRIC.replace("n = 5\n", ""))

    @pytest.mark.parametrize("bad,field", [
        ("n = 6\nk = 2", "k"), ("n = 2", "n"), ("n = five", "n"),
    ])
    def test_invalid_run(self, bad, field):
        with pytest.raises(ConfigParse, match=rf"\[run\] {field}"):
            parse_config(ECCENTRIC.replace("n = 5\nk = 1", bad))

    def test_bad_free(self):
        with pytest.raises(ConfigParse, match="free"):
            parse_config(ECCENTRIC.replace("free = radius", "free = tilt"))


class TestFind:
    def test_family_json(self, workdir):
        d = json.loads((workdir / "ecc.json").read_text())
        assert d["format"] == "ponceletkit-family/1"
        assert d["n"] == 5 and d["k"] == 1
        assert d["closure_defect"] < 1e-8
        assert d["parameter"] == pytest.approx(0.7437074859057647, abs=1e-12)
        assert len(d["outer"]["matrix"]) == 9

    def test_deterministic(self, workdir, tmp_path):
        assert main(["find", "--config", str(workdir / "ecc.ini"), "--out", str(tmp_path / "b.json")]) == 0
        assert (tmp_path / "b.json").read_bytes() == (workdir / "ecc.json").read_bytes()

    def test_missing_n_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.ini"
        p.write_text(ECCENTRIC.replace("n = 5\n", ""))
        assert main(["find", "--config", str(p)]) == 2
        assert "[run] n" in capsys.readouterr().err

    def test_no_bracket_is_numeric(self, tmp_path):
        p = tmp_path / "nb.ini"
        p.write_text(WEILL.replace("radius = 0.4", "radius = 0.05").replace("n = 3", "n = 9"))
        assert main(["find", "--config", str(p)]) == 3

    def test_usage_errors(self, capsys):
        assert main([]) == 2
        assert main(["find"]) == 2
        assert main(["locus", "--family", "/nonexistent/fam.json"]) == 2


class TestLocus:
    def test_csv(self, workdir, tmp_path):
        out = tmp_path / "l.csv"
        assert main(["locus", "--family", str(workdir / "ecc.json"), "--kind", "cm0", "--samples", "256",
                     "--out", str(out)]) == 0
        text = out.read_text()
        assert text.splitlines()[0] == "t,x,y,x_world,y_world"
        rows, fit = read_locus_csv(text)
        assert rows.shape == (256, 5)
        assert fit["max_residual"] < 1e-6
        assert fit["verdict"] == "circle"

    def test_cm1_verdict_on_circle_pair(self, workdir, tmp_path):
        out = tmp_path / "l1.csv"
        assert main(["locus", "--family", str(workdir / "ecc.json"), "--kind", "cm1", "--samples", "64",
                     "--out", str(out)]) == 0
        _, fit = read_locus_csv(out.read_text())
        # CM1 of a circle pair traces a circle, so the expected non-circular verdict does not appear
        assert fit["max_residual"] < 1e-9
        assert fit["verdict"] == "circular (unexpected for cm1)"

    def test_json_and_contact(self, workdir, tmp_path):
        out = tmp_path / "w.json"
        assert main(["locus", "--family", str(workdir / "weill.json"), "--kind", "cm0", "--contact",
                     "--samples", "32", "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        xs = np.array([[s["x_world"], s["y_world"]] for s in d["samples"]])
        assert np.ptp(xs, axis=0).max() < 1e-8
        assert d["fit"]["radius"] < 1e-8

    def test_tamper_is_recertified(self, workdir, tmp_path, caplog):
        d = json.loads((workdir / "ecc.json").read_text())
        d["closure_defect"] = 0.5
        bad = tmp_path / "tampered.json"
        bad.write_text(json.dumps(d))
        with caplog.at_level("WARNING"):
            assert main(["locus", "--family", str(bad), "--samples", "8", "--out", str(tmp_path / "x.csv")]) == 0
        assert any("re-certified" in r.message for r in caplog.records)

    def test_tampered_matrix_fails(self, workdir, tmp_path):
        d = json.loads((workdir / "ecc.json").read_text())
        d["inner"]["matrix"][8] *= 1.01
        bad = tmp_path / "bent.json"
        bad.write_text(json.dumps(d))
        assert main(["locus", "--family", str(bad), "--samples", "8", "--out", str(tmp_path / "x.csv")]) == 3


class TestVerify:
    def test_weill_all(self, workdir, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["verify", "--family", str(workdir / "weill.json"), "--suite", "all", "--samples", "64",
                     "--out", str(out)])
        reports = json.loads(out.read_text())
        assert len(reports) == 7
        by = {r["check"]: r for r in reports}
        assert by["weill"]["pass"] and by["porism"]["pass"] and by["dual"]["pass"]
        # the CM1 control cannot pass on a circle pair, whose CM1 locus is itself a circle
        assert not by["main:cm1 (negative control)"]["pass"]
        assert code == 1
        table = capsys.readouterr().out
        assert "main:cm1 (negative control)" in table and "FAIL" in table

    def test_single_suite_passes(self, workdir, tmp_path):
        out = tmp_path / "p.json"
        assert main(["verify", "--family", str(workdir / "ecc.json"), "--suite", "porism", "--out", str(out)]) == 0
        assert main(["verify", "--family", str(workdir / "ecc.json"), "--suite", "porism", "--seed", "3",
                     "--out", str(tmp_path / "p3.json")]) == 0
        assert json.loads(out.read_text())[0]["context"].endswith("seed=0")
        assert json.loads((tmp_path / "p3.json").read_text())[0]["context"].endswith("seed=3")

    def test_skipped_renders_null(self, tmp_path):
        cfg = tmp_path / "e.ini"
        cfg.write_text("[outer]\naxes = 2, 1\n[inner]\ncenter = 0.3, 0.05\nradius = 1\naspect = 0.6\n"
                       "free = radius\n[run]\nn = 5\n")
        assert main(["find", "--config", str(cfg), "--out", str(tmp_path / "e.json")]) == 0
        assert main(["verify", "--family", str(tmp_path / "e.json"), "--suite", "weill",
                     "--out", str(tmp_path / "r.json")]) == 0
        (rep,) = json.loads((tmp_path / "r.json").read_text())
        assert rep["skipped"] and rep["measured"] is None
        assert rep["context"] == "hypothesis-not-met, skipped"


class TestRender:
    def test_single_frame_regular(self, workdir, tmp_path):
        assert main(["render", "--family", str(workdir / "reg.json"), "--frames", "1",
                     "--out-dir", str(tmp_path)]) == 0
        files = sorted(p.name for p in tmp_path.iterdir())
        assert files == ["frame_0000.svg"]
        svg = (tmp_path / "frame_0000.svg").read_text()
        paths = re.findall(r'<path class="poncelet" d="M ([^"]*) Z"/>', svg)
        assert len(paths) == 1
        assert len(paths[0].split(" L ")) == 5

    def test_zero_frames(self, workdir, tmp_path):
        assert main(["render", "--family", str(workdir / "reg.json"), "--frames", "0",
                     "--out-dir", str(tmp_path)]) == 2

    def test_deterministic_bytes(self, workdir, tmp_path):
        for d in ("a", "b"):
            assert main(["render", "--family", str(workdir / "ecc.json"), "--frames", "3", "--trace", "cm2",
                         "--contact", "--out-dir", str(tmp_path / d)]) == 0
        for j in range(3):
            name = f"frame_{j:04d}.svg"
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_trace_lies_on_fitted_circle(self, workdir, tmp_path):
        from ponceletkit.serialize import load_family

        assert main(["render", "--family", str(workdir / "ecc.json"), "--frames", "120", "--trace", "cm0",
                     "--out-dir", str(tmp_path)]) == 0
        last = (tmp_path / "frame_0119.svg").read_text()
        (pts,) = re.findall(r'<polyline class="trace cm0" points="([^"]*)"', last)
        xy = np.array([[float(v) for v in p.split(",")] for p in pts.split()])
        assert xy.shape == (120, 2)
        fit = verify_theorem_main(load_family(str(workdir / "ecc.json")), "cm0").fit
        assert np.max(fit.residuals(xy)) < 1e-6
        assert fit_circle(xy).radius == pytest.approx(fit.radius, abs=1e-8)
        assert math.isclose(fit.radius, 0.00184413895016, abs_tol=1e-9)
