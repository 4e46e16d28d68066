import json
import math
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from viscenter.cli import main
from viscenter.errors import InvalidInstance, PointOutsidePolygon, SelfIntersecting
from viscenter.io import dumps, instance_doc, load_instance, load_result, parse_instance
from viscenter.oracle import grid_for, oracle_visibility_radius

from conftest import DATA

SVG_NS = "{http://www.w3.org/2000/svg}"
GOLDEN = os.path.join(DATA, "golden")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


# -------------------------------------------------------------- validate


def test_validate_square(capsys):
    code, out, _ = _run(capsys, "validate", os.path.join(DATA, "square.json"))
    assert code == 0 and json.loads(out)["vertices"] == 4


def test_validate_bowtie(capsys):
    code, out, err = _run(capsys, "validate", os.path.join(DATA, "bowtie.json"))
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "SelfIntersecting"


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 3 and json.loads(err)["error"] == "IOError"


@pytest.mark.parametrize("doc, kind", [
    ("{not json", "InvalidInstance"),
    ({"version": 2, "polygon": [[0, 0], [1, 0], [0, 1]]}, "InvalidInstance"),
    ({"version": 1}, "InvalidInstance"),
    ({"version": 1, "polygon": [[0, 0], [1, 0], [0, 1]], "sites": [[2, 2]]}, "PointOutsidePolygon"),
    ({"version": 1, "polygon": [[0, 0], [1, 0], [0, 1]], "sites": [["a", 0]]}, "InvalidInstance"),
    ({"version": 1, "polygon": [[0, 0], [1, 0], [1, 1], [0, 1]],
      "half_polygons": [{"p": [0.5, 0.5], "q": [1, 0.5]}]}, "InvalidInstance"),
    ({"version": 1, "polygon": [[0, 0], [1, 0], [1, 1], [0, 1]],
      "half_polygons": [{"p": [0, 0.5], "q": [0, 0.7]}]}, "InvalidInstance"),
])
def test_validate_rejections(capsys, tmp_path, doc, kind):
    code, _, err = _run(capsys, "validate", _write(tmp_path, "bad.json", doc))
    assert code == 2 and json.loads(err)["error"] == kind


def test_parse_errors_are_typed():
    with pytest.raises(SelfIntersecting):
        parse_instance({"polygon": [[0, 0], [1, 1], [1, 0], [0, 1]]})
    with pytest.raises(PointOutsidePolygon):
        parse_instance({"polygon": [[0, 0], [1, 0], [0, 1]], "sites": [[1, 1]]})
    with pytest.raises(InvalidInstance):
        parse_instance({"polygon": [[0, 0], [1, 0], [0, 1]], "sites": [[0.1, 0.1]],
                        "half_polygons": []}, need_constraints=True)


# ---------------------------------------------------------------- center


def test_center_lpoly_vertices_prints_zero(capsys):
    code, out, _ = _run(capsys, "center", os.path.join(DATA, "lpoly_vertices.json"), "--mode", "polygon")
    assert code == 0 and out.strip() == "0.000000000000"


def test_center_zigzag_matches_oracle(capsys, tmp_path):
    path = os.path.join(DATA, "zigzag_inner.json")
    out_file = str(tmp_path / "r.json")
    code, out, _ = _run(capsys, "center", path, "--out", out_file)
    assert code == 0
    res = load_result(out_file)
    assert float(out) == pytest.approx(res["radius"], rel=1e-11)
    inst = load_instance(path)
    _, val = oracle_visibility_radius(inst.polygon, inst.sites, grid_for(inst.polygon, 300))
    assert abs(res["radius"] - val) <= 2 * inst.polygon.bbox_diag / 300
    # radius agrees with the per-site maximum
    assert abs(res["radius"] - max(s["distance"] for s in res["per_site"])) <= res["tolerances"]["tie"]
    code, out, _ = _run(capsys, "oracle", path, "--grid", "300")
    assert code == 0 and float(out) == pytest.approx(val, rel=1e-11)


def test_center_halfpolygon_schema(capsys, tmp_path):
    out_file = str(tmp_path / "r.json")
    code, out, _ = _run(capsys, "center", os.path.join(DATA, "parallel_square.json"), "--out", out_file)
    assert code == 0 and out.strip() == "0.300000000000"
    res = json.loads(open(out_file).read())
    assert list(res) == ["version", "method", "mode", "center", "radius", "determining",
                         "degenerate_segment", "degenerate_ties", "solver_seed", "tolerances"]
    assert res["method"] == "solver" and res["mode"] == "halfpolygon"
    assert [d["id"] for d in res["determining"]] == [0, 1]
    assert all(set(d) == {"id", "p", "q"} for d in res["determining"])
    assert len(res["degenerate_segment"]) == 2 and "per_site" not in res
    assert res["solver_seed"] == 0


def test_center_strict_flags_degeneracy(capsys):
    code, out, err = _run(capsys, "center", os.path.join(DATA, "parallel_square.json"), "--strict")
    assert code == 4 and out.strip() == "0.300000000000"
    assert json.loads(err)["error"] == "Degenerate"
    code, _, _ = _run(capsys, "center", os.path.join(DATA, "zigzag_inner.json"), "--strict")
    assert code == 0


def test_center_mode_mismatch(capsys):
    code, _, err = _run(capsys, "center", os.path.join(DATA, "square.json"), "--mode", "halfpolygon")
    assert code == 2 and json.loads(err)["error"] == "InvalidInstance"


def test_center_unwritable_output(capsys, tmp_path):
    code, _, err = _run(capsys, "center", os.path.join(DATA, "zigzag.json"), "--out", str(tmp_path / "no" / "r.json"))
    assert code == 3 and json.loads(err)["error"] == "IOError"


def test_timings_only_on_request(capsys, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    _run(capsys, "center", os.path.join(DATA, "zigzag.json"), "--out", a)
    _run(capsys, "center", os.path.join(DATA, "zigzag.json"), "--out", b, "--timings")
    assert "timings" not in load_result(a) and "solve_s" in load_result(b)["timings"]


# ---------------------------------------------------------------- oracle


def test_oracle_output(capsys, tmp_path):
    out_file = str(tmp_path / "o.json")
    code, out, _ = _run(capsys, "oracle", os.path.join(DATA, "zigzag.json"), "--grid", "64", "--out", out_file)
    assert code == 0 and out.strip() == "0.000000000000"
    doc = load_result(out_file)
    assert doc["method"] == "grid" and doc["grid"] == 64
    first = open(out_file).read()
    _run(capsys, "oracle", os.path.join(DATA, "zigzag.json"), "--grid", "64", "--out", out_file)
    assert open(out_file).read() == first


# ------------------------------------------------------------ round trip


@pytest.mark.parametrize("name", ["square", "zigzag", "zigzag_inner", "parallel_square", "lpoly_vertices"])
def test_instance_round_trip(name):
    inst = load_instance(os.path.join(DATA, name + ".json"))
    once = dumps(instance_doc(inst))
    again = dumps(instance_doc(parse_instance(json.loads(once))))
    assert once == again


def test_dumps_format():
    text = dumps({"a": [0.1, 2], "b": [[1.0, 0.0]], "c": None, "d": 1e-20})
    assert json.loads(text) == {"a": [0.1, 2], "b": [[1.0, 0.0]], "c": None, "d": 1e-20}
    assert "[0.10000000000000001, 2]" in text and "9.9999999999999995e-21" in text
    x = 0.1 + 0.2
    assert json.loads(dumps({"x": x}))["x"] == x


def test_gen_is_repeatable(capsys, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert _run(capsys, "gen", "--seed", "5", "--out", a)[0] == 0
    assert _run(capsys, "gen", "--seed", "5", "--out", b)[0] == 0
    assert open(a).read() == open(b).read()
    assert load_instance(a, need_constraints=True).sites
    h = str(tmp_path / "h.json")
    assert _run(capsys, "gen", "--seed", "5", "--kind", "halves", "--k", "3", "--out", h)[0] == 0
    assert load_instance(h, need_constraints=True).half_polygons is not None


# ------------------------------------------------------------------- svg


def _svg(capsys, tmp_path, name, result=None):
    inst = os.path.join(DATA, name + ".json")
    if result is None:
        result = str(tmp_path / "r.json")
        assert _run(capsys, "center", inst, "--out", result)[0] == 0
    code, out, _ = _run(capsys, "svg", inst, result)
    assert code == 0
    return out


def test_svg_lpoly_is_well_formed(capsys, tmp_path):
    root = ET.fromstring(_svg(capsys, tmp_path, "lpoly_vertices"))
    assert root.tag == SVG_NS + "svg"
    outlines = [e for e in root if e.tag == SVG_NS + "polygon" and e.get("class") == "outline"]
    assert len(outlines) == 1
    assert len([e for e in root if e.get("class") == "center"]) == 1


def test_svg_without_per_site_has_no_paths(capsys, tmp_path):
    root = ET.fromstring(_svg(capsys, tmp_path, "parallel_square"))
    assert not root.findall(f".//{SVG_NS}path")
    assert len(root.findall(f".//{SVG_NS}line")) == 3  # two chords and the center segment


def test_svg_witness_paths(capsys, tmp_path):
    root = ET.fromstring(_svg(capsys, tmp_path, "zigzag_inner"))
    assert len(root.findall(f".//{SVG_NS}path")) == 2


def test_svg_schema_mismatch(capsys, tmp_path):
    bad = _write(tmp_path, "bad.json", {"radius": 1})
    code, _, err = _run(capsys, "svg", os.path.join(DATA, "square.json"), bad)
    assert code == 2 and json.loads(err)["error"] == "InvalidInstance"


@pytest.mark.parametrize("name", ["zigzag", "zigzag_inner"])
def test_golden_files(capsys, tmp_path, name):
    # goldens were generated once with this CLI and checked by eye
    result = str(tmp_path / "r.json")
    _run(capsys, "center", os.path.join(DATA, name + ".json"), "--out", result)
    with open(os.path.join(GOLDEN, name + ".result.json")) as fh:
        assert open(result).read() == fh.read()
    with open(os.path.join(GOLDEN, name + ".svg")) as fh:
        assert _svg(capsys, tmp_path, name, result) == fh.read()


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "viscenter.cli", "center", os.path.join(DATA, "zigzag.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.000000000000"
    env = dict(os.environ, VISCENTER_LOG="debug")
    proc = subprocess.run([sys.executable, "-m", "viscenter.cli", "center", os.path.join(DATA, "zigzag_inner.json")],
                          capture_output=True, text=True, check=False, env=env)
    assert proc.returncode == 0 and "DEBUG" in proc.stderr
    assert not math.isnan(float(proc.stdout))
