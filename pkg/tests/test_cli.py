import csv
import io
import json
import subprocess
import sys

import pytest

from tetraprop.checker import TetraReport
from tetraprop.cli import EX_USAGE, main, parse_point, parse_range, parse_space
from tetraprop.spaces import SpaceSpec


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


CHECK = ("check", "--space", "euclidean2", "--p", "0,0", "--r", "1", "--alpha", "0.9", "--beta", "1.1")


def test_check_exit_codes_and_json():
    code, text = run(*CHECK, "--C", "1.0", "--json")
    assert code == 0
    doc = json.loads(text)
    space = SpaceSpec.from_dict(doc["space"])
    rep = TetraReport.from_dict(space, doc["report"])
    assert rep.verdict == "HOLDS" and rep.to_dict() == doc["report"]
    assert run(*CHECK, "--C", "1.7", "--json")[0] == 1


def test_check_is_deterministic():
    assert run(*CHECK, "--json", "--seed", "5") == run(*CHECK, "--json", "--seed", "5")


@pytest.mark.parametrize("argv", [
    ("check", "--space", "euclidean2", "--p", "0,0", "--alpha", "0.9", "--beta", "1.1"),
    ("frobnicate",),
    ("check", "--space", "klein_bottle", "--p", "0,0", "--r", "1", "--alpha", "0.9", "--beta", "1.1"),
    ("bounds", "--V0", "10", "--C", "1", "--alpha", "0.9", "--beta", "1.1", "--n", "3"),
    ("sweep", "--space", "euclidean2", "--p", "0,0", "--r", "1", "--alpha", "0.9", "--beta", "1.1"),
    ("check", "--space", "euclidean2", "--p", "0,0", "--r", "1", "--alpha", "1.2", "--beta", "1.1"),
])
def test_usage_errors_exit_64(argv):
    assert run(*argv)[0] == EX_USAGE


def test_bounds_command():
    code, text = run("bounds", "--V0", "10", "--C", "1", "--alpha", "0.9", "--beta", "1.1", "--n", "3",
                     "--eps", "1", "--r0", "1", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["packing_bound"] == 250 and doc["diameter_bound"] == 2001.0
    code, text = run("bounds", "--V0", "10", "--C", "1", "--alpha", "0.9", "--beta", "1.1", "--n", "3",
                     "--eps", "1", "--text")
    assert text.strip() == "packing_bound 250"


def test_hmap_is_monotone_on_the_plane():
    code, text = run("hmap", "--space", "euclidean2", "--p", "0,0", "--r", "1", "--alpha", "0.5",
                     "--beta", "1.4", "--m", "10")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and list(rows[0]) == ["t1", "h"] and len(rows) == 10
    h = [float(r["h"]) for r in rows]
    assert h == sorted(h)


def test_volume_command():
    code, text = run("volume", "--space", "glued_planes", "--p", "0,0@XY", "--r", "1", "--C", "1",
                     "--alpha", "0.9", "--beta", "1.1", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["verdict"] == "HOLDS"
    code, text = run("volume", "--space", "euclidean3", "--p", "0,0,0", "--r-grid", "0.5:1.5:3")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [float(r["r"]) for r in rows] == [0.5, 1.0, 1.5]
    assert run("volume", "--space", "plane_ray", "--p", "1@RAY", "--r", "0.5")[0] == EX_USAGE


def test_sweep_rows_follow_grid_order(tmp_path):
    code, text = run("sweep", "--space", "plane_ray", "--p", "1@RAY", "--r", "1.5", "--alpha", "0.2",
                     "--beta", "0.9", "--grid", "beta=0.5,2.5")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and list(rows[0]) == ["beta", "C_best", "verdict"]
    assert [r["beta"] for r in rows] == ["0.5", "2.5"]
    assert rows[0]["verdict"] == "HOLDS" and rows[1]["verdict"].startswith("INVALID")


def test_config_defaults_and_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"V0": 10, "C": 1, "alpha": 0.9, "beta": 1.1, "n": 3, "eps": 1, "format": "json"}))
    code, text = run("bounds", "--config", str(cfg))
    assert json.loads(text)["packing_bound"] == 250
    code, text = run("bounds", "--config", str(cfg), "--eps", "2")
    assert json.loads(text)["packing_bound"] == 31


def test_examples_command_writes_reports(tmp_path, monkeypatch):
    monkeypatch.setenv("TETRAPROP_SEED", "42")
    code, text = run("examples", "--id", "plane_ray", "--out", str(tmp_path), "--json")
    assert code == 0
    suite = json.loads(text)
    assert suite[0]["seed"] == 42
    assert json.loads((tmp_path / "plane_ray.json").read_text()) == suite[0]


def test_parsers():
    G = parse_space("glued_planes")
    assert parse_point(G, "1,2@YZ").sheet == "YZ"
    assert parse_range("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_range("0.25,2") == [0.25, 2.0]
    assert parse_space("cone", rho=0.3, base="rp2").quotient
    assert parse_space("euclidean4").dim == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tetraprop", "bounds", "--V0", "10", "--C", "1", "--alpha",
                           "0.9", "--beta", "1.1", "--n", "3", "--eps", "1", "--text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "packing_bound 250"
