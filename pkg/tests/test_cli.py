import json
import subprocess
import sys

import pytest

from partkit.cli import main

SUBCOMMANDS = [
    "hurwitz",
    "gw",
    "quasimod-fit",
    "plancherel",
    "dimer-count",
    "spectral",
    "amoeba",
    "ronkin",
    "phase",
    "limit-shape",
    "selftest",
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def line_poly(tmp_path):
    path = tmp_path / "line.json"
    path.write_text("[[0, 0, 1.0], [1, 0, 1.0], [0, 1, 1.0]]")
    return str(path)


def test_gw_prints_exact_value(capsys):
    code, out, _ = run(capsys, "gw", "--target-genus", "1", "--degree", "2", "--descendants", "1,1")
    assert code == 0 and out == "2\n"


def test_gw_json_rationals(capsys):
    code, out, _ = run(capsys, "gw", "--target-genus", "0", "--degree", "1", "--descendants", "0", "--json")
    assert json.loads(out)["gw"] == ["23", "24"]


def test_gw_check_hurwitz(capsys):
    code, out, _ = run(capsys, "gw", "--target-genus", "1", "--degree", "3", "--descendants", "1,1,1", "--check-hurwitz")
    hur, gw = out.splitlines()[1].split()[1::2]
    assert code == 0 and hur == gw


def test_grid_count(capsys):
    code, out, _ = run(capsys, "dimer-count", "--builtin", "grid", "--rows", "2", "--cols", "2")
    assert code == 0 and out == "2\n"


def test_torus_count_with_oracle(capsys, tmp_path):
    from partkit.dimers import honeycomb

    g = tmp_path / "hc.json"
    g.write_text(honeycomb().to_json())
    code, out, _ = run(capsys, "dimer-count", "--graph", str(g), "--n", "1", "--oracle", "--json")
    data = json.loads(out)
    assert code == 0 and round(data["partition_function"]) == 3 and data["oracle"] == 3


def test_hurwitz(capsys):
    code, out, _ = run(capsys, "hurwitz", "--target-genus", "0", "--degree", "2", "--profiles", "2;2", "--oracle")
    assert code == 0 and out.splitlines()[0] == "1/2" and "agrees" in out


def test_quasimod_fit_success_and_failure(capsys):
    code, out, _ = run(capsys, "quasimod-fit", "--descendants", "1,1", "--max-weight", "6", "--order", "40")
    data = json.loads(out)
    assert code == 0 and data["success"]
    assert all(len(v) == 2 and all(isinstance(x, str) for x in v) for v in data["coefficients"].values())
    code, out, _ = run(capsys, "quasimod-fit", "--descendants", "1,1", "--max-weight", "6", "--order", "40", "--raw")
    assert code == 1 and json.loads(out)["first_mismatch"] == 7


def test_underdetermined_fit_is_usage_error(capsys):
    code, _, err = run(capsys, "quasimod-fit", "--descendants", "1,1", "--max-weight", "6", "--order", "10")
    assert code == 2 and "too small" in err


def test_usage_errors(capsys):
    assert run(capsys, "hurwitz", "--bogus")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "dimer-count", "--builtin", "grid")[0] == 2
    assert run(capsys, "plancherel")[0] == 2


def test_plancherel_pmf(capsys):
    code, out, _ = run(capsys, "plancherel", "--pmf", "2")
    assert code == 0
    assert {tuple(r["shape"]): tuple(r["p"]) for r in json.loads(out)} == {(2,): ("1", "2"), (1, 1): ("1", "2")}


def test_plancherel_stats_reproducible(capsys):
    args = ("plancherel", "--n", "400", "--samples", "20", "--seed", "42")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert json.loads(first)["seed"] == 42


def test_spectral_builtin(capsys):
    code, out, _ = run(capsys, "spectral", "--builtin", "honeycomb")
    assert code == 0 and sorted(map(tuple, json.loads(out))) == [(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0)]


def test_ronkin_negative_point(capsys, line_poly):
    code, out, _ = run(capsys, "ronkin", "--poly", line_poly, "--point", "-8,-8")
    assert code == 0 and abs(json.loads(out)["ronkin"]) < 1e-6


def test_phase(capsys, line_poly):
    assert run(capsys, "phase", "--poly", line_poly, "--B", "5,0", "--bbox", "-6:6:-6:6")[1] == "frozen\n"
    assert run(capsys, "phase", "--poly", line_poly, "--B", "0,0", "--bbox", "-6:6:-6:6")[1] == "liquid\n"
    assert run(capsys, "phase", "--poly", line_poly, "--B", "5.9,0", "--bbox", "-6:6:-6:6")[0] == 2


def test_amoeba_outputs(capsys, line_poly, tmp_path):
    out = tmp_path / "mask.pgm"
    args = ("amoeba", "--poly", line_poly, "--bbox", "-4:4:-4:4", "--res", "40", "--theta", "90", "--out", str(out))
    assert run(capsys, *args)[0] == 0
    first = out.read_bytes()
    lines = first.decode().splitlines()
    assert lines[:3] == ["P2", "40 40", "1"]
    side = json.loads((tmp_path / "mask.pgm.json").read_text())
    assert side["bbox"] == [-4, 4, -4, 4] and side["manifest"] == "mask.pgm.manifest.json"
    manifest = json.loads((tmp_path / "mask.pgm.manifest.json").read_text())
    assert manifest["input_digests"][line_poly]
    assert set(manifest) >= {"command_line", "seed", "tool_version", "wall_time_seconds"}
    assert run(capsys, *args)[0] == 0
    assert out.read_bytes() == first


def test_limit_shape_csv(capsys, line_poly, tmp_path):
    out = tmp_path / "surface.csv"
    args = ("limit-shape", "--poly", line_poly, "--res", "6", "--bbox", "-2:2:-2:2", "--quad", "64", "--out", str(out))
    assert run(capsys, *args)[0] == 0
    first = out.read_bytes()
    assert first.decode().splitlines()[0] == "x,y,height"
    assert len(first.decode().splitlines()) == 37
    assert run(capsys, *args)[0] == 0
    assert out.read_bytes() == first


def test_missing_input_file(capsys, tmp_path):
    assert run(capsys, "ronkin", "--poly", str(tmp_path / "nope.json"), "--point", "0,0")[0] == 2


def test_every_subcommand_has_descriptive_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for name in SUBCOMMANDS:
        line = next(l for l in out.splitlines() if l.strip().startswith(name + " "))
        assert len(line.split(None, 1)[1]) > 20


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "partkit", "gw", "--target-genus", "0", "--degree", "1", "--descendants", "0"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout == "23/24\n"


def test_selftest_exit_code(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("[PASS]") == 12
