import json

import pytest

from quivercrep import cli
from quivercrep.errors import NonIntegerResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="c.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


SINK_222 = """
[quiver]
case = "A3SinkCenter"
d = [2, 2, 2]

[orbit]
r1 = 1
r2 = 1
p1 = 2
"""


def test_roots_counts(capsys, tmp_path):
    code, out, _ = run(capsys, "roots", "--config", write(tmp_path, '[quiver]\ncase = "D4SinkCenter"\n'), "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 12


@pytest.mark.parametrize("d,count", [([1, 1], 2), ([0, 0], 1), ([2, 3], 3)])
def test_orbit_counts(capsys, tmp_path, d, count):
    cfg = write(tmp_path, f'[quiver]\ncase = "A2"\nd = {d}\n')
    code, out, _ = run(capsys, "orbits", "--config", cfg, "--format", "json")
    assert code == 0 and json.loads(out)["count"] == count


def test_orbit_info(capsys, tmp_path):
    code, out, _ = run(capsys, "orbit-info", "--config", write(tmp_path, SINK_222), "--format", "json")
    info = json.loads(out)
    assert code == 0
    assert info["codim"] == info["codim_numeric"] == 2
    assert {"r1": 0, "r2": 0, "p1": 0} in info["orbits_in_closure"]


def test_resolve_reports_crepancy_and_citation(capsys, tmp_path):
    code, out, _ = run(capsys, "resolve", "--config", write(tmp_path, SINK_222), "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["crepant"] is True and rep["closed_form_crepant"] is True
    assert rep["total_space_dim"] == 6
    assert "condition (i)" in rep["citation"]


def test_resolve_d4_type_i_not_crepant(capsys, tmp_path):
    cfg = """
[quiver]
case = "D4SinkCenter"
d = [2, 3, 2, 2]

[orbit]
r1 = 2
r2 = 2
r3 = 2
r12 = 1
r13 = 1
r23 = 1
r123 = 0
x = 3

[resolution]
type = "i"
"""
    code, out, _ = run(capsys, "resolve", "--config", write(tmp_path, cfg), "--format", "json")
    assert code == 0 and json.loads(out)["crepant"] is False


def test_table_output_is_aligned(capsys, tmp_path):
    code, out, _ = run(capsys, "resolve", "--config", write(tmp_path, SINK_222))
    cols = {line.index(line.split()[1]) for line in out.splitlines() if line.strip()}
    assert code == 0 and len(cols) == 1


def test_json_config_mirror(capsys, tmp_path):
    cfg = {"quiver": {"case": "A2", "d": [2, 2]}, "orbit": {"r1": 1}}
    code, out, _ = run(capsys, "resolve", "--config", write(tmp_path, json.dumps(cfg), "c.json"), "--format", "json")
    assert code == 0 and json.loads(out)["crepant"] is True


@pytest.mark.parametrize(
    "text,needle",
    [
        ('[quiver]\ncase = "A2"\nd = [1, 1]\nbogus = 1\n', "quiver"),
        ('[quiver\n', "line 1"),
        ('[quiver]\ncase = "E6"\n', "quiver.case"),
        ('[quiver]\ncase = "A2"\nd = [1, 1, 1]\n', "quiver.d"),
        ('[quiver]\ncase = "A2"\nd = [1, 1]\n[orbit]\nr9 = 1\n', "orbit"),
    ],
)
def test_config_errors_exit_2(capsys, tmp_path, text, needle):
    code, _, err = run(capsys, "resolve", "--config", write(tmp_path, text))
    assert code == 2
    assert needle in err


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "roots", "--config", "/nonexistent/x.toml")
    assert code == 2 and "bundled configs" in err


def test_infeasible_exit_3(capsys, tmp_path):
    cfg = write(tmp_path, '[quiver]\ncase = "A2"\nd = [1, 1]\n[orbit]\nr1 = 2\n')
    code, _, err = run(capsys, "resolve", "--config", cfg)
    assert code == 3 and "Infeasible" in err


def test_integrality_failure_exit_4(capsys, monkeypatch):
    def boom(*a, **k):
        raise NonIntegerResult("chi_O came out as 1/2")

    monkeypatch.setattr(cli, "odl_invariants", boom)
    code, _, err = run(capsys, "odl", "--config", "a2_determinantal")
    assert code == 4 and "1/2" in err


def test_bundled_odl_config_and_progress(capsys):
    code, out, err = run(capsys, "odl", "--config", "a2_determinantal", "--format", "json", "--seed", "4")
    rep = json.loads(out)
    assert code == 0
    assert rep["numeric"] == {"chi_O": 1}
    assert rep["records"][0]["quantity"] == "chi_O"
    assert rep["records"][0]["fixed_point_count"] == 8
    assert "fixed points processed" in err


def test_golden_mismatch_exit_1(capsys, tmp_path):
    from importlib import resources

    text = (resources.files("quivercrep") / "configs" / "a2_determinantal.toml").read_text()
    cfg = write(tmp_path, text + "\n[expected]\nchi_O = 5\n")
    code, out, _ = run(capsys, "odl", "--config", cfg, "--quiet")
    assert code == 1 and "MISMATCH" in out


def test_deterministic_json(capsys):
    a = json.loads(run(capsys, "odl", "--config", "a2_determinantal", "--format", "json", "--quiet")[1])
    b = json.loads(run(capsys, "odl", "--config", "a2_determinantal", "--format", "json", "--quiet")[1])
    for rep in (a, b):
        rep.pop("wall_time")
        for r in rep["records"]:
            r.pop("wall_time")
    assert a == b


def test_unknown_quantity_exit_2(capsys):
    code, _, err = run(capsys, "odl", "--config", "a2_determinantal", "--quantities", "chi_O,nope")
    assert code == 2 and "nope" in err


def test_list_configs(capsys):
    code, out, _ = run(capsys, "--list-configs")
    assert code == 0 and "d4_fourfold_f1" in out.split()


def test_verify_small(capsys, tmp_path):
    cfg = write(tmp_path, '[verify]\nchecks = ["closure"]\ndmax = 2\n')
    code, out, _ = run(capsys, "verify", "--config", cfg)
    assert code == 0 and out.startswith("PASS closure order")
