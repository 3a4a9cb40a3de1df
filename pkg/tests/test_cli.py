import io
import json
import subprocess
import sys

from twistcert.cli import main, parse_matrix
from twistcert.homology import canonical_lift
from twistcert.rep import matrix_Mk, matrix_N
from twistcert.tree import series_ring


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- eval --------------------------------------------------------------------


def test_eval_single_variable(capsys):
    code, out, _ = run(capsys, "eval", "(t-1)*(t^-1-1)")
    assert code == 0
    assert out == "-t^-1 + 2 - t\n"


def test_eval_surface_variables(capsys):
    code, out, _ = run(capsys, "eval", "s2*t2^-1 - 1")
    assert code == 0
    assert out == "-1 + s2*t2^-1\n"


def test_eval_rational_coefficients(capsys):
    code, out, _ = run(capsys, "eval", "1/2*t + 1/2*t", "--domain", "Q")
    assert code == 0
    assert out == "t\n"


def test_eval_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("2*t - t"))
    code, out, _ = run(capsys, "eval", "-")
    assert code == 0
    assert out == "t\n"


def test_eval_variable_outside_ring(capsys):
    code, _, err = run(capsys, "eval", "t3 - 1")
    assert code == 2
    assert "raise --genus" in err
    assert run(capsys, "eval", "t3 - 1", "--genus", "3")[0] == 0


def test_eval_parse_error_names_position(capsys):
    code, _, err = run(capsys, "eval", "t^")
    assert code == 2
    assert "position" in err


# -- rho ---------------------------------------------------------------------


def test_rho_builtin_curve(capsys):
    code, out, _ = run(capsys, "rho", "canonical-C", "--genus", "2")
    assert code == 0
    assert out.splitlines() == ["[[1, t^-1 - 2 + t], [0, 1]]",
                                "balanced: yes x4"]
    assert run(capsys, "rho", "canonical-C", "--genus", "4")[0] == 0


def test_rho_from_file(capsys, tmp_path):
    path = tmp_path / "lift.json"
    path.write_text(json.dumps(canonical_lift(3).to_json()))
    code, out, _ = run(capsys, "rho", str(path))
    assert code == 0
    assert out.splitlines()[0] == "[[1, t^-1 - 2 + t], [0, 1]]"


def test_rho_json_format(capsys):
    code, out, _ = run(capsys, "rho", "canonical-C", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["matrix"] == {"a": "1", "b": "t^-1 - 2 + t",
                              "c": "0", "d": "1"}
    assert data["balanced"] == [True, True, True, True]
    assert data["h_form"]["q1"] == "t^-1 - 2 + t"


def test_rho_rejects_invalid_lift(capsys, tmp_path):
    path = tmp_path / "lift.json"
    path.write_text(json.dumps(
        {"genus": 2, "w": [], "m": {"1,0": 1, "0,0": -1}, "n": {"0,0": 1}}))
    code, _, err = run(capsys, "rho", str(path))
    assert code == 2
    assert err.startswith("error:")


# -- verify --------------------------------------------------------------------


def test_verify_text_report(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "2", "--kmax", "10")
    assert code == 0
    assert "verdict: PASS" in out
    assert "pairwise separations: 45/45 distinct" in out


def test_verify_json_report(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "3", "--kmax", "5",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] is True
    assert len(data["records"]) == 5
    assert len(data["pairwise"]) == 10


def test_verify_rejects_small_kmax(capsys):
    code, _, err = run(capsys, "verify", "--genus", "2", "--kmax", "1")
    assert code == 2
    assert "kmax" in err


def test_verify_rejects_missing_table(capsys):
    code, _, err = run(capsys, "verify", "--eps-table", "/nonexistent.json")
    assert code == 2
    assert "cannot read" in err


def test_verify_writes_artifact(capsys, tmp_path):
    out_path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "verify", "--kmax", "2",
                     "--output", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data["verdict"] is True


def test_verify_seeded_recheck(capsys):
    code, out, _ = run(capsys, "verify", "--kmax", "2", "--seed", "7")
    assert code == 0
    assert "pairing-table recheck: ok" in out


def test_verify_custom_pairing_table(capsys, tmp_path):
    code, plain, _ = run(capsys, "verify", "--genus", "3", "--kmax", "2",
                         "--format", "json")
    assert code == 0
    table = tmp_path / "eps.json"
    table.write_text(json.dumps(
        [{"x": [1, 3], "y": [3, 4], "value": 1}]))
    code, custom, _ = run(capsys, "verify", "--genus", "3", "--kmax", "2",
                          "--format", "json", "--eps-table", str(table))
    assert code == 0
    assert custom == plain


def test_verify_mutated_lift_fails(capsys, tmp_path):
    record = canonical_lift(2).to_json()
    record["m"]["0,1"] = 2
    path = tmp_path / "mutated.json"
    path.write_text(json.dumps(record))
    code, out, _ = run(capsys, "verify", "--kmax", "3", "--lift", str(path))
    assert code == 1
    assert "verdict: FAIL" in out
    assert "failing record:" in out


# -- tree -----------------------------------------------------------------------


def test_tree_distance_between_specs(capsys):
    code, out, _ = run(capsys, "tree", "distance",
                       "[[t,0],[0,t^-1]]", "base")
    assert code == 0
    assert out == "2\n"
    code, out, _ = run(capsys, "tree", "distance",
                       "(2; 1/2*t^-1 + t)", "(0; 0)")
    assert out == "4\n"


def test_tree_fixes_reports_both_ways(capsys):
    n_text = "[[1, t - 2 + t^-1], [0, 1]]"
    code, out, _ = run(capsys, "tree", "fixes", n_text, "(-1; 0)")
    assert code == 0
    assert out == "fixes (-1; 0): yes\n"
    code, out, _ = run(capsys, "tree", "fixes", n_text, "base")
    assert code == 0
    assert out.startswith("fixes (0; 0): no, moves it to")


def test_tree_translation_exact_and_clipped(capsys):
    code, out, _ = run(capsys, "tree", "translation", "[[t,0],[0,t^-1]]")
    assert code == 0
    assert out.splitlines()[0] == "translation length: 2 (exact)"
    ring = series_ring()
    shift = parse_matrix("[[1, t^-3], [0, 1]]", ring)
    diag = parse_matrix("[[t^2, 0], [0, t^-2]]", ring)
    text = str(shift @ diag @ shift.inverse())
    code, out, _ = run(capsys, "tree", "translation", text,
                       "--ball-radius", "1")
    assert code == 0
    assert "upper bound" in out.splitlines()[0]
    assert "radius" in out


def test_tree_ball_dot_output(capsys):
    code, out, _ = run(capsys, "tree", "ball", "--ball-radius", "1")
    assert code == 0
    assert out.splitlines()[0] == "graph ball {"
    assert out.count("--") == 3


def test_tree_rejects_bad_vertex(capsys):
    code, _, err = run(capsys, "tree", "distance", "(1, 0)", "base")
    assert code == 2
    assert "error:" in err


def test_tree_rejects_non_unimodular_action(capsys):
    code, _, err = run(capsys, "tree", "fixes", "[[t,0],[0,1]]", "base")
    assert code == 2
    assert "determinant" in err


# -- normal form -----------------------------------------------------------------


def test_normal_form_single_letter(capsys):
    code, out, _ = run(capsys, "normal-form", "[[1, t - 2 + t^-1], [0, 1]]")
    assert code == 0
    assert out.splitlines() == ["(B) [[1, t^-1 - 2 + t], [0, 1]]",
                                "letters: 1"]


def test_normal_form_alternating_word(capsys):
    word = matrix_N() @ matrix_Mk(1) @ matrix_N()
    code, out, _ = run(capsys, "normal-form", str(word))
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "letters: 3"
    assert [line[1] for line in lines[:3]] == ["B", "A", "B"]


def test_normal_form_json(capsys):
    code, out, _ = run(capsys, "normal-form", "[[1, 0], [3, 1]]",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [item["side"] for item in data] == ["A"]
    assert data[0]["matrix"]["c"] == "3"


def test_normal_form_rejects_non_unimodular(capsys):
    code, _, err = run(capsys, "normal-form", "[[t, 0], [0, 1]]")
    assert code == 2
    assert "error:" in err


def test_module_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "twistcert.cli", "eval", "t*t^-1"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout == "1\n"
