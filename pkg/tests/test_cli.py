import json
import os

from greenbox import zoo
from greenbox.cli import main
from greenbox.engine import format_table


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_table_b2(capsys):
    code, out, _ = run(capsys, "table", "b2")
    assert code == 0
    assert "H=5 L=3 R=3 D=2 J=2" in out


def test_table_np(capsys):
    code, out, _ = run(capsys, "table", "np:4")
    assert code == 0
    assert "H=5 L=5 R=5 D=5 J=5" in out


def test_table_product(capsys):
    code, out, _ = run(capsys, "table", "prod:rz:3,null:2")
    assert code == 0
    assert "R=4" in out


def test_table_parse_failure_exits_2(capsys):
    code, _, err = run(capsys, "table", "definitely-not-a-spec")
    assert code == 2
    assert "error" in err


def test_table_rejects_ball(capsys):
    code, _, err = run(capsys, "table", "bicyclic:4")
    assert code == 2


def test_table_from_file(tmp_path, capsys):
    path = tmp_path / "b2.tbl"
    path.write_text(format_table(zoo.b2()))
    code, out, _ = run(capsys, "table", str(path), "--file")
    assert code == 0
    assert "H=5" in out


def test_green_witnessed_ball(capsys):
    code, out, _ = run(capsys, "green", "bicyclic:6", "--relation", "L")
    assert code == 0
    assert "witnessed L-classes" in out
    assert "apparently infinite: yes" in out
    assert "not certified" in out


def test_green_p_window(capsys):
    code, out, _ = run(capsys, "green", "pz:8")
    assert code == 0
    assert "witnessed L-classes" in out
    assert "window-verified" in out


def test_munn_idempotent(capsys):
    code, out, _ = run(capsys, "munn", "a a^-1")
    assert code == 0
    assert "idempotent: True" in out


def test_munn_triple(capsys):
    code, out, _ = run(capsys, "munn", "a^-1 a a")
    assert code == 0
    assert "triple: (1,1,1)" in out


def test_munn_vertex_count(capsys):
    code, out, _ = run(capsys, "munn", "a b b^-1")
    assert code == 0
    assert "vertices: 3" in out


def test_munn_empty_word_rejected(capsys):
    code, _, err = run(capsys, "munn", "  ")
    assert code == 2


def test_munn_dot_output(tmp_path, capsys):
    path = tmp_path / "tree.dot"
    code, out, _ = run(capsys, "munn", "a b", "--dot", str(path))
    assert code == 0
    assert path.read_text().startswith("digraph")


M_TEXT = "inv-monoid a b ; b b = b ; b = b a b a^-1 ; a a^-1 = 1"


def test_stephen_equal(capsys):
    code, out, _ = run(capsys, "stephen", M_TEXT, "b", "--equal", "b b")
    assert code == 0
    assert "verdict: equal" in out


def test_stephen_unknown_is_success(capsys):
    code, out, _ = run(capsys, "stephen", M_TEXT, "b", "--equal", "a b",
                       "--stages", "3")
    assert code == 0
    assert "verdict: unknown" in out


def test_stephen_trace(capsys):
    code, out, _ = run(capsys, "stephen", M_TEXT, "b", "--stages", "5")
    assert code == 0
    assert "closed: False" in out
    assert "stage vertex counts:" in out


def test_stephen_closed_trace(capsys):
    code, out, _ = run(capsys, "stephen", "inv-semigroup a ; a a = a", "a")
    assert code == 0
    assert "closed: True" in out


def test_stephen_presentation_file(tmp_path, capsys):
    path = tmp_path / "m.pres"
    path.write_text(M_TEXT + "\n")
    code, out, _ = run(capsys, "stephen", str(path), "b", "--equal", "b b")
    assert code == 0
    assert "equal" in out


def test_stephen_parse_error(capsys):
    code, _, err = run(capsys, "stephen", "inv-semigroup a ; a =", "a")
    assert code == 2


def test_identity_holds(capsys):
    code, out, _ = run(capsys, "identity", "b2", "inverse")
    assert code == 0
    assert "holds" in out


def test_identity_counterexample(capsys):
    code, out, _ = run(capsys, "identity", "lz:2", "inverse")
    assert code == 0
    assert "fails" in out
    assert "counterexample" in out


def test_identity_window(capsys):
    # Catalogue keys are case-insensitive on the command line.
    code, out, _ = run(capsys, "identity", "pz:15", "ROLSTAR",
                       "--window", "15")
    assert code == 0
    assert "window-verified" in out


def test_identity_raw_text(capsys):
    code, out, _ = run(capsys, "identity", "b2", "x x' x = x")
    assert code == 0
    assert "holds" in out


def test_identity_bad_key(capsys):
    code, _, err = run(capsys, "identity", "b2", "] nonsense [")
    assert code == 2


def test_vmaps_ball(capsys):
    code, out, _ = run(capsys, "vmaps", "ball", "--cap", "3")
    assert code == 0
    assert "V(0,0) + (0,1)" in out


def test_vmaps_chain(capsys):
    code, out, _ = run(capsys, "vmaps", "chain", "-r", "2", "-s", "3")
    assert code == 0
    assert "V(2,3)" in out
    assert "V(0,0)" in out


def test_usage_error_exit_code(capsys):
    assert main(["no-such-command"]) == 2


def test_paper_report_full_run(tmp_path, capsys):
    out_dir = tmp_path / "report"
    code, out, _ = run(capsys, "paper-report", "--out", str(out_dir))
    assert code == 0
    assert "c01-b2-green" in out
    assert (out_dir / "report.md").exists()
    modules = [p for p in os.listdir(out_dir) if p.endswith(".json")]
    assert len(modules) >= 4
    payload = json.loads((out_dir / "engine.json").read_text())
    assert any(e["id"] == "c01-b2-green" for e in payload)
    assert all(e["status"] in ("reproduced", "evidence-only")
               for e in payload)


def test_paper_report_corrupted_fixture_fails(tmp_path, capsys):
    # A valid table that is not B2: the negative control must flip exit to 1.
    path = tmp_path / "bad.tbl"
    path.write_text(format_table(zoo.right_zero(5)))
    code, out, _ = run(capsys, "paper-report", "--fixture", str(path))
    assert code == 1
    assert "FAIL" in out


def test_paper_report_unparseable_fixture_fails(tmp_path, capsys):
    path = tmp_path / "broken.tbl"
    path.write_text("elements: x y\nrow x: y y\nrow y: x x\n")
    code, out, _ = run(capsys, "paper-report", "--fixture", str(path))
    assert code == 1


def test_paper_report_outputs_are_byte_identical(tmp_path, capsys):
    dirs = [tmp_path / "one", tmp_path / "two"]
    for d in dirs:
        assert main(["paper-report", "--out", str(d)]) == 0
    capsys.readouterr()
    for name in os.listdir(dirs[0]):
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_vmaps_idempotents_subcommand(capsys):
    code, out, _ = run(capsys, "vmaps", "idempotents", "--cap", "4")
    assert code == 0
    assert "idempotents" in out
    assert "V(" in out


def test_console_script_entry_point():
    import subprocess
    result = subprocess.run(["greenbox", "table", "b2"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "H=5 L=3 R=3 D=2 J=2" in result.stdout


def test_green_on_closed_table_delegates_to_exact(capsys):
    code, out, _ = run(capsys, "green", "b2")
    assert code == 0
    assert "H=5 L=3 R=3 D=2 J=2" in out
