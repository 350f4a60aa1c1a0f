"""End-to-end checks for the command line interface.

Commands run in-process through main() so exit codes and output are
asserted directly; one test drives the installed console script.
"""

import json
import shutil
import socket
import subprocess
import sys

import pytest

from rcmodel import parse
from rcmodel.cli import main

from conftest import FIXTURE_PATH, GOLDEN_DIR

FIXTURE = str(FIXTURE_PATH)

ISOLATED = """\
model "Warn demo" {
  scenario W1 {
    title "One node off the chain"
    impact low
    likelihood low
    factor a ai_system.data.data_balance stage prevention
    factor b users.action.proper_use stage response
    factor c ai_system.ai_model.robustness stage detection
    chain a -> b
  }
}
"""

DANGLING = """\
model "Bad" {
  scenario B1 {
    title "Edge to nowhere"
    impact low
    likelihood low
    factor a ai_system.data.data_balance stage prevention
    chain a -> ghost
  }
}
"""

# a two-cycle of detection nodes has no degree or stage based termini
NO_TERMINI = """\
model "Loop" {
  scenario L1 {
    title "Round and round"
    impact low
    likelihood low
    factor a ai_system.ai_model.robustness stage detection
    factor b ai_system.data.data_balance stage detection
    chain a -> b
    chain b -> a
  }
}
"""


def rcm_file(tmp_path, text, name="model.rcm"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


# --- check ---


def test_check_fixture_clean(capsys):
    assert main(["check", FIXTURE]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == ""


def test_check_warnings_exit_zero(tmp_path, capsys):
    assert main(["check", rcm_file(tmp_path, ISOLATED)]) == 0
    err = capsys.readouterr().err
    assert "isolated-node" in err
    assert "'c'" in err


def test_check_dedupes_overlapping_warnings(tmp_path, capsys):
    # validate and lint both flag the isolated node; one line survives
    main(["check", rcm_file(tmp_path, ISOLATED)])
    err = capsys.readouterr().err
    assert err.count("isolated-node") == 1


def test_check_error_exit_one(tmp_path, capsys):
    assert main(["check", rcm_file(tmp_path, DANGLING)]) == 1
    assert "dangling-edge" in capsys.readouterr().err


def test_check_syntax_error_spans(tmp_path, capsys):
    assert main(["check", rcm_file(tmp_path, 'model "X" {\n  junk\n}\n')]) == 1
    assert "2:3" in capsys.readouterr().err


def test_check_missing_file(capsys):
    assert main(["check", "no/such/file.rcm"]) == 2
    assert "cannot read" in capsys.readouterr().err


# --- rank ---


def test_rank_fixture_order(capsys):
    assert main(["rank", FIXTURE]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7
    first = "1 R001 9 Produces incorrect predictions for a specific country, region, race, gender or age"
    assert lines[0] == first
    assert [line.split()[1] for line in lines] == [f"R00{i}" for i in range(1, 8)]
    assert [int(line.split()[2]) for line in lines] == [9, 6, 4, 3, 2, 1, 1]


def test_rank_invalid_model(tmp_path, capsys):
    assert main(["rank", rcm_file(tmp_path, DANGLING)]) == 1
    assert "dangling-edge" in capsys.readouterr().err


# --- analyze ---


def test_analyze_single_scenario_text(capsys):
    assert main(["analyze", FIXTURE, "--scenario", "R001"]) == 0
    out = capsys.readouterr().out
    assert "scenario R001" in out
    assert "paths: 1" in out
    assert "uncut paths: 1" in out
    assert "min defense depth: 0" in out
    assert "min cut size: 1 (example: consensus)" in out


def test_analyze_json_single_object(capsys):
    assert main(["analyze", FIXTURE, "--scenario", "R001", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert isinstance(payload, dict)
    assert payload["scenario"] == "R001"
    assert payload["sources"] == ["data_balance"]
    assert payload["sinks"] == ["proper_use"]
    assert payload["min_cut_example"] == ["consensus"]


def test_analyze_json_all_scenarios(capsys):
    assert main(["analyze", FIXTURE, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert isinstance(payload, list)
    assert [entry["scenario"] for entry in payload] == [f"R00{i}" for i in range(1, 8)]
    assert all("error" not in entry for entry in payload)


def test_analyze_statuses_proposed(capsys):
    args = ["analyze", FIXTURE, "--scenario", "R001", "--statuses", "proposed", "--json"]
    assert main(args) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["min_defense_depth"] == 11
    assert payload["uncut_paths"] == []
    assert payload["statuses"] == ["proposed"]


def test_analyze_statuses_multiple(capsys):
    args = ["analyze", FIXTURE, "--scenario", "R001", "--statuses", "proposed,implemented", "--json"]
    assert main(args) == 0
    assert json.loads(capsys.readouterr().out)["statuses"] == ["implemented", "proposed"]


def test_analyze_unknown_scenario(capsys):
    assert main(["analyze", FIXTURE, "--scenario", "R999"]) == 1
    assert "unknown scenario 'R999'" in capsys.readouterr().err


def test_analyze_bad_statuses(capsys):
    assert main(["analyze", FIXTURE, "--statuses", "done"]) == 2
    assert "invalid --statuses" in capsys.readouterr().err


def test_analyze_no_termini_reported_inline(tmp_path, capsys):
    assert main(["analyze", rcm_file(tmp_path, NO_TERMINI)]) == 0
    out = capsys.readouterr().out
    assert "scenario L1" in out
    assert "not analyzable" in out


def test_analyze_no_termini_json(tmp_path, capsys):
    assert main(["analyze", rcm_file(tmp_path, NO_TERMINI), "--scenario", "L1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["scenario"] == "L1"
    assert payload["error"] == "no-termini"


def test_analyze_missing_file(capsys):
    assert main(["analyze", "no/such/file.rcm"]) == 2
    assert "cannot read" in capsys.readouterr().err


# --- render ---


def test_render_dot_matches_golden(capsys):
    assert main(["render", FIXTURE, "--format", "dot", "--scenario", "R001"]) == 0
    assert capsys.readouterr().out == golden("hiring_R001.dot")


def test_render_md_matches_golden(capsys):
    assert main(["render", FIXTURE, "--format", "md"]) == 0
    assert capsys.readouterr().out == golden("hiring_report.md")


def test_render_dot_requires_scenario(capsys):
    assert main(["render", FIXTURE, "--format", "dot"]) == 2
    assert "requires --scenario" in capsys.readouterr().err


def test_render_unknown_format(capsys):
    assert main(["render", FIXTURE, "--format", "pdf"]) == 1
    assert "unknown format 'pdf'" in capsys.readouterr().err


def test_render_unknown_scenario(capsys):
    assert main(["render", FIXTURE, "--format", "dot", "--scenario", "R999"]) == 1
    assert "unknown scenario" in capsys.readouterr().err


def test_render_output_file(tmp_path, capsys):
    out_path = tmp_path / "r001.dot"
    assert main(["render", FIXTURE, "--format", "dot", "--scenario", "R001", "-o", str(out_path)]) == 0
    assert capsys.readouterr().out == ""
    assert out_path.read_text(encoding="utf-8") == golden("hiring_R001.dot")


def test_render_output_unwritable(tmp_path, capsys):
    assert main(["render", FIXTURE, "--format", "md", "-o", str(tmp_path)]) == 2
    assert "cannot write" in capsys.readouterr().err


# --- init ---


def test_init_creates_workspace(tmp_path, capsys):
    workspace = tmp_path / "ws"
    assert main(["init", str(workspace)]) == 0
    assert "created" in capsys.readouterr().out
    created = workspace / "hiring.rcm"
    assert created.read_text(encoding="utf-8") == FIXTURE_PATH.read_text(encoding="utf-8")
    assert (workspace / "README.md").exists()
    result = parse(created.read_text(encoding="utf-8"))
    assert result.model is not None
    assert len(result.model.scenarios) == 7


def test_init_refuses_overwrite(tmp_path, capsys):
    workspace = tmp_path / "ws"
    assert main(["init", str(workspace)]) == 0
    capsys.readouterr()
    assert main(["init", str(workspace)]) == 1
    assert "already exists" in capsys.readouterr().err


# --- serve ---


def test_serve_port_conflict(capsys):
    blocker = socket.socket()
    try:
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        assert main(["serve", FIXTURE, "--port", str(port)]) == 2
        assert "cannot bind" in capsys.readouterr().err
    finally:
        blocker.close()


def test_serve_invalid_model(tmp_path, capsys):
    assert main(["serve", rcm_file(tmp_path, DANGLING)]) == 1
    assert "dangling-edge" in capsys.readouterr().err


def test_serve_missing_file(capsys):
    assert main(["serve", "no/such/file.rcm"]) == 2


# --- argument handling ---


def test_no_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_missing_positional_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


# --- installed entry points ---


def test_console_script_installed():
    exe = shutil.which("rcmodel")
    assert exe is not None
    proc = subprocess.run([exe, "rank", FIXTURE], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("1 R001 9 ")


def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "rcmodel", "check", FIXTURE], capture_output=True, text=True
    )
    assert proc.returncode == 0
