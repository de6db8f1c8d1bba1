"""Exit-code families, artifact shapes and byte-level determinism."""

import json

import pytest

from dp_hlog import cli


def run_json(tmp_path, name, args):
    out = tmp_path / name
    code = cli.main(args + ["--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


def test_enumerate_artifact(tmp_path):
    code, artifact = run_json(tmp_path, "e.json", ["enumerate", "--rank", "5"])
    assert code == 0
    assert artifact["lines"] == 16
    assert artifact["conics"] == 10
    assert artifact["matches_expected"] is True


def test_enumerate_rank_out_of_range():
    assert cli.main(["enumerate", "--rank", "9"]) == 2
    assert cli.main(["enumerate", "--rank", "2"]) == 2


def test_group_artifact(tmp_path):
    code, artifact = run_json(
        tmp_path, "g.json", ["group", "--rank", "4", "--orbit"]
    )
    assert code == 0
    assert artifact["order"] == 120
    assert artifact["line_orbit"] == 10
    assert sum(artifact["length_distribution"]) == 120
    code, artifact = run_json(
        tmp_path, "g2.json", ["group", "--rank", "3", "--count-only"]
    )
    assert code == 0
    assert "length_distribution" not in artifact


def test_group_rank_eight_is_usage_error(tmp_path):
    code, artifact = run_json(tmp_path, "g8.json", ["group", "--rank", "8"])
    assert code == 2
    assert "error" in artifact


def test_certify_and_replay_roundtrip(tmp_path):
    out = tmp_path / "cert.json"
    assert cli.main(["certify", "--rank", "4", "--out", str(out)]) == 0
    artifact = json.loads(out.read_text(encoding="utf-8"))
    eps = artifact["certificate"]["epsilon"]
    assert sorted(abs(e) for e in eps) == [1] * 5
    code, replay_artifact = run_json(
        tmp_path, "replay.json", ["replay", str(out)]
    )
    assert code == 0
    assert replay_artifact["replay"] == "pass"


def test_replay_rejects_tampering(tmp_path):
    out = tmp_path / "cert.json"
    cli.main(["certify", "--rank", "4", "--out", str(out)])
    artifact = json.loads(out.read_text(encoding="utf-8"))
    artifact["certificate"]["bases"][0] ^= 1
    out.write_text(json.dumps(artifact), encoding="utf-8")
    code, replay_artifact = run_json(tmp_path, "r.json", ["replay", str(out)])
    assert code == 4
    assert "error" in replay_artifact


def test_replay_missing_file(tmp_path):
    code, artifact = run_json(
        tmp_path, "r.json", ["replay", str(tmp_path / "absent.json")]
    )
    assert code == 2


def test_certify_rank_eight_needs_stretch():
    assert cli.main(["certify", "--rank", "8"]) == 2


def test_characters_artifact(tmp_path):
    code, artifact = run_json(tmp_path, "c.json", ["characters", "--rank", "4"])
    assert code == 0
    assert artifact["signature_multiplicity"] == 0
    assert artifact["line_norm"] == 3
    assert artifact["conic_norm"] == 2
    assert artifact["trivial_in_line"] == 1
    assert artifact["reflection_in_line"] == 1


def test_characters_d5_full_tables(tmp_path):
    code, artifact = run_json(
        tmp_path, "c5.json", ["characters", "--rank", "5", "--d5-full"]
    )
    assert code == 0
    assert tuple(artifact["d5"]["chi"]) == cli.D5_CHI
    assert tuple(artifact["d5"]["wedge3"]) == cli.D5_WEDGE3
    assert tuple(artifact["d5"]["wedge3_multiplicities"]) == cli.D5_WEDGE3_MULTS
    assert tuple(artifact["d5"]["chi_parts"]) == cli.D5_CHI_PARTS


def test_d5_flag_needs_rank_five():
    assert cli.main(["characters", "--rank", "4", "--d5-full"]) == 2


def test_symbols(tmp_path):
    code, artifact = run_json(tmp_path, "s.json", ["symbols", "--check-asym"])
    assert code == 0
    assert artifact["passed"] is True
    assert len(artifact["identities"]) == 3


def test_numeric_rank_four(tmp_path):
    code, artifact = run_json(
        tmp_path,
        "n.json",
        ["numeric", "--rank", "4", "--samples", "2", "--seed", "7"],
    )
    assert code == 0
    assert artifact["passed"] is True
    assert len(artifact["residuals"]) == 2
    assert artifact["max_residual"] < 1e-8


def test_numeric_parameter_gates():
    assert cli.main(["numeric", "--rank", "4", "--gamma", "1/3"]) == 2
    assert cli.main(["numeric", "--rank", "5", "--gamma", "nonsense"]) == 2
    assert (
        cli.main(
            ["numeric", "--rank", "5", "--gamma", "1/3", "--pi", "1/3"]
        )
        == 2
    )
    assert cli.main(["numeric", "--rank", "4", "--samples", "0"]) == 2


def test_numeric_runs_are_byte_identical(tmp_path):
    args = ["numeric", "--rank", "5", "--samples", "2", "--seed", "9"]
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert cli.main(args + ["--out", str(first)]) == 0
    assert cli.main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_threads_do_not_change_artifacts(tmp_path, monkeypatch):
    args = ["numeric", "--rank", "4", "--samples", "2", "--seed", "3"]
    one = tmp_path / "one.json"
    monkeypatch.setenv("DP_HLOG_THREADS", "1")
    assert cli.main(args + ["--out", str(one)]) == 0
    many = tmp_path / "many.json"
    monkeypatch.setenv("DP_HLOG_THREADS", "4")
    assert cli.main(args + ["--out", str(many)]) == 0
    assert one.read_bytes() == many.read_bytes()


def test_all_rank_three(tmp_path):
    code, artifact = run_json(tmp_path, "all3.json", ["all", "--rank", "3"])
    assert code == 0
    assert artifact["passed"] is True
    assert set(artifact["routes"]) == {"enumerate", "group", "symbols"}


def test_all_rank_four(tmp_path):
    code, artifact = run_json(
        tmp_path,
        "all4.json",
        ["all", "--rank", "4", "--seed", "1", "--samples", "2"],
    )
    assert code == 0
    assert set(artifact["routes"]) == {
        "enumerate",
        "group",
        "certify",
        "characters",
        "symbols",
        "numeric",
    }
    assert artifact["routes"]["numeric"]["passed"] is True


def test_stdout_used_without_out_flag(capsys):
    assert cli.main(["enumerate", "--rank", "3"]) == 0
    captured = capsys.readouterr()
    artifact = json.loads(captured.out)
    assert artifact["lines"] == 6
    assert "enumerate" in captured.err
