import json
from fractions import Fraction

from lumirend.cli import main
from lumirend.verify import ScalingLoopCertificate, replay_paper_counterexample


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_simultaneous_rounds(capsys):
    code, out, _err = run_cli(
        capsys, "run", "--alg", "ss3", "--schedule", "sim", "--init", "A,A",
        "--dist", "1", "--rigid", "--class", "ssync", "--horizon", "8",
    )
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[-1]["distance"] == "0/1"


def test_run_divergent_schedule_file(tmp_path, capsys):
    res = replay_paper_counterexample("lemma6_alg_a")
    sched_file = tmp_path / "loop.json"
    sched_file.write_text(res.schedule.to_json())
    code, out, err = run_cli(
        capsys, "run", "--alg", "alg_a", "--schedule", str(sched_file),
        "--init", "B,C", "--dist", "1", "--rigid", "--class", "lc-atomic,move-atomic",
    )
    assert code == 2
    cert = ScalingLoopCertificate.from_json(err)
    assert cert.ratio == Fraction(1, 4)


def test_run_zero_distance_start(capsys):
    code, out, _err = run_cli(
        capsys, "run", "--alg", "ss3", "--schedule", "alt", "--init", "A,A",
        "--dist", "0", "--rigid", "--class", "lc-atomic,move-atomic",
    )
    assert code == 0
    assert out == ""  # met at the start: nothing to execute


def test_run_rejects_decimal_rationals(capsys):
    code, _out, err = run_cli(
        capsys, "run", "--alg", "ss3", "--schedule", "sim", "--init", "A,A",
        "--dist", "0.5", "--class", "ssync",
    )
    assert code == 1
    assert "p/q" in err


def test_run_is_byte_deterministic(capsys):
    args = (
        "run", "--alg", "qss4", "--schedule", "alt", "--init", "A,A",
        "--dist", "1", "--nonrigid", "--delta", "1/4", "--class", "lc-atomic",
        "--horizon", "24",
    )
    first = run_cli(capsys, *args)
    second = run_cli(capsys, *args)
    assert first == second


def test_verify_single_init(capsys):
    code, out, _err = run_cli(
        capsys, "verify", "--alg", "nonqss3", "--class", "lc-atomic", "--rigid",
        "--init", "B,B", "--horizon", "40",
    )
    assert code == 2
    report = json.loads(out)
    assert report["verdict"]["kind"] == "diverges"
    assert report["verdict"]["certificate"]["ratio"] == "1/1"


def test_verify_classification_qss4(capsys):
    code, out, _err = run_cli(
        capsys, "verify", "--alg", "qss4", "--class", "lc-atomic",
        "--nonrigid", "--delta", "1/4", "--horizon", "60",
    )
    assert code == 0
    report = json.loads(out)
    assert report["classification"] == "quasi-self-stabilizing"
    assert report["same_color"]["A"]["kind"] == "rendezvous"
    assert report["mixed"]["A,C"]["kind"] == "diverges"


def test_enumerate_single_color(capsys):
    code, out, err = run_cli(
        capsys, "enumerate", "--colors", "1", "--labels", "0,1/2,1",
        "--class", "ssync", "--rigid", "--horizon", "16",
    )
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0].startswith("index,")
    assert len(rows) == 4  # header + three label choices
    assert all("diverges" in row for row in rows[1:])  # one color never meets
    assert "inconclusive" in err


def test_enumerate_oversized_needs_force(capsys):
    code, _out, err = run_cli(
        capsys, "enumerate", "--colors", "4", "--class", "ssync", "--horizon", "8",
    )
    assert code == 1
    assert "--force" in err


def test_replay_writes_validated_certificate(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    code, _out, _err = run_cli(
        capsys, "replay", "lemma9_3", "--lambda", "1/2", "--out", str(out_file),
    )
    assert code == 2
    cert = ScalingLoopCertificate.from_json(out_file.read_text())
    assert cert.ratio == Fraction(3, 8)
    cert.validate()


def test_replay_side_condition(capsys):
    code, _out, err = run_cli(capsys, "replay", "lemma9_6", "--lambda", "0")
    assert code == 1
    assert "alg6" in err


def test_replay_validate_flag(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    run_cli(capsys, "replay", "lemma6_alg_a", "--out", str(out_file))
    code, out, _err = run_cli(capsys, "replay", "--validate", str(out_file))
    assert code == 2
    assert "ratio 1/4" in out


def test_replay_validate_rejects_tampering(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    run_cli(capsys, "replay", "lemma6_alg_a", "--out", str(out_file))
    data = json.loads(out_file.read_text())
    data["ratio"] = "1/3"
    out_file.write_text(json.dumps(data))
    code, _out, err = run_cli(capsys, "replay", "--validate", str(out_file))
    assert code == 1
    assert "replay" in err or "ratio" in err


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"horizon": 8, "scheduler_class": "ssync"}))
    code, out, _err = run_cli(
        capsys, "--config", str(config), "run", "--alg", "ss3",
        "--schedule", "sim", "--init", "A,A",
    )
    assert code == 0
    assert json.loads(out.splitlines()[-1])["distance"] == "0/1"


def test_env_horizon_override(monkeypatch, capsys):
    monkeypatch.setenv("LUMIREND_HORIZON", "6")
    code, out, _err = run_cli(
        capsys, "run", "--alg", "ss3", "--schedule", "alt", "--init", "A,A",
        "--class", "lc-atomic,move-atomic",
    )
    assert code == 3  # too short to conclude anything
    assert len(out.splitlines()) == 6


def test_graph_file_input(tmp_path, capsys):
    from lumirend.algorithms import builtin

    path = tmp_path / "graph.json"
    path.write_text(builtin("ss3").to_json())
    code, out, _err = run_cli(
        capsys, "run", "--alg", str(path), "--schedule", "sim", "--init", "A,A",
        "--class", "ssync", "--horizon", "8",
    )
    assert code == 0
    assert json.loads(out.splitlines()[-1])["distance"] == "0/1"
