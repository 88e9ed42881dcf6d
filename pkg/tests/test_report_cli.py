import json

import pytest
from click.testing import CliRunner

from botcorr.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def generate(runner, tmp_path, kind, seed=1, duration=60):
    prefix = tmp_path / kind
    result = runner.invoke(
        main, ["generate", kind, str(prefix), "--duration", str(duration), "--seed", str(seed)]
    )
    assert result.exit_code == 0, result.output
    return f"{prefix}.events.jsonl", f"{prefix}.netstat.jsonl"


def test_generate_writes_parseable_fixture_pair(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "benign_chat")
    result = runner.invoke(main, ["extract", events, netstat])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "sec,s1,s2,s3"
    assert len(lines) == 61


def test_generate_is_byte_deterministic(runner, tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    e1, n1 = generate(runner, tmp_path / "a", "bot_active", seed=9)
    e2, n2 = generate(runner, tmp_path / "b", "bot_active", seed=9)
    assert open(e1, "rb").read() == open(e2, "rb").read()
    assert open(n1, "rb").read() == open(n2, "rb").read()


def test_generate_rejects_short_duration(runner, tmp_path):
    result = runner.invoke(main, ["generate", "benign_chat", str(tmp_path / "x"), "--duration", "5"])
    assert result.exit_code == 1
    assert "duration" in result.output


def test_extract_benign_chat_rows_are_idle(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "benign_chat")
    result = runner.invoke(main, ["extract", events, netstat])
    assert result.exit_code == 0
    for k, row in enumerate(result.output.splitlines()[1:]):
        assert row == f"{k},0,0,100"


def test_extract_missing_file_names_path(runner, tmp_path):
    _, netstat = generate(runner, tmp_path, "benign_chat")
    result = runner.invoke(main, ["extract", str(tmp_path / "nope.jsonl"), netstat])
    assert result.exit_code != 0
    assert "nope.jsonl" in result.output


def test_extract_empty_logs_is_empty_session_error(runner, tmp_path):
    empty_events = tmp_path / "empty.events.jsonl"
    empty_netstat = tmp_path / "empty.netstat.jsonl"
    empty_events.write_text("")
    empty_netstat.write_text("")
    result = runner.invoke(main, ["extract", str(empty_events), str(empty_netstat)])
    assert result.exit_code == 1
    assert "empty session" in result.output


def test_extract_reports_offending_line(runner, tmp_path):
    events = tmp_path / "bad.events.jsonl"
    events.write_text(
        '{"t":1,"pid":1,"proc":"a","fn":"send","cat":"communication","dir":"out"}\n'
        '{"t":2,"pid":1,"proc":"a","fn":"send","cat":"network","dir":"out"}\n'
    )
    netstat = tmp_path / "ok.netstat.jsonl"
    netstat.write_text('{"t":1,"du":0,"fca":0,"rst":0,"pkts_sent":0}\n')
    result = runner.invoke(main, ["extract", str(events), str(netstat)])
    assert result.exit_code == 1
    assert "line 2" in result.output


def test_analyze_chain_from_extract(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_inactive")
    csv_path = tmp_path / "signals.csv"
    assert runner.invoke(main, ["extract", events, netstat, "-o", str(csv_path)]).exit_code == 0
    result = runner.invoke(main, ["analyze", str(csv_path), "--sv", "10,20,30,40,50"])
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)
    assert [r["sv"] for r in rows] == [10, 20, 30, 40, 50]
    assert all(r["verdict"] == "malicious" for r in rows)
    assert all(abs(r["acv"] - r["af"] * 2.718281828459045 ** r["corr_f"]) < 1e-3 for r in rows)


def test_analyze_csv_format(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "benign_browse")
    csv_path = tmp_path / "signals.csv"
    runner.invoke(main, ["extract", events, netstat, "-o", str(csv_path)])
    result = runner.invoke(main, ["analyze", str(csv_path), "--format", "csv"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "sv,af,corr_f,acv,verdict"
    assert len(lines) == 6
    assert all(line.endswith("benign") for line in lines[1:])


def test_profile_output(runner, tmp_path):
    events, _ = generate(runner, tmp_path, "bot_active")
    result = runner.invoke(main, ["profile", events])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "pid,proc,call_count,share"
    assert ",peacomm," in lines[1]


def test_report_bot_names_suspect(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_inactive")
    result = runner.invoke(main, ["report", events, netstat])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["suspect"]["proc"] == "peacomm"
    assert report["session"]["duration"] == 60
    assert [r["sv"] for r in report["results"]] == [10, 20, 30, 40, 50]
    assert report["config"]["threshold"] == 50
    assert report["profiles"][0]["proc"] == "peacomm"
    assert 0 <= report["signals"]["s2"]["mean"] <= 100


def test_report_benign_has_no_suspect(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "benign_browse")
    result = runner.invoke(main, ["report", events, netstat])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["suspect"] is None
    assert all(r["verdict"] == "benign" for r in report["results"])


def test_report_is_byte_deterministic(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_active", seed=4)
    first = runner.invoke(main, ["report", events, netstat])
    second = runner.invoke(main, ["report", events, netstat])
    assert first.output == second.output


def test_report_fail_on_detect_exit_codes(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_inactive")
    assert runner.invoke(main, ["report", events, netstat]).exit_code == 0
    assert runner.invoke(main, ["report", events, netstat, "--fail-on-detect"]).exit_code == 3
    events, netstat = generate(runner, tmp_path, "benign_chat")
    assert runner.invoke(main, ["report", events, netstat, "--fail-on-detect"]).exit_code == 0


def test_report_respects_s3_mode_and_threshold(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_inactive")
    result = runner.invoke(
        main, ["report", events, netstat, "--s3-mode", "inverted", "--threshold", "99"]
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["config"]["s3_mode"] == "inverted"
    # inverted correlation drives ACV*100 far above 99 on a flooding bot
    assert all(r["verdict"] == "malicious" for r in report["results"][:3])


def test_report_window_flag(runner, tmp_path):
    events, netstat = generate(runner, tmp_path, "bot_inactive")
    result = runner.invoke(main, ["report", events, netstat, "--window", "10"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["config"]["window"] == 10
    # a 10 s window catches a denser hot stretch than the whole session
    full = json.loads(runner.invoke(main, ["report", events, netstat]).output)
    assert report["results"][0]["acv"] >= full["results"][0]["acv"]
