import io
import json

import pytest

from ltl4c.commands import EXIT_ERROR, EXIT_FALSE, EXIT_TRUE, parse_thread_list
from ltl4c.config import ENV_NAMES
from ltl4c.generators import get_shape
from main import main

LOGIN_PROPERTY = """\
# No user has more than 3 unauthorized login requests.
forall x : user(x) =>
  exists[<=3] r : rid(r) =>
    (login && unauthorized)
"""

LOGIN_TRACE = "\n".join([
    '{"rid": 12, "user": "Adam", "login": true, "unauthorized": true}',
    '{"rid": 13, "user": "Adam", "login": true, "unauthorized": true}',
    '{"rid": 14, "user": "Jack", "login": true, "authorized": true}',
    '{"rid": 15, "user": "Adam", "login": true, "unauthorized": true}',
    '{"rid": 16, "user": "Adam", "login": true, "unauthorized": true}',
]) + "\n"


@pytest.fixture(autouse=True)
def clean_environment(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ENV_NAMES.values():
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def files(tmp_path):
    paths = {
        "login": tmp_path / "login.ltl4c",
        "logins": tmp_path / "login.ltl4c.true",
        "broken": tmp_path / "broken.ltl4c",
        "trace": tmp_path / "trace.jsonl",
    }
    paths["login"].write_text(LOGIN_PROPERTY)
    paths["logins"].write_text("forall x : user(x) => F login\n")
    paths["broken"].write_text("forall x : user(x) => (login &&\n")
    paths["trace"].write_text(LOGIN_TRACE)
    return {name: str(path) for name, path in paths.items()}


def test_check_false(files, capsys):
    assert main(["check", files["login"], files["trace"]]) == EXIT_FALSE
    out = capsys.readouterr().out
    assert out.startswith("Verdict: FALSE (⊥)")
    assert "<Adam> exists[<=3] r" in out


def test_check_true(files, capsys):
    assert main(["check", files["logins"], files["trace"]]) == EXIT_TRUE
    assert capsys.readouterr().out.startswith("Verdict: CURRENTLY_TRUE")


def test_check_json(files, capsys):
    assert main(["check", files["login"], files["trace"], "--format", "json-lines"]) == EXIT_FALSE
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == 1
    assert report["type"] == "report"
    assert report["verdict"] == "FALSE"
    assert report["events"] == 5
    assert [node["path"] for node in report["nodes"]] == [[], ["Adam"], ["Jack"]]


def test_malformed_property(files, capsys):
    assert main(["check", files["broken"], files["trace"]]) == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_missing_files(files, tmp_path):
    assert main(["check", files["login"], str(tmp_path / "missing.jsonl")]) == EXIT_ERROR
    assert main(["check", files["login"], files["trace"], "--config", str(tmp_path / "none.env")]) == EXIT_ERROR


def test_malformed_trace(files, tmp_path, capsys):
    trace = tmp_path / "bad.jsonl"
    trace.write_text(LOGIN_TRACE + "not json\n")
    assert main(["check", files["login"], str(trace)]) == EXIT_ERROR
    assert "line 6" in capsys.readouterr().err
    assert main(["check", files["login"], str(trace), "--on-malformed", "skip"]) == EXIT_FALSE


def test_stream(files, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(LOGIN_TRACE))
    assert main(["stream", files["login"], "--batch-size", "1"]) == EXIT_FALSE
    lines = capsys.readouterr().out.splitlines()
    summary = lines.index("Summary")
    verdicts = [line.split()[0] for line in lines[:summary]]
    assert verdicts == ["PRESUMABLY_TRUE", "CURRENTLY_TRUE", "CURRENTLY_TRUE",
                        "CURRENTLY_TRUE", "CURRENTLY_TRUE", "FALSE"]
    assert lines[summary - 1] == "FALSE batch=5 events=5"
    assert lines[summary + 1].startswith("Verdict: FALSE")


def test_stream_empty_input(files, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    assert main(["stream", files["login"]]) == EXIT_TRUE
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "PRESUMABLY_TRUE batch=0 events=0"
    assert lines[1] == "Summary"


def test_stream_json_lines(files, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(LOGIN_TRACE + "garbage\n"))
    code = main(["stream", files["login"], "--batch-size", "2", "--format", "json-lines",
                 "--on-malformed", "skip", "--batch-latency-ms", "60000"])
    assert code == EXIT_FALSE
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert all(record["schema_version"] == 1 for record in records)
    assert [record["type"] for record in records] == ["verdict"] * 4 + ["summary"]
    assert [record["events"] for record in records[:4]] == [0, 2, 4, 5]
    assert records[-1]["verdict"] == "FALSE"


def test_explain(files, capsys):
    assert main(["explain", files["login"], files["trace"]]) == EXIT_FALSE
    out = capsys.readouterr().out
    monitor, tree = out.split("== tree ==\n")
    assert monitor.startswith("== monitor ==\n# atoms: bit0=login bit1=unauthorized")
    rows = tree.splitlines()
    assert rows[0].startswith("<> forall[=1] x")
    assert rows[1].startswith("<Adam> exists[<=3] r") and rows[1].endswith("FALSE latched")
    assert rows[2].startswith("<Jack> exists[<=3] r") and rows[2].endswith("TRUE")


def test_explain_without_trace(files, capsys):
    assert main(["explain", files["login"], "--minimize"]) == EXIT_TRUE
    assert "# initial: 0 PRESUMABLY_FALSE" in capsys.readouterr().out


def test_gen_is_deterministic(capsys):
    assert main(["gen", "--shape", "login", "--size", "50", "--seed", "1"]) == EXIT_TRUE
    first = capsys.readouterr().out
    main(["gen", "--shape", "login", "--size", "50", "--seed", "1"])
    assert capsys.readouterr().out == first
    records = [json.loads(line) for line in first.splitlines()]
    assert len(records) == 50
    assert all(record["login"] is True for record in records)


def test_gen_then_check(tmp_path, capsys):
    main(["gen", "--shape", "socket", "--size", "200", "--cardinality", "10"])
    trace = tmp_path / "socket.jsonl"
    trace.write_text(capsys.readouterr().out)
    code = main(["check", get_shape("socket").property_path, str(trace), "--threads", "2"])
    assert code in (EXIT_TRUE, EXIT_FALSE)
    assert capsys.readouterr().out.startswith("Verdict:")


def test_bench(capsys):
    code = main(["bench", "--shape", "chunk", "--size", "200", "--cardinality", "5", "--thread-list", "1,2"])
    assert code == EXIT_TRUE
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["threads", "events", "elapsed_s", "events_per_s", "verdict"]
    assert [line.split()[0] for line in lines[1:]] == ["1", "2"]
    assert len({line.split()[-1] for line in lines[1:]}) == 1


def test_bad_thread_list():
    with pytest.raises(ValueError):
        parse_thread_list("0,2")
    assert parse_thread_list("1, 4") == [1, 4]
    assert main(["bench", "--size", "10", "--thread-list", "x"]) == EXIT_ERROR


def test_invalid_utf8_follows_the_malformed_policy(files, tmp_path, capsys):
    trace = tmp_path / "bytes.jsonl"
    trace.write_bytes(LOGIN_TRACE.encode() + b'{"user": "\xff\xfe"}\n')
    assert main(["check", files["login"], str(trace)]) == EXIT_ERROR
    assert "line 6: invalid UTF-8" in capsys.readouterr().err
    assert main(["check", files["login"], str(trace), "--on-malformed", "skip"]) == EXIT_FALSE
    assert capsys.readouterr().out.startswith("Verdict: FALSE")


def test_stream_reads_stdin_bytes(files, monkeypatch, capsys):
    raw = b'{"user": "\xff"}\n' + LOGIN_TRACE.encode()
    monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(raw)))
    assert main(["stream", files["login"], "--on-malformed", "skip", "--batch-latency-ms", "60000"]) == EXIT_FALSE
    assert "FALSE batch=1 events=5" in capsys.readouterr().out


@pytest.mark.parametrize("property_name", ["login", "logins"])
def test_check_and_unbounded_stream_agree(files, monkeypatch, capsys, property_name):
    check_code = main(["check", files[property_name], files["trace"], "--format", "json-lines"])
    checked = json.loads(capsys.readouterr().out)
    monkeypatch.setattr("sys.stdin", io.StringIO(LOGIN_TRACE))
    stream_code = main(["stream", files[property_name], "--batch-size", str(1 << 30), "--format", "json-lines"])
    streamed = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert stream_code == check_code
    assert streamed[-1]["type"] == "summary"
    assert streamed[-1]["verdict"] == checked["verdict"]
