import json
import subprocess
import sys

import pytest

from scfo.cli import main
from scfo.search import certificate_for
from scfo.verify import PROTOCOL_FIXTURES, fixture_path, load_fixture, template_to_dict


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("n,rows", [(3, 14), (2, 4), (1, 2)])
def test_classes(n, rows, capsys):
    code, out, _ = run(["classes", "--n", str(n)], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith(f"{rows} NPN classes")
    assert len(lines) == 1 + rows


def test_classes_names_catalog(capsys):
    _, out, _ = run(["classes", "--n", "3"], capsys)
    assert "eq3" in out and "xor3" in out and "maj3" in out


def test_classes_range(capsys):
    code, _, err = run(["classes", "--n", "5"], capsys)
    assert code == 1 and "between 1 and 4" in err


def test_search_bitstring(tmp_path, capsys):
    out = tmp_path / "xor.json"
    code, text, _ = run(["search", "0110", "--n", "2", "--out", str(out)], capsys)
    assert code == 0
    assert "table=0110" in text
    doc = json.loads(out.read_text())
    assert doc["kind"] == "protocol-certificate" and doc["k0"] == 0
    assert doc["function"]["name"] == "xor2"


def test_search_stdout_document(capsys):
    code, text, err = run(["search", "and2"], capsys)
    assert code == 0
    doc = json.loads(text)
    assert doc["k0"] == 1 and doc["final_length"] == 5
    assert "protocol found" in err


def test_search_trace(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    run(["search", "and2", "--out", str(tmp_path / "a.json"), "--trace", str(trace)], capsys)
    lines = trace.read_text().splitlines()
    assert lines and all(line.startswith("pi=") for line in lines)


def test_search_usage_errors(capsys):
    assert run(["search", "nand9"], capsys)[0] == 1
    assert run(["search", "011"], capsys)[0] == 1
    assert run(["search", "and2", "--threads", "0"], capsys)[0] == 1
    assert run(["search", "and2", "--explore-delta", "-1"], capsys)[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_search_capped_is_noncertifying(capsys):
    code, _, err = run(["search", "and2", "--max-points", "1"], capsys)
    assert code == 2
    assert "NOT certified" in err


def test_byte_identical_outputs(tmp_path, capsys):
    paths = [tmp_path / f"run{i}.json" for i in range(3)]
    run(["search", "and2", "--out", str(paths[0])], capsys)
    run(["search", "and2", "--out", str(paths[1])], capsys)
    run(["search", "and2", "--threads", "3", "--out", str(paths[2])], capsys)
    a, b, c = (p.read_bytes() for p in paths)
    assert a == b
    # the config block records the thread count; everything else must match
    da, dc = json.loads(a), json.loads(c)
    da.pop("config"), dc.pop("config")
    assert da == dc


@pytest.mark.parametrize("name", PROTOCOL_FIXTURES)
def test_verify_fixtures(name, capsys):
    code, out, _ = run(["verify", str(fixture_path(name))], capsys)
    assert code == 0 and out.strip().endswith("valid")


def test_verify_violation(tmp_path, capsys):
    code, out, _ = run(["verify", str(fixture_path("and2_without_heart"))], capsys)
    assert code == 3
    assert "witness: ((0, 0), (1, 1))" in out
    t, f, name = load_fixture("xor2_four_cards")
    doc = template_to_dict(t, f, name)
    doc["slots"] = ["x1", "x2", "~x1", "~x2"]
    p = tmp_path / "mutant.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(p)], capsys)
    assert code == 3 and "witness" in out


def test_verify_schema_errors(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("[]")
    assert run(["verify", str(p)], capsys)[0] == 1
    assert run(["verify", str(tmp_path / "missing.json")], capsys)[0] == 1


def test_table2_subset(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, text, _ = run(["table2", "--only", "and2", "xor2", "--out", str(out)], capsys)
    assert code == 0
    assert "(1,0)-SCFO" in text and "(0,0)-SCFO" in text
    doc = json.loads(out.read_text())
    assert [r["matches_published"] for r in doc["rows"]] == [True, True]
    assert run(["table2", "--only", "nope"], capsys)[0] == 1


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "scfo.cli", "classes", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("4 NPN classes")


@pytest.mark.slow
def test_verify_search_produced_eq3(search_result, tmp_path, capsys):
    cert = certificate_for(search_result("eq3")).to_dict()
    p = tmp_path / "eq3.json"
    p.write_text(json.dumps(cert))
    code, out, _ = run(["verify", str(p)], capsys)
    assert code == 0 and cert["k0"] == 0


@pytest.mark.slow
def test_search_xor3_reports_impossibility(tmp_path, capsys):
    out = tmp_path / "xor3.json"
    code, _, _ = run(["search", "xor3", "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    assert code == 0
    assert doc["kind"] == "impossibility-report" and doc["valid"]
    assert doc["search_space"]["instances"] == 524_880
    assert doc["tallies"]["accepted"] == 0
