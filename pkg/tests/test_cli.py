import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from diop import cli

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(*argv, machine=True):
    buf = io.StringIO()
    status = cli.run((["--machine"] if machine else []) + list(argv), out=buf)
    return status, buf.getvalue()


def fields(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_transcript(name, monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run(*CASES[name])
    assert out + f"exit={status}\n" == (GOLDEN / f"{name}.out").read_text()


# -- exit codes and witnesses

def test_verified_context_passes(monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("duality-verify", "dual_numbers_d1.ctx.json")
    assert status == cli.OK and fields(out)["result"] == "pass"


@pytest.mark.parametrize("ctx", ["fault_scaled_orientation", "fault_zero_orientation",
                                 "fault_scaled_counit"])
def test_faulty_contexts_fail_with_a_witness(ctx, monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("duality-verify", f"{ctx}.ctx.json")
    assert status == cli.FAIL
    assert fields(out)["witness"].startswith("(")


def test_zero_coproduct_is_located(monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("check-frobenius", "dual_numbers_d1.cat.json", "zero_coproduct.fun.json")
    assert status == cli.FAIL
    assert fields(out)["witness"] == "(frobenius,(A,1,A))"


def test_parse_error_carries_line_and_column(monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("check-presentation", "malformed.pres")
    assert status == cli.INPUT
    assert "line 3, column" in fields(out)["error"]


def test_bad_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"context": "identity",\n  "bound": }')
    status, out = run("duality-verify", str(p))
    assert status == cli.INPUT and "line 2" in out


@pytest.mark.parametrize("spec, msg", [
    ({"context": "nonsense"}, "unknown context"),
    ({"context": "frobenius-algebra"}, "missing key 'algebra'"),
    ({"context": "frobenius-algebra", "algebra": "no-such"}, "unknown algebra"),
    ({"context": "frobenius-algebra", "algebra": "Q", "fault": {"type": "cosmic-ray"}}, "unknown fault"),
])
def test_malformed_context_files(tmp_path, spec, msg):
    p = tmp_path / "ctx.json"
    p.write_text(json.dumps(spec))
    status, out = run("duality-verify", str(p))
    assert status == cli.INPUT and msg in out


def test_algebra_table_is_validated(tmp_path):
    # Q with trace 0 is not a Frobenius algebra
    bad = {"name": "Q0", "degrees": [0], "mult": {"0,0": {"0": 1}}, "unit": [1], "trace": [0]}
    p = tmp_path / "cat.json"
    p.write_text(json.dumps({"category": "free-modules", "algebra": bad}))
    status, out = run("load-cat", str(p))
    assert status == cli.INPUT and "not a Frobenius algebra" in out
    good = dict(bad, trace=[1])
    p.write_text(json.dumps({"category": "free-modules", "algebra": good, "bound": 2}))
    assert run("load-cat", str(p), "--check")[0] == cli.OK


def test_bad_expression_and_biprofile(monkeypatch):
    monkeypatch.chdir(FIX)
    assert run("compose", "frob.pres", "mu.(eta")[0] == cli.INPUT
    assert run("envelope", "frob", "--biprofile", "x;x")[0] == cli.INPUT


def test_nonpositive_bounds_are_input_errors(monkeypatch):
    monkeypatch.chdir(FIX)
    assert run("--bound-words", "0", "load-cat", "vect.cat.json")[0] == cli.INPUT
    assert run("--bound-vertices", "-1", "envelope", "frob", "--biprofile", "(x;x)")[0] == cli.INPUT


def test_unknown_command_is_an_input_error(capsys):
    assert cli.run(["frobnicate"]) == cli.INPUT


def test_bounded_search_is_inconclusive(monkeypatch, tmp_path):
    # a relation set whose rewriting search blows up beyond a tiny state cap
    monkeypatch.chdir(FIX)
    monkeypatch.setattr(cli.dp.PresentedDioperad, "__init__",
                        _capped(cli.dp.PresentedDioperad.__init__, 3))
    status, out = run("compose", "frob.pres", "mu.(mu, id)", "--equals", "mu.(id, mu<1 0>)")
    assert status == cli.INCONCLUSIVE and fields(out)["verdict"] == "unknown"


def _capped(init, cap):
    def wrapped(self, *a, **kw):
        init(self, *a, **kw)
        self.max_states = cap
    return wrapped


def test_human_output_and_word_bound(monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("--bound-words", "2", "load-cat", "dual_numbers_d1.cat.json", machine=False)
    assert status == cli.OK
    assert out.startswith("== load-cat") and out.rstrip().endswith("result: PASS")
    assert "objects: 7" in out


def test_replay_reports_thirteen_terms(monkeypatch):
    monkeypatch.chdir(FIX)
    status, out = run("replay-proof", "main-theorem", "--instance", "replay_d1.ctx.json")
    f = fields(out)
    assert status == cli.OK and f["constant"] == "True"
    assert sum(k.startswith("term[") for k in f) == 13
    assert sum(k.startswith("link[") for k in f) == 12


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diop.cli", "--machine", "load-cat",
                           str(FIX / "vect.cat.json")], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "result=pass" in proc.stdout
