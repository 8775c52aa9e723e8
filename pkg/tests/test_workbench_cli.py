import json
import os
import subprocess
import sys

import pytest

from conftest import DEFAULT_CFG
from cuntzring.cli import main
from cuntzring.config import DEFAULT_BOUNDS, SUITES, load_config, parse_config
from cuntzring.errors import ParseError, UnknownConstructor, UnknownSuite, UnsupportedFormat
from cuntzring.ideals import build_lattice
from cuntzring.report import emit, replay
from cuntzring.ringspec import build_ring
from cuntzring.suites import SuiteResult, run_suite


def cfg_text(rings, suites="", extra=""):
    lines = ["[rings]"] + [f"{k} = {v}" for k, v in rings.items()]
    if suites:
        lines += ["[run]", f"suites = {suites}"]
    return "\n".join(lines) + "\n" + extra


# ---- parse_config

def test_minimal_config_defaults():
    cfg = parse_config(cfg_text({"z6": "zmod(6)"}, "ideal-classes"))
    assert cfg.suites == ["ideal-classes"] and cfg.seed == 0
    assert cfg.bounds == DEFAULT_BOUNDS and cfg.bounds["budget"] == 10 ** 8
    assert cfg.built_rings["z6"].size == 6


def test_duplicate_ring_name():
    with pytest.raises(ParseError) as e:
        parse_config("[rings]\nz = zmod(6)\nz = zmod(4)\n")
    assert e.value.line == 3


def test_names_unique_across_sections():
    with pytest.raises(ParseError):
        parse_config("[rings]\nx = zmod(2)\n[poms]\nx = nat\n")


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse_config("[rings]\nz6 = zmod(6\n")
    assert e.value.line == 2 and e.value.col > 5
    with pytest.raises(ParseError):
        parse_config("[bounds]\nmatrix_size = 0\n")
    with pytest.raises(ParseError):
        parse_config("[widgets]\na = 1\n")


def test_unknown_suite_and_constructor():
    with pytest.raises(UnknownSuite):
        parse_config(cfg_text({"z6": "zmod(6)"}, "no-such-suite"))
    with pytest.raises(UnknownConstructor):
        parse_config(cfg_text({"q": "quaternions(3)"}))


def test_thm_retract_covers_all_rings():
    cfg = parse_config(cfg_text({"z4": "zmod(4)", "z6": "zmod(6)", "f2": "gf(2)"}, "thm-retract"))
    res = run_suite(cfg, "thm-retract")
    assert [r["subject"] for r in res.records] == ["z4", "z6", "f2"]
    assert res.summary == {"pass": 3, "fail": 0, "unknown": 0}


def test_default_config_parses():
    cfg = load_config(DEFAULT_CFG)
    assert len(cfg.rings) >= 12 and set(cfg.suites) == set(SUITES)
    assert len(cfg.systems) == 5


# ---- run_suite

def test_ideal_classes_three_rings():
    cfg = parse_config(cfg_text({"z4": "zmod(4)", "z6": "zmod(6)", "u2": "upper(2,zmod(2))"}))
    res = run_suite(cfg, "ideal-classes")
    assert res.summary["fail"] == 0 and res.summary["unknown"] == 0 and res.summary["pass"] > 0


def test_ring_classes_even_ring_counterexample():
    cfg = parse_config(cfg_text({"even16": "subring_nonunital(zmod(16),{2})"}))
    res = run_suite(cfg, "ring-classes")
    dense = next(r for r in res.records if r["check"] == "dense")
    R = build_ring("subring_nonunital(zmod(16),{2})")
    w = dense["witness"]
    assert w["kind"] == "non_dense"
    assert (R.labels[w["x"][0][0]], R.labels[w["y"][0][0]]) == ("8", "2")
    assert all(ok for _, ok in replay(res.to_json()))


def test_empty_corpus():
    cfg = parse_config("[run]\nsuites = ideal-classes\n")
    res = run_suite(cfg, "ideal-classes")
    assert res.records == [] and res.summary == {"pass": 0, "fail": 0, "unknown": 0}


def test_unknown_suite_at_run_time():
    cfg = parse_config(cfg_text({"z2": "zmod(2)"}))
    with pytest.raises(UnknownSuite):
        run_suite(cfg, "bogus")


# ---- emit

def test_dot_for_z6_lattice():
    dot = emit(build_lattice(build_ring("zmod(6)")), "dot").decode()
    assert dot.count("[label=") == 4 and dot.count(" -> ") == 4
    assert "|1| [" in dot and "|6| [" in dot


def test_empty_result_json():
    doc = json.loads(emit([], "json", "abc", 0))
    assert doc == {"schema_version": "1.0", "config_digest": "abc", "seed": 0, "results": []}


def test_emit_is_byte_identical():
    cfg = parse_config(cfg_text({"z4": "zmod(4)"}))
    a = emit([run_suite(cfg, "thm-retract")], "json", cfg.digest())
    b = emit([run_suite(cfg, "thm-retract")], "json", cfg.digest())
    assert a == b


def test_emit_unsupported():
    with pytest.raises(UnsupportedFormat):
        emit(SuiteResult("x"), "yaml")


def test_threads_do_not_change_output():
    text = cfg_text({"z4": "zmod(4)", "z6": "zmod(6)", "f2": "gf(2)"})
    c1 = parse_config(text)
    c4 = parse_config(text)
    c4.threads = 4
    for suite in ("ideal-classes", "qp-chains"):
        assert emit([run_suite(c1, suite)]) == emit([run_suite(c4, suite)])


# ---- CLI

def test_cli_list_and_describe(capsys):
    assert main(["list-suites"]) == 0
    out = capsys.readouterr().out
    assert all(s in out for s in SUITES)
    assert main(["describe-ring", "z6", "--config", DEFAULT_CFG]) == 0
    assert "ideals: 4" in capsys.readouterr().out
    assert main(["describe-ring", "nope", "--config", DEFAULT_CFG]) == 2


def test_cli_usage_errors(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("[rings]\nz = zmod(\n")
    assert main(["run", "--config", str(bad)]) == 2
    good = tmp_path / "good.cfg"
    good.write_text(cfg_text({"z4": "zmod(4)"}))
    assert main(["run", "--config", str(good), "--suite", "bogus"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["run"])
    assert e.value.code == 2


def test_cli_run_json_dot_and_replay(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(cfg_text({"z4": "zmod(4)", "even16": "subring_nonunital(zmod(16),{2})"}))
    out, dots = tmp_path / "r.json", tmp_path / "dot"
    assert main(["run", "--config", str(cfg), "--suite", "ring-classes", "--suite", "ideal-classes",
                 "--json", str(out), "--dot", str(dots)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == "1.0" and [r["suite"] for r in doc["results"]] == ["ring-classes", "ideal-classes"]
    assert sorted(os.listdir(dots)) == ["even16.dot", "z4.dot"]
    assert main(["run", "--config", str(cfg), "--replay", str(out)]) == 0
    assert "elapsed" not in out.read_text()


def test_cli_timings_flag(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(cfg_text({"z4": "zmod(4)"}))
    out = tmp_path / "r.json"
    assert main(["run", "--config", str(cfg), "--suite", "thm-retract", "--json", str(out), "--timings"]) == 0
    assert "elapsed" in out.read_text()


def test_replay_rejects_tampered_witness(tmp_path):
    cfg = parse_config(cfg_text({"even16": "subring_nonunital(zmod(16),{2})"}))
    doc = json.loads(emit([run_suite(cfg, "ring-classes")]))
    for rec in doc["results"][0]["records"]:
        if rec["witness"] and rec["witness"]["kind"] == "non_dense":
            rec["witness"]["s"] = [[0]]
    assert not all(ok for _, ok in replay(doc))


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "cuntzring.cli", "list-suites"], capture_output=True, text=True)
    assert r.returncode == 0 and "sq-pairs" in r.stdout
