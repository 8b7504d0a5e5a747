import json

import jsonschema
import pytest

from qaybe.cli import main, parse_complex
from qaybe.report import RunConfig, load_schema
from qaybe.suite import RowSpec, default_suite, run_row
from qaybe.verify import Identity
from qaybe.families import RFamily


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [
    ("0.3+0.2i", 0.3 + 0.2j), ("1", 1), ("-i", -1j), ("i", 1j), ("2.5i", 2.5j), ("-1e-3-2E+1i", -1e-3 - 20j),
    ("0.1-0.4j", 0.1 - 0.4j), (" -0.5 ", -0.5),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1+2k"])
def test_parse_complex_rejects(bad):
    with pytest.raises(ValueError):
        parse_complex(bad)


def test_verify_rational_aybe(capsys):
    code, out, _ = run(capsys, "verify", "--family", "rational", "--identity", "aybe", "--N", "2", "--samples", "20")
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema())
    assert code == 0
    row = rep["rows"][0]
    assert row["samples_run"] == 20 and row["max_residual_rel"] <= 1e-10
    assert row["identity"] == "aybe" and row["family"] == "rational"


def test_verify_rcal_aybe_points_to_modified(capsys):
    code, out, err = run(capsys, "verify", "--family", "rcal", "--identity", "aybe", "--samples", "3")
    assert code == 1
    rep = json.loads(out)
    assert "modified-aybe" in rep["rows"][0]["notice"]
    assert "modified-aybe" in err
    notices = rep["notices"]
    assert notices["rcal_literal"][0]["coth_rel_diff"] > 1e-3
    assert notices["rcal_literal"][0]["cot_rel_diff"] <= 1e-12
    assert notices["trig_index_range"][0]["passes"]


def test_verify_rcal_modified(capsys):
    code, out, _ = run(capsys, "verify", "--family", "rcal", "--identity", "modified-aybe", "--samples", "5")
    assert code == 0


def test_verify_all_text(capsys):
    code, out, _ = run(capsys, "verify", "--family", "classical-trig", "--N", "2", "--samples", "2",
                       "--format", "text")
    assert code == 0
    assert out.count("PASS ") == 3 and out.strip().endswith("PASS: 3/3 rows")


@pytest.mark.parametrize("argv", [
    ("verify", "--family", "nope"),
    ("verify", "--family", "rational", "--identity", "nope"),
    ("verify", "--family", "rational", "--N", "0"),
    ("verify", "--family", "rational", "--tol", "-1"),
    ("verify", "--family", "rational", "--tol", "1+1i"),
    ("verify", "--family", "rational", "--samples", "0"),
    ("verify", "--family", "rational", "--seed", "-3"),
    ("verify", "--family", "g-gauge", "--identity", "aybe"),
    ("suite", "--family", "d", "--identity", "aybe"),
    ("bogus",),
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "r.json"
    code, _, err = run(capsys, "verify", "--family", "rational", "--identity", "fay", "--N", "1",
                       "--samples", "2", "--out", str(target))
    assert code == 2 and "cannot write" in err


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QAYBE_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "verify", "--family", "rational", "--identity", "fay", "--N", "1",
                       "--samples", "2", "--out", "somewhere/report.json")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "report.json").read_text())["summary"]["status"] == "pass"


def test_reports_byte_identical(capsys):
    argv = ("suite", "--N", "2", "--family", "trig", "--samples", "2")
    c1, a, _ = run(capsys, *argv)
    c2, b, _ = run(capsys, *argv)
    assert c1 == c2 == 0 and a == b
    c3, c, _ = run(capsys, *argv[:-1], "2", "--seed", "7")
    assert c != a


def test_timings_opt_in(capsys):
    _, out, _ = run(capsys, "verify", "--family", "rational", "--identity", "skew", "--N", "1", "--samples", "2",
                    "--timings")
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema())
    assert "seconds" in rep["rows"][0]


def test_describe(capsys):
    code, out, _ = run(capsys, "describe", "--family", "rational", "--N", "1")
    rep = json.loads(out)
    assert code == 0
    assert [c["name"] for c in rep["contributions"]] == ["Id", "P12", "J1J2P12"]
    assert rep["reconstruction_rel_diff"] == 0
    for fam_tag, extra in (("f-twist", ()), ("g-gauge", ("--u", "0"))):
        _, out, _ = run(capsys, "describe", "--family", fam_tag, "--N", "1", *extra)
        assert json.loads(out)["is_identity"]
    _, out, _ = run(capsys, "describe", "--family", "g-gauge", "--N", "2", "--u", "0.3+0.1i", "--format", "text")
    assert "(identity)" not in out


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--N", "2", "--N", "4")
    rep = json.loads(out)
    assert code == 0
    assert [r["nnz_r_trig"] for r in rep["results"]] == [40, 176]
    assert rep["dense_sparse_max_gap_N2"] <= 1e-12


def test_bench_memory_guard(capsys):
    code, out, _ = run(capsys, "bench", "--N", "2", "--N", "8", "--memory-budget-mb", "0.5")
    rep = json.loads(out)
    assert "aborted" in rep["results"][1] and "nnz_r_trig" in rep["results"][0]


def test_suite_definition():
    rows = default_suite()
    keys = [r.key for r in rows]
    assert len(keys) == len(set(keys))
    fails = [r for r in rows if r.expected == "fail"]
    assert any(r.identity is Identity.AYBE and r.family is RFamily.RCAL for r in fails)
    assert any(r.perturb for r in fails)
    identities = {r.identity for r in rows}
    assert identities == set(Identity)


def test_rejections_are_recorded():
    spec = RowSpec(Identity.UNITARITY, RFamily.TRIG_LITERAL, 1)
    res = run_row(spec, 5, seed=1, margin=0.45)
    assert res.samples_run == 5 and len(res.rejected) > 0
    assert all(i not in {j for j, _ in res.checks} for i, _ in res.rejected)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("verify", tol=0)
    with pytest.raises(ValueError):
        RunConfig("verify", samples=0)


def test_default_suite_passes(capsys):
    import time
    t0 = time.perf_counter()
    code, out, _ = run(capsys, "suite")
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema())
    assert code == 0 and rep["summary"]["status"] == "pass"
    assert time.perf_counter() - t0 < 300
    controls = [r for r in rep["rows"] if r["expected"] == "fail"]
    assert controls and all(r["passed"] and not r["identity_holds"] for r in controls)
