"""Suite machinery: reports, pass rules, determinism, CLI plumbing."""

import json
import os
import subprocess
import sys

import pytest

from fracvar.suites import (
    SUITE_NAMES,
    SuiteReport,
    reports_to_csv,
    run_all,
    run_suite,
    suite_halfspace,
    suite_hardy_optimal,
    suite_rigidity,
    suite_variation_bound,
)


class TestReportRules:
    def test_compare_pass_fail(self):
        rep = SuiteReport("demo", tolerance=1e-6)
        rep.add_compare("ok", 0.5, 1, 1.0000001, 1.0)
        rep.add_compare("bad", 0.5, 1, 1.01, 1.0)
        assert rep.cases[0].passed
        assert not rep.cases[1].passed
        assert not rep.passed

    def test_near_zero_uses_absolute_error(self):
        rep = SuiteReport("demo", tolerance=1e-6)
        rep.add_compare("zero", 0.5, 1, 5e-7, 0.0)
        assert rep.cases[0].passed
        rep.add_compare("zero_bad", 0.5, 1, 5e-6, 0.0)
        assert not rep.cases[1].passed

    def test_margin_rule(self):
        rep = SuiteReport("demo", tolerance=1e-6)
        rep.add_margin("slack", 0.5, 1, 1.0, 2.0)
        rep.add_margin("tight", 0.5, 1, 1.0, 1.0 - 5e-7)
        rep.add_margin("violated", 0.5, 1, 1.0, 0.9)
        assert rep.cases[0].passed
        assert rep.cases[1].passed
        assert not rep.cases[2].passed


class TestSuiteRuns:
    def test_hardy_suite(self):
        rep = suite_hardy_optimal()
        assert rep.passed
        assert len(rep.cases) == 21  # 9 identities + 9 quadratures + 3 rows

    def test_halfspace_suite(self):
        rep = suite_halfspace()
        assert rep.passed
        tangential = [c for c in rep.cases if "tangential" in c.case_id]
        assert len(tangential) == 3
        assert all(c.abs_err <= 1e-8 for c in tangential)

    def test_rigidity_suite(self):
        rep = suite_rigidity()
        assert rep.passed
        signs = [c for c in rep.cases if c.case_id.startswith("sign_")]
        assert len(signs) == 20
        assert all(c.lhs < 0 for c in signs)

    def test_varbound_suite_single_alpha(self):
        rep = suite_variation_bound(alpha=(0.5,))
        assert rep.passed

    def test_unknown_suite_name(self):
        with pytest.raises(ValueError):
            run_suite("bogus")

    def test_deterministic_reports(self):
        csv1 = reports_to_csv([suite_hardy_optimal()])
        csv2 = reports_to_csv([suite_hardy_optimal()])
        assert csv1 == csv2

    def test_csv_shape(self):
        text = reports_to_csv([suite_hardy_optimal()])
        lines = text.strip().split("\n")
        assert lines[0] == "suite,case_id,alpha,n,lhs,rhs,abs_err,rel_err,tol,pass"
        assert all(len(line.split(",")) == 10 for line in lines[1:])
        assert all(line.split(",")[-1] in ("0", "1") for line in lines[1:])

    def test_run_all_subset_exit_code(self):
        reports, code = run_all({"suites": ("hardy", "halfspace"), "threads": 1})
        assert code == 0
        assert [r.suite for r in reports] == ["hardy", "halfspace"]

    def test_run_all_threaded_matches_serial(self):
        serial, _ = run_all({"suites": ("hardy", "varbound"), "threads": 1,
                             "alphas": (0.5,)})
        threaded, _ = run_all({"suites": ("hardy", "varbound"), "threads": 4,
                               "alphas": (0.5,)})
        assert reports_to_csv(serial) == reports_to_csv(threaded)

    def test_quad_config_accepted(self):
        reports, code = run_all({
            "suites": ("halfspace",), "threads": 1, "alphas": (0.5,),
            "quad": {"rel_tol": 1e-7, "abs_tol": 1e-11},
        })
        assert code == 0 and reports[0].passed


def _cli(*args, env_extra=None, timeout=600):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "fracvar", *args],
        capture_output=True, text=True, env=env, timeout=timeout,
    )


class TestCli:
    def test_constants_row(self):
        res = _cli("constants", "--n", "1", "--alpha", "0.5")
        assert res.returncode == 0
        header, row = res.stdout.strip().split("\n")
        assert header.startswith("n,alpha,mu,nu_1_minus_alpha,c_half")
        vals = row.split(",")
        assert float(vals[2]) == pytest.approx(0.19947114020071634, rel=1e-12)
        assert float(vals[3]) < 0.0  # the Laplacian constant is negative

    def test_eval_gradient_points(self):
        res = _cli(
            "eval", "--op", "grad", "--alpha", "0.5",
            "--field", '{"kind":"half_space_indicator","nu":[1],"x0":[0]}',
            "--points", "1;4",
        )
        assert res.returncode == 0
        rows = res.stdout.strip().split("\n")
        assert len(rows) == 2
        v1 = float(rows[0].split(",")[1])
        assert v1 == pytest.approx(0.3989422804014327, rel=1e-6)

    def test_eval_field_from_file(self, tmp_path):
        p = tmp_path / "field.json"
        p.write_text(json.dumps({"kind": "gaussian", "center": [0], "width": 1, "dim": 1}))
        res = _cli("eval", "--op", "riesz", "--alpha", "0.5",
                   "--field", f"@{p}", "--points", "0")
        assert res.returncode == 0
        assert float(res.stdout.strip().split(",")[1]) == pytest.approx(
            1.086434811213308, rel=1e-7
        )

    def test_oracle_interval(self):
        res = _cli("oracle", "--name", "interval", "--alpha", "0.5")
        assert res.returncode == 0
        row = res.stdout.strip().split("\n")[1].split(",")
        assert float(row[0]) == pytest.approx(4.0)

    def test_verify_single_suite_csv(self, tmp_path):
        out = tmp_path / "report.csv"
        res = _cli("verify", "--suite", "hardy", "--out", str(out))
        assert res.returncode == 0
        text = out.read_text()
        assert text.startswith("suite,case_id,alpha,n,lhs,rhs")
        assert "[pass] hardy" in res.stderr

    def test_verify_respects_thread_env(self, tmp_path):
        out1 = tmp_path / "r1.csv"
        out2 = tmp_path / "r2.csv"
        r1 = _cli("verify", "--suite", "varbound", "--alpha", "0.5", "--out", str(out1),
                  env_extra={"FRACVAR_THREADS": "1"})
        r2 = _cli("verify", "--suite", "varbound", "--alpha", "0.5", "--out", str(out2),
                  env_extra={"FRACVAR_THREADS": "4"})
        assert r1.returncode == 0 and r2.returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_usage_error_exit_code(self):
        res = _cli("eval", "--op", "unknown-op", "--alpha", "0.5",
                   "--field", "{}", "--points", "0")
        assert res.returncode == 2

    def test_bad_field_json_exit_code(self):
        res = _cli("eval", "--op", "grad", "--alpha", "0.5",
                   "--field", '{"kind":"nope"}', "--points", "0")
        assert res.returncode == 2

    def test_suite_choices_cover_spec_names(self):
        for name in ("ibp", "halfspace", "hardy", "chain", "gauss-green",
                     "hardy-half", "weighted", "rigidity", "leibniz", "varbound"):
            assert name in SUITE_NAMES
