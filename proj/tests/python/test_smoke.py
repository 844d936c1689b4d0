import json
import math
import os
import subprocess

import pytest

import marcum


def test_closed_forms():
    assert marcum.marcum_q(1.0, 0.0, 2.0)["value"] == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert marcum.marcum_p(1.0, 0.0, 1.0)["value"] == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)
    assert marcum.bessel_i_scaled(0.0, 0.0) == 1.0
    assert marcum.bessel_ratio(0.5, 1.0) == pytest.approx(math.tanh(1.0), rel=1e-13)
    p, q = marcum.incgamma(2.0, 2.0)
    assert q == pytest.approx(3.0 * math.exp(-2.0), rel=1e-14)
    assert p + q == pytest.approx(1.0, abs=1e-15)


def test_report_fields_and_complementarity():
    q = marcum.marcum_q(2.0, 3.0, 4.0)
    p = marcum.marcum_p(2.0, 3.0, 4.0)
    assert set(q) == {"value", "abs_error_est", "terms_used", "method"}
    assert p["value"] + q["value"] == pytest.approx(1.0, abs=1e-14)
    oracle = marcum.oracle_pq(2.0, 3.0, 4.0)
    assert oracle["q"] == pytest.approx(q["value"], abs=1e-14)


def test_bounds():
    mas2 = marcum.q_bound("MAS2", 1.0, 1.0, 1.0)
    assert mas2["valid"] and mas2["side"] == "lower"
    assert mas2["value"] <= marcum.marcum_q(1.0, 1.0, 1.0)["value"]
    assert not marcum.q_bound("MES2", 1.0, 1.0, 1.0)["valid"]
    lower, upper = marcum.ratio_p_convergent(2.0, 3.0, 4.0, 20)
    assert 0.0 < upper - lower < 1e-10
    assert marcum.ratio_p_cf_upper(1.0, 0.0, 1.0, 0) == pytest.approx(3.0 / 7.0, rel=1e-14)
    u1 = marcum.central_bound("U1", 2.0, 3.0)
    assert u1["value"] == pytest.approx(4.5 * math.exp(-3.0), rel=1e-14)
    lo, hi = marcum.p_bounds_gamma_series(1.0, 1.0, 1.0, 0)
    assert lo == pytest.approx(math.exp(-1.0) * (1.0 - math.exp(-1.0)), rel=1e-14)
    assert hi == pytest.approx(1.0 - math.exp(-2.0), rel=1e-14)


def test_convexity():
    region = marcum.d2q_dx2_classify(1.0, 3.2, 5.0)
    assert region["sign"] == "indeterminate"
    assert region["bracket"] == pytest.approx((3.0, 3.5))
    assert 3.0 <= marcum.find_inflection(1.0, "x", 5.0) <= 3.5
    assert 3.5 <= marcum.find_inflection(2.0, "y", 3.0) <= 4.0
    with pytest.raises(marcum.NoInflectionError):
        marcum.find_inflection(0.5, "y", 1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        marcum.marcum_p(0.0, 1.0, 1.0)
    with pytest.raises(marcum.DomainError):
        marcum.bessel_i_scaled(-2.0, 1.0)
    with pytest.raises(ValueError):
        marcum.q_bound("MES9", 1.0, 1.0, 1.0)


def test_table_and_verify():
    rows = marcum.table("table2")
    assert len(rows) == 12
    first = rows[0]
    assert (first["mu"], first["x"], first["y"]) == (16.0, 1.0, 1.0)
    labels = {e["bound_id"] for e in first["entries"]}
    assert labels == {"US1A", "US1B", "US2", "LS1", "LS2"}
    report = marcum.verify("complementarity", 100, 42)
    assert report["passed"] and report["violations"] == 0


@pytest.mark.skipif("MARCUM_CLI" not in os.environ, reason="command-line tool path not provided")
def test_cli_exit_codes():
    cli = os.environ["MARCUM_CLI"]
    ok = subprocess.run([cli, "eval", "--func", "Q", "--mu", "1", "--x", "0", "--y", "2", "--format", "json"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["value"] == pytest.approx(math.exp(-2.0), rel=1e-14)
    refused = subprocess.run([cli, "inflection", "--mu", "0.5", "--x", "1", "--axis", "y"], capture_output=True)
    assert refused.returncode == 3
    usage = subprocess.run([cli, "eval", "--mu", "1"], capture_output=True)
    assert usage.returncode == 64
