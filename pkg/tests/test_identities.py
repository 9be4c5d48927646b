from __future__ import annotations

import json
from fractions import Fraction

import mpmath
import pytest

from ramasum.errors import MissingParameterError, UnknownCheckError
from ramasum.identities import (
    direct_exp_log_sum,
    plan,
    registered,
    required_bits,
    run_all,
    run_check,
    zeta_prime_gf,
)
from ramasum.numeric import PrecisionContext

HYPOTHESES = {"hnj_constant", "lemma1_printed", "theorem2_printed", "theorem4_printed"}


@pytest.fixture(scope="module")
def suite():
    return run_all(None, PrecisionContext(256))


def test_registry_covers_named_checks():
    ids = set(registered())
    for name in ("lemma1", "lemma2", "lemma3", "lemma4", "theorem1", "corollary1", "theorem2",
                 "theorem4", "remark3", "remark4", "h_continuation", "interpolation_35",
                 "residue_h", "hnj_constant", "properties", "exact_equality_44", "euler_sums"):
        assert name in ids


def test_full_suite_passes(suite):
    bad = [(r.check_id, r.params, r.notes) for r in suite.reports
           if r.check_id not in HYPOTHESES and r.status != "pass"]
    assert bad == []
    assert suite.summary["failed"] == 0
    assert suite.summary["total"] == len(plan())


def test_hypothesis_rows_are_quarantined(suite):
    rows = [r for r in suite.reports if r.check_id in HYPOTHESES]
    assert rows and all(r.status.startswith("hypothesis") for r in rows)
    assert suite.summary["hypotheses"] == len(rows)


def test_printed_variants_disagree(suite):
    # the literal forms miss by far more than any numerical error
    for r in suite.reports:
        if r.check_id.endswith("_printed"):
            assert r.status == "hypothesis_fail"
            assert r.abs_diff.value > mpmath.mpf("1e-3")


def test_hnj_report_has_signed_diff(suite):
    rows = {r.params["j"]: r for r in suite.reports if r.check_id == "hnj_constant"}
    assert set(rows) == {2, 3}
    for j, r in rows.items():
        assert float(r.notes["engine_error_estimate"]) < 1e-15
        assert float(r.notes["signed_diff"]) == pytest.approx(-3.0 if j == 2 else -1.5, abs=1e-12)
    derived = [r for r in suite.reports if r.check_id == "hnj_derived"]
    assert derived and all(r.status == "pass" for r in derived)


def test_reports_are_json_ready(suite):
    for r in suite.reports[:10]:
        d = r.to_json()
        json.dumps(d)
        assert set(d) >= {"check_id", "params", "lhs", "rhs", "abs_diff", "tolerance", "status",
                          "runtime_ms", "precision_bits"}
        assert isinstance(d["lhs"], str)


def test_precision_insufficient_is_reported():
    r = run_check("euler_sums", {"s": 2}, PrecisionContext(64))
    assert r.status == "precision_insufficient"
    assert r.lhs is None
    assert r.notes["required_bits"] == required_bits(Fraction(1, 10**20))


def test_no_flips_at_higher_precision():
    for check_id, params in plan("properties") + plan("lemma3") + plan("corollary1"):
        lo = run_check(check_id, params, PrecisionContext(256))
        hi = run_check(check_id, params, PrecisionContext(512))
        assert not (lo.status == "pass" and hi.status != "pass"), (check_id, params)


def test_unknown_and_missing():
    with pytest.raises(UnknownCheckError):
        run_check("no_such_check")
    with pytest.raises(MissingParameterError):
        run_check("lemma3", {}, PrecisionContext(256))


def test_parallel_matches_serial():
    a = run_all("lemma", PrecisionContext(256), workers=1)
    b = run_all("lemma", PrecisionContext(256), workers=3)
    assert [(r.check_id, r.params, r.status) for r in a.reports] == [(r.check_id, r.params, r.status) for r in b.reports]
    for x, y in zip(a.reports, b.reports):
        if x.lhs is not None:
            assert x.lhs.value == y.lhs.value


def test_zeta_prime_gf_vs_mpmath(ctx):
    v, rem, K = zeta_prime_gf("0.5", ctx)
    with mpmath.workdps(90):
        z = mpmath.mpf("0.5")
        ref = mpmath.nsum(lambda k: z**k * mpmath.zeta(-k, derivative=1) / mpmath.factorial(k), [0, mpmath.inf])
    assert abs(v - ref) < mpmath.mpf("1e-40")


def test_direct_exp_log_sum_vs_mpmath(ctx):
    v, err = direct_exp_log_sum("0.5", ctx)
    with mpmath.workdps(90):
        z = mpmath.mpf("0.5")
        # -d/ds Li_s(e^-z) at s = 0
        ref = mpmath.nsum(lambda n: mpmath.exp(-n * z) * mpmath.log(n), [1, mpmath.inf])
    assert abs(v - ref) < mpmath.mpf("1e-40")
