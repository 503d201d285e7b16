"""Verification-pipeline tests: statuses, frozen differences, negative
controls, report determinism, and the structural invariants."""

import json

import pytest

from laxlab import catalog, verify
from laxlab.laxmat import extract_equations, zero_curvature_residual
from laxlab.ncexpr import (
    NCExpr,
    DEFAULT_CONTEXT as CTX,
    builtin_ruleset,
    combine_rulesets,
    parse,
)


def P(text: str) -> NCExpr:
    return parse(text, CTX)


#: expected status per pipeline: which ones close exactly and which carry
#: documented printed-form deviations
EXPECTED_STATUS = {
    "fn-classical": verify.VERIFIED_WITH_NOTES,
    "prop31": verify.VERIFIED_WITH_NOTES,
    "case-i": verify.VERIFIED_WITH_NOTES,
    "case-ii": verify.VERIFIED_WITH_NOTES,
    "case-iii-v0": verify.VERIFIED,
    "case-iii-vu": verify.VERIFIED_WITH_NOTES,
    "prop41-gauge": verify.VERIFIED_WITH_NOTES,
    "qp34-chain": verify.VERIFIED_WITH_NOTES,
    "qp34-comparison": verify.VERIFIED,
    "eliminate-pq": verify.VERIFIED_WITH_NOTES,
    "numeric-pii": verify.VERIFIED,
    "numeric-p34-map": verify.VERIFIED,
    "numeric-dpii": verify.VERIFIED,
}


def _record(report, provenance):
    for rec in report.equations:
        if rec.provenance == provenance:
            return rec
    raise AssertionError(
        f"{report.case}: no record with provenance {provenance!r}; have "
        f"{[r.provenance for r in report.equations]}"
    )


def test_all_pipelines_reach_expected_status():
    for case in verify.CASES:
        report = verify.run(case)
        assert report.status == EXPECTED_STATUS[case], (
            case, report.status, report.notes,
        )


def test_all_negative_controls_report_discrepancy():
    for case in verify.CASES:
        report = verify.run(case, negative_control=True)
        assert report.status == verify.DISCREPANCY, (case, report.status)


def test_unknown_case_rejected():
    with pytest.raises(verify.VerifyError):
        verify.run("prop99")
    with pytest.raises(verify.VerifyError):
        verify.verify_case("vii")


def test_run_all_covers_every_case_in_order():
    reports = verify.run_all()
    assert [r.case for r in reports] == list(verify.CASES)


def test_pipeline_crash_becomes_discrepancy(monkeypatch):
    def broken(negative=False):
        raise KeyError("synthetic failure")

    monkeypatch.setitem(verify._PIPELINES, "prop31", broken)
    report = verify.run("prop31")
    assert report.status == verify.DISCREPANCY
    assert any("aborted" in n for n in report.notes)


# ---------------------------------------------------------------------------
# frozen report content
# ---------------------------------------------------------------------------
def test_fn_classical_frozen_records():
    rep = verify.run("fn-classical")
    assert _record(rep, "scalar mode").difference == "0"
    assert _record(rep, "scalar mode vs printed convention").difference == (
        "2*z*u"
    )
    assert _record(rep, "scalar mode under z -> -z").difference == "0"
    assert rep.wall_time < 1.0


def test_prop31_frozen_records():
    rep = verify.run("prop31")
    assert rep.wall_time < 5.0
    # the commutation relation is documented, matched modulo the frozen
    # quadratic obstruction
    diag = _record(rep, "diagonal equation")
    assert diag.matched_target == "commutation-zv"
    # the lam-linear cancellation is recorded exactly
    cancel = _record(rep, "lam-linear parts of the two normalized entries")
    assert cancel.difference == "0"
    assert any("-2*i*lam*hbar" in n and "cancel" in n for n in rep.notes)
    # the second-order equation closes against the residual-form target
    assert _record(rep, "lam-free off-diagonal equation").difference == "0"
    # the two documented printed deviations
    printed = _record(rep, "lam-free off-diagonal equation vs printed form")
    assert printed.difference == "z*u + u*z"
    summed = _record(rep, "lam-free off-diagonal equation vs printed sum")
    assert summed.difference == "z*u + u*z - 3*u'*v + 3*v*u'"
    assert any("coefficient" in n.lower() or "4" in n for n in rep.notes)


def test_case_ii_frozen_records():
    rep = verify.run("case-ii")
    exact = _record(
        rep,
        "third-order form vs printed display under the corrected shift "
        "x = z + (i/4)*hbar",
    )
    assert exact.difference == "0"
    slipped = _record(
        rep,
        "third-order form vs printed display under the printed shift "
        "x = z - (i/4)*hbar",
    )
    assert slipped.difference != "0"
    assert not slipped.difference.startswith("MISMATCH")


def test_qp34_chain_frozen_records():
    rep = verify.run("qp34-chain")
    assert _record(
        rep, "second-order form of the chain (times -2*p)"
    ).difference == "0"
    assert _record(rep, "q-side chain outcome").difference == "0"
    classical = _record(rep, "hbar -> 0 scalar limit of the chain outcome")
    assert classical.difference == "0"
    assert classical.matched_target == (
        "classical-p34-q-derived (q renamed to p)"
    )


def test_comparison_differences_are_proportional_to_p():
    rep = verify.run("qp34-comparison")
    assert rep.status == verify.VERIFIED
    for prov in ("printed target minus the hbar^2 variant",
                 "printed target minus the hbar/2 variant"):
        assert _record(rep, prov).difference == "0"


# ---------------------------------------------------------------------------
# report determinism and serialization
# ---------------------------------------------------------------------------
def test_json_reports_byte_deterministic():
    for case in ("fn-classical", "prop31", "qp34-chain"):
        a = verify.run(case).to_json()
        b = verify.run(case).to_json()
        assert a == b, case
        payload = json.loads(a)
        assert list(payload) == ["case", "status", "equations", "notes"]
        for eq in payload["equations"]:
            assert list(eq) == [
                "provenance", "expression", "matched_target", "difference",
            ]


def test_text_report_stable_excluding_wall_time():
    strip = lambda r: r.to_text().rsplit("wall time:", 1)[0]
    assert strip(verify.run("prop31")) == strip(verify.run("prop31"))
    text = verify.run("prop31").to_text()
    assert text.startswith("case: prop31\nstatus: ")
    assert "wall time:" in text


def test_json_omits_wall_time():
    payload = json.loads(verify.run("fn-classical").to_json())
    assert "wall_time" not in payload
    assert "wall time" not in payload


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------
def test_prop31_rules_monotonicity():
    """Supplying the relation rule set that the construction assumes must
    never turn the pipeline into a discrepancy."""
    base = verify.verify_prop31()
    assert base.status != verify.DISCREPANCY
    for rules in (
        builtin_ruleset("quantum-zv"),
        combine_rulesets("zv+weyl", builtin_ruleset("quantum-zv"),
                         builtin_ruleset("weyl-pii")),
    ):
        rep = verify.verify_prop31(rules=rules)
        assert rep.status != verify.DISCREPANCY, rep.notes


def test_classical_limit_commutes_with_extraction_on_prop31():
    """hbar -> 0 then extract agrees with extract then hbar -> 0, equation
    by equation (matched on provenance, compared canonically, and agreeing
    on which equations vanish)."""
    pair = catalog.build("qpii-pair")
    residual = zero_curvature_residual(pair.p, pair.q)

    limit_then_extract = {
        (eq.provenance[0].entry, eq.provenance[0].lam_power):
            eq.lhs.canonical()
        for eq in extract_equations(residual.classical_limit())
    }
    extract_then_limit = {}
    for eq in extract_equations(residual):
        key = (eq.provenance[0].entry, eq.provenance[0].lam_power)
        extract_then_limit[key] = eq.lhs.classical_limit().canonical()

    for key, lhs in extract_then_limit.items():
        if lhs.is_zero:
            assert key not in limit_then_extract or \
                limit_then_extract[key].is_zero
        else:
            assert key in limit_then_extract, key
            assert str(limit_then_extract[key]) == str(lhs), key
    for key in limit_then_extract:
        assert key in extract_then_limit, key


def test_named_wrappers_map_to_pipelines():
    assert verify.verify_fn_classical().case == "fn-classical"
    assert verify.verify_prop31().case == "prop31"
    assert verify.verify_case("i").case == "case-i"
    assert verify.verify_case("ii").case == "case-ii"
    assert verify.verify_case("iii-v0").case == "case-iii-v0"
    assert verify.verify_case("iii-vu").case == "case-iii-vu"
    assert verify.verify_prop41().case == "prop41-gauge"
    assert verify.derive_p34().case == "qp34-chain"
    assert verify.eliminate_pq().case == "eliminate-pq"
