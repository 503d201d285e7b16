"""CLI tests: exit-code contract, selector rejection, output formats.

Everything runs through in-process ``cli.main`` except one real subprocess
smoke test of the installed entry point.
"""

import csv
import io
import json
import subprocess
import sys

from laxlab import cli, verify


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# exit-code contract
# ---------------------------------------------------------------------------
def test_verify_exit_zero_on_success(capsys):
    code, out, _ = run_cli(["verify", "--case", "fn-classical"], capsys)
    assert code == 0
    assert out.startswith("case: fn-classical\n")


def test_verify_exit_one_on_discrepancy(capsys):
    code, out, _ = run_cli(
        ["verify", "--case", "fn-classical", "--negative-control"], capsys
    )
    assert code == 1
    assert "status: discrepancy" in out


def test_unknown_selectors_exit_two_before_computation(capsys):
    for argv in (
        ["verify", "--case", "prop99"],
        ["derive", "unknown-target"],
        ["integrate", "p35"],
        ["catalog", "drop"],
        ["nonsense"],
    ):
        code, out, err = run_cli(argv, capsys)
        assert code == 2, argv


def test_unknown_catalog_key_exits_two(capsys):
    code, _, err = run_cli(["reduce", "not-a-key"], capsys)
    assert code == 2 and "unknown catalog key" in err
    code, _, err = run_cli(["catalog", "show", "not-a-key"], capsys)
    assert code == 2 and "unknown catalog key" in err


def test_no_arguments_prints_help_exit_two(capsys):
    code, out, _ = run_cli([], capsys)
    assert code == 2
    assert "verify" in out and "integrate" in out


def test_help_exits_zero(capsys):
    code, _, _ = run_cli(["--help"], capsys)
    assert code == 0


# ---------------------------------------------------------------------------
# verify output
# ---------------------------------------------------------------------------
def test_verify_json_deterministic(capsys):
    code, out1, _ = run_cli(
        ["verify", "--case", "prop31", "--format", "json"], capsys
    )
    code2, out2, _ = run_cli(
        ["verify", "--case", "prop31", "--format", "json"], capsys
    )
    assert code == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["case"] == "prop31"
    assert payload["status"] == "verified-with-notes"


def test_verify_all_emits_every_case_and_summary(capsys):
    code, out, _ = run_cli(["verify", "--case", "all"], capsys)
    assert code == 0
    for case in verify.CASES:
        assert f"case: {case}\n" in out
    assert "summary:" in out
    summary = out.split("summary:", 1)[1]
    for case in verify.CASES:
        assert case in summary


def test_verify_all_json_is_array(capsys):
    code, out, _ = run_cli(
        ["verify", "--case", "all", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert [entry["case"] for entry in payload] == list(verify.CASES)


def test_verify_all_negative_controls_exit_one(capsys):
    code, out, _ = run_cli(
        ["verify", "--case", "all", "--negative-control"], capsys
    )
    assert code == 1


def test_verify_rules_flag_only_for_prop31(capsys):
    code, _, _ = run_cli(
        ["verify", "--case", "prop31", "--rules", "quantum-zv"], capsys
    )
    assert code == 0
    code, _, err = run_cli(
        ["verify", "--case", "case-i", "--rules", "quantum-zv"], capsys
    )
    assert code == 2
    code, _, _ = run_cli(
        ["verify", "--case", "prop31", "--rules", "no-such-rules"], capsys
    )
    assert code == 2


def test_every_negative_control_exits_one_in_process(capsys):
    for case in verify.CASES:
        code, _, _ = run_cli(
            ["verify", "--case", case, "--negative-control"], capsys
        )
        assert code == 1, case


# ---------------------------------------------------------------------------
# derive / reduce
# ---------------------------------------------------------------------------
def test_derive_p34(capsys):
    code, out, _ = run_cli(["derive", "p34", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["case"] == "qp34-chain"


def test_reduce_composition(capsys):
    code, out, _ = run_cli(
        ["reduce", "qmpii-target-residual", "--v-zero", "--hbar-zero",
         "--scalarize"],
        capsys,
    )
    assert code == 0
    assert out.strip() == "-alpha + u'' - z*u - 2*u*u*u"


def test_reduce_expr_with_rules(capsys):
    code, out, _ = run_cli(
        ["reduce", "--expr", "p^-1*p*u", "--rules", "inverse-pq"], capsys
    )
    assert code == 0 and out.strip() == "u"


def test_reduce_flag_conflicts(capsys):
    code, _, _ = run_cli(
        ["reduce", "pii-classical", "--v-du", "--v-u"], capsys
    )
    assert code == 2
    code, _, err = run_cli(["reduce"], capsys)
    assert code == 2
    code, _, err = run_cli(
        ["reduce", "pii-classical", "--expr", "u"], capsys
    )
    assert code == 2


def test_reduce_parse_error_exits_one(capsys):
    code, _, err = run_cli(["reduce", "--expr", "u +* z"], capsys)
    assert code == 1 and "error" in err


def test_reduce_pair_prints_both_members(capsys):
    code, out, _ = run_cli(["reduce", "fn-pair", "--v-du"], capsys)
    assert code == 0
    assert "z-member:" in out and "spectral member:" in out


# ---------------------------------------------------------------------------
# integrate
# ---------------------------------------------------------------------------
def test_integrate_matches_rational_oracle(capsys):
    code, out, _ = run_cli(
        ["integrate", "pii", "--alpha", "1", "--z0", "1", "--z1", "5",
         "--u0", "1", "--du0", "-1"],
        capsys,
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    worst = max(
        abs(complex(float(r["u_re_0_0"]), float(r["u_im_0_0"]))
            - 1.0 / float(r["z"]))
        for r in rows
    )
    assert worst < 1e-8


def test_integrate_validation_exits_two(capsys):
    code, _, err = run_cli(["integrate", "pii", "--ddu0", "1"], capsys)
    assert code == 2
    code, _, err = run_cli(["integrate", "dpii3"], capsys)
    assert code == 2 and "u''" in err


def test_integrate_pole_exits_one(capsys):
    code, _, err = run_cli(
        ["integrate", "p34", "--alpha", "0.7", "--u0", "0.3",
         "--du0", "-0.2", "--z1", "5"],
        capsys,
    )
    assert code == 1 and "error" in err


def test_integrate_writes_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run_cli(
        ["integrate", "pii", "--alpha", "1", "--u0", "1", "--du0", "-1",
         "--output", str(target)],
        capsys,
    )
    assert code == 0 and out == ""
    assert target.read_text().startswith("z,u_re_0_0")


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------
def test_catalog_list_covers_manifest(capsys):
    from laxlab import catalog

    code, out, _ = run_cli(["catalog", "list"], capsys)
    assert code == 0
    for key in catalog.keys():
        assert key in out


def test_catalog_show_pair(capsys):
    code, out, _ = run_cli(["catalog", "show", "qpii-pair"], capsys)
    assert code == 0
    assert "z-member:" in out and "rule sets: quantum-zv" in out
    code, out, _ = run_cli(["catalog", "show", "gauge-G"], capsys)
    assert code == 0 and "inverse:" in out
    code, out, _ = run_cli(["catalog", "show", "pii-classical"], capsys)
    assert code == 0 and "lhs:" in out


# ---------------------------------------------------------------------------
# the one real subprocess smoke test
# ---------------------------------------------------------------------------
def test_subprocess_entry_point():
    ok = subprocess.run(
        [sys.executable, "-m", "laxlab.cli", "verify", "--case",
         "fn-classical"],
        capture_output=True, text=True, timeout=120,
    )
    assert ok.returncode == 0, ok.stderr
    assert ok.stdout.startswith("case: fn-classical")
    bad = subprocess.run(
        [sys.executable, "-m", "laxlab.cli", "verify", "--case",
         "fn-classical", "--negative-control"],
        capture_output=True, text=True, timeout=120,
    )
    assert bad.returncode == 1
    usage = subprocess.run(
        [sys.executable, "-m", "laxlab.cli", "verify", "--case", "nope"],
        capture_output=True, text=True, timeout=120,
    )
    assert usage.returncode == 2
