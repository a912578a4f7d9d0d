import json
import math

import pytest

from theta_lab import cli
from theta_lab.checks import RunConfig, Session, selftest_checks
from theta_lab.errors import ToleranceNotMet
from theta_lab.report import (CheckResult, VerificationReport, dumps_report,
                              emit_report, load_report, loads_report)


def sample_report():
    checks = [
        CheckResult("C01_x", "a passing check", 1e-13, 0.0, 1e-12),
        CheckResult("C02_y", "a failing check", 0.5, 0.0, 0.1),
        CheckResult("A01_z", "an adjudicated value", 4.000000000000001, None, 1e-8, details={"grid": [0.1, 0.2]}),
    ]
    return VerificationReport(config_echo={"p": [3, 5]}, check_results=checks, fitted_c=4.000000000000001,
                              norm_direct=2 * math.pi, norm_from_residue={"3": 6.283185307179585},
                              final_ratio_to_pi=2.0, agreement_with_paper=False,
                              residue_candidates={"3": {"c=2 (displayed)": 1 / 3}})


def test_status_rules():
    r = sample_report()
    assert [c.status for c in r.check_results] == ["pass", "fail", "adjudicated"]
    assert r.exit_code() == 1
    assert CheckResult("n", "nan", float("nan"), 0.0, 1.0).status == "fail"


def test_round_trip(tmp_path):
    r = sample_report()
    path = tmp_path / "r.json"
    emit_report(r, path)
    back = load_report(path)
    assert back == r
    for c in back.check_results:
        assert c.recompute_status() == c.status


def test_empty_report_round_trip():
    r = VerificationReport()
    assert loads_report(dumps_report(r)) == r
    assert r.exit_code() == 0


def test_floats_are_lossless():
    r = sample_report()
    r.norm_direct = 0.1 + 0.2
    assert loads_report(dumps_report(r)).norm_direct == 0.1 + 0.2


def test_stable_field_order():
    keys = list(json.loads(dumps_report(sample_report())))
    assert keys[:3] == ["config_echo", "check_results", "fitted_c"]


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\np = 3,5\nY = 50\nc = 4\nout = from_file.json\n")
    args = cli.build_parser().parse_args(["norm", "--config", str(cfg), "--Y", "400"])
    config, out = cli.make_config(args)
    assert config.p == (3, 5)
    assert config.Y == 400.0
    assert config.c == 4.0
    assert out == "from_file.json"


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("frobnicate = 1\n")
    assert cli.main(["selftest", "--config", str(bad)]) == 2
    assert cli.main(["selftest", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert cli.main(["selftest", "--Y", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2


def test_selftest_passes():
    checks = selftest_checks(Session(RunConfig()))
    assert all(c.status == "pass" for c in checks), [c.line() for c in checks if c.status != "pass"]


def test_xavg_subcommand(capsys):
    assert cli.main(["xavg", "--grid", "0.05,0.1,0.2,0.3,0.5"]) == 0
    out = capsys.readouterr().out
    assert "fitted c = 4" in out and "residual" in out


def test_law_check_subcommand(tmp_path):
    out = tmp_path / "law.json"
    assert cli.main(["law-check", "--out", str(out)]) == 0
    rep = load_report(out)
    assert [c.id for c in rep.check_results] == ["C01_transformation_law", "C02_gamma0_invariance",
                                                 "C03_fricke_identity"]


def test_residues_subcommand(capsys):
    assert cli.main(["residues", "--p", "3", "--c", "auto"]) == 0
    out = capsys.readouterr().out
    assert "c=2 (displayed)" in out and "c=4 (Parseval)" in out
    assert "c=fitted" in out and "stated 2(1-1/p)" in out


def test_ip_subcommand(capsys):
    assert cli.main(["ip", "--s", "2", "--p", "3"]) == 0
    assert "direct=" in capsys.readouterr().out


def test_norm_subcommand(capsys):
    assert cli.main(["norm", "--p", "3,5,7", "--Y", "100"]) == 0
    assert "norm_direct" in capsys.readouterr().out


def test_budget_exhaustion_exit_code(monkeypatch):
    def boom(*a, **k):
        raise ToleranceNotMet("budget")
    monkeypatch.setattr(cli, "law_checks", boom)
    assert cli.main(["law-check"]) == 3


def test_failing_check_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "law_checks", lambda s: [CheckResult("x", "bad", 1.0, 0.0, 0.1)])
    assert cli.main(["law-check"]) == 1


def test_full_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["full-report", "--p", "3,5,7", "--Y", "100", "--out", str(out)])
    assert code == 0
    rep = load_report(out)
    ids = [c.id for c in rep.check_results]
    for k in range(1, 11):
        assert sum(i.startswith(f"C{k:02d}_") for i in ids) == 1
    assert len(ids) == len(set(ids))
    assert abs(rep.final_ratio_to_pi - rep.norm_direct / math.pi) <= 1e-12
    assert rep.paper_claim_ratio == 4.0
    assert isinstance(rep.agreement_with_paper, bool)
    assert set(rep.norm_from_residue) == {"3", "5", "7"}
    for row in rep.residue_candidates.values():
        assert {"c=2 (displayed)", "c=4 (Parseval)", "c=fitted", "stated 2(1-1/p)"} <= set(row)
    assert (code == 0) == all(c.status != "fail" for c in rep.check_results)
