"""Acceptance criteria, each run at its stated tolerance and scale.

Every test prints one PASS/FAIL line; the lines are repeated in the terminal
summary.  Criterion 10 is exploratory: it is reported but never fails the run.
"""
import pytest

from giambelli import verify

from conftest import ACCEPTANCE_LINES


def _report(capsys, label: str, check: verify.Check) -> None:
    line = f"{label} {check.line()}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)


def _gate(capsys, label, check, max_seconds):
    _report(capsys, label, check)
    assert check.passed, check.to_dict()
    assert check.seconds < max_seconds


def test_criterion_01_averaged_giambelli(capsys):
    _gate(capsys, "criterion 1", verify.check_giambelli_average(max_size=8), 30)


def test_criterion_02_frobenius_schur_vs_brute(capsys):
    _gate(capsys, "criterion 2", verify.check_fs_vs_brute(max_size=4, tol=1e-10), 120)


def test_criterion_03_two_point_average(capsys):
    _gate(capsys, "criterion 3", verify.check_two_point(tol=1e-8), 300)


def test_criterion_04_determinantal_identity(capsys):
    _gate(capsys, "criterion 4", verify.check_determinantal(tol=1e-7), 300)


def test_criterion_05_kernel_vs_oracle(capsys):
    _gate(capsys, "criterion 5", verify.check_kernel_vs_oracle(tol=1e-8), 300)


def test_criterion_06_jump_and_factorization(capsys):
    _gate(capsys, "criterion 6", verify.check_jump_and_factorization(), 300)


def test_criterion_07_sampler(capsys):
    _gate(capsys, "criterion 7", verify.check_sampler(samples=100_000), 600)


def test_criterion_08_ope(capsys):
    _gate(capsys, "criterion 8", verify.check_ope(max_size=8), 60)


def test_criterion_09_whittaker(capsys):
    _gate(capsys, "criterion 9", verify.check_whittaker(n=400, samples=20_000), 600)


def test_criterion_10_scaling_exploratory(capsys):
    check = verify.check_scaling_limit(xi="99/100")
    _report(capsys, "criterion 10", check)
    assert not check.gating
    if not check.passed:
        pytest.xfail("exploratory scaling hypothesis not confirmed; see report line")
