from heegaard.selftest import CHECKS, run_selftest


def test_zero_size_runs_nothing():
    summary = run_selftest(max_size=0)
    assert summary.results == []
    assert summary.passed
    assert summary.lines()[-1] == "PASS"


def test_seeded_run_passes():
    summary = run_selftest(max_size=64, seed=7, cases=4)
    assert len(summary.results) == len(CHECKS)
    assert summary.passed, "\n".join(summary.lines())


def test_runs_are_reproducible():
    first = run_selftest(max_size=32, seed=11, cases=3)
    second = run_selftest(max_size=32, seed=11, cases=3)
    assert first.lines() == second.lines()
