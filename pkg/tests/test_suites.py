import pytest

import twistcoh.suites as suites
from twistcoh.forms import wedge
from twistcoh.operators import d_f
from twistcoh.suites import SUITES, run_all, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    result = run_suite(name, trials=15, seed=11)
    assert result.passed, result.failures[:3]
    assert result.checks >= 15


def test_same_seed_same_result():
    a = run_suite("unit-gauge", trials=10, seed=5).to_json()
    b = run_suite("unit-gauge", trials=10, seed=5).to_json()
    assert a == b


def test_run_all_covers_every_suite():
    assert [r.name for r in run_all(trials=1)] == list(SUITES)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("no-such-suite")


def test_broken_operator_is_caught(monkeypatch):
    # drop the factor f from the theta term: d^2 no longer vanishes
    def broken(tw, phi):
        return d_f(tw, phi) - wedge(tw.theta, phi)

    monkeypatch.setattr(suites, "d_f_theta", broken)
    result = run_suite("complex-property", trials=30, seed=3)
    assert not result.passed
