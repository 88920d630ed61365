import math

import pytest

from loqc import analysis
from loqc.montecarlo import (
    PROTOCOLS,
    Comparison,
    compare,
    crossing,
    run_trials,
    sweep,
    trial_rng,
    wilson_interval,
    z_score,
)
from loqc.noise import NoiseParams


class TestWilson:
    def test_contains_estimate(self):
        for k, n in [(0, 10), (3, 10), (10, 10), (500, 1000)]:
            lo, hi = wilson_interval(k, n)
            assert lo <= k / n <= hi

    def test_known_value(self):
        # z = 1.96 for 95%; 50/100 gives roughly (0.404, 0.596)
        lo, hi = wilson_interval(50, 100, 0.95)
        assert lo == pytest.approx(0.4038, abs=1e-3) and hi == pytest.approx(0.5962, abs=1e-3)

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            wilson_interval(0, 0)


class TestCompare:
    def test_exact_match(self):
        assert z_score(25, 100, 0.25) == 0.0

    def test_zero_vs_zero(self):
        assert z_score(0, 100, 0.0) == 0.0

    def test_far_off(self):
        z = z_score(20_000, 100_000, 0.134615)
        assert z == pytest.approx(60, abs=2)
        assert not Comparison(0.2, 0.134615, z, (0, 1)).passed

    def test_pass_rule(self):
        assert Comparison(0.1, 0.1, 3.0, (0, 1)).passed
        assert not Comparison(0.1, 0.1, -3.01, (0, 1)).passed


def test_trial_rngs_independent_of_order():
    a = [trial_rng(5, i).random() for i in range(5)]
    b = [trial_rng(5, i).random() for i in reversed(range(5))][::-1]
    assert a == b
    assert trial_rng(5, 0).random() != trial_rng(6, 0).random()


def test_unknown_protocol():
    with pytest.raises(KeyError):
        run_trials("nope", NoiseParams(), 1)


def test_needs_trials():
    with pytest.raises(ValueError):
        run_trials("logical_z90", NoiseParams(), 0)


def test_noiseless_never_fails():
    stats = run_trials("logical_z90", NoiseParams(), 200)
    assert stats.failures == 0
    assert compare(stats, 0.0).passed


@pytest.mark.parametrize("protocol", ["recovery", "logical_z90", "logical_zz90"])
def test_rates_match_closed_forms(protocol):
    params = NoiseParams(f=0.25)
    stats = run_trials(protocol, params, 4000, seed=3)
    cmp = compare(stats, PROTOCOLS[protocol].analytic(params))
    assert cmp.passed, cmp


def test_erasure_rate_below_bound():
    params = NoiseParams(s=0.05)
    stats = run_trials("erasure_measure_z", params, 20_000, seed=1)
    assert stats.wilson_interval[0] <= analysis.erasure_bounds(0.05).measurement_bound


def test_same_seed_bit_identical():
    params = NoiseParams(f=0.3)
    a = run_trials("logical_z90", params, 300, seed=9)
    b = run_trials("logical_z90", params, 300, seed=9)
    assert a == b


def test_independent_of_worker_count():
    params = NoiseParams(f=0.3)
    serial = run_trials("logical_zz90", params, 120, seed=2, workers=1)
    parallel = run_trials("logical_zz90", params, 120, seed=2, workers=3)
    assert serial == parallel


def test_stats_row_and_interval():
    stats = run_trials("recovery", NoiseParams(f=0.2), 500, seed=0)
    row = stats.as_row()
    assert row["trials"] == 500 and row["failures"] == stats.failures
    lo, hi = stats.wilson_interval
    assert lo <= stats.rate <= hi
    assert sum(stats.tally.values()) == 500
    assert stats.failures <= stats.n_trials


def test_single_trial_has_wide_interval():
    stats = run_trials("logical_z90", NoiseParams(f=0.25), 1)
    lo, hi = stats.wilson_interval
    assert hi - lo > 0.5


def test_sweep_and_crossing():
    points = sweep("logical_z90", [0.3, 0.45, 0.55, 0.6], 2000, seed=4)
    assert [p.f for p in points] == [0.3, 0.45, 0.55, 0.6]
    assert points[0].comparison.empirical < 0.3
    assert points[-1].comparison.empirical > 0.6
    assert crossing(points) == (0.45, 0.55)
    assert math.isclose(points[0].comparison.analytic, analysis.failure_z90(0.3))


def test_sweep_needs_prediction():
    with pytest.raises(ValueError):
        sweep("te", [0.1], 10)


def test_reused_streams_match_fresh_generators():
    from loqc.montecarlo import _TrialStreams

    streams = _TrialStreams(11)
    for i in (0, 5, 2**40):
        got = streams(i).random(3)
        assert list(got) == list(trial_rng(11, i).random(3))
