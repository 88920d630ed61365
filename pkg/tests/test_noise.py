from collections import Counter

import numpy as np
import pytest

from loqc.montecarlo import wilson_interval
from loqc.noise import (
    GateEvent,
    NoiseParams,
    sample_erasure,
    sample_one_qubit_z90,
    sample_two_qubit,
)

N = 100_000


def within_3sigma(k, n, p):
    return abs(k / n - p) <= 3 * np.sqrt(p * (1 - p) / n)


def test_params_validated():
    with pytest.raises(ValueError):
        NoiseParams(f=1.5)
    with pytest.raises(ValueError):
        NoiseParams(s=-0.1)


def test_total_coupling_failure():
    assert NoiseParams(f=0.25).p == pytest.approx(0.4375)


class TestTwoQubit:
    def test_f_zero_always_succeeds(self):
        rng = np.random.default_rng(0)
        assert all(sample_two_qubit(NoiseParams(), rng).ok for _ in range(100))

    def test_f_one_measures_source(self):
        rng = np.random.default_rng(0)
        outs = {sample_two_qubit(NoiseParams(f=1), rng, 3, 4) for _ in range(100)}
        assert [(o.event, o.measured_qubit) for o in outs] == [(GateEvent.SOURCE_MEASURED, 3)]

    def test_quarter_distribution(self):
        rng = np.random.default_rng(42)
        tally = Counter(sample_two_qubit(NoiseParams(f=0.25), rng).event for _ in range(N))
        expected = {
            GateEvent.SOURCE_MEASURED: 0.25,
            GateEvent.TARGET_MEASURED: 0.1875,
            GateEvent.SUCCESS: 0.5625,
        }
        for event, p in expected.items():
            assert within_3sigma(tally[event], N, p), event

    @pytest.mark.parametrize("f", [0.05, 0.25, 0.5])
    def test_wilson_coverage(self, f):
        rng = np.random.default_rng(int(f * 1000))
        tally = Counter(sample_two_qubit(NoiseParams(f=f), rng).event for _ in range(N))
        for event, p in [(GateEvent.SOURCE_MEASURED, f), (GateEvent.TARGET_MEASURED, f * (1 - f))]:
            lo, hi = wilson_interval(tally[event], N, 0.99)
            assert lo <= p <= hi


class TestOneQubit:
    def test_q_zero(self):
        rng = np.random.default_rng(0)
        assert all(sample_one_qubit_z90(NoiseParams(), rng).ok for _ in range(100))

    def test_q_one(self):
        rng = np.random.default_rng(0)
        assert not any(sample_one_qubit_z90(NoiseParams(q=1), rng).ok for _ in range(100))

    @pytest.mark.parametrize("q", [0.05, 0.135, 0.25, 0.5])
    def test_frequency(self, q):
        rng = np.random.default_rng(7)
        fails = sum(not sample_one_qubit_z90(NoiseParams(q=q), rng).ok for _ in range(N))
        lo, hi = wilson_interval(fails, N, 0.99)
        assert within_3sigma(fails, N, q) and lo <= q <= hi


class TestErasure:
    def test_extremes(self):
        rng = np.random.default_rng(0)
        assert sample_erasure(NoiseParams(), 5, rng) == []
        assert sample_erasure(NoiseParams(s=1), 5, rng) == [0, 1, 2, 3, 4]

    def test_any_of_two(self):
        rng = np.random.default_rng(9)
        hits = sum(bool(sample_erasure(NoiseParams(s=0.05), 2, rng)) for _ in range(N))
        assert within_3sigma(hits, N, 1 - 0.95**2)

    @pytest.mark.parametrize("s", [0.05, 0.25, 0.5])
    def test_per_target(self, s):
        rng = np.random.default_rng(3)
        hits = sum(len(sample_erasure(NoiseParams(s=s), 1, rng)) for _ in range(N))
        lo, hi = wilson_interval(hits, N, 0.99)
        assert lo <= s <= hi


def test_same_seed_same_sequence():
    params = NoiseParams(f=0.3, q=0.2, s=0.1)

    def run(seed):
        rng = np.random.default_rng(seed)
        return [
            (sample_two_qubit(params, rng).event, sample_one_qubit_z90(params, rng).event,
             tuple(sample_erasure(params, 3, rng)))
            for _ in range(500)
        ]

    assert run(17) == run(17)
    assert run(17) != run(18)
