import itertools
from fractions import Fraction

import numpy as np
import pytest

from loqc import analysis
from loqc.analysis import (
    erasure_bounds,
    failure_recovery,
    failure_z90,
    failure_zz,
    iterate_levels,
    phase_distance,
    prep_failure,
    prep_failure_with_rot,
    threshold,
)

from oracle import pauli_matrix, stabilizer_projector


class TestClosedForms:
    @pytest.mark.parametrize("f", [0.0, 0.25, 1.0])
    def test_recovery_is_identity(self, f):
        assert failure_recovery(f) == pytest.approx(f)

    def test_z90_examples(self):
        assert failure_z90(0.25) == pytest.approx(0.25**2 * 1.75 / 0.8125)
        assert round(failure_z90(0.25), 6) == 0.134615
        assert failure_z90(0.0) == 0.0
        assert failure_z90(0.5) == pytest.approx(0.5)

    def test_zz_matches_z90(self):
        rng = np.random.default_rng(0)
        assert failure_zz(0.25) == pytest.approx(0.134615, abs=1e-6)
        for f in rng.random(100):
            assert failure_zz(f) == pytest.approx(failure_z90(f), rel=1e-12, abs=1e-15)

    def test_domain(self):
        for fn in (failure_recovery, failure_z90, failure_zz, prep_failure):
            with pytest.raises(ValueError):
                fn(1.2)

    def test_recurrences_solved_numerically(self):
        rng = np.random.default_rng(1)
        for f in rng.uniform(0, 0.99, 100):
            # F_r = f F_r + (1 - f) f
            fr = np.linalg.solve([[1 - f]], [(1 - f) * f])[0]
            assert failure_recovery(f) == pytest.approx(fr)
            # F_Z: source failure retries, target failure costs a recovery
            fz = np.linalg.solve([[1 - f * (1 - f)]], [f * f + (1 - f) * f * f])[0]
            assert failure_z90(f) == pytest.approx(fz)

    def test_preparation(self):
        assert prep_failure(0.25) == pytest.approx(0.4375)
        assert prep_failure(0.0) == 0.0
        assert prep_failure_with_rot(0.25) == pytest.approx(0.25 * (1 + 0.75 + 0.5625 + 0.421875 + 0.31640625))


class TestThreshold:
    def test_exact_half(self):
        assert threshold() == Fraction(1, 2)

    def test_basins(self):
        eps = 0.01
        assert failure_z90(0.5 - eps) < 0.5 - eps
        assert failure_z90(0.5 + eps) > 0.5 + eps


class TestLevels:
    def test_two_levels(self):
        sched = iterate_levels(0.25, 2)
        assert sched.encoded[0] == pytest.approx(0.134615, abs=1e-6)
        assert sched.encoded[1] == pytest.approx(0.038260, abs=1e-6)
        assert sched.encoded[0] == pytest.approx(0.135, abs=1e-3)
        assert sched.encoded[1] == pytest.approx(0.038, abs=1e-3)

    def test_tabulated_ratios(self):
        rows = iterate_levels(0.25, 1).rows()
        assert [round(r["f_over_1_minus_f"], 3) for r in rows] == [0.333, 0.156]
        assert [round(r["retry"], 2) for r in rows] == [1.23, 1.13]

    def test_zero(self):
        assert iterate_levels(0.0, 3).f == (0.0, 0.0, 0.0, 0.0)

    def test_above_threshold_grows(self):
        f = iterate_levels(0.6, 4).f
        assert all(b > a for a, b in zip(f, f[1:]))

    @pytest.mark.parametrize("f0", [0.05, 0.2, 0.4, 0.49])
    def test_below_threshold_shrinks(self, f0):
        f = iterate_levels(f0, 4).f
        assert all(b < a for a, b in zip(f, f[1:]))

    def test_negative_levels(self):
        with pytest.raises(ValueError):
            iterate_levels(0.25, -1)


class TestErasureBounds:
    def test_one_percent(self):
        b = erasure_bounds(0.01)
        assert b.recovery_bound == pytest.approx(0.13)
        assert b.measurement_bound == pytest.approx(0.0016)
        assert b.coupling_bound == pytest.approx(0.0104)
        assert float(b.threshold) == pytest.approx(0.009615, abs=1e-6)
        assert not b.below_threshold

    def test_zero(self):
        b = erasure_bounds(0.0)
        assert (b.recovery_bound, b.measurement_bound, b.coupling_bound) == (0, 0, 0)

    def test_fixed_point(self):
        s = analysis.ERASURE_THRESHOLD
        assert 104 * s * s == s


def code_projector(k):
    n = 2**k
    labels = []
    for mask in analysis.concatenated_x_stabilizers(k):
        labels.append("".join("X" if mask >> q & 1 else "I" for q in range(n)))
    return stabilizer_projector(labels)


def dense_phase_distance(k):
    n = 2**k
    proj = code_projector(k)
    for w in range(1, n + 1):
        for qubits in itertools.combinations(range(n), w):
            label = "".join("Z" if q in qubits else "I" for q in range(n))
            # an undetectable error keeps the code space
            if np.linalg.norm(proj @ pauli_matrix(label) @ proj) > 1e-9:
                return w
    return None


class TestPhaseDistance:
    def test_level_one(self):
        assert phase_distance(1) == 2

    def test_level_two_corrects_one(self):
        d = phase_distance(2)
        assert d >= 3
        assert analysis.correctable_phase_errors(2) >= 2 ** (2 - 1) - 1

    @pytest.mark.parametrize("k", [1, 2])
    def test_dense_oracle(self, k):
        assert phase_distance(k) == dense_phase_distance(k)

    @pytest.mark.parametrize("k", [2, 3])
    def test_single_errors_detected(self, k):
        gens = analysis.concatenated_x_stabilizers(k)
        for q in range(2**k):
            assert any(g >> q & 1 for g in gens)

    def test_refuses_large(self):
        with pytest.raises(ValueError):
            phase_distance(4)
