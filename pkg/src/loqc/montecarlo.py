"""Monte Carlo estimates of protocol failure rates.

Every trial gets its own generator keyed by ``(seed, trial_index)`` through
the counter-based Philox bit generator, so totals do not depend on how
trials are split across workers.  Sums are kept as integers and reduced in
trial order, which keeps results bit-identical for any worker count.

Each trial also checks closure: a successful run must carry the tracked
logical operators exactly, and a failed one must leave the tracked logical
``Z`` fixed to the reported outcome.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.stats import norm

from . import analysis
from .noise import NoiseParams
from .pauli import PauliProduct
from .protocols.erasure import erasure_encode, erasure_measure_z
from .protocols.logical import logical_z90, logical_zz90
from .protocols.machine import Machine, ProtocolResult, Status
from .protocols.recovery import recover_teleported
from .protocols.teleport import prepare_te
from .protocols.two_qubit_code import encode_pair, logical_operator
from .protocols.zrot import cached_resource

# depth of the rotated-pair tree used by logical_zz90 trials (16 pairs)
ZZ_TREE_DEPTH = 5
THREE_SIGMA = 2 * norm.cdf(3.0) - 1


class ClosureViolation(AssertionError):
    """A trial ended in a state its reported status does not describe."""


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


class _TrialStreams:
    """Re-keys one Philox generator per trial; same streams as :func:`trial_rng`."""

    def __init__(self, seed: int):
        self.seed = seed
        self.bits = np.random.Philox(key=seed)
        self.rng = np.random.Generator(self.bits)

    def __call__(self, index: int) -> np.random.Generator:
        # rebuilding a Philox object per trial costs more than the state reset
        self.bits.state = {
            "bit_generator": "Philox",
            "state": {"counter": np.zeros(4, np.uint64),
                      "key": np.array([self.seed, index], dtype=np.uint64)},
            "buffer": np.zeros(4, np.uint64),
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self.rng


def wilson_interval(k: int, n: int, confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes out of ``n``."""
    if n <= 0:
        raise ValueError("n must be positive")
    z = norm.ppf(0.5 + confidence / 2)
    p = k / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


# -- trials ------------------------------------------------------------------


@dataclass(frozen=True)
class Trial:
    """Result of one trial: a category label plus what it consumed."""

    category: str
    attempts: int
    resources: tuple[int, int, int]


def _trial(res: ProtocolResult, category: str) -> Trial:
    return Trial(category, res.attempts, tuple(int(c) for c in res.resources))


def _expect(ok: bool, what: str) -> None:
    if not ok:
        raise ClosureViolation(what)


def _measured_z(m: Machine, name: str, outcome: int) -> bool:
    ident = PauliProduct.identity(m.state.n)
    return m.state.tracked_equals(name, "Z", ident if outcome == 1 else -ident)


@lru_cache(maxsize=None)
def _encoded(names: tuple[str, ...], zz_depth: int | None = None):
    """Noiselessly built register holding one encoded tracked qubit per name."""
    m = Machine(rng=np.random.default_rng(0))
    pairs = []
    for name in names:
        q = m.state.add_tracked_qubit(name)
        pairs.append(encode_pair(m, q).qubits)
    resource = cached_resource(m, zz_depth) if zz_depth else None
    return m.state, tuple(pairs), resource


def _machine(params: NoiseParams, rng: np.random.Generator, state) -> Machine:
    return Machine(noise=params, rng=rng, state=state.copy(), prep_mode="sampled")


def _run_recovery(params: NoiseParams, rng: np.random.Generator) -> Trial:
    state, (pair,), _ = _encoded(("a",))
    m = _machine(params, rng, state)
    s = m.measure(pair[0], "Z")
    res = recover_teleported(m, pair[0], pair[1], s)
    n = m.state.n
    if res.ok:
        _expect(m.state.tracked_equals("a", "Z", logical_operator(n, res.qubits, "Z"))
                and m.state.tracked_equals("a", "X", logical_operator(n, res.qubits, "X")),
                "recovered pair does not carry the logical qubit")
        return _trial(res, "succeeded")
    _expect(res.status is Status.LOGICAL_Z_MEASURED and _measured_z(m, "a", res.outcome),
            "recovery failure without a known logical Z")
    return _trial(res, "failed")


def _run_z90(params: NoiseParams, rng: np.random.Generator) -> Trial:
    state, (pair,), _ = _encoded(("a",))
    m = _machine(params, rng, state)
    res = logical_z90(m, pair)
    n = m.state.n
    if res.ok:
        _expect(m.state.tracked_equals("a", "Z", logical_operator(n, res.qubits, "Z"))
                and m.state.tracked_equals("a", "X", logical_operator(n, res.qubits, "Y")),
                "Z quarter turn did not act as intended")
        return _trial(res, "succeeded")
    _expect(res.status is Status.LOGICAL_Z_MEASURED and _measured_z(m, "a", res.outcome),
            "Z quarter turn failed without a known logical Z")
    return _trial(res, "failed")


def _run_zz90(params: NoiseParams, rng: np.random.Generator) -> Trial:
    state, (first, second), resource = _encoded(("a", "b"), ZZ_TREE_DEPTH)
    m = _machine(params, rng, state)
    res = logical_zz90(m, first, second, resource=resource)
    if res.status is Status.ABORTED:
        return _trial(res, f"aborted_{res.which}")
    if res.ok:
        n = m.state.n
        a, b = res.qubits[:2], res.qubits[2:]
        za, zb = logical_operator(n, a, "Z"), logical_operator(n, b, "Z")
        _expect(m.state.tracked_equals("a", "Z", za) and m.state.tracked_equals("b", "Z", zb)
                and m.state.tracked_equals("a", "X", logical_operator(n, a, "Y") * zb)
                and m.state.tracked_equals("b", "X", za * logical_operator(n, b, "Y")),
                "ZZ quarter turn did not act as intended")
        return _trial(res, "succeeded")
    name = "ab"[res.which]
    _expect(res.status is Status.LOGICAL_Z_MEASURED and _measured_z(m, name, res.outcome),
            "ZZ quarter turn failed without a known logical Z")
    return _trial(res, "first_failed" if res.which == 0 else "second_failed")


@lru_cache(maxsize=None)
def _erasure_block(sign: int):
    m = Machine(rng=np.random.default_rng(0))
    code = erasure_encode(m, m.prepare("Z", sign))
    return m.state, code


def _run_erasure(params: NoiseParams, rng: np.random.Generator) -> Trial:
    sign = 1 if rng.random() < 0.5 else -1
    state, code = _erasure_block(sign)
    m = _machine(params, rng, state)
    res = erasure_measure_z(m, code)
    if res.ok:
        _expect(res.outcome == sign, "erasure-code measurement returned the wrong value")
        return _trial(res, "succeeded")
    _expect(res.status is Status.LOGICAL_LOST, "unexpected erasure-code status")
    return _trial(res, "failed")


def _run_encode(params: NoiseParams, rng: np.random.Generator) -> Trial:
    m = Machine(noise=params, rng=rng)
    res = encode_pair(m, m.prepare("Z"), reprepare=lambda mm: mm.prepare("Z"))
    return _trial(res, "succeeded" if res.ok else "aborted")


def _run_te(params: NoiseParams, rng: np.random.Generator) -> Trial:
    m = Machine(noise=params, rng=rng)
    prepare_te(m)
    return Trial("succeeded", m.attempts, tuple(int(c) for c in m.resources))


@dataclass(frozen=True)
class ProtocolSpec:
    """A protocol that can be sampled.

    Attributes:
        run: ``run(params, rng) -> Trial``.
        failures: Categories counted as failures.
        analytic: Predicted failure rate as a function of the noise.
    """

    run: Callable[[NoiseParams, np.random.Generator], Trial]
    failures: frozenset[str]
    analytic: Callable[[NoiseParams], float] | None = None


PROTOCOLS: dict[str, ProtocolSpec] = {
    "recovery": ProtocolSpec(_run_recovery, frozenset({"failed"}),
                             lambda p: analysis.failure_recovery(p.f)),
    "logical_z90": ProtocolSpec(_run_z90, frozenset({"failed"}),
                                lambda p: analysis.failure_z90(p.f)),
    "logical_zz90": ProtocolSpec(_run_zz90, frozenset({"first_failed"}),
                                 lambda p: analysis.failure_zz(p.f)),
    "erasure_measure_z": ProtocolSpec(_run_erasure, frozenset({"failed"}),
                                      lambda p: analysis.erasure_bounds(p.s).measurement_bound),
    "encode": ProtocolSpec(_run_encode, frozenset({"aborted"})),
    "te": ProtocolSpec(_run_te, frozenset()),
}


# -- aggregation ---------------------------------------------------------------


@dataclass
class _Totals:
    n: int = 0
    tally: Counter = field(default_factory=Counter)
    attempts: int = 0
    attempts_sq: int = 0
    resources: list = field(default_factory=lambda: [0, 0, 0])

    def add(self, t: Trial) -> None:
        self.n += 1
        self.tally[t.category] += 1
        self.attempts += t.attempts
        self.attempts_sq += t.attempts * t.attempts
        for c in range(3):
            self.resources[c] += t.resources[c]

    def merge(self, other: "_Totals") -> None:
        self.n += other.n
        self.tally.update(other.tally)
        self.attempts += other.attempts
        self.attempts_sq += other.attempts_sq
        for c in range(3):
            self.resources[c] += other.resources[c]


@dataclass(frozen=True)
class TrialStats:
    """Aggregated outcome of ``n_trials`` runs of one protocol.

    Attributes:
        protocol: Registry key of the protocol.
        params: Noise used.
        seed: Base seed.
        n_trials: Number of trials.
        failures: Trials whose category counts as a failure.
        tally: Trials per category.
        attempts_mean, attempts_var: Preparation attempts per trial.
        resources_mean: Mean ``(r0, r1, r2)`` per trial.
        confidence: Level of :attr:`wilson_interval`.
    """

    protocol: str
    params: NoiseParams
    seed: int
    n_trials: int
    failures: int
    tally: dict[str, int]
    attempts_mean: float
    attempts_var: float
    resources_mean: tuple[float, float, float]
    confidence: float = 0.99

    @property
    def rate(self) -> float:
        return self.failures / self.n_trials

    @property
    def wilson_interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.n_trials, self.confidence)

    def conditional_rate(self, category: str, given_not: tuple[str, ...]) -> tuple[int, int]:
        """``(count, denominator)`` of ``category`` among trials outside ``given_not``."""
        denom = self.n_trials - sum(self.tally.get(c, 0) for c in given_not)
        return self.tally.get(category, 0), denom

    def as_row(self) -> dict:
        low, high = self.wilson_interval
        return {
            "protocol": self.protocol,
            "f": self.params.f,
            "q": self.params.q,
            "s": self.params.s,
            "seed": self.seed,
            "trials": self.n_trials,
            "failures": self.failures,
            "rate": self.rate,
            "wilson_low": low,
            "wilson_high": high,
            "attempts_mean": self.attempts_mean,
            "attempts_var": self.attempts_var,
            "r0_mean": self.resources_mean[0],
            "r1_mean": self.resources_mean[1],
            "r2_mean": self.resources_mean[2],
        }


def _run_chunk(args) -> _Totals:
    protocol_id, params, seed, start, stop = args
    run = PROTOCOLS[protocol_id].run
    streams = _TrialStreams(seed)
    totals = _Totals()
    for i in range(start, stop):
        totals.add(run(params, streams(i)))
    return totals


def run_trials(
    protocol_id: str,
    params: NoiseParams,
    n: int,
    seed: int = 0,
    workers: int = 1,
    confidence: float = 0.99,
) -> TrialStats:
    """Run ``n`` independent trials of a registered protocol.

    Args:
        protocol_id: Key of :data:`PROTOCOLS`.
        params: Noise parameters.
        n: Number of trials (at least one).
        seed: Base seed; trial ``i`` uses the generator keyed by ``(seed, i)``.
        workers: Processes to spread the trials over; results do not depend
            on it.
        confidence: Level of the reported Wilson interval.

    Raises:
        KeyError: Unknown protocol.
        ClosureViolation: A trial ended in a state its status does not describe.
    """
    if protocol_id not in PROTOCOLS:
        raise KeyError(f"unknown protocol {protocol_id!r}; known: {sorted(PROTOCOLS)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if workers <= 1:
        totals = _run_chunk((protocol_id, params, seed, 0, n))
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        chunks = [(protocol_id, params, seed, int(a), int(b)) for a, b in zip(bounds, bounds[1:])]
        totals = _Totals()
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_run_chunk, chunks):
                totals.merge(part)
    mean = totals.attempts / n
    var = totals.attempts_sq / n - mean * mean
    failures = sum(totals.tally[c] for c in PROTOCOLS[protocol_id].failures)
    return TrialStats(
        protocol=protocol_id,
        params=params,
        seed=seed,
        n_trials=n,
        failures=failures,
        tally=dict(sorted(totals.tally.items())),
        attempts_mean=mean,
        attempts_var=max(var, 0.0),
        resources_mean=tuple(r / n for r in totals.resources),
        confidence=confidence,
    )


@dataclass(frozen=True)
class Comparison:
    """Empirical rate against a predicted one."""

    empirical: float
    analytic: float
    z_score: float
    interval: tuple[float, float]
    sigmas: float = 3.0

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= self.sigmas


def z_score(k: int, n: int, p: float) -> float:
    """Normal-approximation deviation of ``k / n`` from ``p``."""
    observed = k / n
    if p <= 0.0 or p >= 1.0:
        return 0.0 if observed == p else math.copysign(math.inf, observed - p)
    return (observed - p) / math.sqrt(p * (1 - p) / n)


def compare(stats: TrialStats, analytic: float, sigmas: float = 3.0) -> Comparison:
    """Compare the failure rate of ``stats`` with ``analytic``."""
    return Comparison(
        empirical=stats.rate,
        analytic=analytic,
        z_score=z_score(stats.failures, stats.n_trials, analytic),
        interval=stats.wilson_interval,
        sigmas=sigmas,
    )


@dataclass(frozen=True)
class SweepPoint:
    f: float
    stats: TrialStats
    comparison: Comparison

    def as_row(self) -> dict:
        low, high = self.comparison.interval
        return {
            "f": self.f,
            "trials": self.stats.n_trials,
            "failures": self.stats.failures,
            "empirical": self.comparison.empirical,
            "analytic": self.comparison.analytic,
            "z": self.comparison.z_score,
            "wilson_low": low,
            "wilson_high": high,
        }


def sweep(
    protocol_id: str,
    f_values,
    n: int,
    seed: int = 0,
    workers: int = 1,
    confidence: float = THREE_SIGMA,
) -> list[SweepPoint]:
    """Failure rate of one protocol over a grid of ``f``, one row per value."""
    spec = PROTOCOLS[protocol_id]
    if spec.analytic is None:
        raise ValueError(f"{protocol_id!r} has no predicted failure rate")
    points = []
    for f in f_values:
        params = NoiseParams(f=float(f))
        stats = run_trials(protocol_id, params, n, seed, workers, confidence)
        points.append(SweepPoint(float(f), stats, compare(stats, spec.analytic(params))))
    return points


def crossing(points: list[SweepPoint]) -> tuple[float, float] | None:
    """Adjacent grid values between which the empirical rate crosses ``f``."""
    for a, b in zip(points, points[1:]):
        if a.comparison.empirical <= a.f and b.comparison.empirical >= b.f:
            return a.f, b.f
    return None
