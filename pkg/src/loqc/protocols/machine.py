"""Gate-level executor shared by all protocols.

The :class:`Machine` owns a stabilizer state, the noise parameters and the
random generator of one protocol run.  Every physical operation goes through
it so that failures are sampled in one place and resources are counted in the
three categories.
"""

from __future__ import annotations

import enum
import json
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from ..noise import GateEvent, GateOutcome, NoiseParams, SUCCESS, sample_erasure
from ..resources import ResourceVector
from ..tableau import StabilizerState

_BITS = {"X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

DEFAULT_ATTEMPT_CAP = 10_000


class AttemptCapExceeded(RuntimeError):
    """A preparation did not succeed within the configured number of attempts."""


class Status(enum.Enum):
    SUCCEEDED = "succeeded"
    LOGICAL_Z_MEASURED = "logical_z_measured"
    ABORTED = "aborted"
    LOGICAL_LOST = "logical_lost"


@dataclass
class ProtocolResult:
    """Outcome of an encoded operation.

    Attributes:
        status: Success, a logical Z measurement, or an abort.
        outcome: The logical Z value when ``status`` is a logical measurement.
        qubits: Where the logical data now lives.
        attempts: Preparation attempts consumed.
        resources: Operations consumed.
        records: ``(qubit, letter, outcome)`` for every measurement made.
        which: For two-qubit gates, index of the logical qubit that failed.
        detail: Free-form note (abort reason).
    """

    status: Status
    outcome: int | None = None
    qubits: tuple[int, ...] = ()
    attempts: int = 0
    resources: ResourceVector = field(default_factory=ResourceVector)
    records: list = field(default_factory=list)
    which: int | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCEEDED


class Machine:
    """Executes gates on a stabilizer state under the failure model.

    Args:
        noise: Failure probabilities.
        rng: Source of all randomness.
        state: Register to act on; a fresh empty one by default.
        trace: Record every operation as a JSON-friendly event.
        prep_mode: ``"exact"`` runs every preparation attempt gate by gate;
            ``"sampled"`` draws the number of attempts from the known success
            probability and builds the successful copy noiselessly.
        eager_frame: Apply bookkeeping Pauli corrections as soon as they are
            known instead of deferring them (debug cross-check).
        attempt_cap: Maximum attempts for any one preparation.
    """

    def __init__(
        self,
        noise: NoiseParams | None = None,
        rng: np.random.Generator | None = None,
        state: StabilizerState | None = None,
        trace: bool = False,
        prep_mode: str = "exact",
        eager_frame: bool = False,
        attempt_cap: int = DEFAULT_ATTEMPT_CAP,
    ):
        if prep_mode not in ("exact", "sampled"):
            raise ValueError(f"unknown preparation mode {prep_mode!r}")
        self.noise = noise or NoiseParams()
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.state = state if state is not None else StabilizerState()
        self.trace: list | None = [] if trace else None
        self.prep_mode = prep_mode
        self.eager_frame = eager_frame
        self.attempt_cap = attempt_cap
        self.counts = [0, 0, 0]
        self.attempts = 0
        self.records: list[tuple[int, str, int]] = []
        self.free: list[int] = []
        self.attempt_failed = False
        # coupling index -> forced failure branch, for scripted tests
        self.forced: dict[int, GateEvent] = {}
        self.couplings = 0
        # loss-opportunity labels that are lost regardless of the erasure rate
        self.forced_losses: set[str] = set()
        self._f = self.noise.f
        self._q = self.noise.q
        self._s = self.noise.s

    # -- bookkeeping ------------------------------------------------------

    @property
    def resources(self) -> ResourceVector:
        return ResourceVector(*self.counts)

    def log(self, **event) -> None:
        if self.trace is not None:
            self.trace.append(event)

    def trace_json(self) -> str:
        return json.dumps(self.trace or [], indent=1)

    @contextmanager
    def noiseless(self):
        """Suspend failure sampling (used to build sampled-mode preparations)."""
        saved = (self._f, self._q, self._s)
        self._f = self._q = self._s = 0.0
        try:
            yield
        finally:
            self._f, self._q, self._s = saved

    @property
    def is_noiseless(self) -> bool:
        return self._f == 0.0 and self._q == 0.0

    # -- qubits -----------------------------------------------------------

    def prepare(self, letter: str = "Z", sign: int = 1) -> int:
        """Allocate a qubit in the ``sign`` eigenstate of ``letter`` (one r0)."""
        self.counts[0] += 1
        if self.free:
            q = self.free.pop()
            self.state.reset(q, letter, sign, self.rng)
        else:
            q = self.state.add_qubit(letter, sign)
        self.log(op="prepare", qubit=q, axis=letter, sign=sign)
        return q

    def release(self, *qubits: int) -> None:
        """Return qubits to the pool; they are reset on their next use."""
        self.free.extend(qubits)

    # -- gates ------------------------------------------------------------

    def rot1(self, q: int, letter: str, angle: int) -> GateOutcome:
        """One-qubit rotation; Z/Y quarter turns are fallible (r1), others r0."""
        bx, bz = _BITS[letter]
        if angle == 180 or letter == "X":
            self.counts[0] += 1
            self.state.rotate(bx << q, bz << q, angle)
            self.log(op="rot1", qubit=q, axis=letter, angle=angle)
            return SUCCESS
        self.counts[1] += 1
        if self._q and self.rng.random() < self._q:
            s = self.state.measure_bits(bx << q, bz << q, 0, self.rng)[0]
            self.records.append((q, letter, s))
            self.attempt_failed = True
            self.log(op="rot1", qubit=q, axis=letter, angle=angle, event="measured", outcome=s)
            return GateOutcome(GateEvent.SOURCE_MEASURED, q, s)
        self.state.rotate(bx << q, bz << q, angle)
        self.log(op="rot1", qubit=q, axis=letter, angle=angle)
        return SUCCESS

    def pauli(self, q: int, letter: str) -> None:
        """Half turn about ``letter`` (error-free, one r0); ``"I"`` is still counted."""
        self.counts[0] += 1
        if letter != "I":
            bx, bz = _BITS[letter]
            self.state.rotate(bx << q, bz << q, 180)
        self.log(op="pauli", qubit=q, axis=letter)

    def frame(self, q: int, letter: str) -> None:
        """Uncounted Pauli used only to apply bookkeeping corrections eagerly."""
        if letter != "I":
            bx, bz = _BITS[letter]
            self.state.rotate(bx << q, bz << q, 180)
        self.log(op="frame", qubit=q, axis=letter)

    def rot2(self, a: int, la: str, b: int, lb: str, angle: int) -> GateOutcome:
        """Two-qubit quarter turn about ``la`` on ``a`` times ``lb`` on ``b``.

        ``a`` is the source.  On a source failure ``a`` is measured in ``la``
        and nothing is rotated; on a target failure the rotation is applied
        and ``b`` is then measured in ``lb``, leaving a residual quarter turn
        about ``la`` on ``a`` with angle ``angle * outcome``.
        """
        self.counts[2] += 1
        ax, az = _BITS[la]
        bx, bz = _BITS[lb]
        f = self._f
        event = self.forced.pop(self.couplings, None)
        self.couplings += 1
        if event is None:
            event = GateEvent.SUCCESS
            if f:
                u = self.rng.random()
                if u < f:
                    event = GateEvent.SOURCE_MEASURED
                elif u < f + (1.0 - f) * f:
                    event = GateEvent.TARGET_MEASURED
        if event is GateEvent.SOURCE_MEASURED:
            s = self.state.measure_bits(ax << a, az << a, 0, self.rng)[0]
            self.records.append((a, la, s))
            self.attempt_failed = True
            self.log(op="rot2", source=a, target=b, axes=la + lb, angle=angle,
                     event="source_measured", outcome=s)
            return GateOutcome(GateEvent.SOURCE_MEASURED, a, s)
        if event is GateEvent.TARGET_MEASURED:
            self.state.rotate((ax << a) | (bx << b), (az << a) | (bz << b), angle)
            s = self.state.measure_bits(bx << b, bz << b, 0, self.rng)[0]
            self.records.append((b, lb, s))
            self.attempt_failed = True
            self.log(op="rot2", source=a, target=b, axes=la + lb, angle=angle,
                     event="target_measured", outcome=s)
            return GateOutcome(GateEvent.TARGET_MEASURED, b, s, (a, la, angle * s))
        self.state.rotate((ax << a) | (bx << b), (az << a) | (bz << b), angle)
        self.log(op="rot2", source=a, target=b, axes=la + lb, angle=angle)
        return SUCCESS

    def lost(self, label: str, count: int = 1) -> bool:
        """Whether any of ``count`` independent loss opportunities occurred."""
        if label in self.forced_losses:
            self.forced_losses.discard(label)
            hit = True
        else:
            hit = bool(self._s) and bool(sample_erasure(self.noise, count, self.rng))
        if hit:
            self.log(op="lost", at=label)
        return hit

    def measure(self, q: int, letter: str) -> int:
        """Error-free single-qubit measurement (one r0)."""
        self.counts[0] += 1
        bx, bz = _BITS[letter]
        s = self.state.measure_bits(bx << q, bz << q, 0, self.rng)[0]
        self.records.append((q, letter, s))
        self.log(op="measure", qubit=q, axis=letter, outcome=s)
        return s

    # -- preparation loops -----------------------------------------------

    def repeat_until_success(self, build, success_prob: float, name: str, attempt_cost=None):
        """Run a fallible preparation until one attempt succeeds.

        ``build(machine)`` performs one attempt and returns
        ``(result, qubits_to_discard_on_failure)``; any failed gate inside
        marks the attempt as failed.  Exact mode completes every attempt gate
        by gate, so a failed attempt is charged in full.  Sampled mode draws
        the attempt count from ``success_prob``, charges each failed attempt
        via ``attempt_cost(machine) -> (counts, attempts)`` (by default the
        cost of the kept copy) and builds the kept copy noiselessly.
        """
        if self.prep_mode == "sampled":
            if success_prob <= 0.0:
                raise AttemptCapExceeded(f"{name}: success probability is zero")
            k = 1 if success_prob >= 1.0 else int(self.rng.geometric(success_prob))
            if k > self.attempt_cap:
                self.attempts += self.attempt_cap
                raise AttemptCapExceeded(f"{name}: exceeded {self.attempt_cap} attempts")
            before = list(self.counts)
            before_attempts = self.attempts
            with self.noiseless():
                result, _ = build(self)
            kept = [self.counts[c] - before[c] for c in range(3)]
            kept_attempts = self.attempts - before_attempts
            if attempt_cost is None:
                for c in range(3):
                    self.counts[c] += (k - 1) * kept[c]
                self.attempts += (k - 1) * kept_attempts
            else:
                for _ in range(k - 1):
                    extra, extra_attempts = attempt_cost(self)
                    for c in range(3):
                        self.counts[c] += extra[c]
                    self.attempts += extra_attempts
            self.attempts += k
            self.log(op="prepare_resource", name=name, attempts=k)
            return result
        for attempt in range(1, self.attempt_cap + 1):
            saved = self.attempt_failed
            self.attempt_failed = False
            result, discard = build(self)
            failed = self.attempt_failed
            self.attempt_failed = saved
            self.attempts += 1
            if not failed:
                self.log(op="prepare_resource", name=name, attempts=attempt)
                return result
            self.log(op="retry", name=name, attempt=attempt)
            self.release(*discard)
        raise AttemptCapExceeded(f"{name}: exceeded {self.attempt_cap} attempts")

    def result(self, status: Status, **kw) -> ProtocolResult:
        return ProtocolResult(
            status=status,
            attempts=self.attempts,
            resources=self.resources,
            records=list(self.records),
            **kw,
        )
