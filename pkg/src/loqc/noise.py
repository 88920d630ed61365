"""Failure model for rotations built from measurement and postselection.

A two-qubit rotation ``(U^a V^b)_{+-90}`` with source qubit ``a`` either
succeeds, or the source is measured in ``U`` without any rotation (probability
``f``), or the rotation is applied and the target is then measured in ``V``
(probability ``(1 - f) * f``).  One-qubit ``Z`` or ``Y`` quarter rotations fail
with probability ``q`` by measuring the qubit in the rotation axis.  ``X``
quarter rotations, half-turns, preparations and measurements never fail.  For
the erasure model each target of an operation is lost with probability ``s``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np


class GateEvent(enum.Enum):
    SUCCESS = "success"
    SOURCE_MEASURED = "source_measured"
    TARGET_MEASURED = "target_measured"
    ERASED = "erased"


@dataclass(frozen=True)
class NoiseParams:
    """Failure probabilities.

    Attributes:
        f: Two-qubit rotation failure probability per postselection stage.
        q: One-qubit Z/Y quarter-rotation failure probability.
        s: Erasure probability per operation target.
    """

    f: float = 0.0
    q: float = 0.0
    s: float = 0.0

    def __post_init__(self):
        for name in ("f", "q", "s"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def noiseless(self) -> bool:
        return self.f == 0.0 and self.q == 0.0 and self.s == 0.0

    @property
    def p(self) -> float:
        """Overall two-qubit rotation failure probability ``f (2 - f)``."""
        return self.f * (2.0 - self.f)


@dataclass(frozen=True)
class GateOutcome:
    """What happened to one gate.

    Attributes:
        event: Which branch of the failure model occurred.
        measured_qubit: Qubit that was measured (failure branches only).
        outcome: Its measurement outcome, filled in by the simulator.
        residual: For target failures, the single-qubit rotation left on the
            source, as ``(qubit, letter, angle)``.
    """

    event: GateEvent
    measured_qubit: int | None = None
    outcome: int | None = None
    residual: tuple[int, str, int] | None = None

    @property
    def ok(self) -> bool:
        return self.event is GateEvent.SUCCESS

    def with_outcome(self, outcome: int, residual=None) -> "GateOutcome":
        return replace(self, outcome=outcome, residual=residual)


SUCCESS = GateOutcome(GateEvent.SUCCESS)


def sample_two_qubit(
    params: NoiseParams, rng: np.random.Generator, source: int = 0, target: int = 1
) -> GateOutcome:
    """Draw the failure branch of a two-qubit rotation."""
    f = params.f
    if f == 0.0:
        return SUCCESS
    u = rng.random()
    if u < f:
        return GateOutcome(GateEvent.SOURCE_MEASURED, source)
    if u < f + (1.0 - f) * f:
        return GateOutcome(GateEvent.TARGET_MEASURED, target)
    return SUCCESS


def sample_one_qubit_z90(
    params: NoiseParams, rng: np.random.Generator, qubit: int = 0
) -> GateOutcome:
    """Draw the failure branch of a one-qubit Z or Y quarter rotation."""
    if params.q == 0.0 or rng.random() >= params.q:
        return SUCCESS
    return GateOutcome(GateEvent.SOURCE_MEASURED, qubit)


def sample_erasure(
    params: NoiseParams, n_targets: int, rng: np.random.Generator
) -> list[int]:
    """Indices (``0..n_targets-1``) of the targets lost by one operation."""
    if params.s == 0.0:
        return []
    return [i for i in range(n_targets) if rng.random() < params.s]
