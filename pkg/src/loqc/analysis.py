"""Closed-form failure rates, the concatenation map and its threshold.

Each encoded gate fails only by measuring its logical qubit in ``Z``; the
probability of that happening is a function of the lower-level failure
parameter ``f``.  Iterating that function gives the failure parameter after
each level of concatenation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _check_prob(f: float) -> None:
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {f}")


def failure_recovery(f: float) -> float:
    """Recovery fails when the second teleportation fails at its target.

    Solves ``F = f F + (1 - f) f``.
    """
    _check_prob(f)
    if f == 1.0:
        return 1.0
    return (1.0 - f) * f / (1.0 - f)


def failure_z90(f: float) -> float:
    """Logical Z quarter turn: ``f^2 (2 - f) / (1 - f (1 - f))``."""
    _check_prob(f)
    return f * f * (2.0 - f) / (1.0 - f * (1.0 - f))


def failure_zz(f: float) -> float:
    """First-qubit failure of the teleported ZZ quarter turn.

    Solved from its own recurrence ``F = f^2 + (1 - f) f^2 + f (1 - f) F``
    rather than by reusing :func:`failure_z90`.
    """
    _check_prob(f)
    a = 1.0 - f * (1.0 - f)
    b = f * f + (1.0 - f) * f * f
    return float(np.linalg.solve([[a]], [b])[0])


def prep_failure(f: float) -> float:
    """Encoded eigenstate preparation with a fallible coupling only."""
    _check_prob(f)
    return f * (2.0 - f)


def prep_failure_with_rot(f: float) -> float:
    """Preparation failure when the one-qubit quarter turns can fail too."""
    _check_prob(f)
    return f * sum((1.0 - f) ** j for j in range(5))


def _quadratic_roots(a: Fraction, b: Fraction, c: Fraction) -> list[Fraction | float]:
    disc = b * b - 4 * a * c
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        root = Fraction(rn, rd)
        return sorted({(-b - root) / (2 * a), (-b + root) / (2 * a)})
    root = math.sqrt(disc)
    return sorted({float((-b - root) / (2 * a)), float((-b + root) / (2 * a))})


def threshold() -> Fraction:
    """Nontrivial fixed point of the level map, as an exact rational.

    ``F(f) = f`` with ``f != 0`` reduces to ``2 f^2 - 3 f + 1 = 0``.
    """
    # f (2 - f) = 1 - f + f^2  <=>  2 f^2 - 3 f + 1 = 0
    roots = _quadratic_roots(Fraction(2), Fraction(-3), Fraction(1))
    inside = [r for r in roots if 0 < r < 1]
    return inside[0]


@dataclass(frozen=True)
class Level:
    """Parameters of the operations used to build the next level.

    Attributes:
        index: 0 for the physical operations.
        f: Two-qubit failure parameter at this level.
        q: One-qubit quarter-turn failure probability (0 physically).
        p: Total coupling failure ``f (2 - f)``.
    """

    index: int
    f: float
    q: float
    p: float

    @property
    def odds(self) -> float:
        """``f / (1 - f)``."""
        return self.f / (1.0 - self.f)

    @property
    def retry(self) -> float:
        """``1 / (1 - f (1 - f))``."""
        return 1.0 / (1.0 - self.f * (1.0 - self.f))

    @property
    def retry_ratio(self) -> float:
        """``f / (1 - f (1 - f))``."""
        return self.f / (1.0 - self.f * (1.0 - self.f))


@dataclass(frozen=True)
class LevelSchedule:
    f0: float
    levels: int
    f: tuple[float, ...]

    def level(self, k: int) -> Level:
        f = self.f[k]
        q = 0.0 if k == 0 else f
        return Level(k, f, q, f * (2.0 - f))

    @property
    def encoded(self) -> tuple[float, ...]:
        """Failure parameters after each level, excluding the physical one."""
        return self.f[1:]

    def rows(self) -> list[dict]:
        out = []
        for k in range(self.levels + 1):
            lev = self.level(k)
            out.append(
                {
                    "level": k,
                    "f": lev.f,
                    "q": lev.q,
                    "p": lev.p,
                    "f_over_1_minus_f": lev.odds if lev.f < 1 else math.inf,
                    "retry": lev.retry,
                    "retry_ratio": lev.retry_ratio,
                }
            )
        return out


def iterate_levels(f0: float, n: int) -> LevelSchedule:
    """Apply the level map ``n`` times starting from ``f0``."""
    _check_prob(f0)
    if n < 0:
        raise ValueError("number of levels must be non-negative")
    values = [f0]
    for _ in range(n):
        values.append(failure_z90(values[-1]))
    return LevelSchedule(f0, n, tuple(values))


# -- erasure --------------------------------------------------------------

RECOVERY_OPPORTUNITIES = 13  # two generators x two teleports x 3, plus one fix-up
ERASURE_THRESHOLD = Fraction(1, 104)


@dataclass(frozen=True)
class ErasureBounds:
    """Conservative erasure bounds (bounds, not rates)."""

    s: float
    recovery_bound: float
    measurement_bound: float
    coupling_bound: float
    threshold: Fraction

    @property
    def below_threshold(self) -> bool:
        return self.s < self.threshold


def erasure_bounds(s: float) -> ErasureBounds:
    """Recovery ``13 s``, measurement ``s r + 3 s^2 = 16 s^2``, coupling ``104 s^2``."""
    _check_prob(s)
    r = RECOVERY_OPPORTUNITIES * s
    return ErasureBounds(
        s=s,
        recovery_bound=r,
        measurement_bound=s * r + 3 * s * s,
        coupling_bound=(8 * s) * r,
        threshold=ERASURE_THRESHOLD,
    )


# -- phase-error distance of the concatenated code ------------------------


def concatenated_x_stabilizers(k: int) -> list[int]:
    """X-type generators of the ``k``-fold concatenated two-qubit code, as bitmasks.

    A level-``j`` block's logical X sits on its first physical qubit, so the
    generator joining two sibling blocks is X on the two first qubits.
    """
    gens = []
    for j in range(1, k + 1):
        half = 2 ** (j - 1)
        for start in range(0, 2**k, 2 * half):
            gens.append((1 << start) | (1 << (start + half)))
    return gens


MAX_PHASE_LEVELS = 3


def phase_distance(k: int) -> int:
    """Smallest number of Z errors that the code cannot detect.

    Exhaustive over all Z patterns on ``2^k`` qubits.  Since every stabilizer
    is X-type, any nonzero Z pattern commuting with all of them is a
    nontrivial logical operator.
    """
    if not 1 <= k <= MAX_PHASE_LEVELS:
        raise ValueError(f"k must be between 1 and {MAX_PHASE_LEVELS}")
    n = 2**k
    gens = concatenated_x_stabilizers(k)
    best = None
    for weight in range(1, n + 1):
        for qubits in itertools.combinations(range(n), weight):
            mask = sum(1 << q for q in qubits)
            if all((mask & g).bit_count() % 2 == 0 for g in gens):
                best = weight
                break
        if best is not None:
            break
    return best


def correctable_phase_errors(k: int) -> int:
    """Errors correctable at the brute-force distance, ``(d - 1) // 2``."""
    return (phase_distance(k) - 1) // 2
