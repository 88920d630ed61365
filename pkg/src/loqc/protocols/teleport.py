"""Teleportation through a prepared entangled pair, and the recovery resource.

The pair ``(a, b)`` is built by preparing ``a`` in ``+Z`` and ``b`` in ``+Y``
and coupling them with ``(Y_a Z_b)_90``.  Teleporting ``inp`` couples it to
``a`` with ``(Y_a Z_inp)_90`` (source ``a``), measures ``Z`` on ``a`` and ``Y``
on ``inp`` and finishes with a half turn on ``b`` looked up from
:data:`CORRECTION_TABLE`.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..noise import GateEvent
from ..resources import success_re_circuit, success_te
from .machine import Machine

# (Z outcome on the pair's first qubit, Y outcome on the input) -> half turn
CORRECTION_TABLE: dict[tuple[int, int], str] = {
    (1, 1): "Y",
    (1, -1): "X",
    (-1, 1): "Z",
    (-1, -1): "I",
}

_PRODUCT = {
    ("I", "I"): "I", ("I", "X"): "X", ("I", "Y"): "Y", ("I", "Z"): "Z",
    ("X", "I"): "X", ("X", "X"): "I", ("X", "Y"): "Z", ("X", "Z"): "Y",
    ("Y", "I"): "Y", ("Y", "X"): "Z", ("Y", "Y"): "I", ("Y", "Z"): "X",
    ("Z", "I"): "Z", ("Z", "X"): "Y", ("Z", "Y"): "X", ("Z", "Z"): "I",
}


def letter_product(a: str, b: str) -> str:
    """Single-qubit Pauli product with the phase dropped."""
    return _PRODUCT[a, b]


def correction(s1: int, s2: int) -> str:
    """Half turn that completes a teleportation with outcomes ``(s1, s2)``."""
    return CORRECTION_TABLE[s1, s2]


@dataclass
class Teleport:
    """Result of one teleportation attempt.

    Attributes:
        event: ``SUCCESS``, ``SOURCE_MEASURED`` (input untouched, pair
            spent) or ``TARGET_MEASURED`` (input measured in ``Z``).
        dest: Qubit now holding the input (success only).
        outcome: ``Z`` outcome of the input after a target failure.
        signs: ``(s1, s2)`` on success.
        pair: The pair that was consumed.
    """

    event: GateEvent
    dest: int | None = None
    outcome: int | None = None
    signs: tuple[int, int] | None = None
    pair: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.event is GateEvent.SUCCESS


def build_te(m: Machine):
    a = m.prepare("Z")
    b = m.prepare("Y")
    m.rot2(a, "Y", b, "Z", 90)
    return (a, b), (a, b)


def prepare_te(m: Machine) -> tuple[int, int]:
    """Prepare an entangled pair, retrying until the coupling succeeds."""
    return m.repeat_until_success(build_te, success_te(m.noise.p), "te")


def teleport(m: Machine, inp: int, pair: tuple[int, int], pending: str = "I") -> Teleport:
    """Move the state of ``inp`` onto the second qubit of ``pair``.

    ``pending`` is a Pauli owed to the destination (a deferred correction);
    it is merged into the final half turn so no extra operation is spent.
    After a failure the pair's second qubit is left allocated for the caller.
    """
    a, b = pair
    g = m.rot2(a, "Y", inp, "Z", 90)
    if g.event is GateEvent.SOURCE_MEASURED:
        m.release(a)
        return Teleport(GateEvent.SOURCE_MEASURED, pair=pair)
    if g.event is GateEvent.TARGET_MEASURED:
        # a Y measurement on a leaves b with a Z quarter turn only
        m.measure(a, "Y")
        m.release(a)
        return Teleport(GateEvent.TARGET_MEASURED, outcome=g.outcome, pair=pair)
    s1 = m.measure(a, "Z")
    s2 = m.measure(inp, "Y")
    m.pauli(b, letter_product(correction(s1, s2), pending))
    m.release(a, inp)
    return Teleport(GateEvent.SUCCESS, dest=b, signs=(s1, s2), pair=pair)


# -- XX measurement on teleportation targets -----------------------------


def measure_xx(m: Machine, d: int, b: int) -> int:
    """Measure ``X_d X_b`` through ``Z_d`` with two couplings (source ``d``)."""
    m.rot1(b, "Y", -90)
    m.rot2(d, "Y", b, "Z", 90)
    # the rotations carry -X_d X_b onto Z_d
    s = -m.measure(d, "Z")
    m.rot2(d, "Y", b, "Z", -90)
    m.rot1(b, "Y", 90)
    return s


def build_re(sign: int):
    """One attempt at the recovery resource for a qubit measured with ``sign``."""

    def build(m: Machine):
        (a, b), _ = build_te(m)
        d = m.prepare("Z", sign)
        xx = measure_xx(m, d, b)
        m.pauli(d, "Z" if xx == -1 else "I")
        return (d, a, b), (d, a, b)

    return build


def prepare_re(m: Machine, sign: int) -> tuple[int, int, int]:
    """Recovery resource ``(d, a, b)``: ``d`` stands in for the measured qubit.

    ``X_d X_b = +1`` holds on return and ``(a, b)`` is still a teleportation
    pair.
    """
    p = m.noise.p
    return m.repeat_until_success(
        build_re(sign), success_re_circuit(p, m.noise.q), "recovery"
    )


def flips_x(letter: str) -> bool:
    """True when the half turn ``letter`` anticommutes with ``X``."""
    return letter in ("Y", "Z")


def measure_xx_teleported(m: Machine, q1: int, q2: int) -> tuple[int, tuple[int, int]]:
    """Measure ``X_q1 X_q2`` by teleporting both qubits into a checked resource.

    Two pairs are prepared and ``XX`` is measured on their targets before
    anything touches the inputs; a ``-1`` there is fixed with ``Y`` on the
    first target and ``Z`` on its partner.  The eigenvalue is then read off
    the teleportation outcomes.  Only the preparation is fallible; the two
    teleportations run without failures.

    Returns:
        The inferred eigenvalue and the qubits now holding ``q1`` and ``q2``.
    """

    def build(mm: Machine):
        (a1, b1), _ = build_te(mm)
        (a2, b2), _ = build_te(mm)
        s = measure_xx(mm, b1, b2)
        mm.pauli(b1, "Y" if s == -1 else "I")
        mm.pauli(a1, "Z" if s == -1 else "I")
        return (a1, b1, a2, b2), (a1, b1, a2, b2)

    p, q = m.noise.p, m.noise.q
    a1, b1, a2, b2 = m.repeat_until_success(
        build, success_te(p) ** 4 * (1 - q) ** 2, "xx_check"
    )
    flips = 0
    with m.noiseless():
        t1 = teleport(m, q1, (a1, b1))
        t2 = teleport(m, q2, (a2, b2))
    for t in (t1, t2):
        flips ^= flips_x(correction(*t.signs))
    return (-1 if flips else 1), (t1.dest, t2.dest)


def detect_phase_error(m: Machine, pair: tuple[int, int]) -> tuple[bool, tuple[int, int]]:
    """Check ``X_1 X_2`` of an encoded pair; a ``-1`` flags a phase error.

    A flagged state is returned to the code with ``Z`` on the first qubit.
    Returns ``(flag, new_pair)``.
    """
    s, (d1, d2) = measure_xx_teleported(m, *pair)
    m.pauli(d1, "Z" if s == -1 else "I")
    return s == -1, (d1, d2)
