"""The two-qubit code stabilized by ``X_1 X_2``.

Logical operators are ``X_L = X_1``, ``Z_L = Z_1 Z_2`` and ``Y_L = Y_1 Z_2``.
Encoding uses ``Y_1(90) (Z_1 Y_2)_90 Y_1(-90)`` on the input and a fresh
``+Z`` ancilla, with the ancilla as the coupling source.
"""

from __future__ import annotations

from ..noise import GateEvent
from ..pauli import PauliProduct
from .machine import Machine, ProtocolResult, Status

LOGICAL_LETTERS = {
    "X": {0: "X"},
    "Z": {0: "Z", 1: "Z"},
    "Y": {0: "Y", 1: "Z"},
}


def logical_operator(n: int, pair: tuple[int, int], letter: str) -> PauliProduct:
    """``X_L``, ``Y_L`` or ``Z_L`` of the pair as a Pauli product on ``n`` qubits."""
    return PauliProduct.from_sparse(
        n, {pair[i]: l for i, l in LOGICAL_LETTERS[letter].items()}
    )


def stabilizer(n: int, pair: tuple[int, int]) -> PauliProduct:
    return PauliProduct.from_sparse(n, {pair[0]: "X", pair[1]: "X"})


def encode_pair(m: Machine, src: int, reprepare=None) -> ProtocolResult:
    """Encode the state of ``src`` into ``(src, ancilla)``.

    A coupling that fails at its source (the ancilla) leaves the input
    behind a ``Y_1(-90)``, which is undone before trying again.  A failure
    that measures the input destroys it: ``reprepare(m)`` is then asked for a
    fresh input qubit, and without it the run is aborted.

    Args:
        m: Executor.
        src: Qubit holding the input.
        reprepare: Optional callback returning a re-prepared input qubit.

    Returns:
        ``SUCCEEDED`` with ``qubits=(src, ancilla)``, or ``ABORTED``.
    """
    anc = m.prepare("Z")
    for _ in range(m.attempt_cap):
        m.attempts += 1
        lost = not m.rot1(src, "Y", -90).ok
        if not lost:
            g = m.rot2(anc, "Y", src, "Z", 90)
            if g.event is GateEvent.SOURCE_MEASURED:
                m.log(op="retry", name="encode")
                lost = not m.rot1(src, "Y", 90).ok
                if not lost:
                    m.release(anc)
                    anc = m.prepare("Z")
                    continue
            elif g.event is GateEvent.TARGET_MEASURED:
                lost = True
            else:
                lost = not m.rot1(src, "Y", 90).ok
                if not lost:
                    return m.result(Status.SUCCEEDED, qubits=(src, anc))
        if reprepare is None:
            return m.result(Status.ABORTED, detail="input measured")
        m.release(src, anc)
        src = reprepare(m)
        anc = m.prepare("Z")
    return m.result(Status.ABORTED, detail="attempt cap")


def _prepare_axis(m: Machine, axis: str, sign: int, rotated: bool) -> int:
    if not rotated:
        return m.prepare(axis, sign)
    if axis != "X":
        raise ValueError("only the X eigenstate has a rotated preparation")
    # +Z -> -Y under X(90), then -Y -> +X under Z(90)
    q = m.prepare("Z", sign)
    m.rot1(q, "X", 90)
    m.rot1(q, "Z", 90)
    return q


def encoded_eigenstate(
    m: Machine, axis: str = "Z", sign: int = 1, rotated_prep: bool = False
) -> tuple[int, int]:
    """Prepare the ``sign`` eigenstate of logical ``axis``, discarding failed tries.

    With ``rotated_prep`` the ``X`` eigenstate is made from ``+Z`` by
    ``X(90)`` then a fallible ``Z(90)``, giving five fallible stages per try.
    """

    def build(mm: Machine):
        src = _prepare_axis(mm, axis, sign, rotated_prep)
        anc = mm.prepare("Z")
        mm.rot1(src, "Y", -90)
        mm.rot2(anc, "Y", src, "Z", 90)
        mm.rot1(src, "Y", 90)
        return (src, anc), (src, anc)

    f, q = m.noise.f, m.noise.q
    stages_q = 3 if rotated_prep else 2
    success = (1 - q) ** stages_q * (1 - f) ** 2
    return m.repeat_until_success(build, success, "encode")


def logical_pauli(m: Machine, pair: tuple[int, int], letter: str) -> None:
    """Transversal logical half turn (error-free)."""
    for i, l in LOGICAL_LETTERS[letter].items():
        m.pauli(pair[i], l)


def measure_logical(m: Machine, pair: tuple[int, int], letter: str = "Z") -> int:
    """Logical measurement from single-qubit outcomes (error-free)."""
    out = 1
    for i, l in LOGICAL_LETTERS[letter].items():
        out *= m.measure(pair[i], l)
    return out


def logical_x_rotation(m: Machine, pair: tuple[int, int], angle: int) -> None:
    """``X_L`` rotation by any supported angle via ``X`` on the first qubit."""
    m.rot1(pair[0], "X", angle)
