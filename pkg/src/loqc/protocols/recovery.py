"""Restoring an encoded pair after one of its qubits was measured in ``Z``.

After ``Z`` on qubit ``m`` returned ``s`` the surviving qubit ``o`` carries
the logical state with ``Z_L = s Z_o`` and ``X_L = X_o``.
"""

from __future__ import annotations

from ..noise import GateEvent
from .machine import Machine, ProtocolResult, Status
from .teleport import correction, flips_x, prepare_re, teleport


def _ordered(measured_first: bool, new_measured: int, new_other: int) -> tuple[int, int]:
    return (new_measured, new_other) if measured_first else (new_other, new_measured)


def recover_teleported(
    m: Machine, measured: int, other: int, sign: int, measured_first: bool = True
) -> ProtocolResult:
    """Teleport the survivor into a prepared pair that already carries the check.

    The recovery resource stands in for the measured qubit, so only the
    survivor's teleportation can fail.  A source failure is retried with a
    new resource; a target failure measures the survivor and therefore the
    logical qubit.

    Args:
        m: Executor.
        measured: Qubit that was measured in ``Z``.
        other: The surviving qubit of the pair.
        sign: Outcome of the ``Z`` measurement.
        measured_first: Whether ``measured`` was the first qubit of the pair;
            the returned pair keeps that order.

    Returns:
        ``SUCCEEDED`` with the new pair, or ``LOGICAL_Z_MEASURED`` with the
        logical outcome.
    """
    m.release(measured)
    while True:
        d, a, b = prepare_re(m, sign)
        t = teleport(m, other, (a, b))
        if t.ok:
            # a correction that flips X on the target also flips X_d X_b
            m.pauli(d, "Z" if flips_x(correction(*t.signs)) else "I")
            m.log(op="recovered", qubits=[d, b])
            return m.result(Status.SUCCEEDED, qubits=_ordered(measured_first, d, b))
        m.release(d, b)
        if t.event is GateEvent.TARGET_MEASURED:
            m.release(other)
            return m.result(Status.LOGICAL_Z_MEASURED, outcome=sign * t.outcome)


def recover_unitary(
    m: Machine, measured: int, other: int, sign: int, measured_first: bool = True
) -> ProtocolResult:
    """Undo the measurement with a quarter turn about ``Y_m X_o`` (noiseless reference).

    The measured state equals the code state rotated about ``Y_m X_o``, so
    the inverse rotation restores it.  ``X_o`` is reached by conjugating
    ``Z_o`` with ``Y_o`` quarter turns.
    """
    with m.noiseless():
        m.rot1(other, "Y", 90)
        m.rot2(measured, "Y", other, "Z", -90 * sign)
        m.rot1(other, "Y", -90)
    return m.result(Status.SUCCEEDED, qubits=_ordered(measured_first, measured, other))
