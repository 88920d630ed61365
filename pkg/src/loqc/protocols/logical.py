"""Encoded quarter turns that fail only by measuring a logical qubit in ``Z``."""

from __future__ import annotations

from ..noise import GateEvent
from .machine import Machine, ProtocolResult, Status
from .recovery import recover_teleported
from .teleport import teleport
from .zrot import ZRotResource, apply_direct_zrot, prepare_zrot_resource


def logical_z90(m: Machine, pair: tuple[int, int]) -> ProtocolResult:
    """``Z_L`` quarter turn via ``(Z_1 Z_2)_90`` with source qubit 1.

    A source failure measures qubit 1; after a successful recovery the gate
    is tried again.  A target failure measures qubit 2 after the full
    rotation, so a successful recovery completes the gate.
    """
    q1, q2 = pair
    while True:
        g = m.rot2(q1, "Z", q2, "Z", 90)
        if g.ok:
            return m.result(Status.SUCCEEDED, qubits=(q1, q2))
        if g.event is GateEvent.SOURCE_MEASURED:
            rec = recover_teleported(m, q1, q2, g.outcome, measured_first=True)
            if not rec.ok:
                return rec
            q1, q2 = rec.qubits
            m.log(op="retry", name="z90")
            continue
        rec = recover_teleported(m, q2, q1, g.outcome, measured_first=False)
        return rec


def _copies(resource: ZRotResource):
    yield from resource.pairs


def logical_zz90(
    m: Machine,
    first: tuple[int, int],
    second: tuple[int, int],
    resource: ZRotResource | None = None,
    l: int = 3,
) -> ProtocolResult:
    """``(Z_L1 Z_L2)_90`` by teleporting all four qubits through rotated pairs.

    Qubits are teleported in the order first-1, first-2, second-1,
    second-2.  A source failure moves on to the next pair.  A target failure
    on the first qubit of a logical qubit is recovered from its partner and
    that logical qubit starts over; on the second qubit, the partner's
    already teleported copy is used and nothing is repeated.  Targets of
    spent or unused pairs are measured in ``Z`` and their outcomes fix the
    rotation's direction, which is corrected with ``Z`` on every qubit.

    Args:
        m: Executor.
        first, second: The two encoded pairs.
        resource: Prepared pairs; built with a depth-``l`` tree if omitted.
        l: Tree depth used when ``resource`` is omitted.

    Returns:
        ``SUCCEEDED`` with ``qubits=(f1, f2, s1, s2)``, ``LOGICAL_Z_MEASURED``
        with ``which`` set to 0 or 1, or ``ABORTED`` when pairs run out.
    """
    if resource is None:
        resource = prepare_zrot_resource(m, l)
    copies = _copies(resource)
    spent: list[int] = []
    sign = resource.sign
    done: list[tuple[int, int]] = []

    def measure_spent() -> int:
        # unused pairs are spent too
        spent.extend(b for _, b in copies)
        out = 1
        for b in spent:
            out *= m.measure(b, "Z")
        m.release(*spent)
        spent.clear()
        return out

    for which, pair in enumerate((first, second)):
        members = list(pair)
        dests: list[int] = []
        while len(dests) < 2:
            copy = next(copies, None)
            if copy is None:
                return m.result(Status.ABORTED, which=which, detail="pairs exhausted")
            inp = members[len(dests)]
            t = teleport(m, inp, copy, resource.pending.get(copy[1], "I"))
            if t.ok:
                # a correction anticommuting with Z reverses that factor
                sign *= -t.signs[0]
                dests.append(t.dest)
                continue
            spent.append(copy[1])
            if t.event is GateEvent.SOURCE_MEASURED:
                continue
            if not dests:
                rec = recover_teleported(m, inp, members[1], t.outcome, measured_first=True)
                if not rec.ok:
                    sign *= measure_spent()
                    return m.result(Status.LOGICAL_Z_MEASURED, outcome=rec.outcome, which=which)
                members = list(rec.qubits)
                continue
            # the partner's copy already took the rotation; Z of the lost
            # qubit is now a known sign
            sign *= t.outcome
            rec = recover_teleported(m, inp, dests[0], t.outcome, measured_first=False)
            if not rec.ok:
                sign *= measure_spent()
                return m.result(Status.LOGICAL_Z_MEASURED, outcome=rec.outcome, which=which)
            dests = [rec.qubits[0], rec.qubits[1]]
            break
        done.append((dests[0], dests[1]))
    sign *= measure_spent()
    qubits = done[0] + done[1]
    for q in qubits:
        m.pauli(q, "Z" if sign == -1 else "I")
    return m.result(Status.SUCCEEDED, qubits=qubits)


def logical_zz90_direct(m: Machine, first: tuple[int, int], second: tuple[int, int]) -> ProtocolResult:
    """Reference ``(Z_1 Z_2 Z_3 Z_4)_90`` applied straight to the data qubits.

    Not protected against failures; any failed coupling aborts the run.
    """
    qubits = [first[0], first[1], second[0], second[1]]
    before = m.attempt_failed
    m.attempt_failed = False
    apply_direct_zrot(m, qubits)
    failed, m.attempt_failed = m.attempt_failed, before
    if failed:
        return m.result(Status.ABORTED, detail="direct coupling failed")
    return m.result(Status.SUCCEEDED, qubits=tuple(qubits))
