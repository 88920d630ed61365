"""Four-qubit erasure code and its loss-tolerant ``Z_L`` measurement.

The code is stabilized by ``X1 X2 X3``, ``Y2 Y3 Y4`` and ``Z1 Z3 Z4`` with
``Z_L = Z2 Z3`` and ``X_L = X3 X4``.  Any single lost qubit can be restored
by re-preparing it and measuring the two generators that act on it.

Losses are drawn per operation with the erasure rate ``s``.  A generator
measurement stands for two teleportation steps of three loss opportunities
each; it is carried out on the register as a direct Pauli-product
measurement, and any loss during recovery is treated as losing the logical
qubit.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from ..analysis import RECOVERY_OPPORTUNITIES
from ..pauli import PauliProduct
from .machine import Machine, ProtocolResult, Status

GENERATORS = (
    {0: "X", 1: "X", 2: "X"},
    {1: "Y", 2: "Y", 3: "Y"},
    {0: "Z", 2: "Z", 3: "Z"},
)
LOGICALS = {
    "X": {2: "X", 3: "X"},
    "Z": {1: "Z", 2: "Z"},
    "Y": {1: "Z", 2: "Y", 3: "X"},
}
# losses per teleported generator measurement: two steps of three
GENERATOR_OPPORTUNITIES = 6


def code_operator(n: int, code: tuple[int, ...], factors: dict[int, str]) -> PauliProduct:
    """Embed a 4-qubit pattern (keys are code positions) into ``n`` qubits."""
    return PauliProduct.from_sparse(n, {code[i]: l for i, l in factors.items()})


def generators_on(position: int) -> tuple[int, int]:
    """Two generators whose letters on ``position`` differ."""
    touching = [i for i, g in enumerate(GENERATORS) if position in g]
    first = touching[0]
    for second in touching[1:]:
        if GENERATORS[second][position] != GENERATORS[first][position]:
            return first, second
    raise AssertionError("every qubit is touched by two distinct letters")


@lru_cache(maxsize=None)
def _flip(index: int) -> dict[int, str]:
    # lightest 4-qubit Pauli that flips generator `index` only and keeps both logicals
    others = [PauliProduct.from_sparse(4, g) for j, g in enumerate(GENERATORS) if j != index]
    others += [PauliProduct.from_sparse(4, LOGICALS[k]) for k in ("X", "Z")]
    target = PauliProduct.from_sparse(4, GENERATORS[index])
    best = None
    for letters in product("IXYZ", repeat=4):
        factors = {i: l for i, l in enumerate(letters) if l != "I"}
        if not factors:
            continue
        p = PauliProduct.from_sparse(4, factors)
        if p.commutes(target) or not all(p.commutes(o) for o in others):
            continue
        if best is None or len(factors) < len(best):
            best = factors
    return best


def _measure_generator(m: Machine, code: tuple[int, ...], index: int) -> int:
    p = code_operator(m.state.n, code, GENERATORS[index])
    return m.state.measure(p, m.rng).outcome


def erasure_encode(m: Machine, src: int) -> tuple[int, int, int, int]:
    """Encode the state of ``src`` into four qubits, ``src`` becoming the third.

    Preparation is error-free (it can always be retried), so it runs without
    losses.  The helpers start as ``+Z, +Z, src, +X``, which makes ``Z2 Z3``
    and ``X3 X4`` equal to the input's ``Z`` and ``X``; measuring the
    generators and undoing ``-1`` outcomes then projects onto the code.

    Returns:
        The code block as qubit indices in code order.
    """
    with m.noiseless():
        code = (m.prepare("Z"), m.prepare("Z"), src, m.prepare("X"))
        for i in range(len(GENERATORS)):
            if _measure_generator(m, code, i) == -1:
                for pos, letter in _flip(i).items():
                    m.pauli(code[pos], letter)
    return code


def erase(m: Machine, code: tuple[int, ...], position: int) -> None:
    """Lose the qubit at ``position`` and put a fixed ``+Z`` state in its place."""
    m.state.reset(code[position], "Z", 1, m.rng)
    m.log(op="erased", qubit=code[position])


def erasure_recover(m: Machine, code: tuple[int, ...], position: int) -> ProtocolResult:
    """Restore the block after the qubit at ``position`` was lost and re-prepared.

    The two generators acting on the lost qubit are measured; their signs
    select a single-qubit correction on it.  Each generator measurement has
    six loss opportunities and the correction one more.

    Returns:
        ``SUCCEEDED`` with the block, or ``LOGICAL_LOST``.
    """
    first, second = generators_on(position)
    signs = []
    for index in (first, second):
        if m.lost(f"recover{index}", GENERATOR_OPPORTUNITIES):
            return m.result(Status.LOGICAL_LOST, qubits=code, detail="loss during recovery")
        signs.append(_measure_generator(m, code, index))
    la, lb = GENERATORS[first][position], GENERATORS[second][position]
    # a letter anticommutes with every letter but itself
    if signs == [1, 1]:
        fix = "I"
    elif signs == [-1, 1]:
        fix = lb
    elif signs == [1, -1]:
        fix = la
    else:
        fix = ({"X", "Y", "Z"} - {la, lb}).pop()
    if m.lost("correct", RECOVERY_OPPORTUNITIES - 2 * GENERATOR_OPPORTUNITIES):
        return m.result(Status.LOGICAL_LOST, qubits=code, detail="loss during correction")
    m.pauli(code[position], fix)
    return m.result(Status.SUCCEEDED, qubits=code)


def _measure_z(m: Machine, code: tuple[int, ...], position: int, label: str) -> int | None:
    if m.lost(label):
        erase(m, code, position)
        return None
    return m.measure(code[position], "Z")


def erasure_measure_z(m: Machine, code: tuple[int, ...]) -> ProtocolResult:
    """Measure ``Z_L = Z2 Z3`` while qubits may be lost.

    ``Z2`` is measured first; if it is lost the block is recovered and
    ``Z2`` is tried once more.  If ``Z3`` is then lost its value follows from
    ``Z1 Z4`` through the generator ``Z1 Z3 Z4``.

    Returns:
        ``SUCCEEDED`` with the logical value in ``outcome``, or
        ``LOGICAL_LOST``.
    """
    z2 = _measure_z(m, code, 1, "z2")
    if z2 is None:
        rec = erasure_recover(m, code, 1)
        if not rec.ok:
            return rec
        z2 = _measure_z(m, code, 1, "z2_retry")
        if z2 is None:
            return m.result(Status.LOGICAL_LOST, qubits=code, detail="second loss of qubit 2")
    z3 = _measure_z(m, code, 2, "z3")
    if z3 is None:
        z1 = _measure_z(m, code, 0, "z1")
        z4 = _measure_z(m, code, 3, "z4")
        if z1 is None or z4 is None:
            return m.result(Status.LOGICAL_LOST, qubits=code, detail="parity qubits lost")
        z3 = z1 * z4
    return m.result(Status.SUCCEEDED, outcome=z2 * z3, qubits=code)
