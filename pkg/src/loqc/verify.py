"""Noiseless identity checks for every protocol, run by ``loqc verify``.

Each check builds its own register and returns ``True`` when the protocol
did exactly what it should.  Measurement branches are selected with a
scripted generator instead of searching over seeds.
"""

from __future__ import annotations

import importlib
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .noise import GateEvent
from .pauli import PauliProduct
from .protocols.erasure import (
    LOGICALS as ERASURE_LOGICALS,
    code_operator,
    erase,
    erasure_encode,
    erasure_measure_z,
    erasure_recover,
)
from .protocols.logical import logical_z90, logical_zz90, logical_zz90_direct
from .protocols.machine import Machine
from .protocols.recovery import recover_teleported, recover_unitary
from .protocols.two_qubit_code import (
    encode_pair,
    logical_operator,
    logical_pauli,
    measure_logical,
    stabilizer,
)
from .protocols.zrot import prepare_sl, prepare_zrot_resource
from .resources import ResourceVector, rv_re, rv_sl, rv_te, rv_z2l

# the module, not the function re-exported under the same name
tp = importlib.import_module(".protocols.teleport", __package__)

EIGENSTATES = [(letter, sign) for letter in "XYZ" for sign in (1, -1)]
EXPECTED_TABLE = {(1, 1): "Y", (1, -1): "X", (-1, 1): "Z", (-1, -1): "I"}


class ScriptedRng:
    """Generator stand-in whose first draws are fixed; ``u < 0.5`` reads as ``+1``."""

    def __init__(self, outcomes, seed: int = 0):
        self._queue = [0.25 if s == 1 else 0.75 for s in outcomes]
        self._fallback = np.random.default_rng(seed)

    def random(self):
        if self._queue:
            return self._queue.pop(0)
        return self._fallback.random()

    def __getattr__(self, name):
        return getattr(self._fallback, name)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _single(m: Machine, q: int, letter: str) -> PauliProduct:
    return PauliProduct.single(m.state.n, q, letter)


def _tracked(m: Machine, name: str, pair, flows: dict[str, str]) -> bool:
    n = m.state.n
    return all(
        m.state.tracked_equals(name, axis, logical_operator(n, pair, letter))
        for axis, letter in flows.items()
    )


def _encoded_tracked(m: Machine, name: str) -> tuple[int, int]:
    return encode_pair(m, m.state.add_tracked_qubit(name)).qubits


def _encoded_eigen(m: Machine, letter: str, sign: int) -> tuple[int, int]:
    return encode_pair(m, m.prepare(letter, sign)).qubits


# -- individual checks ---------------------------------------------------------


def check_table_entry(branch) -> Callable[[], bool]:
    return lambda: tp.CORRECTION_TABLE[branch] == EXPECTED_TABLE[branch]


def check_teleport_branch(branch, letter: str, sign: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=ScriptedRng(branch))
        inp = m.prepare(letter, sign)
        pair, _ = tp.build_te(m)
        t = tp.teleport(m, inp, pair)
        if t.signs != tuple(branch):
            raise AssertionError(f"reached branch {t.signs}")
        return m.state.expectation(_single(m, t.dest, letter)) == sign

    return run


def check_teleport_tracked(branch) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=ScriptedRng(branch))
        inp = m.state.add_tracked_qubit("a")
        pair, _ = tp.build_te(m)
        t = tp.teleport(m, inp, pair)
        return all(
            m.state.tracked_equals("a", axis, _single(m, t.dest, axis)) for axis in "XZ"
        )

    return run


def check_teleport_flow(before_correction: str) -> Callable[[], bool]:
    # undo the correction and compare with the sign predicted by the outcomes
    def run() -> bool:
        for branch in EXPECTED_TABLE:
            m = Machine(rng=ScriptedRng(branch))
            inp = m.state.add_tracked_qubit("a")
            pair, _ = tp.build_te(m)
            t = tp.teleport(m, inp, pair)
            m.pauli(t.dest, tp.correction(*t.signs))
            s1, s2 = t.signs
            sign = -s1 if before_correction == "Z" else -s2
            op = _single(m, t.dest, before_correction)
            if not m.state.tracked_equals("a", before_correction, op if sign == 1 else -op):
                return False
        return True

    return run


def check_teleport_source_failure() -> bool:
    m = Machine()
    inp = m.state.add_tracked_qubit("a")
    pair, _ = tp.build_te(m)
    m.forced[m.couplings] = GateEvent.SOURCE_MEASURED
    t = tp.teleport(m, inp, pair)
    return not t.ok and all(
        m.state.tracked_equals("a", axis, _single(m, inp, axis)) for axis in "XZ"
    )


def check_encode_flow() -> bool:
    m = Machine()
    q1, q2 = _encoded_tracked(m, "a")
    n = m.state.n
    minus_yy = -PauliProduct.from_sparse(n, {q1: "Y", q2: "Y"})
    return (
        m.state.expectation(stabilizer(n, (q1, q2))) == 1
        and m.state.tracked_equals("a", "X", _single(m, q1, "X"))
        and m.state.tracked_equals("a", "Z", minus_yy)
        and m.state.tracked_equals("a", "Z", logical_operator(n, (q1, q2), "Z"))
    )


def check_encode_eigenstate(letter: str, sign: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine()
        pair = _encoded_eigen(m, letter, sign)
        n = m.state.n
        return (
            m.state.expectation(stabilizer(n, pair)) == 1
            and m.state.expectation(logical_operator(n, pair, letter)) == sign
        )

    return run


def check_logical_pauli(letter: str) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine()
        pair = _encoded_tracked(m, "a")
        logical_pauli(m, pair, letter)
        n = m.state.n
        ok = True
        for axis in "XZ":
            op = logical_operator(n, pair, axis)
            flipped = axis != letter
            ok &= m.state.tracked_equals("a", axis, -op if flipped else op)
        return ok

    return run


def check_measure_logical(letter: str, sign: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine()
        pair = _encoded_eigen(m, letter, sign)
        return measure_logical(m, pair, letter) == sign

    return run


def check_xx_teleported(in_code: bool, seed: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(seed))
        pair = _encoded_tracked(m, "a")
        if not in_code:
            m.pauli(pair[0], "Z")
        s, new = tp.measure_xx_teleported(m, *pair)
        flows_ok = m.state.tracked_equals("a", "Z", logical_operator(m.state.n, new, "Z"))
        return flows_ok and s == (1 if in_code else -1)

    return run


def check_detect(error: dict[int, str] | None, expect_flag: bool) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(7))
        pair = _encoded_tracked(m, "a")
        for i, letter in (error or {}).items():
            m.pauli(pair[i], letter)
        flag, new = tp.detect_phase_error(m, pair)
        in_code = m.state.expectation(stabilizer(m.state.n, new)) == 1
        return flag == expect_flag and in_code

    return run


def check_recovery(route: str, measured: int, outcome: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(3))
        pair = _encoded_tracked(m, "a")
        q = pair[measured]
        m.state.measure_bits(0, 1 << q, 0, None, outcome)
        other = pair[1 - measured]
        fn = recover_teleported if route == "teleported" else recover_unitary
        res = fn(m, q, other, outcome, measured_first=measured == 0)
        n = m.state.n
        return (
            res.ok
            and m.state.expectation(stabilizer(n, res.qubits)) == 1
            and _tracked(m, "a", res.qubits, {"X": "X", "Z": "Z"})
        )

    return run


def check_z90(seed: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(seed))
        res = logical_z90(m, _encoded_tracked(m, "a"))
        return res.ok and _tracked(m, "a", res.qubits, {"Z": "Z", "X": "Y"})

    return run


def _zz_ok(m: Machine, qubits) -> bool:
    n = m.state.n
    a, b = qubits[:2], qubits[2:]
    za, zb = logical_operator(n, a, "Z"), logical_operator(n, b, "Z")
    return (
        m.state.tracked_equals("a", "Z", za)
        and m.state.tracked_equals("b", "Z", zb)
        and m.state.tracked_equals("a", "X", logical_operator(n, a, "Y") * zb)
        and m.state.tracked_equals("b", "X", za * logical_operator(n, b, "Y"))
    )


def check_zz90(l: int | None, seed: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(seed))
        first = _encoded_tracked(m, "a")
        second = _encoded_tracked(m, "b")
        if l is None:
            res = logical_zz90_direct(m, first, second)
        else:
            res = logical_zz90(m, first, second, l=l)
        return res.ok and _zz_ok(m, res.qubits)

    return run


def check_zz90_eigenstates(l: int) -> Callable[[], bool]:
    # teleported and direct versions leave the same logical eigenstate
    def run() -> bool:
        for (la, sa), (lb, sb) in itertools.product(EIGENSTATES, repeat=2):
            states = []
            for direct in (False, True):
                m = Machine(rng=np.random.default_rng(11))
                first = _encoded_eigen(m, la, sa)
                second = _encoded_eigen(m, lb, sb)
                if direct:
                    res = logical_zz90_direct(m, first, second)
                else:
                    res = logical_zz90(m, first, second, l=l)
                n = m.state.n
                a, b = res.qubits[:2], res.qubits[2:]
                states.append(
                    tuple(
                        m.state.expectation(logical_operator(n, a, x) * logical_operator(n, b, y))
                        for x in "XYZ" for y in "XYZ"
                    )
                )
            if states[0] != states[1]:
                return False
        return True

    return run


def _counted(build) -> ResourceVector:
    m = Machine()
    build(m)
    return m.resources


def check_counts(name: str, build, expected: ResourceVector) -> Callable[[], bool]:
    return lambda: tuple(_counted(build)) == tuple(expected)


def check_erasure(position: int, letter: str, sign: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine(rng=np.random.default_rng(position))
        code = erasure_encode(m, m.prepare(letter, sign))
        erase(m, code, position)
        res = erasure_recover(m, code, position)
        op = code_operator(m.state.n, code, ERASURE_LOGICALS[letter])
        return res.ok and m.state.expectation(op) == sign

    return run


def check_erasure_parity(lose_z3: bool, sign: int) -> Callable[[], bool]:
    def run() -> bool:
        m = Machine()
        code = erasure_encode(m, m.prepare("Z", sign))
        if lose_z3:
            m.forced_losses.add("z3")
        res = erasure_measure_z(m, code)
        return res.ok and res.outcome == sign

    return run


# -- suite -----------------------------------------------------------------------


def all_checks() -> Iterator[tuple[str, Callable[[], bool]]]:
    for branch in EXPECTED_TABLE:
        yield f"correction table {branch}", check_table_entry(branch)
    for branch in EXPECTED_TABLE:
        for letter, sign in EIGENSTATES:
            yield (f"teleport branch {branch} input {'+' if sign == 1 else '-'}{letter}",
                   check_teleport_branch(branch, letter, sign))
        yield f"teleport branch {branch} tracked", check_teleport_tracked(branch)
    yield "teleport Z flow -s1", check_teleport_flow("Z")
    yield "teleport X flow -s2", check_teleport_flow("X")
    yield "teleport source failure leaves input", check_teleport_source_failure
    yield "encode operator flow", check_encode_flow
    for letter, sign in EIGENSTATES:
        tag = f"{'+' if sign == 1 else '-'}{letter}"
        yield f"encode eigenstate {tag}", check_encode_eigenstate(letter, sign)
        yield f"logical measurement {tag}", check_measure_logical(letter, sign)
    for letter in "XYZ":
        yield f"logical half turn {letter}", check_logical_pauli(letter)
    for seed in range(3):
        yield f"teleported XX code space seed {seed}", check_xx_teleported(True, seed)
        yield f"teleported XX error space seed {seed}", check_xx_teleported(False, seed)
    yield "phase check without error", check_detect(None, False)
    yield "phase check flags Z on qubit 1", check_detect({0: "Z"}, True)
    yield "phase check flags Z on qubit 2", check_detect({1: "Z"}, True)
    yield "phase check misses logical Z", check_detect({0: "Z", 1: "Z"}, False)
    for route in ("teleported", "unitary"):
        for measured in (0, 1):
            for outcome in (1, -1):
                yield (f"recovery {route} qubit {measured + 1} outcome {outcome:+d}",
                       check_recovery(route, measured, outcome))
    for seed in range(2):
        yield f"logical Z quarter turn seed {seed}", check_z90(seed)
    # a depth-l tree holds 2^(l-1) pairs; four data qubits need l >= 3
    for l in (3, 4, 5):
        yield f"logical ZZ quarter turn tree depth {l}", check_zz90(l, l)
    yield "logical ZZ quarter turn direct ladder", check_zz90(None, 0)
    yield "ZZ teleported equals direct on eigenstates", check_zz90_eigenstates(3)
    yield "counts entangled pair", check_counts("te", lambda m: tp.build_te(m), rv_te())
    yield "counts recovery resource", check_counts("re", lambda m: tp.build_re(1)(m), rv_re())
    for l in range(1, 5):
        yield f"counts parity tree depth {l}", check_counts(f"S{l}", lambda m, l=l: prepare_sl(m, l), rv_sl(l))
        yield (f"counts rotated pairs depth {l}",
               check_counts(f"Z{l}", lambda m, l=l: prepare_zrot_resource(m, l), rv_z2l(l)))
    for position in range(4):
        for letter, sign in EIGENSTATES:
            yield (f"erasure position {position + 1} {'+' if sign == 1 else '-'}{letter}",
                   check_erasure(position, letter, sign))
    for sign in (1, -1):
        yield f"erasure Z_L direct sign {sign:+d}", check_erasure_parity(False, sign)
        yield f"erasure Z_L from parity sign {sign:+d}", check_erasure_parity(True, sign)


def run_suite() -> list[CheckResult]:
    """Run every check; an exception counts as a failure and is reported."""
    results = []
    for name, fn in all_checks():
        try:
            passed = bool(fn())
            detail = ""
        except Exception as exc:  # report, do not abort the suite
            passed = False
            detail = f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, passed, detail))
    return results
