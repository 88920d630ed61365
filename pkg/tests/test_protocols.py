import itertools

import numpy as np
import pytest

from loqc.noise import GateEvent, NoiseParams
from loqc.pauli import PauliProduct
from loqc.protocols import (
    CORRECTION_TABLE,
    Machine,
    Status,
    detect_phase_error,
    encode_pair,
    encoded_eigenstate,
    logical_operator,
    logical_pauli,
    logical_z90,
    logical_zz90,
    logical_zz90_direct,
    measure_logical,
    measure_xx_teleported,
    prepare_te,
    recover_teleported,
    recover_unitary,
)
from loqc.protocols.teleport import build_te, teleport as teleport_fn
from loqc.verify import ScriptedRng

from oracle import pauli_matrix, rotation_matrix, same_ray, state_vector

EIGEN = [(letter, sign) for letter in "XYZ" for sign in (1, -1)]
SOURCE, TARGET = GateEvent.SOURCE_MEASURED, GateEvent.TARGET_MEASURED


def single(m, q, letter, sign=1):
    p = PauliProduct.single(m.state.n, q, letter)
    return p if sign == 1 else -p


def tracked_pair(m, name="a"):
    return encode_pair(m, m.state.add_tracked_qubit(name)).qubits


def logical_z_known(m, name, outcome):
    ident = PauliProduct.identity(m.state.n)
    return m.state.tracked_equals(name, "Z", ident if outcome == 1 else -ident)


def carries(m, name, pair, flows):
    n = m.state.n
    return all(m.state.tracked_equals(name, ax, logical_operator(n, pair, l)) for ax, l in flows.items())


# -- teleportation ---------------------------------------------------------


def dense_correction(s1, s2):
    """Correction on the destination found with explicit state vectors."""
    # qubit order: input, a, b
    ref_states = {}
    out = {}
    for letter, sign in EIGEN:
        vin = state_vector([("+" if sign == 1 else "-") + letter])
        va = state_vector(["+Z"])
        vb = state_vector(["+Y"])
        v = np.kron(np.kron(vin, va), vb)
        v = rotation_matrix("IYZ", 90) @ v
        v = rotation_matrix("ZYI", 90) @ v
        proj = (np.eye(8) + s1 * pauli_matrix("IZI")) / 2
        proj = proj @ (np.eye(8) + s2 * pauli_matrix("YII")) / 2
        v = proj @ v
        v /= np.linalg.norm(v)
        ref_states[(letter, sign)] = vin
        out[(letter, sign)] = v
    for fix in "IXYZ":
        ok = True
        for key, v in out.items():
            w = np.kron(np.eye(4), pauli_matrix(fix)) @ v
            # destination factor must equal the input for every eigenstate
            mat = w.reshape(4, 2)
            u, svals, vh = np.linalg.svd(mat)
            dest = vh[0]
            if svals[1] > 1e-9 or not same_ray(dest, ref_states[key]):
                ok = False
                break
        if ok:
            return fix
    return None


@pytest.mark.parametrize("branch", list(CORRECTION_TABLE))
def test_correction_table_matches_dense_oracle(branch):
    assert CORRECTION_TABLE[branch] == dense_correction(*branch)


@pytest.mark.parametrize("branch", list(CORRECTION_TABLE))
@pytest.mark.parametrize("letter,sign", EIGEN)
def test_teleport_every_branch(branch, letter, sign):
    m = Machine(rng=ScriptedRng(branch))
    inp = m.prepare(letter, sign)
    pair, _ = build_te(m)
    t = teleport_fn(m, inp, pair)
    assert t.ok and t.signs == branch
    assert m.state.expectation(single(m, t.dest, letter, sign)) == 1


def test_teleport_source_failure_keeps_input():
    m = Machine()
    inp = m.state.add_tracked_qubit("a")
    pair = prepare_te(m)
    m.forced[m.couplings] = SOURCE
    t = teleport_fn(m, inp, pair)
    assert t.event is SOURCE
    assert m.state.tracked_equals("a", "Z", single(m, inp, "Z"))
    assert m.state.tracked_equals("a", "X", single(m, inp, "X"))


def test_teleport_target_failure_measures_input():
    m = Machine()
    inp = m.state.add_tracked_qubit("a")
    pair = prepare_te(m)
    m.forced[m.couplings] = TARGET
    t = teleport_fn(m, inp, pair)
    assert t.event is TARGET
    assert logical_z_known(m, "a", t.outcome)


# -- two-qubit code --------------------------------------------------------


def test_encode_flow():
    m = Machine()
    pair = tracked_pair(m)
    assert carries(m, "a", pair, {"X": "X", "Z": "Z"})
    assert m.state.expectation(single(m, pair[0], "X") * single(m, pair[1], "X")) == 1


def test_encode_matches_dense_circuit():
    # Y1(90) (Z1 Y2)_90 Y1(-90) on input (x) |0>; applied right to left
    for letter, sign in EIGEN:
        m = Machine()
        pair = encode_pair(m, m.prepare(letter, sign)).qubits
        v = np.kron(state_vector([("+" if sign == 1 else "-") + letter]), state_vector(["+Z"]))
        v = rotation_matrix("YI", -90) @ v
        v = rotation_matrix("ZY", 90) @ v
        v = rotation_matrix("YI", 90) @ v
        got = state_vector([str(g) for g in m.state.restrict(pair).stabilizers])
        assert same_ray(got, v)


def test_encode_retries_after_source_failure():
    m = Machine()
    src = m.state.add_tracked_qubit("a")
    m.forced[m.couplings] = SOURCE
    res = encode_pair(m, src)
    assert res.ok and m.attempts == 2
    assert carries(m, "a", res.qubits, {"X": "X", "Z": "Z"})


def test_encode_aborts_when_input_measured():
    m = Machine()
    m.forced[m.couplings] = TARGET
    res = encode_pair(m, m.prepare("Z"))
    assert res.status is Status.ABORTED


@pytest.mark.parametrize("letter,sign", EIGEN)
def test_logical_eigenstates(letter, sign):
    m = Machine(rng=np.random.default_rng(0))
    pair = encoded_eigenstate(m, letter, sign)
    assert m.state.expectation(logical_operator(m.state.n, pair, letter)) == sign
    assert measure_logical(m, pair, letter) == sign


def test_rotated_x_preparation():
    m = Machine()
    pair = encoded_eigenstate(m, "X", -1, rotated_prep=True)
    assert m.state.expectation(logical_operator(m.state.n, pair, "X")) == -1


@pytest.mark.parametrize("letter", "XYZ")
def test_logical_half_turns(letter):
    m = Machine()
    pair = tracked_pair(m)
    logical_pauli(m, pair, letter)
    n = m.state.n
    for axis in "XZ":
        op = logical_operator(n, pair, axis)
        flips = axis != letter
        assert m.state.tracked_equals("a", axis, -op if flips else op)


# -- syndrome checks and recovery -----------------------------------------


def test_teleported_xx_measurement():
    m = Machine(rng=np.random.default_rng(2))
    pair = tracked_pair(m)
    s, new = measure_xx_teleported(m, *pair)
    assert s == 1 and carries(m, "a", new, {"Z": "Z"})


@pytest.mark.parametrize("error,flag", [({}, False), ({0: "Z"}, True), ({1: "Z"}, True)])
def test_phase_error_detection(error, flag):
    m = Machine(rng=np.random.default_rng(4))
    pair = tracked_pair(m)
    for i, letter in error.items():
        m.pauli(pair[i], letter)
    got, _ = detect_phase_error(m, pair)
    assert got == flag


@pytest.mark.parametrize("route", [recover_teleported, recover_unitary])
@pytest.mark.parametrize("measured,outcome", list(itertools.product((0, 1), (1, -1))))
def test_recovery_restores_code(route, measured, outcome):
    m = Machine()
    pair = tracked_pair(m)
    m.state.measure_bits(0, 1 << pair[measured], 0, None, outcome)
    res = route(m, pair[measured], pair[1 - measured], outcome, measured_first=measured == 0)
    assert res.ok
    assert carries(m, "a", res.qubits, {"X": "X", "Z": "Z"})


def test_recovery_source_failure_retries():
    m = Machine()
    pair = tracked_pair(m)
    s = m.measure(pair[0], "Z")
    # resource build uses three couplings, then the teleport
    m.forced[m.couplings + 3] = SOURCE
    res = recover_teleported(m, pair[0], pair[1], s)
    assert res.ok and carries(m, "a", res.qubits, {"X": "X", "Z": "Z"})


def test_recovery_target_failure_measures_logical():
    m = Machine()
    pair = tracked_pair(m)
    s = m.measure(pair[0], "Z")
    m.forced[m.couplings + 3] = TARGET
    res = recover_teleported(m, pair[0], pair[1], s)
    assert res.status is Status.LOGICAL_Z_MEASURED
    assert logical_z_known(m, "a", res.outcome)


# -- encoded quarter turns -------------------------------------------------


def check_z90(m, res):
    if res.ok:
        return carries(m, "a", res.qubits, {"Z": "Z", "X": "Y"})
    return res.status is Status.LOGICAL_Z_MEASURED and logical_z_known(m, "a", res.outcome)


@pytest.mark.parametrize("seed", range(3))
def test_z90_noiseless(seed):
    m = Machine(rng=np.random.default_rng(seed))
    res = logical_z90(m, tracked_pair(m))
    assert res.ok and check_z90(m, res)


def test_z90_source_failure_then_success():
    m = Machine()
    pair = tracked_pair(m)
    m.forced[m.couplings] = SOURCE
    res = logical_z90(m, pair)
    assert res.ok and check_z90(m, res)


def test_z90_target_failure_recovered():
    m = Machine()
    pair = tracked_pair(m)
    m.forced[m.couplings] = TARGET
    res = logical_z90(m, pair)
    assert res.ok and check_z90(m, res)


def test_z90_failure_measures_logical():
    m = Machine()
    pair = tracked_pair(m)
    c = m.couplings
    m.forced[c] = SOURCE
    m.forced[c + 4] = TARGET
    res = logical_z90(m, pair)
    assert res.status is Status.LOGICAL_Z_MEASURED and check_z90(m, res)


@pytest.mark.parametrize("offsets", [(i,) for i in range(10)] + list(itertools.combinations(range(9), 2)))
@pytest.mark.parametrize("events", [(SOURCE, SOURCE), (TARGET, TARGET), (SOURCE, TARGET), (TARGET, SOURCE)])
def test_z90_forced_failures_close(offsets, events):
    m = Machine(rng=np.random.default_rng(sum(offsets)))
    pair = tracked_pair(m)
    for off, ev in zip(offsets, events):
        m.forced[m.couplings + off] = ev
    assert check_z90(m, logical_z90(m, pair))


def zz_check(m, res):
    if res.status is Status.ABORTED:
        return True
    if res.ok:
        n = m.state.n
        a, b = res.qubits[:2], res.qubits[2:]
        za, zb = logical_operator(n, a, "Z"), logical_operator(n, b, "Z")
        return (m.state.tracked_equals("a", "Z", za) and m.state.tracked_equals("b", "Z", zb)
                and m.state.tracked_equals("a", "X", logical_operator(n, a, "Y") * zb)
                and m.state.tracked_equals("b", "X", za * logical_operator(n, b, "Y")))
    return logical_z_known(m, "ab"[res.which], res.outcome)


@pytest.mark.parametrize("l", [3, 4])
def test_zz90_noiseless(l):
    m = Machine(rng=np.random.default_rng(l))
    first, second = tracked_pair(m, "a"), tracked_pair(m, "b")
    res = logical_zz90(m, first, second, l=l)
    assert res.ok and zz_check(m, res)


def test_zz90_direct_reference():
    m = Machine()
    first, second = tracked_pair(m, "a"), tracked_pair(m, "b")
    res = logical_zz90_direct(m, first, second)
    assert res.ok and zz_check(m, res)


def test_zz90_teleported_equals_direct_state():
    for (la, sa), (lb, sb) in [(("X", 1), ("Y", -1)), (("Z", -1), ("X", 1)), (("Y", 1), ("Y", 1))]:
        states = []
        for direct in (False, True):
            m = Machine(rng=np.random.default_rng(1))
            first = encode_pair(m, m.prepare(la, sa)).qubits
            second = encode_pair(m, m.prepare(lb, sb)).qubits
            res = (logical_zz90_direct(m, first, second) if direct
                   else logical_zz90(m, first, second, l=3))
            states.append(m.state.restrict(res.qubits).canonical_form())
        assert states[0] == states[1]


def test_zz90_matches_four_qubit_rotation_on_code_space():
    # the teleported gate acts as (Z Z Z Z)_90 on the data of two code blocks
    m = Machine(rng=np.random.default_rng(8))
    first = encode_pair(m, m.prepare("X")).qubits
    second = encode_pair(m, m.prepare("Y", -1)).qubits
    before = state_vector([str(g) for g in m.state.restrict(first + second).stabilizers])
    res = logical_zz90(m, first, second, l=3)
    after = state_vector([str(g) for g in m.state.restrict(res.qubits).stabilizers])
    assert same_ray(after, rotation_matrix("ZZZZ", 90) @ before)


def test_zz90_first_qubit_failure_reported():
    m = Machine()
    first, second = tracked_pair(m, "a"), tracked_pair(m, "b")
    from loqc.protocols import cached_resource

    resource = cached_resource(m, 5)
    c = m.couplings
    # first data qubit: target failure, then the recovery's teleport fails too
    m.forced[c] = TARGET
    m.forced[c + 4] = TARGET
    res = logical_zz90(m, first, second, resource=resource)
    assert res.status is Status.LOGICAL_Z_MEASURED and res.which == 0
    assert zz_check(m, res)


@pytest.mark.parametrize("seed", range(40))
def test_zz90_noisy_closure(seed):
    from loqc.protocols import cached_resource

    m = Machine(noise=NoiseParams(f=0.3), rng=np.random.default_rng(seed), prep_mode="sampled")
    with m.noiseless():
        first, second = tracked_pair(m, "a"), tracked_pair(m, "b")
        resource = cached_resource(m, 5)
    res = logical_zz90(m, first, second, resource=resource)
    assert zz_check(m, res)
