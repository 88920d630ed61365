"""Teleportation, the two-qubit code and recovery after a failed coupling."""

import numpy as np

from loqc.noise import GateEvent
from loqc.protocols import (
    CORRECTION_TABLE,
    Machine,
    encode_pair,
    logical_operator,
    logical_z90,
    prepare_te,
    teleport,
)

for (s1, s2), fix in CORRECTION_TABLE.items():
    print(f"outcomes ({s1:+d}, {s2:+d}) -> half turn {fix}")

m = Machine(rng=np.random.default_rng(3), trace=True)
inp = m.prepare("Y", -1)
pair = prepare_te(m)
t = teleport(m, inp, pair)
print("teleported with signs", t.signs, "to qubit", t.dest)
print("resources used:", m.resources)

# encode an unknown qubit, then run a Z quarter turn whose first coupling fails
m = Machine(rng=np.random.default_rng(0))
src = m.state.add_tracked_qubit("a")
code = encode_pair(m, src).qubits
n = m.state.n
print("X_L carried by", logical_operator(n, code, "X"), m.state.tracked_equals("a", "X", logical_operator(n, code, "X")))

m.forced[m.couplings] = GateEvent.TARGET_MEASURED
res = logical_z90(m, code)
n = m.state.n
print("status:", res.status.value, "new pair:", res.qubits)
# a Z quarter turn sends X_L to Y_L
print("X -> Y_L:", m.state.tracked_equals("a", "X", logical_operator(n, res.qubits, "Y")))
print("attempts spent on preparations:", res.attempts)
