"""Pauli products and the stabilizer simulator, step by step."""

import numpy as np

from loqc import PauliProduct, Rotation, StabilizerState

P = PauliProduct.from_label

# products keep track of the phase
print(P("X") * P("Y"))        # +iZ
print(P("XX") * P("ZZ"))      # -YY
print(P("XZ").commutes(P("ZX")))

# a quarter turn about Y takes Z to X
r = Rotation.from_label("Y", 90)
print(r.conjugate(P("Z")))
print(r.inverse.conjugate(P("X")))

# two qubits, entangled by an XX quarter turn
state = StabilizerState(2)
state.apply_rotation(Rotation.from_label("XX", 90))
print(state)
print("<ZZ> =", state.expectation(P("ZZ")), " <ZI> =", state.expectation(P("ZI")))

rng = np.random.default_rng(1)
rec = state.measure(P("ZI"), rng)
print("measured ZI:", rec.outcome, "deterministic:", rec.deterministic)
print(state)

# tracked qubits: where does the input's X end up?
s = StabilizerState()
q = s.add_tracked_qubit("in")
s.rotate_sparse({q: "Z"}, 90)
print("X of the input is now", s.tracked_operator("in", "X"))
