"""Dense-matrix reference implementations used only by the tests.

Everything here works on explicit ``2**n`` dimensional matrices so it shares
no code with the bitmask machinery under test.  Qubit 0 is the leftmost
Kronecker factor, matching the text rendering of Pauli products.
"""

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
LETTERS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def pauli_matrix(label):
    """Matrix of a label such as ``"-iXZY"``."""
    phase = 1
    body = label
    if body.startswith("+"):
        body = body[1:]
    elif body.startswith("-"):
        phase = -1
        body = body[1:]
    if body.startswith("i"):
        phase *= 1j
        body = body[1:]
    mat = np.ones((1, 1), dtype=complex)
    for letter in body:
        mat = np.kron(mat, LETTERS[letter])
    return phase * mat


def rotation_matrix(axis_label, angle):
    a = pauli_matrix(axis_label)
    return expm(-1j * np.pi * angle / 360 * a)


def proportional(a, b, tol=1e-9):
    """Return the scalar c with a == c*b, or None."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return None
    c = a[idx] / b[idx]
    if np.allclose(a, c * b, atol=tol):
        return c
    return None


def stabilizer_projector(labels):
    n = len(labels[0].lstrip("+-").lstrip("i"))
    proj = np.eye(2**n, dtype=complex)
    for lab in labels:
        proj = proj @ (np.eye(2**n) + pauli_matrix(lab)) / 2
    return proj


def state_vector(labels):
    """Unit vector fixed by the given full set of stabilizer generators."""
    proj = stabilizer_projector(labels)
    vals, vecs = np.linalg.eigh(proj)
    if not np.isclose(vals[-1], 1) or (len(vals) > 1 and vals[-2] > 0.5):
        raise ValueError("generators do not fix a unique state")
    return vecs[:, -1]


def same_ray(u, v, tol=1e-9):
    return abs(abs(np.vdot(u, v)) - 1) < tol


def expectation(vec, label):
    return np.vdot(vec, pauli_matrix(label) @ vec).real


def measure_projector(label, outcome):
    n = len(label.lstrip("+-").lstrip("i"))
    return (np.eye(2**n) + outcome * pauli_matrix(label)) / 2
