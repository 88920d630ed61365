"""Symplectic Pauli products and Pauli-product rotations.

A Pauli product on ``n`` qubits is stored as two integer bitmasks ``x`` and
``z`` (bit ``q`` refers to qubit ``q``) together with a phase exponent ``k``
so that the operator equals ``i**k`` times the tensor product of the
single-qubit factors ``I, X, Z, Y`` selected by the bit pairs ``(x_q, z_q)``.
The factor for ``(1, 1)`` is the Hermitian ``Y``, not ``XZ``.

Text rendering puts qubit 0 leftmost: ``+XZI`` is ``X`` on qubit 0 and ``Z``
on qubit 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LABEL_RE = re.compile(r"^([+-]?)(i?)([IXYZ]*)$")
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

VALID_ANGLES = (90, -90, 180)


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Phase exponent picked up when multiplying two unit-phase products.

    Returns ``e`` such that ``P(x1, z1) * P(x2, z2) = i**e * P(x1^x2, z1^z2)``.
    """
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    return (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - (x3 & z3).bit_count()
    ) & 3


def anticommute(x1: int, z1: int, x2: int, z2: int) -> bool:
    """True when the two products anticommute."""
    return bool(((x1 & z2) ^ (z1 & x2)).bit_count() & 1)


@dataclass(frozen=True)
class PauliProduct:
    """Pauli product ``i**phase * sigma(x, z)`` on ``n`` qubits.

    Attributes:
        n: Number of qubits.
        x: Bitmask of qubits carrying an X or Y factor.
        z: Bitmask of qubits carrying a Z or Y factor.
        phase: Exponent of ``i`` in ``0..3``.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bitmask does not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase & 3)

    # -- construction ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliProduct":
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> "PauliProduct":
        """Parse ``"+XZI"``, ``"-iYY"``, ``"XX"`` and similar strings."""
        m = _LABEL_RE.match(label.strip())
        if m is None:
            raise ValueError(f"cannot parse Pauli label {label!r}")
        sign, imag, text = m.groups()
        phase = (2 if sign == "-" else 0) + (1 if imag else 0)
        x = z = 0
        for q, letter in enumerate(text):
            bx, bz = _LETTER_BITS[letter]
            x |= bx << q
            z |= bz << q
        return cls(len(text), x, z, phase)

    @classmethod
    def from_sparse(
        cls, n: int, factors: Mapping[int, str], sign: int = 1
    ) -> "PauliProduct":
        """Build from ``{qubit: letter}``; ``sign`` is +1 or -1."""
        x = z = 0
        for q, letter in factors.items():
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for {n} qubits")
            bx, bz = _LETTER_BITS[letter.upper()]
            x |= bx << q
            z |= bz << q
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls(n, x, z, 0 if sign == 1 else 2)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliProduct":
        return cls.from_sparse(n, {qubit: letter})

    # -- algebra --------------------------------------------------------

    def _check(self, other: "PauliProduct"):
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")

    def __mul__(self, other: "PauliProduct") -> "PauliProduct":
        self._check(other)
        e = self.phase + other.phase + product_phase(self.x, self.z, other.x, other.z)
        return PauliProduct(self.n, self.x ^ other.x, self.z ^ other.z, e)

    def __neg__(self) -> "PauliProduct":
        return PauliProduct(self.n, self.x, self.z, self.phase + 2)

    def times_i(self, power: int = 1) -> "PauliProduct":
        return PauliProduct(self.n, self.x, self.z, self.phase + power)

    def commutes(self, other: "PauliProduct") -> bool:
        self._check(other)
        return not anticommute(self.x, self.z, other.x, other.z)

    def conjugate_by(self, rotation: "Rotation") -> "PauliProduct":
        """Return ``U P U^dagger`` for the rotation ``U``."""
        return rotation.conjugate(self)

    # -- inspection -----------------------------------------------------

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian products."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    @property
    def unsigned(self) -> "PauliProduct":
        return PauliProduct(self.n, self.x, self.z, 0)

    @property
    def support(self) -> list[int]:
        mask = self.x | self.z
        return [q for q in range(self.n) if mask >> q & 1]

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def letter(self, qubit: int) -> str:
        return _BITS_LETTER[(self.x >> qubit & 1, self.z >> qubit & 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def embed(self, n: int, qubits: Iterable[int]) -> "PauliProduct":
        """Place qubit ``j`` of this product onto ``qubits[j]`` of an n-qubit register."""
        qubits = list(qubits)
        if len(qubits) != self.n:
            raise ValueError("need one target qubit per factor")
        x = z = 0
        for j, q in enumerate(qubits):
            x |= (self.x >> j & 1) << q
            z |= (self.z >> j & 1) << q
        return PauliProduct(n, x, z, self.phase)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliProduct({str(self)!r})"


def multiply(p: PauliProduct, q: PauliProduct) -> PauliProduct:
    return p * q


def commutes(p: PauliProduct, q: PauliProduct) -> bool:
    return p.commutes(q)


def conjugate(p: PauliProduct, rotation: "Rotation") -> PauliProduct:
    return rotation.conjugate(p)


@dataclass(frozen=True)
class Rotation:
    """The unitary ``exp(-i * pi * angle / 360 * axis)``.

    ``axis`` must be a unit-phase Hermitian product (sign +1) and ``angle``
    one of 90, -90 or 180 degrees.
    """

    axis: PauliProduct
    angle: int

    def __post_init__(self):
        if self.angle not in VALID_ANGLES:
            raise ValueError(f"angle must be one of {VALID_ANGLES}, got {self.angle}")
        if self.axis.phase != 0:
            raise ValueError("rotation axis must carry sign +1; fold signs into the angle")

    @classmethod
    def from_label(cls, label: str, angle: int) -> "Rotation":
        axis = PauliProduct.from_label(label)
        if axis.phase == 2:
            # (-A)_theta is A_(-theta)
            axis = -axis
            angle = angle if angle == 180 else -angle
        return cls(axis, angle)

    @property
    def inverse(self) -> "Rotation":
        return Rotation(self.axis, 180 if self.angle == 180 else -self.angle)

    def conjugate(self, p: PauliProduct) -> PauliProduct:
        a = self.axis
        a._check(p)
        if not anticommute(a.x, a.z, p.x, p.z):
            return p
        if self.angle == 180:
            return -p
        # U P U^dag = exp(-i theta A) P = (cos 2theta - i sin 2theta A) P
        ap = a * p
        return ap.times_i(3 if self.angle == 90 else 1)

    def __str__(self) -> str:
        return f"({self.axis.letters()})_{self.angle}"
