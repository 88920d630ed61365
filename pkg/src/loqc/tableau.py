"""Stabilizer-state simulator driven by Pauli-product rotations.

The state of ``n`` qubits is held as ``n`` stabilizer generators together with
matching destabilizers (rows ``d_i`` with ``d_i`` anticommuting with ``g_j``
exactly when ``i == j``).  Rows are Python integer bitmasks, so qubits can be
added at any time and rotations touch every row with a handful of integer ops.

Operators to be tracked through a protocol (for example the logical ``X`` and
``Z`` of an encoded input) are realised with hidden reference qubits: a fresh
qubit is created maximally entangled with a reference, and the image of the
reference's ``X``/``Z`` inside the stabilizer group tells us where the
operator went.  If no group element pairs the reference with an operator on
the live qubits, the tracked operator was destroyed by a measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliProduct, Rotation, anticommute, product_phase

_LETTER_BITS = {"X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of one Pauli-product measurement.

    Attributes:
        operator: The measured product, rendered as text.
        outcome: +1 or -1, the eigenvalue of the measured operator.
        deterministic: True when the outcome was fixed by the state.
    """

    operator: str
    outcome: int
    deterministic: bool


class StabilizerState:
    """Pure stabilizer state on a growable register, initialised to ``|0...0>``."""

    __slots__ = ("n", "_sx", "_sz", "_sr", "_dx", "_dz", "_refs", "_tracked")

    def __init__(self, n_qubits: int = 0):
        self.n = 0
        self._sx: list[int] = []
        self._sz: list[int] = []
        self._sr: list[int] = []  # sign bit: 1 means the generator carries -1
        self._dx: list[int] = []
        self._dz: list[int] = []
        self._refs: set[int] = set()
        self._tracked: dict[str, int] = {}
        for _ in range(n_qubits):
            self.add_qubit()

    # -- bookkeeping ----------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return self.n

    def copy(self) -> "StabilizerState":
        other = StabilizerState.__new__(StabilizerState)
        other.n = self.n
        other._sx = self._sx.copy()
        other._sz = self._sz.copy()
        other._sr = self._sr.copy()
        other._dx = self._dx.copy()
        other._dz = self._dz.copy()
        other._refs = set(self._refs)
        other._tracked = dict(self._tracked)
        return other

    def append_state(self, other: "StabilizerState") -> int:
        """Append an independent register; returns the offset of its qubit 0."""
        shift = self.n
        self.n += other.n
        self._sx.extend(x << shift for x in other._sx)
        self._sz.extend(z << shift for z in other._sz)
        self._sr.extend(other._sr)
        self._dx.extend(x << shift for x in other._dx)
        self._dz.extend(z << shift for z in other._dz)
        self._refs.update(r + shift for r in other._refs)
        for name, ref in other._tracked.items():
            if name in self._tracked:
                raise ValueError(f"{name!r} is already tracked")
            self._tracked[name] = ref + shift
        return shift

    def add_qubit(self, axis: str = "Z", sign: int = 1) -> int:
        """Append a qubit prepared in the ``sign`` eigenstate of ``axis``."""
        q = self.n
        self.n += 1
        bit = 1 << q
        bx, bz = _LETTER_BITS[axis]
        self._sx.append(bit * bx)
        self._sz.append(bit * bz)
        self._sr.append(0 if sign == 1 else 1)
        # destabilizer: any letter anticommuting with the axis
        self._dx.append(0 if bx else bit)
        self._dz.append(bit if bx else 0)
        return q

    @property
    def stabilizers(self) -> list[PauliProduct]:
        return [
            PauliProduct(self.n, x, z, 2 * r)
            for x, z, r in zip(self._sx, self._sz, self._sr)
        ]

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.stabilizers)

    def _as_bits(self, p: PauliProduct) -> tuple[int, int, int]:
        if p.n > self.n:
            raise ValueError(f"operator on {p.n} qubits, state has {self.n}")
        if not p.is_hermitian:
            raise ValueError(f"{p} is not Hermitian")
        return p.x, p.z, p.phase >> 1

    # -- unitary evolution ----------------------------------------------

    def rotate(self, ax: int, az: int, angle: int) -> None:
        """Apply ``exp(-i pi angle/360 A)`` for the unit-sign axis with masks ``ax, az``."""
        sx, sz, sr = self._sx, self._sz, self._sr
        if angle == 180:
            for i in range(self.n):
                if ((sx[i] & az) ^ (sz[i] & ax)).bit_count() & 1:
                    sr[i] ^= 1
            return
        if angle == 90:
            turn = 3  # multiply by -i
        elif angle == -90:
            turn = 1
        else:
            raise ValueError(f"unsupported angle {angle}")
        base = (ax & az).bit_count()
        dx, dz = self._dx, self._dz
        for i in range(self.n):
            x = sx[i]
            z = sz[i]
            if ((x & az) ^ (z & ax)).bit_count() & 1:
                nx = x ^ ax
                nz = z ^ az
                e = base + (x & z).bit_count() + 2 * (az & x).bit_count() - (nx & nz).bit_count()
                sr[i] = ((e + 2 * sr[i] + turn) & 3) >> 1
                sx[i] = nx
                sz[i] = nz
            x = dx[i]
            z = dz[i]
            if ((x & az) ^ (z & ax)).bit_count() & 1:
                dx[i] = x ^ ax
                dz[i] = z ^ az

    def apply_rotation(self, rotation: Rotation) -> "StabilizerState":
        a = rotation.axis
        if a.n > self.n:
            raise ValueError("rotation acts outside the register")
        self.rotate(a.x, a.z, rotation.angle)
        return self

    def rotate_sparse(self, factors: dict[int, str], angle: int) -> None:
        """Rotate about the product given as ``{qubit: letter}``."""
        ax = az = 0
        for q, letter in factors.items():
            bx, bz = _LETTER_BITS[letter]
            ax |= bx << q
            az |= bz << q
        self.rotate(ax, az, angle)

    # -- measurement ----------------------------------------------------

    def _multiply_stab_into(self, target: int, source: int) -> None:
        sx, sz, sr = self._sx, self._sz, self._sr
        e = product_phase(sx[target], sz[target], sx[source], sz[source])
        sr[target] = ((2 * sr[target] + 2 * sr[source] + e) & 3) >> 1
        sx[target] ^= sx[source]
        sz[target] ^= sz[source]

    def measure_bits(
        self,
        px: int,
        pz: int,
        negate: int = 0,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> tuple[int, bool, int]:
        """Measure the product with masks ``px, pz`` (times -1 if ``negate``).

        Returns ``(outcome, deterministic, pivot_row)``; ``pivot_row`` is -1
        for deterministic outcomes.  A random outcome is drawn from ``rng``
        unless ``forced`` is given.
        """
        sx, sz, sr = self._sx, self._sz, self._sr
        n = self.n
        pivot = -1
        for i in range(n):
            if ((sx[i] & pz) ^ (sz[i] & px)).bit_count() & 1:
                pivot = i
                break
        if pivot < 0:
            outcome = self._deterministic_sign(px, pz)
            if negate:
                outcome = -outcome
            if forced is not None and forced != outcome:
                raise ValueError("forced outcome has zero probability")
            return outcome, True, -1
        for i in range(pivot + 1, n):
            if ((sx[i] & pz) ^ (sz[i] & px)).bit_count() & 1:
                self._multiply_stab_into(i, pivot)
        dx, dz = self._dx, self._dz
        gx, gz = sx[pivot], sz[pivot]
        for i in range(n):
            if i != pivot and ((dx[i] & pz) ^ (dz[i] & px)).bit_count() & 1:
                dx[i] ^= gx
                dz[i] ^= gz
        dx[pivot] = gx
        dz[pivot] = gz
        if forced is not None:
            outcome = forced
        elif rng is None:
            raise ValueError("random measurement needs an rng or a forced outcome")
        else:
            outcome = 1 if rng.random() < 0.5 else -1
        sx[pivot] = px
        sz[pivot] = pz
        sr[pivot] = negate ^ (0 if outcome == 1 else 1)
        return outcome, False, pivot

    def _deterministic_sign(self, px: int, pz: int) -> int:
        # P = +-prod g_i over the i whose destabilizer anticommutes with P
        sx, sz, sr, dx, dz = self._sx, self._sz, self._sr, self._dx, self._dz
        x = z = 0
        k = 0
        for i in range(self.n):
            if ((dx[i] & pz) ^ (dz[i] & px)).bit_count() & 1:
                k += 2 * sr[i] + product_phase(x, z, sx[i], sz[i])
                x ^= sx[i]
                z ^= sz[i]
        if x != px or z != pz:
            raise AssertionError("stabilizer group lost full rank")
        return 1 if k & 3 == 0 else -1

    def measure(
        self,
        operator: PauliProduct,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> MeasurementRecord:
        px, pz, neg = self._as_bits(operator)
        outcome, det, _ = self.measure_bits(px, pz, neg, rng, forced)
        return MeasurementRecord(str(operator), outcome, det)

    def measure_single(
        self,
        qubit: int,
        axis: str,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> int:
        bx, bz = _LETTER_BITS[axis]
        return self.measure_bits(bx << qubit, bz << qubit, 0, rng, forced)[0]

    def expectation(self, operator: PauliProduct) -> int:
        """+1 or -1 if the operator is a signed group element, else 0."""
        px, pz, neg = self._as_bits(operator)
        return self.expectation_bits(px, pz, neg)

    def expectation_bits(self, px: int, pz: int, negate: int = 0) -> int:
        sx, sz = self._sx, self._sz
        for i in range(self.n):
            if ((sx[i] & pz) ^ (sz[i] & px)).bit_count() & 1:
                return 0
        s = self._deterministic_sign(px, pz)
        return -s if negate else s

    # -- qubit reuse ----------------------------------------------------

    def reset(
        self,
        qubit: int,
        axis: str = "Z",
        sign: int = 1,
        rng: np.random.Generator | None = None,
    ) -> None:
        """Discard ``qubit`` and re-prepare it in the ``sign`` eigenstate of ``axis``.

        Discarding is done by a Z measurement whose outcome is drawn from
        ``rng``, which leaves the rest of the register distributed exactly as
        after a partial trace.
        """
        bit = 1 << qubit
        _, det, pivot = self.measure_bits(0, bit, 0, rng, None if rng is not None else 1)
        if det:
            # qubit already in a Z eigenstate: an X then Z measurement on it
            # cannot disturb the others
            self.measure_bits(bit, 0, 0, None, 1)
            _, _, pivot = self.measure_bits(0, bit, 0, None, 1)
        sx, sz, sr, dx, dz = self._sx, self._sz, self._sr, self._dx, self._dz
        for i in range(self.n):
            if i == pivot:
                continue
            if sz[i] & bit:
                self._multiply_stab_into(i, pivot)
            if dz[i] & bit:
                dz[i] ^= bit
        bx, bz = _LETTER_BITS[axis]
        sx[pivot] = bit * bx
        sz[pivot] = bit * bz
        sr[pivot] = 0 if sign == 1 else 1
        dx[pivot] = 0 if bx else bit
        dz[pivot] = bit if bx else 0

    # -- tracked operators ----------------------------------------------

    def add_tracked_qubit(self, name: str) -> int:
        """Create a qubit whose logical X and Z are tracked under ``name``.

        The qubit starts maximally entangled with a hidden reference, so it
        stands for an arbitrary input state.  Returns the new qubit index.
        """
        if name in self._tracked:
            raise ValueError(f"{name!r} is already tracked")
        ref = self.add_qubit()
        q = self.add_qubit()
        pair = (1 << ref) | (1 << q)
        # Bell pair fixed by XX and ZZ; both rows are fresh so set them directly
        self._sx[ref], self._sz[ref] = pair, 0
        self._sx[q], self._sz[q] = 0, pair
        self._dx[ref], self._dz[ref] = 0, 1 << ref
        self._dx[q], self._dz[q] = 1 << q, 0
        self._refs.add(ref)
        self._tracked[name] = ref
        return q

    @property
    def reference_qubits(self) -> frozenset[int]:
        return frozenset(self._refs)

    @property
    def tracked_names(self) -> list[str]:
        return list(self._tracked)

    def tracked_equals(self, name: str, axis: str, operator: PauliProduct) -> bool:
        """True when tracked ``axis`` of ``name`` is carried exactly by ``operator``."""
        ref = self._tracked[name]
        bx, bz = _LETTER_BITS[axis]
        px, pz, neg = self._as_bits(operator)
        if (px | pz) >> ref & 1:
            raise ValueError("operator touches the reference qubit")
        return self.expectation_bits(px | (bx << ref), pz | (bz << ref), neg) == 1

    def tracked_operator(
        self, name: str, axis: str, support: Iterable[int] | None = None
    ) -> PauliProduct | None:
        """Representative of the tracked operator, or None if it was destroyed.

        The representative is restricted to ``support`` when given, otherwise
        to all non-reference qubits.
        """
        ref = self._tracked[name]
        bx, bz = _LETTER_BITS[axis]
        if support is None:
            allowed = [q for q in range(self.n) if q not in self._refs]
        else:
            allowed = list(support)
        allowed_mask = sum(1 << q for q in set(allowed))
        if allowed_mask >> ref & 1:
            raise ValueError("support may not include the reference qubit")
        outside = ((1 << self.n) - 1) & ~allowed_mask
        elem = self._find_element(outside, bx << ref, bz << ref)
        if elem is None:
            return None
        x, z, phase = elem
        x &= allowed_mask
        z &= allowed_mask
        # element = sigma_ref (x) T with sign; sigma_ref commutes with T
        return PauliProduct(self.n, x, z, phase)

    # -- linear algebra over the generators -----------------------------

    def _find_element(self, mask: int, tx: int, tz: int) -> tuple[int, int, int] | None:
        """Group element whose restriction to ``mask`` is exactly ``(tx, tz)``.

        Returns ``(x, z, phase)`` of the element or None.
        """
        rows = []
        for i in range(self.n):
            key = (self._sx[i] & mask) | ((self._sz[i] & mask) << self.n)
            rows.append((key, 1 << i))
        basis: dict[int, tuple[int, int]] = {}
        for key, combo in rows:
            while key:
                low = key & -key
                if low in basis:
                    bk, bc = basis[low]
                    key ^= bk
                    combo ^= bc
                else:
                    basis[low] = (key, combo)
                    break
        key = tx | (tz << self.n)
        combo = 0
        while key:
            low = key & -key
            if low not in basis:
                return None
            bk, bc = basis[low]
            key ^= bk
            combo ^= bc
        x = z = 0
        k = 0
        for i in range(self.n):
            if combo >> i & 1:
                k += 2 * self._sr[i] + product_phase(x, z, self._sx[i], self._sz[i])
                x ^= self._sx[i]
                z ^= self._sz[i]
        return x, z, k & 3

    def subgroup_on(self, qubits: Sequence[int]) -> list[PauliProduct]:
        """Independent generators of the stabilizer elements supported on ``qubits``."""
        inside = sum(1 << q for q in set(qubits))
        outside = ((1 << self.n) - 1) & ~inside
        rows = [PauliProduct(self.n, x, z, 2 * r) for x, z, r in zip(self._sx, self._sz, self._sr)]
        pivots: dict[int, PauliProduct] = {}
        kernel = []
        for row in rows:
            while True:
                key = (row.x & outside) | ((row.z & outside) << self.n)
                if not key:
                    kernel.append(row)
                    break
                low = key & -key
                if low in pivots:
                    row = row * pivots[low]
                else:
                    pivots[low] = row
                    break
        return kernel

    def restrict(self, qubits: Sequence[int]) -> "StabilizerState":
        """Extract the state of ``qubits`` (in the given order).

        Raises ValueError unless those qubits are unentangled with the rest.
        """
        qubits = list(qubits)
        kernel = self.subgroup_on(qubits)
        if len(kernel) != len(qubits):
            raise ValueError("qubits are entangled with the rest of the register")
        local = []
        for g in kernel:
            x = z = 0
            for j, q in enumerate(qubits):
                x |= (g.x >> q & 1) << j
                z |= (g.z >> q & 1) << j
            local.append(PauliProduct(len(qubits), x, z, g.phase))
        return StabilizerState.from_stabilizers(local)

    @classmethod
    def from_stabilizers(cls, generators: Sequence[PauliProduct]) -> "StabilizerState":
        """Build the state fixed by ``n`` independent commuting generators on ``n`` qubits."""
        if not generators:
            return cls(0)
        n = generators[0].n
        if len(generators) != n:
            raise ValueError(f"need {n} generators, got {len(generators)}")
        for i, g in enumerate(generators):
            if g.n != n or not g.is_hermitian:
                raise ValueError(f"bad generator {g}")
            for h in generators[:i]:
                if not g.commutes(h):
                    raise ValueError(f"{g} and {h} anticommute")
        destab = _dual_basis([(g.x, g.z) for g in generators], n)
        state = cls.__new__(cls)
        state.n = n
        state._sx = [g.x for g in generators]
        state._sz = [g.z for g in generators]
        state._sr = [g.phase >> 1 for g in generators]
        state._dx = [d[0] for d in destab]
        state._dz = [d[1] for d in destab]
        state._refs = set()
        state._tracked = {}
        return state

    def canonical_form(self) -> tuple[tuple[int, int, int], ...]:
        """Reduced row-echelon generators with signs, as ``(x, z, sign_bit)``."""
        rows = self.stabilizers
        n = self.n
        out = []
        used = [False] * n
        for q in range(n):
            for part in ("x", "z"):
                piv = None
                for i, row in enumerate(rows):
                    if not used[i] and getattr(row, part) >> q & 1:
                        piv = i
                        break
                if piv is None:
                    continue
                used[piv] = True
                for i in range(n):
                    if i != piv and getattr(rows[i], part) >> q & 1:
                        rows[i] = rows[i] * rows[piv]
                out.append(piv)
        return tuple((rows[i].x, rows[i].z, rows[i].phase >> 1) for i in out)


def _dual_basis(gens: list[tuple[int, int]], n: int) -> list[tuple[int, int]]:
    """Rows ``d_i`` with symplectic product ``<d_i, g_j> = delta_ij``."""
    # <d, g> = popcount(d.x & g.z) + popcount(d.z & g.x); unknown d as 2n bits
    # (x in low n bits, z in high n bits); equation row j: (g_j.z, g_j.x)
    eqs = [gz | (gx << n) for gx, gz in gens]
    m = len(eqs)
    # augmented with identity to solve all right-hand sides at once
    aug = [(eqs[j], 1 << j) for j in range(m)]
    pivot_cols = []
    row = 0
    for col in range(2 * n):
        bit = 1 << col
        sel = next((r for r in range(row, m) if aug[r][0] & bit), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        for r in range(m):
            if r != row and aug[r][0] & bit:
                aug[r] = (aug[r][0] ^ aug[row][0], aug[r][1] ^ aug[row][1])
        pivot_cols.append(col)
        row += 1
    if row != m:
        raise ValueError("generators are not independent")
    out = []
    for i in range(m):
        sol = 0
        for r, col in enumerate(pivot_cols):
            if aug[r][1] >> i & 1:
                sol |= 1 << col
        out.append((sol & ((1 << n) - 1), sol >> n))
    return out


# -- functional interface ------------------------------------------------


def prepare_eigenstate(
    state: StabilizerState, axis: PauliProduct | str, qubit: int, sign: int = 1
) -> StabilizerState:
    """Put ``qubit`` into the ``sign`` eigenstate of a single-qubit axis."""
    if isinstance(axis, PauliProduct):
        if axis.weight != 1:
            raise ValueError("preparation axis must act on one qubit")
        letter = axis.letter(axis.support[0])
        sign = sign * axis.sign
    else:
        letter = axis
    if qubit == state.n:
        state.add_qubit(letter, sign)
    else:
        state.reset(qubit, letter, sign, np.random.default_rng(0))
    return state


def apply_rotation(state: StabilizerState, rotation: Rotation) -> StabilizerState:
    return state.apply_rotation(rotation)


def measure(
    state: StabilizerState,
    operator: PauliProduct,
    rng: np.random.Generator | None = None,
    forced: int | None = None,
) -> tuple[StabilizerState, MeasurementRecord]:
    record = state.measure(operator, rng, forced)
    return state, record


def states_equal(a: StabilizerState, b: StabilizerState) -> bool:
    return a.n == b.n and a.canonical_form() == b.canonical_form()
