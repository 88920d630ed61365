"""Teleportation pairs whose targets carry a joint ``Z...Z`` quarter turn.

Two constructions are provided.  The parity tree builds ``2^(l-1)`` pairs
and a parity qubit holding ``Z`` of all their targets, merging smaller trees
two at a time; a ``Z`` quarter turn on the parity qubit followed by an ``X``
measurement kicks the rotation back onto the targets.  The direct ladder
applies the rotation with ``(Y Z)`` conjugations around a single ``ZZ``
coupling.

Known Pauli corrections on targets are kept in ``pending`` and merged into
the teleportation's final half turn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..pauli import PauliProduct, Rotation
from ..resources import ResourceVector, success_kickback, success_merge, success_te
from .machine import Machine
from .teleport import build_te, letter_product


@dataclass
class ZRotResource:
    """Teleportation pairs ``(a, b)`` with ``(Z_b1 ... Z_bn)_(sign*90)`` applied.

    Attributes:
        pairs: The teleportation pairs, in order of use.
        pending: Pauli owed to each target.
        sign: Direction of the joint rotation.
        parity: Parity qubit while the tree is still open.
    """

    pairs: list[tuple[int, int]]
    pending: dict[int, str] = field(default_factory=dict)
    sign: int = 1
    parity: int | None = None

    @property
    def targets(self) -> list[int]:
        return [b for _, b in self.pairs]

    @property
    def qubits(self) -> list[int]:
        out = [q for pair in self.pairs for q in pair]
        if self.parity is not None:
            out.append(self.parity)
        return out

    def owe(self, qubit: int, letter: str) -> None:
        self.pending[qubit] = letter_product(self.pending.get(qubit, "I"), letter)

    def shifted(self, offset: int) -> "ZRotResource":
        return ZRotResource(
            pairs=[(a + offset, b + offset) for a, b in self.pairs],
            pending={q + offset: l for q, l in self.pending.items()},
            sign=self.sign,
            parity=None if self.parity is None else self.parity + offset,
        )


def c_sigma_x(m: Machine, ctrl: int, tgt: int) -> None:
    """Controlled-not from quarter turns; it also leaves ``Z`` on ``ctrl``.

    Gate order: ``Y_t(90)``, ``(Z_c Z_t)_90`` with source ``ctrl``,
    ``Y_t(-90)``, ``X_t(90)``, ``Z_c(-90)``.
    """
    m.rot1(tgt, "Y", 90)
    m.rot2(ctrl, "Z", tgt, "Z", 90)
    m.rot1(tgt, "Y", -90)
    m.rot1(tgt, "X", 90)
    m.rot1(ctrl, "Z", -90)


# -- parity tree -----------------------------------------------------------


def build_s1(m: Machine):
    (a, b), _ = build_te(m)
    parity = m.prepare("Z")
    c_sigma_x(m, b, parity)
    res = ZRotResource([(a, b)], parity=parity)
    res.owe(b, "Z")
    return res, res.qubits


def merge(m: Machine, left: ZRotResource, right: ZRotResource) -> ZRotResource:
    """Join two trees; the left parity is read out in ``X`` and dropped."""
    c_sigma_x(m, left.parity, right.parity)
    m.rot1(left.parity, "Y", 90)
    # Y(90) then Z reads -X; the extra Z from the controlled-not flips it back
    s = m.measure(left.parity, "Z")
    for b in left.targets:
        m.pauli(b, "Z" if s == -1 else "I")
    m.release(left.parity)
    pending = dict(left.pending)
    pending.update(right.pending)
    return ZRotResource(left.pairs + right.pairs, pending, 1, right.parity)


def _success_s1(p: float, q: float) -> float:
    return success_te(p) * (1.0 - q) ** 3 * (1.0 - p)


S1_COST = ResourceVector(4, 3, 2)


def merge_cost(l: int) -> ResourceVector:
    """Operations of the merge that produces a depth-``l`` tree."""
    return ResourceVector(2 + 2 ** (l - 2), 4, 1)


KICKBACK_COST = ResourceVector(1, 2, 0)


def sample_sl_cost(l: int, p: float, q: float, rng: np.random.Generator) -> tuple[list, int]:
    """Counts and attempts of preparing a depth-``l`` tree, failures included."""
    if l == 1:
        k = int(rng.geometric(_success_s1(p, q)))
        return [k * c for c in S1_COST], k
    k = int(rng.geometric(success_merge(p, q)))
    counts = [0, 0, 0]
    attempts = k
    for _ in range(k):
        for _ in range(2):
            c, a = sample_sl_cost(l - 1, p, q, rng)
            counts = [x + y for x, y in zip(counts, c)]
            attempts += a
        counts = [x + y for x, y in zip(counts, merge_cost(l))]
    return counts, attempts


def _failed_merge_cost(l: int):
    def cost(m: Machine):
        p, q = m.noise.p, m.noise.q
        counts = list(merge_cost(l))
        attempts = 0
        for _ in range(2):
            c, a = sample_sl_cost(l - 1, p, q, m.rng)
            counts = [x + y for x, y in zip(counts, c)]
            attempts += a
        return counts, attempts

    return cost


def prepare_sl(m: Machine, l: int) -> ZRotResource:
    """Depth-``l`` parity tree: ``2^(l-1)`` pairs plus their parity qubit."""
    if l < 1:
        raise ValueError("l must be at least 1")
    p, q = m.noise.p, m.noise.q
    if l == 1:
        return m.repeat_until_success(build_s1, _success_s1(p, q), "S1")

    def build(mm: Machine):
        left = prepare_sl(mm, l - 1)
        right = prepare_sl(mm, l - 1)
        out = merge(mm, left, right)
        return out, out.qubits

    return m.repeat_until_success(
        build, success_merge(p, q), f"S{l}", attempt_cost=_failed_merge_cost(l)
    )


def kickback(m: Machine, res: ZRotResource) -> ZRotResource:
    """Turn the parity qubit's ``Z`` quarter turn into one on all targets."""
    m.rot1(res.parity, "Z", 90)
    m.rot1(res.parity, "Y", 90)
    s = m.measure(res.parity, "Z")
    m.release(res.parity)
    out = ZRotResource(list(res.pairs), dict(res.pending), 1, None)
    if s == 1:
        # deferred: the fan-out is merged into each teleportation
        for b in out.targets:
            out.owe(b, "Z")
    return out


def prepare_zrot_resource(m: Machine, l: int) -> ZRotResource:
    """Parity tree of depth ``l`` with the rotation kicked back onto its targets."""

    def build(mm: Machine):
        res = kickback(mm, prepare_sl(mm, l))
        return res, res.qubits

    def failed(mm: Machine):
        c, a = sample_sl_cost(l, mm.noise.p, mm.noise.q, mm.rng)
        return [x + y for x, y in zip(c, KICKBACK_COST)], a

    return m.repeat_until_success(
        build, success_kickback(m.noise.q), f"Z{2 ** (l - 1)}", attempt_cost=failed
    )


@lru_cache(maxsize=8)
def _canonical(l: int):
    m = Machine(rng=np.random.default_rng(0))
    res = prepare_zrot_resource(m, l)
    return m.state, res


def cached_resource(m: Machine, l: int) -> ZRotResource:
    """Append a noiselessly prepared depth-``l`` resource to ``m``'s register.

    Preparation is retried until it succeeds, so a pre-built copy is
    equivalent for anything that happens afterwards.  No resources are
    charged.
    """
    state, res = _canonical(l)
    offset = m.state.append_state(state)
    return res.shifted(offset)


# -- direct ladder ----------------------------------------------------------


def direct_zrot_axes(qubits: list[int], n: int) -> list[tuple[dict[int, str], int]]:
    """Sequence realizing ``(Z...Z)_90`` on an even number of ``qubits``.

    The first qubit is conjugated by ``(Y Z_j)`` quarter turns for all but
    one partner, which joins it in a single central ``ZZ`` coupling; the
    conjugations are then undone.  Four qubits give five couplings.

    Returns:
        ``(factors, angle)`` pairs in the order they are applied.
    """
    if len(qubits) < 2 or len(qubits) % 2:
        raise ValueError("need an even number of qubits")
    head, mid = qubits[0], qubits[2] if len(qubits) > 2 else qubits[1]
    partners = [q for q in qubits[1:] if q != mid]
    # innermost partner first so four qubits reproduce the textbook order
    outward = [({head: "Y", q: "Z"}, -90 if i % 2 == 0 else 90)
               for i, q in enumerate(reversed(partners))]
    axis = PauliProduct.from_sparse(n, {head: "Z", mid: "Z"})
    for factors, angle in reversed(outward):
        r = Rotation(PauliProduct.from_sparse(n, factors), angle)
        axis = r.inverse.conjugate(axis)
    target = PauliProduct.from_sparse(n, {q: "Z" for q in qubits})
    if axis == target:
        mid_angle = 90
    elif axis == -target:
        mid_angle = -90
    else:
        raise AssertionError(f"ladder produced {axis}")
    back = [(factors, -angle) for factors, angle in reversed(outward)]
    return outward + [({head: "Z", mid: "Z"}, mid_angle)] + back


def apply_direct_zrot(m: Machine, qubits: list[int]) -> None:
    """Apply the ladder with fallible couplings (the first qubit is the source)."""
    for factors, angle in direct_zrot_axes(qubits, m.state.n):
        (qa, la), (qb, lb) = factors.items()
        m.rot2(qa, la, qb, lb, angle)


def prepare_z2k_direct(m: Machine, k: int) -> ZRotResource:
    """``2k`` pairs with the ladder applied to their targets, retried as a whole."""

    def build(mm: Machine):
        pairs = [build_te(mm)[0] for _ in range(2 * k)]
        apply_direct_zrot(mm, [b for _, b in pairs])
        res = ZRotResource(pairs)
        return res, res.qubits

    couplings = 2 * k + 4 * k - 3
    return m.repeat_until_success(build, success_te(m.noise.p) ** couplings, f"Z{2 * k}")
