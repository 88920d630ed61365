"""Encoded operations that fail only by a known logical ``Z`` measurement."""

from .erasure import erase, erasure_encode, erasure_measure_z, erasure_recover
from .logical import logical_z90, logical_zz90, logical_zz90_direct
from .machine import AttemptCapExceeded, Machine, ProtocolResult, Status
from .recovery import recover_teleported, recover_unitary
from .teleport import (
    CORRECTION_TABLE,
    detect_phase_error,
    measure_xx_teleported,
    prepare_re,
    prepare_te,
    teleport,
)
from .two_qubit_code import (
    encode_pair,
    encoded_eigenstate,
    logical_operator,
    logical_pauli,
    measure_logical,
)
from .zrot import ZRotResource, cached_resource, prepare_sl, prepare_zrot_resource

__all__ = [
    "AttemptCapExceeded",
    "CORRECTION_TABLE",
    "Machine",
    "ProtocolResult",
    "Status",
    "ZRotResource",
    "cached_resource",
    "detect_phase_error",
    "encode_pair",
    "encoded_eigenstate",
    "erase",
    "erasure_encode",
    "erasure_measure_z",
    "erasure_recover",
    "logical_operator",
    "logical_pauli",
    "logical_z90",
    "logical_zz90",
    "logical_zz90_direct",
    "measure_logical",
    "measure_xx_teleported",
    "prepare_re",
    "prepare_sl",
    "prepare_te",
    "prepare_zrot_resource",
    "recover_teleported",
    "recover_unitary",
    "teleport",
]
