"""Ideal 8x8 target gates built from their defining exponentials."""

from __future__ import annotations

import numpy as np

from .propagator import expm_hermitian
from .spinops import DIM, product_op, spin_op

_1 = np.eye(DIM, dtype=complex)


def cnot13() -> np.ndarray:
    """exp(-i pi/2 (2 I1z I3x - I1z - I3x + 1/2)): flips qubit 3 when qubit 1 is |1>."""
    H = np.pi / 2 * (product_op("z1x") - spin_op(1, "z") - spin_op(3, "x") + 0.5 * _1)
    return expm_hermitian(H)


def u13() -> np.ndarray:
    """Effective 1-3 Ising rotation exp(-i pi/2 2 I1z I3z)."""
    return expm_hermitian(np.pi / 2 * product_op("z1z"))


def sqrt_u13() -> np.ndarray:
    return expm_hermitian(np.pi / 4 * product_op("z1z"))


def u13_symmetric() -> np.ndarray:
    """exp(-i pi/2 (I1z + I3z + 2 I1z I3z)), locally equivalent to CNOT(1,3)."""
    return expm_hermitian(np.pi / 2 * (spin_op(1, "z") + spin_op(3, "z") + product_op("z1z")))


def trilinear(kappa: float, axes: str = "zyz") -> np.ndarray:
    """exp(-i 2 pi kappa I1a I2b I3c) = exp(-i (pi kappa / 2) 4 I1a I2b I3c)."""
    return expm_hermitian(np.pi * kappa / 2 * product_op(axes))


def u_zzy() -> np.ndarray:
    return trilinear(1.0, "zzy")


def toffoli_hamiltonian() -> np.ndarray:
    """Two- and three-body part of the Toffoli generator (local terms dropped)."""
    return np.pi / 4 * (
        product_op("zz1") + product_op("1zx") + product_op("z1x") + product_op("zzx")
    )


def toffoli() -> np.ndarray:
    """Computational-basis Toffoli: flips qubit 3 when qubits 1 and 2 are |1>."""
    T = np.eye(DIM, dtype=complex)
    T[6:, 6:] = [[0, 1], [1, 0]]
    return T


def swap12() -> np.ndarray:
    P = np.zeros((DIM, DIM), dtype=complex)
    for i in range(DIM):
        b1, b2, b3 = (i >> 2) & 1, (i >> 1) & 1, i & 1
        P[(b2 << 2) | (b1 << 1) | b3, i] = 1
    return P


def cnot(control: int, target: int) -> np.ndarray:
    """Computational-basis CNOT between any two of the three qubits."""
    C = np.zeros((DIM, DIM), dtype=complex)
    for i in range(DIM):
        bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1]
        if bits[control - 1]:
            bits[target - 1] ^= 1
        C[(bits[0] << 2) | (bits[1] << 1) | bits[2], i] = 1
    return C


TARGETS = {
    "CNOT13": cnot13,
    "U13": u13,
    "SQRT_U13": sqrt_u13,
    "U13S": u13_symmetric,
    "U_ZZY": u_zzy,
    "TOFFOLI": toffoli,
}


def target_matrix(name: str) -> np.ndarray:
    try:
        return TARGETS[name]()
    except KeyError:
        raise ValueError(f"unknown gate target {name!r}") from None
