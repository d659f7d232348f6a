"""Product-operator algebra for three spins-1/2.

Operators are 8x8 complex matrices with qubit 1 as the leftmost tensor
factor.  A product operator is labelled by a 3-character string over
``{"1", "x", "y", "z"}`` (``"yz1"`` is 2*I1y*I2z) and carries the prefactor
2**(q-1), q being the number of non-identity factors, so that every basis
element B satisfies trace(B) = 0 and trace(B @ B) = 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

AXES = ("1", "x", "y", "z")
DIM = 8

_PAULI = {
    "1": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# operators whose expectations form the six-dimensional reduced state
STATE6_LABELS = ("x11", "yz1", "yx1", "yyz", "yzz", "x1z")


@dataclass(frozen=True, order=True)
class ProductOperator:
    """One direction of the traceless three-spin operator space.

    Parameters
    ----------
    label : str
        Three characters over ``1xyz``; position k is the axis on qubit k+1.
    """

    label: str

    def __post_init__(self):
        if len(self.label) != 3 or any(c not in AXES for c in self.label):
            raise ValueError(f"invalid product-operator label {self.label!r}")

    @classmethod
    def from_axes(cls, axes) -> "ProductOperator":
        return cls("".join(axes))

    @property
    def axes(self) -> tuple[str, str, str]:
        return tuple(self.label)

    @property
    def order(self) -> int:
        """Number of non-identity factors."""
        return sum(c != "1" for c in self.label)

    @property
    def matrix(self) -> np.ndarray:
        return _label_matrix(self.label).copy()

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=None)
def _label_matrix(label: str) -> np.ndarray:
    q = sum(c != "1" for c in label)
    m = np.array([[1.0 + 0j]])
    for c in label:
        m = np.kron(m, _PAULI[c] if c == "1" else _PAULI[c] / 2)
    m = (2.0 ** (q - 1)) * m
    m.setflags(write=False)
    return m


def _as_label(spec) -> str:
    if isinstance(spec, ProductOperator):
        return spec.label
    if isinstance(spec, str):
        return ProductOperator(spec).label
    return ProductOperator.from_axes(spec).label


def product_op(spec) -> np.ndarray:
    """Matrix of a product operator.

    `spec` may be a :class:`ProductOperator`, a label such as ``"yz1"`` or a
    tuple of axes.  The all-identity label ``"111"`` gives half the identity,
    consistent with the 2**(q-1) prefactor at q = 0.
    """
    return _label_matrix(_as_label(spec)).copy()


def spin_op(k: int, axis: str) -> np.ndarray:
    """Single-spin operator I_{k,axis} (half a Pauli matrix on qubit k)."""
    if k not in (1, 2, 3):
        raise ValueError(f"qubit index must be 1, 2 or 3, got {k}")
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    label = ["1", "1", "1"]
    label[k - 1] = axis
    return product_op("".join(label))


def basis63() -> list[ProductOperator]:
    """All 63 non-identity product operators in lexicographic axis order."""
    return [
        ProductOperator("".join(p))
        for p in itertools.product(AXES, repeat=3)
        if "".join(p) != "111"
    ]


def subspace_13() -> list[ProductOperator]:
    """The 15 operators acting only on qubits 1 and 3."""
    return [b for b in basis63() if b.label[1] == "1"]


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(a^dagger b)."""
    return complex(np.trace(a.conj().T @ b))


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return m.shape == (DIM, DIM) and np.allclose(m, m.conj().T, rtol=0, atol=atol * scale)


@dataclass
class Decomposition:
    """Expansion rho = identity * 1 + sum_B coefficients[B] * B."""

    identity: float
    coefficients: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, label) -> float:
        return self.coefficients[_as_label(label)]

    def support(self, tol: float = 1e-9) -> list[str]:
        return [k for k, v in self.coefficients.items() if abs(v) > tol]

    def nonzero(self, tol: float = 1e-9) -> dict[str, float]:
        return {k: v for k, v in self.coefficients.items() if abs(v) > tol}

    def reconstruct(self) -> np.ndarray:
        out = self.identity * np.eye(DIM, dtype=complex)
        for label, c in self.coefficients.items():
            out = out + c * _label_matrix(label)
        return out


def decompose(rho: np.ndarray) -> Decomposition:
    """Expand a Hermitian 8x8 operator on the product-operator basis.

    Coefficients are trace(B @ rho) / 2; the identity coefficient is
    trace(rho) / 8.

    Raises
    ------
    ValueError
        If `rho` is not a Hermitian 8x8 matrix.
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ValueError("decompose expects a Hermitian 8x8 matrix")
    coeffs = {
        b.label: float(np.real(np.trace(_label_matrix(b.label) @ rho)) / 2)
        for b in basis63()
    }
    return Decomposition(float(np.real(np.trace(rho)) / DIM), coeffs)


def expectation(rho: np.ndarray, spec) -> float:
    """Normalized expectation trace(B @ rho) / 2, so rho = B gives 1."""
    return float(np.real(np.trace(_label_matrix(_as_label(spec)) @ np.asarray(rho))) / 2)


def state6(rho: np.ndarray) -> np.ndarray:
    """Six reduced coordinates (x1, ..., x6) of a density operator.

    x1..x5 are the expectations of I1x, 2I1yI2z, 2I1yI2x, 4I1yI2yI3z and
    4I1yI2zI3z; x6 is minus the expectation of 2I1xI3z.
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ValueError("state6 expects a Hermitian 8x8 matrix")
    x = np.array([expectation(rho, lab) for lab in STATE6_LABELS])
    x[5] = -x[5]
    return x
