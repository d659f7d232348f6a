"""Hamiltonians, pulse sequences and their compilation into 8x8 unitaries.

Conventions
-----------
* Durations are in multiples of 1/J and rf amplitudes in multiples of J,
  where J is the reference coupling of the :class:`CouplingTopology`.
  Physical frequencies (couplings, offsets) are stored in Hz.
* A sequence is listed in time order; the compiled propagator is
  ``U = U_last @ ... @ U_first``.
* Hard pulses and z-rotations are instantaneous: no coupling or offset
  evolution happens during them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union

import numpy as np

from .spinops import DIM, ProductOperator, is_hermitian, product_op, spin_op, subspace_13

TWO_PI = 2 * np.pi
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class CouplingTopology:
    """Ising couplings and resonance offsets of the three-spin chain (Hz).

    `J` is the reference coupling used to convert sequence units (1/J and
    multiples of J) into seconds and Hz.
    """

    J12: float = 1.0
    J23: float = 1.0
    J13: float = 0.0
    nu1: float = 0.0
    nu2: float = 0.0
    nu3: float = 0.0
    J: float = 1.0

    @classmethod
    def ideal(cls, J: float = 1.0, offsets=(0.0, 0.0, 0.0)) -> "CouplingTopology":
        return cls(J, J, 0.0, *offsets, J=J)

    @classmethod
    def acetamide(cls) -> "CouplingTopology":
        """Amino moiety of 15N acetamide: two 1H spins bridged by 15N."""
        return cls(-87.3, -88.8, 2.9, 0.0, 0.0, 310.0, J=88.0)

    @classmethod
    def zero(cls, J: float = 1.0) -> "CouplingTopology":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, J=J)

    @property
    def offsets(self) -> tuple[float, float, float]:
        return (self.nu1, self.nu2, self.nu3)

    def without_offsets(self) -> "CouplingTopology":
        return CouplingTopology(self.J12, self.J23, self.J13, J=self.J)


class RFField(NamedTuple):
    qubit: int
    amplitude: float  # Hz
    phase: str = "x"


def build_hamiltonian(
    topology: CouplingTopology,
    rf: RFField | tuple | None = None,
    couplings: bool = True,
) -> np.ndarray:
    """Rotating-frame Hamiltonian in rad/s.

    H = 2pi (J12 I1zI2z + J23 I2zI3z + J13 I1zI3z) + 2pi sum_k nu_k I_kz
    plus 2pi * amplitude * I_{k,phase} for an rf field on qubit k.
    """
    H = np.zeros((DIM, DIM), dtype=complex)
    if couplings:
        # product_op("zz1") = 2 I1z I2z
        H += np.pi * (
            topology.J12 * product_op("zz1")
            + topology.J23 * product_op("1zz")
            + topology.J13 * product_op("z1z")
        )
    for k, nu in enumerate(topology.offsets, start=1):
        if nu:
            H += TWO_PI * nu * spin_op(k, "z")
    if rf is not None:
        rf = RFField(*rf)
        H += TWO_PI * rf.amplitude * spin_op(rf.qubit, rf.phase)
    return H


@dataclass
class Propagator:
    """An 8x8 unitary together with the time it takes (multiples of 1/J)."""

    matrix: np.ndarray
    duration: float = 0.0

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (DIM, DIM):
            raise ValueError(f"propagator must be 8x8, got {self.matrix.shape}")

    def __matmul__(self, other: "Propagator") -> "Propagator":
        """``self @ other``: apply `other` first, then `self`."""
        return Propagator(self.matrix @ _matrix(other), self.duration + _duration(other))

    @property
    def dagger(self) -> "Propagator":
        return Propagator(self.matrix.conj().T, self.duration)

    def unitarity_error(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(DIM)).max())

    @classmethod
    def identity(cls) -> "Propagator":
        return cls(np.eye(DIM, dtype=complex), 0.0)


MatrixLike = Union[Propagator, np.ndarray]


def _matrix(u: MatrixLike) -> np.ndarray:
    return u.matrix if isinstance(u, Propagator) else np.asarray(u, dtype=complex)


def _duration(u: MatrixLike) -> float:
    return u.duration if isinstance(u, Propagator) else 0.0


def expm_hermitian(H: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i H t) for Hermitian H via eigendecomposition."""
    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve(H: np.ndarray, t: float) -> Propagator:
    """Propagator exp(-i H t) of a time-independent Hermitian Hamiltonian.

    Raises
    ------
    ValueError
        If H is not Hermitian or t is negative.
    """
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H):
        raise ValueError("evolve requires a Hermitian 8x8 Hamiltonian")
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    return Propagator(expm_hermitian(H, t), t)


# -- pulse events -------------------------------------------------------------

_PHASES = ("x", "y", "z")


def _check_qubits(qs: Iterable[int]) -> tuple[int, ...]:
    qs = tuple(sorted(set(int(q) for q in qs)))
    if not qs or any(q not in (1, 2, 3) for q in qs):
        raise ValueError(f"targets must be a non-empty subset of {{1, 2, 3}}, got {qs}")
    return qs


@dataclass(frozen=True)
class HardPulse:
    """Instantaneous rotation exp(-i flip sum_k I_{k,phase}) on `targets`."""

    targets: tuple[int, ...]
    flip: float
    phase: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "targets", _check_qubits(self.targets))
        if self.phase not in _PHASES:
            raise ValueError(f"phase must be one of {_PHASES}, got {self.phase!r}")
        if not np.isfinite(self.flip):
            raise ValueError("flip angle must be finite")

    duration = 0.0

    def inverse(self) -> "HardPulse":
        return HardPulse(self.targets, -self.flip, self.phase)


@dataclass(frozen=True)
class ZRotation:
    """Instantaneous exp(-i angle I_kz)."""

    target: int
    angle: float

    def __post_init__(self):
        _check_qubits([self.target])

    duration = 0.0

    def inverse(self) -> "ZRotation":
        return ZRotation(self.target, -self.angle)


@dataclass(frozen=True)
class WeakPulse:
    """Finite rf irradiation of one qubit, optionally under the couplings."""

    target: int
    amplitude: float
    phase: str
    duration: float
    couplings: bool = True

    def __post_init__(self):
        _check_qubits([self.target])
        if self.phase not in _PHASES:
            raise ValueError(f"phase must be one of {_PHASES}, got {self.phase!r}")
        if self.duration < 0:
            raise ValueError("duration must be non-negative")


@dataclass(frozen=True)
class Delay:
    """Free evolution for `duration` (1/J); couplings may be switched off."""

    duration: float
    couplings: bool = True

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be non-negative")


PulseEvent = Union[HardPulse, ZRotation, WeakPulse, Delay]


@dataclass
class PulseSequence:
    """Time-ordered list of pulse events."""

    name: str
    events: list = field(default_factory=list)

    @property
    def duration(self) -> float:
        return duration(self)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(f"{self.name}+{other.name}", list(self.events) + list(other.events))

    def __len__(self) -> int:
        return len(self.events)

    def to_dict(self) -> dict:
        return {"name": self.name, "events": [event_to_dict(e) for e in self.events]}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        return cls(data["name"], [event_from_dict(e) for e in data["events"]])

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls.from_dict(json.loads(text))


def duration(seq: PulseSequence) -> float:
    """Total duration in units of 1/J; instantaneous events contribute 0."""
    return float(sum(e.duration for e in seq.events))


def event_to_dict(e: PulseEvent) -> dict:
    if isinstance(e, HardPulse):
        return {"type": "hard", "targets": list(e.targets), "phase": e.phase, "flip_rad": float(e.flip)}
    if isinstance(e, ZRotation):
        return {"type": "zrot", "targets": [e.target], "phase": "z", "flip_rad": float(e.angle)}
    if isinstance(e, WeakPulse):
        return {
            "type": "weak",
            "targets": [e.target],
            "phase": e.phase,
            "amplitude_J": float(e.amplitude),
            "duration_invJ": float(e.duration),
            "couplings": bool(e.couplings),
        }
    if isinstance(e, Delay):
        return {"type": "delay", "duration_invJ": float(e.duration), "couplings": bool(e.couplings)}
    raise TypeError(f"unknown pulse event {e!r}")


def event_from_dict(d: dict) -> PulseEvent:
    kind = d.get("type")
    if kind == "hard":
        return HardPulse(tuple(d["targets"]), float(d["flip_rad"]), d.get("phase", "x"))
    if kind == "zrot":
        (k,) = d["targets"]
        return ZRotation(int(k), float(d["flip_rad"]))
    if kind == "weak":
        (k,) = d["targets"]
        return WeakPulse(int(k), float(d["amplitude_J"]), d["phase"], float(d["duration_invJ"]),
                         bool(d.get("couplings", True)))
    if kind == "delay":
        return Delay(float(d["duration_invJ"]), bool(d.get("couplings", True)))
    raise ValueError(f"unknown event type {kind!r}")


def event_unitary(e: PulseEvent, topology: CouplingTopology) -> np.ndarray:
    """Unitary of a single event on the given topology."""
    if isinstance(e, HardPulse):
        H = sum(spin_op(k, e.phase) for k in e.targets)
        return expm_hermitian(H, e.flip)
    if isinstance(e, ZRotation):
        return expm_hermitian(spin_op(e.target, "z"), e.angle)
    if isinstance(e, WeakPulse):
        rf = RFField(e.target, e.amplitude * topology.J, e.phase)
        H = build_hamiltonian(topology, rf, couplings=e.couplings)
        return expm_hermitian(H, e.duration / topology.J)
    if isinstance(e, Delay):
        H = build_hamiltonian(topology, couplings=e.couplings)
        return expm_hermitian(H, e.duration / topology.J)
    raise TypeError(f"unknown pulse event {e!r}")


def compile_sequence(seq: PulseSequence, topology: CouplingTopology | None = None) -> Propagator:
    """Total propagator of a pulse sequence, last event leftmost."""
    topology = topology or CouplingTopology.ideal()
    U = np.eye(DIM, dtype=complex)
    for e in seq.events:
        if isinstance(e, (WeakPulse, Delay)) and e.duration == 0:
            continue
        U = event_unitary(e, topology) @ U
    return Propagator(U, duration(seq))


def gate_fidelity(U: MatrixLike, V: MatrixLike) -> float:
    """Phase-insensitive overlap |trace(U^dagger V)| / 8."""
    return float(abs(np.trace(_matrix(U).conj().T @ _matrix(V))) / DIM)


def conjugation_match(
    U: MatrixLike,
    V: MatrixLike,
    subspace: Iterable | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[bool, float]:
    """Check that U and V act identically on a set of operators by conjugation.

    Returns ``(ok, max_deviation)`` where the deviation is the largest
    max-norm difference ``|U B U^dagger - V B V^dagger|`` over the subspace
    (default: the 15 operators on qubits 1 and 3).
    """
    u, v = _matrix(U), _matrix(V)
    ops = subspace_13() if subspace is None else list(subspace)
    dev = 0.0
    for b in ops:
        B = product_op(b) if isinstance(b, (str, ProductOperator, tuple)) else np.asarray(b)
        d = np.abs(u @ B @ u.conj().T - v @ B @ v.conj().T).max()
        dev = max(dev, float(d))
    return dev <= tol, dev
