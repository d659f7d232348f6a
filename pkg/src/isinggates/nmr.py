"""Density-operator bookkeeping and 1-D spectrum simulation."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .propagator import CouplingTopology, Propagator, _matrix, build_hamiltonian
from .spinops import DIM, decompose, is_hermitian, spin_op

SUPPORT_TOL = 1e-9

# product-operator supports of the states reached from I1x
EXPECTED_SUPPORT = {
    "B": frozenset({"y1z"}),
    "C": frozenset({"x11", "y1z"}),
    "D": frozenset({"x11", "xz1", "x1x", "xzx"}),
}

# realization driving I1x to each state
STATE_DRIVERS = {"B": "U13", "C": "SQRT13", "D": "T6"}


def prepare_rho_a() -> np.ndarray:
    """Deviation density operator I1x."""
    return spin_op(1, "x")


def apply_gate(U, rho: np.ndarray) -> np.ndarray:
    """U rho U^dagger.

    Raises
    ------
    ValueError
        If U is not unitary to 1e-8 or rho is not Hermitian.
    """
    u = _matrix(U)
    if np.abs(u.conj().T @ u - np.eye(DIM)).max() > 1e-8:
        raise ValueError("apply_gate requires a unitary propagator")
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ValueError("density operator must be Hermitian")
    out = u @ rho @ u.conj().T
    return (out + out.conj().T) / 2


@dataclass
class StateReport:
    label: str
    expected: list[str]
    support: list[str]
    coefficients: dict[str, float]
    passed: bool

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def verify_state(label: str, rho: np.ndarray, tol: float = SUPPORT_TOL) -> StateReport:
    """Check that rho has exactly the product-operator support of state `label`."""
    try:
        expected = EXPECTED_SUPPORT[label.upper()]
    except KeyError:
        raise ValueError(f"unknown state {label!r}; expected one of B, C, D") from None
    dec = decompose(rho)
    coeffs = dec.nonzero(tol)
    support = sorted(coeffs)
    return StateReport(label.upper(), sorted(expected), support, coeffs,
                       set(support) == expected)


def prepare_state(label: str, topology: CouplingTopology | None = None) -> np.ndarray:
    """State A, or the compiled gate for B/C/D applied to A."""
    from .sequences import realization

    label = label.upper()
    rho = prepare_rho_a()
    if label == "A":
        return rho
    if label not in STATE_DRIVERS:
        raise ValueError(f"unknown state {label!r}; expected A, B, C or D")
    U = realization(STATE_DRIVERS[label]).compile(topology)
    return apply_gate(U, rho)


# -- spectra -------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumConfig:
    """Free-evolution and acquisition parameters.

    Parameters
    ----------
    topology : CouplingTopology
        Couplings and offsets in Hz.
    line_broadening : float
        Exponential line broadening (Hz).
    acquisition_time : float
        Length of the simulated signal (s).
    points : int
        Number of time-domain samples.
    detect : tuple of int
        Spins summed in the detection operator.
    """

    topology: CouplingTopology = field(default_factory=CouplingTopology.acetamide)
    line_broadening: float = 3.2
    acquisition_time: float = 1.0
    points: int = 4096
    detect: tuple[int, ...] = (1, 3)

    def __post_init__(self):
        if self.acquisition_time <= 0 or self.points <= 0:
            raise ValueError("acquisition time and point count must be positive")
        if not self.detect:
            raise ValueError("detect must name at least one spin")
        if any(k not in (1, 2, 3) for k in self.detect):
            raise ValueError(f"detect spins must be 1, 2 or 3, got {self.detect}")

    @classmethod
    def from_dict(cls, data: dict) -> "SpectrumConfig":
        data = dict(data)
        preset = data.pop("params", "acetamide")
        topo = PRESETS[preset]()
        keys = {f.name for f in dataclasses.fields(CouplingTopology)}
        topo = dataclasses.replace(topo, **{k: data.pop(k) for k in list(data) if k in keys})
        if "detect" in data:
            data["detect"] = tuple(data["detect"])
        return cls(topology=topo, **data)


PRESETS = {"acetamide": CouplingTopology.acetamide, "ideal": CouplingTopology.ideal}


@dataclass
class Spectrum:
    frequencies: np.ndarray  # Hz
    amplitudes: np.ndarray
    times: np.ndarray
    fid: np.ndarray

    @property
    def resolution(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    def bin(self, freq: float) -> int:
        return int(np.argmin(np.abs(self.frequencies - freq)))

    def at(self, freq: float) -> complex:
        return complex(self.amplitudes[self.bin(freq)])


def detection_operator(detect) -> np.ndarray:
    """F+ = sum_k (I_kx + i I_ky)."""
    return sum(spin_op(k, "x") + 1j * spin_op(k, "y") for k in detect)


def simulate_spectrum(rho0: np.ndarray, cfg: SpectrumConfig | None = None) -> Spectrum:
    """Fourier transform of trace(F+ rho(t)) exp(-pi LB t) under free evolution."""
    cfg = cfg or SpectrumConfig()
    rho0 = np.asarray(rho0, dtype=complex)
    if not is_hermitian(rho0):
        raise ValueError("initial density operator must be Hermitian")
    H = build_hamiltonian(cfg.topology)
    w, V = np.linalg.eigh(H)
    rho_e = V.conj().T @ rho0 @ V
    f_e = V.conj().T @ detection_operator(cfg.detect) @ V
    # s(t) = sum_jk F_kj rho_jk exp(-i (w_j - w_k) t)
    amp = (f_e.T * rho_e).ravel()
    omega = (w[:, None] - w[None, :]).ravel()
    keep = np.abs(amp) > 1e-14
    dt = cfg.acquisition_time / cfg.points
    t = np.arange(cfg.points) * dt
    fid = np.exp(-1j * np.outer(t, omega[keep])) @ amp[keep] if keep.any() else np.zeros(cfg.points, complex)
    fid = fid * np.exp(-np.pi * cfg.line_broadening * t)
    spec = np.fft.fftshift(np.fft.fft(fid))
    freqs = np.fft.fftshift(np.fft.fftfreq(cfg.points, dt))
    return Spectrum(freqs, spec, t, fid)
