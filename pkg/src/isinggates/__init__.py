"""Time-efficient gate synthesis for a three-spin Ising chain."""

from .geodesic import GeodesicSolution, NoFeasibleSolution, search_constant_u, tau_kappa
from .nmr import SpectrumConfig, apply_gate, prepare_rho_a, simulate_spectrum, verify_state
from .propagator import (
    CouplingTopology,
    Delay,
    HardPulse,
    Propagator,
    PulseSequence,
    WeakPulse,
    ZRotation,
    compile_sequence,
    conjugation_match,
    gate_fidelity,
)
from .sequences import (
    broadband_variant,
    cnot13_from_geodesic,
    conventional_cnot13,
    duration_table,
    selective_pulse_emulation,
    sqrt_u13,
    toffoli,
    trilinear_propagator,
    u13_geodesic,
    verify,
)
from .spinops import ProductOperator, decompose, product_op, spin_op

__version__ = "0.1.0"
