"""Constant-control geodesics of the reduced four-dimensional control system.

Under Ising couplings and a y (or x) rf field on the middle spin, the four
expectation values x = (x1, x2, x3, x4) evolve as

    dx/dt = pi J A(u) x,   A(u) = [[0, -1, 0, 0],
                                    [1,  0, -u, 0],
                                    [0,  u,  0, -1],
                                    [0,  0,  1,  0]]

with u the rf amplitude in units of J/2.  Writing x = x1, y = |(x2, x3)|,
z = x4 maps trajectories onto the unit sphere, where the transfer time is
the length under the metric (dx^2 + dz^2) / y^2 divided by pi J.

All times here are in units of 1/J (J = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

U_MAX = 4.0
U_STEP = 1e-3
ENDPOINT_TOL = 1e-6


class NoFeasibleSolution(RuntimeError):
    """Raised when no constant control reaches the target within bounds."""


def control_matrix(u: float) -> np.ndarray:
    return np.array(
        [[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, -u, 0.0], [0.0, u, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]]
    )


def _eig(u):
    # i*A is Hermitian, so exp(s A) = V exp(-i s w) V^dagger
    u = np.atleast_1d(np.asarray(u, dtype=float))
    A = np.zeros((u.size, 4, 4))
    A[:, 0, 1], A[:, 1, 0] = -1.0, 1.0
    A[:, 1, 2], A[:, 2, 1] = -u, u
    A[:, 2, 3], A[:, 3, 2] = -1.0, 1.0
    return np.linalg.eigh(1j * A)


def trajectory(u: float, times, x0=(1.0, 0.0, 0.0, 0.0), J: float = 1.0) -> np.ndarray:
    """States of the control system at each time in `times`; shape (n, 4)."""
    times = np.asarray(times, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    w, v = _eig(u)
    w, v = w[0], v[0]
    coef = v.conj().T @ x0
    phases = np.exp(-1j * np.pi * J * np.outer(times, w))
    return np.real((phases * coef) @ v.T)


def evolve_eq1(u: float, t: float, x0, J: float = 1.0) -> np.ndarray:
    """State at time t under constant control u, starting from x0.

    >>> np.round(evolve_eq1(0.0, 0.5, [1, 0, 0, 0]), 12) + 0.0
    array([0., 1., 0., 0.])
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    return trajectory(u, [t], x0, J)[0]


def velocity(u: float, x: np.ndarray, J: float = 1.0) -> np.ndarray:
    """Time derivative pi J A(u) x; works on (..., 4) arrays."""
    return np.pi * J * np.asarray(x) @ control_matrix(u).T


def reduce_to_sphere(x) -> np.ndarray:
    """Map (x1, x2, x3, x4) to (x1, sqrt(x2^2 + x3^2), x4); works on (..., 4)."""
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 0], np.hypot(x[..., 1], x[..., 2]), x[..., 3]], axis=-1)


def path_length_g(trajectory_xyz) -> float:
    """Length of a sampled sphere path under the metric (dx^2 + dz^2) / y^2.

    Each segment contributes its (x, z) chord divided by the midpoint value
    of y.  This stays finite when the path starts or ends on y = 0.

    Raises
    ------
    ValueError
        If y vanishes at an interior segment that still moves in (x, z).
    """
    p = np.asarray(trajectory_xyz, dtype=float)
    if p.ndim != 2 or p.shape[1] != 3:
        raise ValueError("trajectory must have shape (n, 3)")
    if len(p) < 2:
        return 0.0
    chord = np.hypot(np.diff(p[:, 0]), np.diff(p[:, 2]))
    ymid = 0.5 * (p[1:, 1] + p[:-1, 1])
    moving = chord > 0
    if np.any(moving & (ymid <= 1e-14)):
        raise ValueError("path crosses y = 0 while moving; metric length diverges")
    return float(np.sum(chord[moving] / ymid[moving]))


def euler_lagrange_invariant(states, u: float, J: float = 1.0) -> np.ndarray:
    """(dz/dt x - dx/dt z) / y^2 along a trajectory of four-vectors."""
    s = np.asarray(states, dtype=float)
    v = velocity(u, s, J)
    y2 = s[..., 1] ** 2 + s[..., 2] ** 2
    return (v[..., 3] * s[..., 0] - v[..., 0] * s[..., 3]) / y2


class TauKappa(NamedTuple):
    tau: float
    length: float


def tau_kappa(kappa: float) -> TauKappa:
    """Minimal time sqrt(kappa (4 - kappa)) / 2 for a trilinear rotation.

    The target is the sphere point (cos(pi kappa / 2), 0, sin(pi kappa / 2));
    the metric length is pi times the time.
    """
    if not 0.0 <= kappa <= 2.0:
        raise ValueError(f"kappa must lie in [0, 2], got {kappa}")
    tau = np.sqrt(kappa * (4.0 - kappa)) / 2.0
    return TauKappa(float(tau), float(np.pi * tau))


@dataclass(frozen=True)
class GeodesicSolution:
    """Constant control u reaching the target at time tau (1/J).

    theta is atan(x2 / x3) at tau, the flip angle of the hard pulse that
    joins the two halves of a symmetric transfer.  length is the metric
    length, equal to pi * tau.
    """

    u: float
    tau: float
    theta: float
    length: float
    endpoint: tuple[float, float, float]
    target: tuple[float, float, float]
    kind: str
    value: float

    @property
    def amplitude(self) -> float:
        """rf amplitude of the weak pulse, in multiples of J."""
        return self.u / 2.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "u": self.u,
            "tauJ": self.tau,
            "theta_rad": self.theta,
            "length": self.length,
            "amplitude_J": self.amplitude,
            "endpoint": list(self.endpoint),
            "target": list(self.target),
        }


def _theta(x: np.ndarray, u: float) -> float:
    # on y = 0 the ratio x2/x3 is taken along the direction of approach
    if np.hypot(x[1], x[2]) > 1e-8:
        a, b = x[1], x[2]
    else:
        v = velocity(u, x)
        a, b = v[1], v[2]
    if b == 0:
        return float(np.pi / 2)
    return float(np.arctan(a / b))


class _Target:
    """Event/residual pair whose common zero is the requested sphere point."""

    def __init__(self, phi=None, kappa=None):
        if (phi is None) == (kappa is None):
            raise ValueError("give exactly one of phi or kappa")
        if phi is not None:
            if not 0.0 < phi <= np.pi / 2:
                raise ValueError(f"phi must lie in (0, pi/2], got {phi}")
            self.kind, self.value = "phi", float(phi)
            self.point = np.array([0.0, np.cos(phi), np.sin(phi)])
        else:
            if not 0.0 < kappa <= 2.0:
                raise ValueError(f"kappa must lie in (0, 2], got {kappa}")
            self.kind, self.value = "kappa", float(kappa)
            a = np.pi * kappa / 2
            self.point = np.array([np.cos(a), 0.0, np.sin(a)])

    def event(self, x, v):
        if self.kind == "phi":
            return x[..., 0]
        return x[..., 1] * v[..., 1] + x[..., 2] * v[..., 2]

    def crossings(self, g):
        """Indices k with an event crossing between samples k and k+1."""
        if self.kind == "phi":
            return np.nonzero((g[:-1] > 0) != (g[1:] > 0))[0]
        # minima of y^2 only, skipping the start on y = 0
        return np.nonzero((g[:-1] < 0) & (g[1:] >= 0))[0]

    def residual(self, x):
        if self.kind == "phi":
            return x[..., 3] - self.point[2]
        c, s = self.point[0], self.point[2]
        return x[..., 3] * c - x[..., 0] * s


def _branch_residuals(tg, us, times, max_events):
    """Approximate residual of the k-th event for every grid control value."""
    w, v = _eig(us)
    coef = np.conj(v[:, 0, :])  # projection of e1 on each eigenvector
    out = np.full((len(us), max_events), np.nan)
    ph = np.exp(-1j * np.pi * times[None, :, None] * w[:, None, :])
    X = np.real(np.einsum("utj,uij->uti", ph * coef[:, None, :], v))
    for i, u in enumerate(us):
        x = X[i]
        g = tg.event(x, velocity(u, x))
        ks = tg.crossings(g)[:max_events]
        for n, k in enumerate(ks):
            f = g[k] / (g[k] - g[k + 1])
            xe = x[k] + f * (x[k + 1] - x[k])
            out[i, n] = tg.residual(xe)
    return out


def _event_time(tg, u, times, n):
    x = trajectory(u, times)
    g = tg.event(x, velocity(u, x))
    ks = tg.crossings(g)
    if len(ks) <= n:
        return None
    k = ks[n]

    def fn(t):
        xs = trajectory(u, [t])[0]
        return float(tg.event(xs, velocity(u, xs)))

    return brentq(fn, times[k], times[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)


def search_constant_u(
    phi: float | None = None,
    kappa: float | None = None,
    *,
    u_max: float = U_MAX,
    u_step: float = U_STEP,
    t_max: float = 2.0,
    n_times: int = 801,
    max_events: int = 3,
    endpoint_tol: float = ENDPOINT_TOL,
) -> GeodesicSolution:
    """Fastest constant-control transfer from (1, 0, 0, 0) to a sphere target.

    The target is either the point (0, cos phi, sin phi) or, for a trilinear
    rotation, (cos(pi kappa / 2), 0, sin(pi kappa / 2)).  For every u on a
    grid over [0, u_max], the trajectory is scanned for events (x1 = 0 for
    phi targets, returns to y = 0 for kappa targets); a second residual
    measures the miss along the remaining direction.  Sign changes of the
    residual in u are refined with Brent's method and the feasible (u, tau)
    pair with the smallest tau is returned.

    Raises
    ------
    NoFeasibleSolution
        If no grid value of u leads to the target within `endpoint_tol`.
    """
    tg = _Target(phi, kappa)
    us = np.linspace(0.0, u_max, int(round(u_max / u_step)) + 1)
    times = np.linspace(0.0, t_max, n_times)

    res = np.concatenate(
        [_branch_residuals(tg, us[i : i + 400], times, max_events) for i in range(0, len(us), 400)]
    )

    def residual_at(u, n):
        t = _event_time(tg, u, times, n)
        if t is None:
            return np.nan, None
        return float(tg.residual(trajectory(u, [t])[0])), t

    candidates = []
    for n in range(max_events):
        r = res[:, n]
        for i in range(len(us) - 1):
            a, b = r[i], r[i + 1]
            if not (np.isfinite(a) and np.isfinite(b)):
                continue
            if a == 0.0:
                candidates.append((us[i], n))
            elif a * b < 0:
                fa = residual_at(us[i], n)[0]
                fb = residual_at(us[i + 1], n)[0]
                if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0:
                    continue
                u_star = brentq(lambda uu: residual_at(uu, n)[0], us[i], us[i + 1],
                                xtol=1e-15, rtol=4 * np.finfo(float).eps)
                candidates.append((u_star, n))
        if np.isfinite(r[-1]) and r[-1] == 0.0:
            candidates.append((us[-1], n))

    solutions = []
    for u_star, n in candidates:
        _, t = residual_at(u_star, n)
        if t is None:
            continue
        x = trajectory(u_star, [t])[0]
        p = reduce_to_sphere(x)
        if np.linalg.norm(p - tg.point) <= endpoint_tol:
            solutions.append((t, u_star, x, p))
    if not solutions:
        raise NoFeasibleSolution(
            f"no constant control in [0, {u_max}] reaches the {tg.kind}={tg.value} target"
        )
    t, u_star, x, p = min(solutions, key=lambda s: (s[0], s[1]))
    return GeodesicSolution(
        u=float(u_star),
        tau=float(t),
        theta=_theta(x, u_star),
        length=float(np.pi * t),
        endpoint=tuple(float(c) for c in p),
        target=tuple(float(c) for c in tg.point),
        kind=tg.kind,
        value=tg.value,
    )


def sample_solution(sol: GeodesicSolution, n: int = 2001) -> tuple[np.ndarray, np.ndarray]:
    """Times and four-vector states along a solution, endpoints included."""
    times = np.linspace(0.0, sol.tau, n)
    return times, trajectory(sol.u, times)
