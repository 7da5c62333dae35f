"""Input states: Bloch/polar target parametrizations, probe and ancilla states.

Basis convention: |0> is the spin-up eigenvector of sigma_z. Coordinate
singularities are made total by convention: phi := 0 at the poles and at the
origin, theta := 0 at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .smallmat import ID2, PAULIS, as_cmatrix, dagger, tensor

NORM_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    """Target Bloch vector v = (vx, vy, vz), |v| <= 1."""

    vx: float
    vy: float
    vz: float

    def __post_init__(self):
        v = (self.vx, self.vy, self.vz)
        if not all(math.isfinite(c) for c in v):
            raise ValueError("Bloch components must be finite")
        if self.norm > 1.0 + NORM_TOL:
            raise ValueError(f"Bloch vector norm {self.norm} exceeds 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.vx**2 + self.vy**2 + self.vz**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz], dtype=float)

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        vx, vy, vz = (float(c) for c in v)
        return cls(vx, vy, vz)


@dataclass(frozen=True)
class PolarCoords:
    """Polar target coordinates r in [0,1], theta in [0,pi], phi in [0,2pi)."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.r <= 1.0 + NORM_TOL):
            raise ValueError(f"r={self.r} outside [0, 1]")
        if not (0.0 <= self.theta <= math.pi + NORM_TOL):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi < 2 * math.pi + NORM_TOL):
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")


@dataclass(frozen=True)
class ProbeConfig:
    """Probe preparation: pure Bloch angle theta_a for NEA, singlet for EA.

    The probe azimuth is fixed to zero (the coupling is isotropic, so this
    loses no generality); for the entangled strategy theta_a is ignored.
    """

    theta_a: float = 0.0
    entangled: bool = False

    def __post_init__(self):
        if not (0.0 <= self.theta_a <= math.pi + NORM_TOL):
            raise ValueError(f"theta_a={self.theta_a} outside [0, pi]")


def bloch_to_density(v: BlochVector) -> np.ndarray:
    """rho(v) = (1 + v.sigma)/2 as a 2x2 density matrix."""
    rho = 0.5 * (ID2 + v.vx * PAULIS[0] + v.vy * PAULIS[1] + v.vz * PAULIS[2])
    return rho


def polar_to_bloch(p: PolarCoords) -> BlochVector:
    st = math.sin(p.theta)
    return BlochVector(
        p.r * st * math.cos(p.phi),
        p.r * st * math.sin(p.phi),
        p.r * math.cos(p.theta),
    )


def bloch_to_polar(v: BlochVector) -> PolarCoords:
    r = v.norm
    if r < NORM_TOL:
        return PolarCoords(0.0, 0.0, 0.0)
    theta = math.acos(max(-1.0, min(1.0, v.vz / r)))
    if math.hypot(v.vx, v.vy) < NORM_TOL:
        return PolarCoords(r, theta, 0.0)
    phi = math.atan2(v.vy, v.vx) % (2 * math.pi)
    return PolarCoords(r, theta, phi)


def singlet() -> np.ndarray:
    """Projector onto (|01> - |10>)/sqrt(2) on probe x ancilla."""
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2)
    return np.outer(psi, psi.conj())


def _check_unitary(u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    u = as_cmatrix(u)
    if u.shape != (2, 2) or np.max(np.abs(dagger(u) @ u - ID2)) > tol:
        raise ValueError("expected a 2x2 unitary matrix")
    return u


def max_entangled(u, w) -> np.ndarray:
    """Projector onto (u^dag x w^dag)|singlet>; marginals are both 1/2."""
    u = _check_unitary(u)
    w = _check_unitary(w)
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2)
    psi = tensor(dagger(u), dagger(w)) @ psi.reshape(4, 1)
    return psi @ dagger(psi)


def probe_state(cfg: ProbeConfig) -> np.ndarray:
    """Input state of the probe: 2x2 pure state (NEA) or the singlet (EA)."""
    if cfg.entangled:
        return singlet()
    n = (math.sin(cfg.theta_a), 0.0, math.cos(cfg.theta_a))
    return 0.5 * (ID2 + n[0] * PAULIS[0] + n[1] * PAULIS[1] + n[2] * PAULIS[2])


def is_density(rho: np.ndarray, tol: float = 1e-10) -> bool:
    """Hermitian, unit trace, PSD up to roundoff."""
    rho = as_cmatrix(rho)
    if rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - dagger(rho))) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return float(np.linalg.eigvalsh(0.5 * (rho + dagger(rho))).min()) > -1e-9


__all__ = [
    "BlochVector",
    "PolarCoords",
    "ProbeConfig",
    "bloch_to_density",
    "polar_to_bloch",
    "bloch_to_polar",
    "singlet",
    "max_entangled",
    "probe_state",
    "is_density",
]
