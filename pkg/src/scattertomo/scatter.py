"""Heisenberg-coupling 1D scattering channel and its post-scattering states.

The probe momentum enters only through the dimensionless Omega = m*g/(hbar|k|).
The channel output is kept as a list of labeled positive blocks living on
mutually orthogonal sectors (spin sectors plus no-click vacuum flags); total
trace is 1 and the Fisher information is additive over blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .smallmat import ID2, PAULIS, SIGMA_DOT_SIGMA, as_cmatrix, dagger, partial_trace, tensor
from .states import BlochVector, ProbeConfig, bloch_to_density, probe_state

TRACE_TOL = 1e-12
PSD_TOL = -1e-12


class DetectionMode(Enum):
    """Which scattered signals the detectors keep."""

    TRANSMISSION = "t"
    REFLECTION = "r"
    BOTH = "both"


class BlockLabel(Enum):
    TRANSMITTED_SPIN = "transmitted_spin"
    REFLECTED_SPIN = "reflected_spin"
    VACUUM_RHS = "vacuum_rhs"  # nothing reached the right-hand detector
    VACUUM_LHS = "vacuum_lhs"  # nothing reached the left-hand detector


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Spin-dependent transmission/reflection amplitudes at momentum Omega."""

    omega: float
    alpha_t: complex
    beta_t: complex
    alpha_r: complex
    beta_r: complex


def amplitudes(omega: float) -> ScatteringAmplitudes:
    """Amplitudes alpha_t, beta_t, alpha_r, beta_r (= beta_t) at Omega > 0."""
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0.0:
        raise ValueError(f"omega must be a positive finite number, got {omega}")
    den = (1.0 - 3.0j * omega) * (1.0 + 1.0j * omega)
    alpha_t = (1.0 - 2.0j * omega) / den
    beta_t = -1.0j * omega / den
    alpha_r = -3.0 * omega**2 / den
    return ScatteringAmplitudes(omega, alpha_t, beta_t, alpha_r, beta_t)


def s_matrices(omega: float) -> tuple[np.ndarray, np.ndarray]:
    """4x4 transmission/reflection operators on target x probe.

    S = alpha + beta (sigma_X . sigma_A); together they satisfy
    St^ St + Sr^ Sr = 1 and St^ Sr + Sr^ St = 0.
    """
    a = amplitudes(omega)
    eye4 = np.eye(4, dtype=complex)
    s_t = a.alpha_t * eye4 + a.beta_t * SIGMA_DOT_SIGMA
    s_r = a.alpha_r * eye4 + a.beta_r * SIGMA_DOT_SIGMA
    return s_t, s_r


@dataclass(frozen=True)
class BranchState:
    """Post-scattering state as labeled positive blocks with total trace 1."""

    blocks: tuple[tuple[BlockLabel, np.ndarray], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.blocks]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate block labels")
        total = 0.0
        for lab, op in self.blocks:
            op = as_cmatrix(op)
            if np.max(np.abs(op - dagger(op))) > 1e-10:
                raise ValueError(f"block {lab} is not Hermitian")
            lam_min = float(np.linalg.eigvalsh(0.5 * (op + dagger(op))).min())
            if lam_min < PSD_TOL:
                raise ValueError(f"block {lab} has negative eigenvalue {lam_min:.3e}")
            total += float(np.trace(op).real)
        if abs(total - 1.0) > TRACE_TOL:
            raise ValueError(f"block traces sum to {total}, expected 1")

    @property
    def labels(self) -> tuple[BlockLabel, ...]:
        return tuple(lab for lab, _ in self.blocks)

    def block(self, label: BlockLabel) -> np.ndarray:
        for lab, op in self.blocks:
            if lab is label:
                return op
        raise KeyError(label)


@dataclass(frozen=True)
class BranchDerivatives:
    """Per-axis block derivatives aligned with a BranchState's labels.

    ``per_axis[j][i]`` is the derivative of block i with respect to v_j,
    j running over (x, y, z). Each axis's block traces sum to zero.
    """

    labels: tuple[BlockLabel, ...]
    per_axis: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        if len(self.per_axis) != 3:
            raise ValueError("expected derivative blocks for the three axes")
        for axis_blocks in self.per_axis:
            if len(axis_blocks) != len(self.labels):
                raise ValueError("derivative blocks misaligned with labels")
            total = sum(float(np.trace(b).real) for b in axis_blocks)
            if abs(total) > TRACE_TOL:
                raise ValueError(f"derivative traces sum to {total}, expected 0")


def _branch_blocks(rho_x: np.ndarray, rho_in: np.ndarray, omega: float,
                   mode: DetectionMode) -> list[tuple[BlockLabel, np.ndarray]]:
    """Unvalidated channel application; rho_x may be any 2x2 operator."""
    s_t, s_r = s_matrices(omega)
    d_in = rho_in.shape[0]
    if d_in == 4:  # entangled probe: scatter acts on X,A only
        s_t = tensor(s_t, ID2)
        s_r = tensor(s_r, ID2)
        dims = [2, 2, 2]
    elif d_in == 2:
        dims = [2, 2]
    else:
        raise ValueError(f"probe input must be 2x2 or 4x4, got {rho_in.shape}")
    full = tensor(rho_x, rho_in)
    keep = list(range(1, len(dims)))
    transmitted = partial_trace(s_t @ full @ dagger(s_t), dims, keep)
    reflected = partial_trace(s_r @ full @ dagger(s_r), dims, keep)

    if mode is DetectionMode.BOTH:
        return [(BlockLabel.TRANSMITTED_SPIN, transmitted),
                (BlockLabel.REFLECTED_SPIN, reflected)]

    def lose_probe(block: np.ndarray) -> np.ndarray:
        # the particle missed this detector: trace out the probe spin, keeping
        # the ancilla marginal (EA) or just the no-click probability (NEA)
        if d_in == 2:
            return np.array([[np.trace(block)]], dtype=complex)
        return partial_trace(block, [2, 2], [1])

    if mode is DetectionMode.TRANSMISSION:
        return [(BlockLabel.TRANSMITTED_SPIN, transmitted),
                (BlockLabel.VACUUM_RHS, lose_probe(reflected))]
    if mode is DetectionMode.REFLECTION:
        return [(BlockLabel.REFLECTED_SPIN, reflected),
                (BlockLabel.VACUUM_LHS, lose_probe(transmitted))]
    raise ValueError(f"unknown detection mode {mode}")


def apply_channel_to_input(rho_x: np.ndarray, rho_in: np.ndarray, omega: float,
                           mode: DetectionMode) -> BranchState:
    """Scatter target state rho_x against an explicit probe input state."""
    rho_x = as_cmatrix(rho_x)
    if rho_x.shape != (2, 2):
        raise ValueError("target state must be 2x2")
    if np.max(np.abs(rho_x - dagger(rho_x))) > 1e-10 or abs(np.trace(rho_x) - 1.0) > 1e-10:
        raise ValueError("target state must be Hermitian with unit trace")
    return BranchState(tuple(_branch_blocks(rho_x, as_cmatrix(rho_in), omega, mode)))


def channel_derivatives_for_input(rho_in: np.ndarray, omega: float,
                                  mode: DetectionMode) -> BranchDerivatives:
    """Exact block derivatives for an explicit probe input state.

    The channel is affine in the target's Bloch vector with d rho_x/d v_j =
    sigma_j / 2, so the derivative blocks are the block maps applied to
    sigma_j / 2; they do not depend on v.
    """
    rho_in = as_cmatrix(rho_in)
    per_axis = []
    labels: tuple[BlockLabel, ...] = ()
    for sigma in PAULIS:
        blocks = _branch_blocks(0.5 * sigma, rho_in, omega, mode)
        labels = tuple(lab for lab, _ in blocks)
        per_axis.append(tuple(0.5 * (op + dagger(op)) for _, op in blocks))
    return BranchDerivatives(labels, tuple(per_axis))


def apply_channel(rho_x: np.ndarray, probe: ProbeConfig, omega: float,
                  mode: DetectionMode) -> BranchState:
    """Post-scattering branch state for the configured probe strategy."""
    return apply_channel_to_input(rho_x, probe_state(probe), omega, mode)


def channel_derivatives(probe: ProbeConfig, omega: float,
                        mode: DetectionMode) -> BranchDerivatives:
    """Block derivatives for the configured probe strategy (v-independent)."""
    return channel_derivatives_for_input(probe_state(probe), omega, mode)


def direct_branches(v: BlochVector) -> tuple[BranchState, BranchDerivatives]:
    """Identity-channel encoding for direct (not probe-mediated) estimation."""
    state = BranchState(((BlockLabel.TRANSMITTED_SPIN, bloch_to_density(v)),))
    derivs = BranchDerivatives(
        (BlockLabel.TRANSMITTED_SPIN,),
        tuple((0.5 * sigma,) for sigma in PAULIS),
    )
    return state, derivs
