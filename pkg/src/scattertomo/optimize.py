"""Maximization of QFI over probe momentum Omega and orientation theta_a.

The objectives are cheap closed forms, so every search is a dense bracket
scan followed by golden-section refinement of each grid-local maximum; no
unimodality is assumed. Momentum grids are logarithmic: the QFI vanishes at
both ends of the bracket, so optima are interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .closedform import ea_cr, nea_qfi
from .scatter import DetectionMode

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_OMEGA_BRACKET = (0.05, 10.0)


class ConvergenceError(RuntimeError):
    """An optimization failed to converge within its iteration budget."""


@dataclass(frozen=True)
class OptResult:
    """Outcome of a QFI maximization."""

    argmax: tuple[tuple[str, float], ...]
    value: float
    iterations: int
    converged: bool

    def param(self, name: str) -> float:
        for key, val in self.argmax:
            if key == name:
                return val
        raise KeyError(name)


@dataclass(frozen=True)
class EnvelopePoint:
    """Best QFI over the probe controls at one target parameter value."""

    v_z: float
    best_qfi: float
    omega_star: float
    theta_a_star: Optional[float] = None


def _golden_max(f, lo: float, hi: float, stop, max_iter: int = 300):
    """Golden-section maximization on [lo, hi]; returns (x, f(x), evals, ok)."""
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    evals = 2
    while not stop(lo, hi):
        if evals >= max_iter:
            return (c, fc, evals, False) if fc >= fd else (d, fd, evals, False)
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
        evals += 1
    return (c, fc, evals, True) if fc >= fd else (d, fd, evals, True)


def _grid_local_maxima(ys: np.ndarray) -> list[int]:
    """Indices that dominate their neighbors; plateaus keep the first index."""
    n = len(ys)
    out = []
    for i in range(n):
        left = ys[i - 1] if i > 0 else -math.inf
        right = ys[i + 1] if i < n - 1 else -math.inf
        if ys[i] >= left and ys[i] >= right:
            if i > 0 and ys[i] == ys[i - 1]:
                continue
            out.append(i)
    return out


def maximize_1d(objective: Callable[[float], float], bracket: tuple[float, float],
                tol: float = 1e-8, n_grid: int = 64, log_grid: bool = True,
                name: str = "x") -> OptResult:
    """Maximize a scalar objective on a bracket.

    A dense scan (log-spaced when the bracket is positive) locates every local
    maximum; each is refined by golden section and the best refined candidate
    is returned. Ties go to the smaller argument.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValueError(f"degenerate bracket ({lo}, {hi})")
    use_log = log_grid and lo > 0.0
    xs = np.geomspace(lo, hi, n_grid) if use_log else np.linspace(lo, hi, n_grid)
    ys = np.array([float(objective(x)) for x in xs])
    if not np.all(np.isfinite(ys)):
        bad = xs[~np.isfinite(ys)][0]
        raise ValueError(f"objective is not finite at {name}={bad}")

    to_u = math.log if use_log else (lambda x: x)
    from_u = math.exp if use_log else (lambda u: u)

    def f_u(u: float) -> float:
        val = float(objective(from_u(u)))
        if not math.isfinite(val):
            raise ValueError(f"objective is not finite at {name}={from_u(u)}")
        return val

    def stop(ua: float, ub: float) -> bool:
        mid = from_u(0.5 * (ua + ub))
        return from_u(ub) - from_u(ua) <= tol * (1.0 + abs(mid))

    candidates = sorted(_grid_local_maxima(ys), key=lambda i: (-ys[i], i))[:16]
    best = None
    iterations = 0
    converged = True
    for i in candidates:
        ua = to_u(float(xs[max(i - 1, 0)]))
        ub = to_u(float(xs[min(i + 1, n_grid - 1)]))
        if ua == ub:
            x, fx = float(xs[i]), float(ys[i])
        else:
            u, fx, evals, ok = _golden_max(f_u, ua, ub, stop)
            x = from_u(u)
            iterations += evals
            converged = converged and ok
        if best is None or fx > best[1] or (fx == best[1] and x < best[0]):
            best = (x, fx)
    assert best is not None
    return OptResult(((name, best[0]),), best[1], iterations, converged)


def maximize_nea(v_z: float, omega_bracket: tuple[float, float] = DEFAULT_OMEGA_BRACKET,
                 mode: DetectionMode = DetectionMode.BOTH,
                 grid: tuple[int, int] = (181, 121), tol: float = 1e-8) -> OptResult:
    """Best unentangled-probe QFI over (theta_a, Omega) at a z-axis target.

    Coarse vectorized grid over theta_a in [0, pi] x log Omega, then
    coordinate-descent golden refinement of each grid-local maximum. Among
    near-equal optima the smallest theta_a is returned.
    """
    if not abs(v_z) < 1.0:
        raise ValueError("v_z must satisfy |v_z| < 1")
    lo, hi = float(omega_bracket[0]), float(omega_bracket[1])
    if not (0.0 < lo < hi) or not math.isfinite(hi):
        raise ValueError(f"degenerate omega bracket ({lo}, {hi})")
    n_theta, n_omega = grid
    thetas = np.linspace(0.0, math.pi, n_theta)
    u_lo, u_hi = math.log(lo), math.log(hi)
    us = np.linspace(u_lo, u_hi, n_omega)
    surface = nea_qfi(v_z, thetas[:, None], np.exp(us)[None, :], mode)
    if not np.all(np.isfinite(surface)):
        raise ValueError("QFI surface is not finite on the scan grid")

    padded = np.pad(surface, 1, constant_values=-math.inf)
    local = ((surface >= padded[:-2, 1:-1]) & (surface >= padded[2:, 1:-1])
             & (surface >= padded[1:-1, :-2]) & (surface >= padded[1:-1, 2:]))
    order = [(-(surface[i, j]), i, j) for i, j in zip(*np.nonzero(local))]
    order.sort()
    candidates = [(i, j) for _, i, j in order[:6]]

    w_theta = 2.0 * math.pi / (n_theta - 1)
    w_u = 2.0 * (u_hi - u_lo) / (n_omega - 1)

    def objective(theta: float, u: float) -> float:
        return float(nea_qfi(v_z, theta, math.exp(u), mode))

    results = []
    iterations = 0
    converged = True
    for i, j in candidates:
        theta, u = float(thetas[i]), float(us[j])
        ok_all = True
        for _ in range(40):
            t_stop = lambda a, b: (b - a) <= tol * (1.0 + theta)
            theta_new, _, ev1, ok1 = _golden_max(
                lambda t: objective(t, u),
                max(0.0, theta - w_theta), min(math.pi, theta + w_theta), t_stop)
            u_stop = lambda a, b: math.exp(b) - math.exp(a) <= tol * (1.0 + math.exp(0.5 * (a + b)))
            u_new, val, ev2, ok2 = _golden_max(
                lambda uu: objective(theta_new, uu),
                max(u_lo, u - w_u), min(u_hi, u + w_u), u_stop)
            iterations += ev1 + ev2
            ok_all = ok_all and ok1 and ok2
            moved = max(abs(theta_new - theta),
                        abs(math.exp(u_new) - math.exp(u)) / (1.0 + math.exp(u_new)))
            theta, u = theta_new, u_new
            if moved <= 10.0 * tol:
                break
        else:
            ok_all = False
        converged = converged and ok_all
        results.append((theta, math.exp(u), val))

    best_val = max(res[2] for res in results)
    near = [res for res in results if res[2] >= best_val - 1e-9 * (1.0 + abs(best_val))]
    theta_star, omega_star, value = min(near, key=lambda res: res[0])
    return OptResult((("theta_a", theta_star), ("omega", omega_star)),
                     value, iterations, converged)


def ea_zaxis_qfi(v_z, omega, mode: DetectionMode):
    """Entanglement-assisted single-parameter QFI for a z-axis target.

    Equals the zz entry of the cartesian EA matrix at (0, 0, v_z), i.e. the
    radial coefficient continued to r -> v_z; even in v_z. Broadcasts.
    """
    return ea_cr(np.abs(v_z), omega, mode)


def ea_envelope_point(v_z: float, mode: DetectionMode,
                      omega_bracket: tuple[float, float] = DEFAULT_OMEGA_BRACKET,
                      tol: float = 1e-8) -> EnvelopePoint:
    """Best EA QFI over Omega at one z-axis target value."""
    res = maximize_1d(lambda om: float(ea_zaxis_qfi(v_z, om, mode)),
                      omega_bracket, tol=tol, name="omega")
    return EnvelopePoint(v_z, res.value, res.param("omega"))


def nea_envelope_point(v_z: float, mode: DetectionMode,
                       omega_bracket: tuple[float, float] = DEFAULT_OMEGA_BRACKET,
                       tol: float = 1e-8) -> EnvelopePoint:
    """Best NEA QFI over (theta_a, Omega) at one z-axis target value."""
    res = maximize_nea(v_z, omega_bracket, mode, tol=tol)
    return EnvelopePoint(v_z, res.value, res.param("omega"), res.param("theta_a"))


def ea_optimality_intervals(mode: DetectionMode, r_grid: Optional[Sequence[float]] = None,
                            omega_bracket: tuple[float, float] = DEFAULT_OMEGA_BRACKET,
                            tol: float = 1e-8) -> tuple[float, float]:
    """Range spanned by the per-radius optimal momentum of the radial QFI."""
    if r_grid is None:
        r_grid = np.linspace(0.0, 0.99, 50)
    stars = []
    for r in r_grid:
        res = maximize_1d(lambda om: float(ea_cr(float(r), om, mode)),
                          omega_bracket, tol=tol, name="omega")
        stars.append(res.param("omega"))
    return (min(stars), max(stars))
