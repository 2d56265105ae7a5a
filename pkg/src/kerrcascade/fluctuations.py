"""Linearized quantum fluctuations around classical fixed points.

The fluctuations of each mode are written in scaled polar form,
``alpha_m = S_m (1 + u_m - i v_m)`` with ``u_m`` the relative intensity
fluctuation and ``v_m`` the phase fluctuation.  Linearizing the doubled
phase-space (positive-P) equations of motion of the cascade Kerr chain
around a stable fixed point gives a linear stochastic system

    dX = A X dt + dW,     <dW dW^T> = D dt,

with ``X = [u_0, v_0, u_1, v_1, ...]``.  Only the Kerr term contributes
noise; drive, decay and cascade coupling are noiseless in normal order,
so ``kerr = 0`` gives exactly vanishing covariance (coherent statistics).

Blocks, with ``w_m = delta + kerr*n_m``:

    A[m,m]   = [[-gamma,        -w_m  ],
                [ w_m + 2*kerr*n_m, -gamma]]
    A[m,m-1] = [[ gamma,  w_m],
                [ -w_m,  gamma]]          (cascade drive from upstream)
    D[m,m]   = [[0, kerr/2], [kerr/2, 0]]

The steady-state covariance solves ``A sigma + sigma A^T + D = 0``; the
normally-ordered variance ``<u_m^2>`` can be negative, which is exactly
what produces sub-Poissonian statistics: ``g2_m = 1 + 4 <u_m^2>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateExpansionError,
    ModeIndexError,
    SingularParameterError,
    UnstablePointError,
)
from .meanfield import ClassicalFixedPoint, amplitude_chain, population_chain
from .params import ChainParams

LYAPUNOV_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class FluctuationModel:
    """Drift, diffusion and steady-state covariance of the polar fluctuations."""

    point: ClassicalFixedPoint
    drift: np.ndarray
    diffusion: np.ndarray
    covariance: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.point.n_modes


def lyapunov_solve(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Unique symmetric solution of ``A sigma + sigma A^T + D = 0``.

    Solved by the vectorized Kronecker system; the matrices here are at
    most 6x6 so dense algebra is ample.  Requires ``A`` Hurwitz.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or D.shape != (n, n):
        raise ValueError("A and D must be square matrices of equal size")
    if np.max(np.abs(D - D.T)) > 1e-12 * max(1.0, np.max(np.abs(D))):
        raise ValueError("diffusion matrix must be symmetric")
    eigs = np.linalg.eigvals(A)
    if np.max(eigs.real) >= 0:
        raise UnstablePointError(
            f"drift matrix is not Hurwitz (max Re eig = {np.max(eigs.real):.3e})"
        )
    eye = np.eye(n)
    lhs = np.kron(eye, A) + np.kron(A, eye)
    sigma = np.linalg.solve(lhs, -D.reshape(-1)).reshape(n, n)
    sigma = 0.5 * (sigma + sigma.T)
    residual = np.max(np.abs(A @ sigma + sigma @ A.T + D))
    if residual > LYAPUNOV_RESIDUAL_TOL * max(1.0, np.max(np.abs(D))):
        raise UnstablePointError(
            f"Lyapunov solve residual {residual:.2e} above tolerance"
        )
    return sigma


def drift_matrix(populations, params: ChainParams) -> np.ndarray:
    """Block lower-bidiagonal drift of the linearized chain."""
    n_modes = len(populations)
    g, d, k = params.gamma, params.delta, params.kerr
    A = np.zeros((2 * n_modes, 2 * n_modes))
    for m, n in enumerate(populations):
        w = d + k * n
        i = 2 * m
        A[i, i] = -g
        A[i, i + 1] = -w
        A[i + 1, i] = w + 2 * k * n
        A[i + 1, i + 1] = -g
        if m > 0:
            j = 2 * (m - 1)
            A[i, j] = g
            A[i, j + 1] = w
            A[i + 1, j] = -w
            A[i + 1, j + 1] = g
    return A


def diffusion_matrix(n_modes: int, params: ChainParams) -> np.ndarray:
    """Kerr-only diffusion: intensity-phase cross noise on each mode block."""
    D = np.zeros((2 * n_modes, 2 * n_modes))
    half_k = params.kerr / 2.0
    for m in range(n_modes):
        i = 2 * m
        D[i, i + 1] = half_k
        D[i + 1, i] = half_k
    return D


def linearize(point: ClassicalFixedPoint, params: ChainParams) -> FluctuationModel:
    """Fluctuation model around a classical fixed point of the chain."""
    pops = point.populations
    if any(n <= 0 for n in pops):
        raise DegenerateExpansionError(
            "polar expansion requires every mode population > 0"
        )
    A = drift_matrix(pops, params)
    D = diffusion_matrix(len(pops), params)
    sigma = lyapunov_solve(A, D)  # raises UnstablePointError if not Hurwitz
    return FluctuationModel(point=point, drift=A, diffusion=D, covariance=sigma)


def g2_linearized(model: FluctuationModel, mode: int) -> float:
    """Equal-time second-order correlation of one mode, 1 + 4 <u_m^2>."""
    if not 0 <= mode < model.n_modes:
        raise ModeIndexError(f"mode {mode} out of range")
    return float(1.0 + 4.0 * model.covariance[2 * mode, 2 * mode])


def g2_single_mode_analytic(n1: float, delta: float, gamma: float, kerr: float) -> float:
    """Closed-form g2 of a single driven Kerr mode at population ``n1``."""
    w = delta + kerr * n1
    w3 = delta + 3.0 * kerr * n1
    denom = gamma**2 + w * w3
    if abs(denom) < 1e-12:
        raise SingularParameterError(
            "g2 closed form evaluated at a vanishing stability margin"
        )
    return float(1.0 - kerr * w / denom)


def normally_ordered_moments(model: FluctuationModel, modes: tuple[int, int]):
    """Normally-ordered fluctuation moments of a mode pair.

    Returns ``(nbar_a, nbar_b, m_ab)`` with ``nbar = <a†a> - <a†><a>`` and
    ``m_ab = <a_a a_b> - <a_a><a_b>`` reconstructed from the polar covariance
    and the classical amplitudes.
    """
    a, b = modes
    S = model.point.amplitudes
    sig = model.covariance

    def blk(m1, m2):
        return sig[2 * m1: 2 * m1 + 2, 2 * m2: 2 * m2 + 2]

    saa, sbb, sab = blk(a, a), blk(b, b), blk(a, b)
    nbar_a = abs(S[a]) ** 2 * (saa[0, 0] + saa[1, 1])
    nbar_b = abs(S[b]) ** 2 * (sbb[0, 0] + sbb[1, 1])
    # (u_a - i v_a)(u_b - i v_b) averaged
    m_ab = S[a] * S[b] * (
        sab[0, 0] - sab[1, 1] - 1j * (sab[0, 1] + sab[1, 0])
    )
    return float(nbar_a), float(nbar_b), complex(m_ab)


def duan_witness_linearized(model: FluctuationModel, modes: tuple[int, int] = (0, 1)) -> float:
    """Phase-optimized two-mode variance witness from the polar covariance.

    Values below 1 certify entanglement; a coherent product state sits
    exactly on the boundary.  Uses the quadrature normalization
    ``x = (a + a†)/2``.
    """
    a, b = modes
    if a == b:
        raise ModeIndexError("witness needs two distinct modes")
    for m in (a, b):
        if not 0 <= m < model.n_modes:
            raise ModeIndexError(f"mode {m} out of range")
    sig = model.covariance
    pops = model.point.populations
    n_a, n_b = pops[a], pops[b]
    saa = sig[2 * a, 2 * a] + sig[2 * a + 1, 2 * a + 1]
    sbb = sig[2 * b, 2 * b] + sig[2 * b + 1, 2 * b + 1]
    cross_re = sig[2 * a, 2 * b] - sig[2 * a + 1, 2 * b + 1]
    cross_im = sig[2 * a, 2 * b + 1] + sig[2 * a + 1, 2 * b]
    return float(
        1.0
        + n_a * saa
        + n_b * sbb
        - 2.0 * np.sqrt(n_a * n_b) * np.hypot(cross_re, cross_im)
    )


def duan_witness_moments(model: FluctuationModel, modes: tuple[int, int] = (0, 1)) -> float:
    """Same witness through the operator-moment route (consistency check)."""
    a, b = modes
    if a == b:
        raise ModeIndexError("witness needs two distinct modes")
    nbar_a, nbar_b, m_ab = normally_ordered_moments(model, modes)
    return float(1.0 + nbar_a + nbar_b - 2.0 * abs(m_ab))


# ---------------------------------------------------------------------------
# phase-space sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    """Dense grids of linearized observables over (n_last, delta)."""

    n_last: np.ndarray
    delta: np.ndarray
    populations: np.ndarray      # (n_modes, len(n_last), len(delta))
    g2: np.ndarray               # (n_modes, len(n_last), len(delta)), NaN where invalid
    entanglement: np.ndarray     # (len(n_last), len(delta)), NaN where invalid
    status: np.ndarray           # (len(n_last), len(delta)) str, "" = ok
    pair: tuple[int, int]

    def min_g2(self, mode: int) -> float:
        return float(np.nanmin(self.g2[mode]))

    def min_entanglement(self) -> float:
        return float(np.nanmin(self.entanglement))


def sweep_phase_space(n_last_grid, delta_grid, params: ChainParams,
                      n_modes: int | None = None,
                      pair: tuple[int, int] = (0, 1)) -> SweepResult:
    """Linearized observables over a (last-mode population, detuning) grid.

    Points where the polar expansion is degenerate (zero population) or the
    fixed point is not Hurwitz are reported with a reason string instead of
    being dropped.
    """
    n_modes = params.n_modes if n_modes is None else n_modes
    n_last_grid = np.asarray(n_last_grid, dtype=float)
    delta_grid = np.asarray(delta_grid, dtype=float)
    if n_last_grid.size == 0 or delta_grid.size == 0:
        raise ValueError("sweep grids must be nonempty")
    if np.any(n_last_grid < 0):
        raise ValueError("populations must be >= 0")

    shape = (n_last_grid.size, delta_grid.size)
    pops_out = np.full((n_modes,) + shape, np.nan)
    g2_out = np.full((n_modes,) + shape, np.nan)
    en_out = np.full(shape, np.nan)
    status = np.full(shape, "", dtype=object)

    want_pair = n_modes >= 2
    for j, delta in enumerate(delta_grid):
        p = ChainParams(
            n_modes=n_modes,
            gamma=params.gamma,
            kerr=params.kerr,
            delta=float(delta),
            drive=params.drive,
        )
        for i, n_last in enumerate(n_last_grid):
            pops = population_chain(float(n_last), p, n_modes)
            pops_out[:, i, j] = pops
            if n_last <= 0:
                status[i, j] = "degenerate-expansion: zero population"
                continue
            amps = amplitude_chain(float(n_last), p, n_modes)
            point = ClassicalFixedPoint(tuple(amps), tuple([True] * n_modes))
            try:
                model = linearize(point, p)
            except UnstablePointError:
                status[i, j] = "unstable-point: drift not Hurwitz"
                continue
            except DegenerateExpansionError:
                status[i, j] = "degenerate-expansion: zero population"
                continue
            for m in range(n_modes):
                g2_out[m, i, j] = g2_linearized(model, m)
            if want_pair:
                en_out[i, j] = duan_witness_linearized(model, pair)
    return SweepResult(
        n_last=n_last_grid,
        delta=delta_grid,
        populations=pops_out,
        g2=g2_out,
        entanglement=en_out,
        status=status,
        pair=pair,
    )
