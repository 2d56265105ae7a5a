"""Classical fixed points of the cascade chain.

Each mode obeys a cubic steady-state equation for its population
``n = |S|^2``::

    mode 0:    n * (gamma^2 + (delta + kerr*n)^2) = drive^2
    mode m>0:  n * (gamma^2 + (delta + kerr*n)^2) = gamma^2 * n_prev

Since ``d(drive^2)/dn = gamma^2 + (delta + kerr*n)(delta + 3*kerr*n)``,
the positive-slope branches are the dynamically stable ones, and folds
(bistability) exist only when the detuning opposes the Kerr shift:
``delta <= -sqrt(3)*gamma`` for ``kerr > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ChainParams

RESIDUAL_TOL = 1e-10
IMAG_ROOT_TOL = 1e-9
FOLD_FLAG_TOL = 1e-7


@dataclass(frozen=True)
class ClassicalFixedPoint:
    """Mean-field amplitudes of the chain at steady state."""

    amplitudes: tuple[complex, ...]
    stable: tuple[bool, ...]

    @property
    def populations(self) -> tuple[float, ...]:
        return tuple(abs(s) ** 2 for s in self.amplitudes)

    @property
    def n_modes(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True)
class ModeBranch:
    """One real root of a single mode's steady-state cubic."""

    amplitude: complex
    population: float
    stable: bool
    near_fold: bool
    residual: float


def _stability_margin(n: float, params: ChainParams) -> float:
    w = params.delta + params.kerr * n
    w3 = params.delta + 3.0 * params.kerr * n
    return params.gamma**2 + w * w3


def _polish_root(n: float, coeffs: np.ndarray) -> float:
    # a few Newton steps on the cubic; keeps residuals comfortably < 1e-10
    poly = np.polynomial.Polynomial(coeffs[::-1])
    dpoly = poly.deriv()
    for _ in range(4):
        f = poly(n)
        df = dpoly(n)
        if df == 0:
            break
        step = f / df
        n -= step
        if abs(step) < 1e-16 * max(1.0, abs(n)):
            break
    return n


def _population_roots(rhs: float, params: ChainParams) -> list[float]:
    """Real nonnegative roots of n*(gamma^2 + (delta + kerr*n)^2) = rhs."""
    g, d, k = params.gamma, params.delta, params.kerr
    if rhs <= 0:
        return [0.0] if rhs == 0 else []
    if k == 0:
        return [rhs / (g**2 + d**2)]
    # k^2 n^3 + 2 d k n^2 + (g^2 + d^2) n - rhs = 0
    coeffs = np.array([k**2, 2 * d * k, g**2 + d**2, -rhs])
    roots = np.roots(coeffs)  # companion-matrix eigenvalues
    out = []
    for r in roots:
        if abs(r.imag) < IMAG_ROOT_TOL * max(1.0, abs(r.real)):
            n = _polish_root(float(r.real), coeffs)
            if n >= 0:
                out.append(n)
    out.sort()
    # collapse numerically duplicated roots (double root exactly at a fold)
    dedup: list[float] = []
    for n in out:
        if not dedup or abs(n - dedup[-1]) > 1e-9 * max(1.0, n):
            dedup.append(n)
    return dedup


def _branch(n: float, rhs: float, drive_amp: complex, params: ChainParams) -> ModeBranch:
    g, d, k = params.gamma, params.delta, params.kerr
    w = d + k * n
    denom = g + 1j * w
    amplitude = drive_amp / denom
    residual = abs(n * (g**2 + w**2) - rhs)
    margin = _stability_margin(n, params)
    return ModeBranch(
        amplitude=complex(amplitude),
        population=n,
        stable=bool(margin > 0),
        near_fold=bool(abs(margin) < FOLD_FLAG_TOL),
        residual=residual,
    )


def solve_first_mode(f: float, params: ChainParams) -> list[ModeBranch]:
    """All steady-state branches of the driven mode, S = -i f / (gamma + i w)."""
    if f < 0:
        raise ValueError("drive amplitude must be >= 0")
    roots = _population_roots(f**2, params)
    return [_branch(n, f**2, -1j * f, params) for n in roots]


def solve_next_mode(s_prev: complex, params: ChainParams) -> list[ModeBranch]:
    """Branches of a mode driven in cascade, S = gamma*s_prev / (gamma + i w)."""
    rhs = params.gamma**2 * abs(s_prev) ** 2
    roots = _population_roots(rhs, params)
    return [_branch(n, rhs, params.gamma * s_prev, params) for n in roots]


def fixed_point_from_first(f: float, params: ChainParams, n_modes: int | None = None,
                           branch_rule: str = "lowest") -> ClassicalFixedPoint:
    """Walk the chain downstream from a chosen branch of the first mode.

    ``branch_rule`` selects among multiple stable branches per mode:
    "lowest" / "highest" population.
    """
    n_modes = params.n_modes if n_modes is None else n_modes
    take = (lambda bs: bs[0]) if branch_rule == "lowest" else (lambda bs: bs[-1])
    amplitudes = []
    stable = []
    branches = [b for b in solve_first_mode(f, params) if b.stable] or \
        solve_first_mode(f, params)
    b = take(branches)
    amplitudes.append(b.amplitude)
    stable.append(b.stable)
    for _ in range(1, n_modes):
        branches = [x for x in solve_next_mode(amplitudes[-1], params) if x.stable] or \
            solve_next_mode(amplitudes[-1], params)
        b = take(branches)
        amplitudes.append(b.amplitude)
        stable.append(b.stable)
    return ClassicalFixedPoint(tuple(amplitudes), tuple(stable))


def population_chain(n_last: float, params: ChainParams, n_modes: int) -> list[float]:
    """Populations of the whole chain given the population of the last mode.

    Walking upstream through ``n_prev = (1 + (delta + kerr*n)^2 / gamma^2) * n``
    is single-valued, which makes phase-space sweeps free of branch ambiguity.
    Returned in chain order ``[n_0, ..., n_last]``.
    """
    if n_last < 0:
        raise ValueError("population must be >= 0")
    g, d, k = params.gamma, params.delta, params.kerr
    pops = [float(n_last)]
    for _ in range(n_modes - 1):
        n = pops[-1]
        w = d + k * n
        pops.append((1.0 + (w / g) ** 2) * n)
    return pops[::-1]


def amplitude_chain(n_last: float, params: ChainParams, n_modes: int) -> list[complex]:
    """Amplitude lift of :func:`population_chain` (last mode taken real > 0)."""
    pops = population_chain(n_last, params, n_modes)
    g, d, k = params.gamma, params.delta, params.kerr
    amps = [0j] * n_modes
    amps[-1] = complex(np.sqrt(pops[-1]))
    # upstream amplitudes from S_next = gamma * S_prev / (gamma + i w_next)
    for m in range(n_modes - 2, -1, -1):
        w_next = d + k * pops[m + 1]
        amps[m] = amps[m + 1] * (g + 1j * w_next) / g
    return amps


def drive_for_population(n_first: float, params: ChainParams) -> float:
    """Pump amplitude that places the first mode at population ``n_first``."""
    w = params.delta + params.kerr * n_first
    return float(np.sqrt(n_first * (params.gamma**2 + w**2)))


def bistability_scan(f_grid, params: ChainParams, n_modes: int | None = None):
    """All branch combinations along a drive grid, for hysteresis plots.

    Returns a list of rows, one per (f, branch combination), each a dict with
    the drive, per-mode populations, and per-mode stability flags.
    """
    n_modes = params.n_modes if n_modes is None else n_modes
    f_grid = np.asarray(f_grid, dtype=float)
    if f_grid.size == 0:
        raise ValueError("f_grid must be nonempty")
    if np.any(f_grid < 0):
        raise ValueError("f_grid must be nonnegative")
    rows = []
    for f in f_grid:
        stack = [((), b) for b in solve_first_mode(float(f), params)]
        # depth-first expansion of branch combinations down the chain
        complete = []
        while stack:
            prefix, branch = stack.pop()
            chain = prefix + (branch,)
            if len(chain) == n_modes:
                complete.append(chain)
                continue
            for nxt in solve_next_mode(branch.amplitude, params):
                stack.append((chain, nxt))
        for chain in sorted(complete, key=lambda c: tuple(b.population for b in c)):
            rows.append(
                {
                    "drive": float(f),
                    "populations": tuple(b.population for b in chain),
                    "stable": tuple(b.stable for b in chain),
                    "near_fold": tuple(b.near_fold for b in chain),
                }
            )
    return rows


def swept_stable_curve(f_grid, params: ChainParams, mode: int,
                       n_modes: int | None = None) -> np.ndarray:
    """Upward-sweep hysteresis curve: follow the stable solution continuously.

    At each drive value the stable branch combination closest (in the swept
    mode's population) to the previous point is kept, which reproduces the
    jumps of an adiabatic upward sweep.
    """
    n_modes = params.n_modes if n_modes is None else n_modes
    f_grid = np.asarray(f_grid, dtype=float)
    curve = np.empty(f_grid.size)
    prev = 0.0
    for i, f in enumerate(f_grid):
        rows = bistability_scan([f], params, n_modes)
        candidates = [r["populations"][mode] for r in rows if all(r["stable"])]
        if not candidates:
            candidates = [r["populations"][mode] for r in rows]
        curve[i] = min(candidates, key=lambda n: abs(n - prev))
        prev = curve[i]
    return curve


def count_sweep_jumps(f_grid, params: ChainParams, mode: int,
                      n_modes: int | None = None, rel_tol: float = 0.25) -> int:
    """Number of discontinuities in the upward-swept stable curve."""
    curve = swept_stable_curve(f_grid, params, mode, n_modes)
    jumps = 0
    for i in range(1, curve.size):
        prev, cur = curve[i - 1], curve[i]
        scale = max(prev, cur, 1e-12)
        if cur - prev > rel_tol * scale:
            jumps += 1
    return jumps
