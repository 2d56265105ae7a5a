"""Physical description of a cascade of Kerr modes.

Parameter conventions (fixed here, used consistently by every solver):

* ``delta`` is the cavity-pump detuning entering the rotating-frame
  classical equation as ``dS/dt = -(gamma + i*(delta + kerr*|S|^2)) S + ...``,
  so the Kerr term shifts the effective detuning upward for ``kerr > 0``.
* ``gamma`` is the amplitude decay rate: the classical field of an undriven
  mode decays as ``exp(-gamma * t)`` (its population as ``exp(-2*gamma*t)``).
* ``kerr`` is the coefficient of ``|S|^2 S`` in the classical equation; the
  corresponding quantum Hamiltonian term is ``(kerr/2) a†a†aa``.
* ``drive`` is the constant pump amplitude ``f`` applied to mode 0 only,
  entering as ``-i f`` in the classical equation.
* ``eta`` collects the cascade coupling efficiencies; only the first
  superdiagonal (mode m driving mode m+1) is used by the chain topology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChainParams:
    """Parameters of an N-mode cascade of identical Kerr modes."""

    n_modes: int
    gamma: float
    kerr: float = 0.0
    delta: float = 0.0
    drive: float = 0.0
    eta: np.ndarray | None = None

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.drive < 0:
            raise ValueError("drive must be >= 0")
        eta = self.eta
        if eta is None:
            eta = np.zeros((self.n_modes, self.n_modes))
            for m in range(self.n_modes - 1):
                eta[m, m + 1] = 1.0
        else:
            eta = np.atleast_2d(np.asarray(eta, dtype=float))
            if eta.shape != (self.n_modes, self.n_modes):
                raise ValueError(
                    f"eta must be an {self.n_modes}x{self.n_modes} matrix"
                )
            if np.any(eta < 0) or np.any(eta > 1):
                raise ValueError("coupling efficiencies must lie in [0, 1]")
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)

    def chain_eta(self) -> np.ndarray:
        """Coupling efficiencies along the chain, eta[m] for m -> m+1."""
        return np.array([self.eta[m, m + 1] for m in range(self.n_modes - 1)])

    def is_perfect_chain(self) -> bool:
        """True when every chain coupling has efficiency 1 and no others."""
        expected = np.zeros_like(self.eta)
        for m in range(self.n_modes - 1):
            expected[m, m + 1] = 1.0
        return bool(np.array_equal(self.eta, expected))

    def with_drive(self, drive: float) -> "ChainParams":
        return ChainParams(
            n_modes=self.n_modes,
            gamma=self.gamma,
            kerr=self.kerr,
            delta=self.delta,
            drive=drive,
            eta=np.array(self.eta),
        )
