"""Driven-dissipative Kerr chains in cascade.

Two independent solver paths for the same physics:

* full quantum: truncated-Fock Liouvillian, steady state, time evolution
  and Monte Carlo wave-function trajectories (:mod:`kerrcascade.liouvillian`,
  :mod:`kerrcascade.mcwf`, observables in :mod:`kerrcascade.observables`);
* semi-analytic: classical fixed points plus linearized polar fluctuations
  (:mod:`kerrcascade.meanfield`, :mod:`kerrcascade.fluctuations`).

The CLI front end (:mod:`kerrcascade.cli`) runs scenario files that sweep
either path over parameter grids and writes tabular results.
"""

__version__ = "0.1.0"

from .params import ChainParams
from .fock import DensityMatrix, FockDims, FockOperator

__all__ = [
    "ChainParams",
    "DensityMatrix",
    "FockDims",
    "FockOperator",
    "__version__",
]
