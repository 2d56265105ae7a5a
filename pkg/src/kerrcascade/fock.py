"""Linear algebra on truncated multimode Fock spaces.

Conventions used throughout the package:

* Each mode ``m`` is truncated to ``d_m`` levels, spanning ``|0> .. |d_m-1>``.
* Mode 0 is the slowest-varying (leftmost) tensor factor, i.e. the
  multimode basis index is ``n_0 * (d_1 * d_2 * ...) + n_1 * (d_2 * ...) + ...``.
  This matches a C-order reshape into one axis per mode.
* Operators may be stored sparse (CSR) or dense; the two storages are
  semantically identical and conversions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    ModeIndexError,
)

MatrixLike = Union[np.ndarray, sp.spmatrix]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-8


@dataclass(frozen=True)
class FockDims:
    """Per-mode truncation dimensions of a multimode Fock space."""

    per_mode: tuple[int, ...]

    def __init__(self, per_mode: Iterable[int]):
        dims = tuple(int(d) for d in per_mode)
        if len(dims) == 0:
            raise InvalidDimensionError("need at least one mode")
        for d in dims:
            if d < 2:
                raise InvalidDimensionError(
                    f"every truncation dimension must be >= 2, got {d}"
                )
        object.__setattr__(self, "per_mode", dims)

    @property
    def n_modes(self) -> int:
        return len(self.per_mode)

    @property
    def total(self) -> int:
        return prod(self.per_mode)

    def check_mode(self, mode: int) -> int:
        if not 0 <= mode < self.n_modes:
            raise ModeIndexError(
                f"mode {mode} out of range for {self.n_modes}-mode space"
            )
        return mode


def _as_2d(matrix: MatrixLike) -> MatrixLike:
    if sp.issparse(matrix):
        return matrix.tocsr()
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2:
        raise InvalidDimensionError("operator matrix must be 2-dimensional")
    return arr


class FockOperator:
    """A linear operator on a truncated multimode Fock space.

    Thin wrapper bundling the matrix (sparse or dense) with its
    :class:`FockDims`, plus the handful of algebraic operations the
    solvers need.
    """

    __slots__ = ("dims", "matrix")

    def __init__(self, dims: FockDims, matrix: MatrixLike):
        matrix = _as_2d(matrix)
        if matrix.shape != (dims.total, dims.total):
            raise DimensionMismatchError(
                f"matrix shape {matrix.shape} does not match total dimension "
                f"{dims.total}"
            )
        self.dims = dims
        self.matrix = matrix

    # -- storage ---------------------------------------------------------
    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def to_dense(self) -> "FockOperator":
        if self.is_sparse:
            return FockOperator(self.dims, self.matrix.toarray())
        return self

    def to_sparse(self) -> "FockOperator":
        if self.is_sparse:
            return self
        return FockOperator(self.dims, sp.csr_matrix(self.matrix))

    def array(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else self.matrix

    # -- algebra ---------------------------------------------------------
    def dag(self) -> "FockOperator":
        return FockOperator(self.dims, self.matrix.conj().T)

    def _check_match(self, other: "FockOperator") -> None:
        if self.dims.per_mode != other.dims.per_mode:
            raise DimensionMismatchError(
                f"operators live on different spaces: {self.dims.per_mode} vs "
                f"{other.dims.per_mode}"
            )

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            self._check_match(other)
            return FockOperator(self.dims, self.matrix @ other.matrix)
        return self.matrix @ other

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check_match(other)
        return FockOperator(self.dims, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._check_match(other)
        return FockOperator(self.dims, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "FockOperator":
        return FockOperator(self.dims, self.matrix * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "FockOperator":
        return FockOperator(self.dims, -self.matrix)

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"FockOperator(dims={self.dims.per_mode}, {kind})"


class DensityMatrix:
    """Quantum state of the chain on the truncated Fock space."""

    __slots__ = ("dims", "matrix")

    def __init__(self, dims: FockDims, matrix: MatrixLike):
        arr = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=complex)
        if arr.shape != (dims.total, dims.total):
            raise DimensionMismatchError(
                f"density matrix shape {arr.shape} does not match total "
                f"dimension {dims.total}"
            )
        self.dims = dims
        self.matrix = arr

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))[0])

    def validate(self, check_positivity: bool = True) -> "DensityMatrix":
        """Assert the physical-state invariants; returns self on success."""
        defect = self.hermiticity_defect()
        if defect > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian (defect {defect:.2e})")
        tr = self.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1")
        if check_positivity and self.min_eigenvalue() < POSITIVITY_TOL:
            raise ValueError(
                f"density matrix has negative eigenvalue {self.min_eigenvalue():.2e}"
            )
        return self

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, self.matrix.copy())

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims.per_mode})"


# ---------------------------------------------------------------------------
# single-mode building blocks
# ---------------------------------------------------------------------------

def destroy(d: int) -> FockOperator:
    """Single-mode annihilation operator, <n-1|a|n> = sqrt(n)."""
    if d < 2:
        raise InvalidDimensionError(f"truncation dimension must be >= 2, got {d}")
    data = np.sqrt(np.arange(1, d, dtype=float))
    mat = sp.diags(data, offsets=1, shape=(d, d), dtype=complex).tocsr()
    return FockOperator(FockDims((d,)), mat)


def create(d: int) -> FockOperator:
    """Single-mode creation operator."""
    return destroy(d).dag()


def number(d: int) -> FockOperator:
    """Single-mode number operator a†a."""
    return FockOperator(
        FockDims((d,)), sp.diags(np.arange(d, dtype=float), dtype=complex).tocsr()
    )


def identity(dims: FockDims, sparse: bool = True) -> FockOperator:
    mat = sp.identity(dims.total, dtype=complex, format="csr")
    return FockOperator(dims, mat if sparse else mat.toarray())


# ---------------------------------------------------------------------------
# multimode embedding
# ---------------------------------------------------------------------------

def embed(op: FockOperator, mode: int, dims: FockDims) -> FockOperator:
    """Lift a single-mode operator into the full tensor-product space.

    Produces ``1 ⊗ ... ⊗ op ⊗ ... ⊗ 1`` with ``op`` in slot ``mode``
    (mode 0 = leftmost/slowest-varying factor).
    """
    dims.check_mode(mode)
    d_op = op.dims.total
    if d_op != dims.per_mode[mode]:
        raise DimensionMismatchError(
            f"operator dimension {d_op} does not match mode {mode} truncation "
            f"{dims.per_mode[mode]}"
        )
    if op.is_sparse:
        result = sp.identity(1, dtype=complex, format="csr")
        for i, d in enumerate(dims.per_mode):
            factor = op.matrix if i == mode else sp.identity(d, dtype=complex, format="csr")
            result = sp.kron(result, factor, format="csr")
    else:
        result = np.eye(1, dtype=complex)
        for i, d in enumerate(dims.per_mode):
            factor = op.matrix if i == mode else np.eye(d, dtype=complex)
            result = np.kron(result, factor)
    return FockOperator(dims, result)


def mode_operators(dims: FockDims) -> list[FockOperator]:
    """Annihilation operator of every mode, embedded in the full space."""
    return [embed(destroy(d), m, dims) for m, d in enumerate(dims.per_mode)]


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def fock_state(dims: FockDims, occupations: Sequence[int]) -> np.ndarray:
    """State vector |n_0, n_1, ...> on the truncated space."""
    if len(occupations) != dims.n_modes:
        raise DimensionMismatchError(
            f"need {dims.n_modes} occupation numbers, got {len(occupations)}"
        )
    idx = 0
    for n, d in zip(occupations, dims.per_mode):
        if not 0 <= n < d:
            raise InvalidDimensionError(f"occupation {n} outside [0, {d})")
        idx = idx * d + n
    vec = np.zeros(dims.total, dtype=complex)
    vec[idx] = 1.0
    return vec


def vacuum_state(dims: FockDims) -> np.ndarray:
    return fock_state(dims, [0] * dims.n_modes)


def coherent_vector(d: int, alpha: complex) -> np.ndarray:
    """Truncated, renormalized coherent state |alpha> via the power series."""
    if alpha == 0:
        vec = np.zeros(d, dtype=complex)
        vec[0] = 1.0
        return vec
    from scipy.special import gammaln

    n = np.arange(d)
    log_amp = n * np.log(np.abs(alpha)) - 0.5 * gammaln(n + 1.0)
    vec = np.exp(log_amp) * np.exp(1j * n * np.angle(alpha))
    vec = vec.astype(complex)
    vec /= np.linalg.norm(vec)
    return vec


def dm_from_vector(dims: FockDims, psi: np.ndarray) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot form a state from the zero vector")
    psi = psi / nrm
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


# ---------------------------------------------------------------------------
# expectation values and reductions
# ---------------------------------------------------------------------------

def expect(rho: DensityMatrix, op: FockOperator) -> complex:
    """Tr(rho · op)."""
    if rho.dims.per_mode != op.dims.per_mode:
        raise DimensionMismatchError(
            f"state on {rho.dims.per_mode} but operator on {op.dims.per_mode}"
        )
    if op.is_sparse:
        # Tr(rho op) = sum_ij rho_ij op_ji
        return complex(op.matrix.multiply(rho.matrix.T).sum())
    return complex(np.sum(rho.matrix.T * op.matrix))


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state of a single mode, tracing out all others."""
    dims = rho.dims
    dims.check_mode(keep)
    n = dims.n_modes
    d = dims.per_mode[keep]
    if n == 1:
        return DensityMatrix(dims, rho.matrix.copy())
    tensor = rho.matrix.reshape(dims.per_mode + dims.per_mode)
    others = [m for m in range(n) if m != keep]
    perm = [keep, keep + n] + others + [m + n for m in others]
    rest = dims.total // d
    grouped = tensor.transpose(perm).reshape(d, d, rest, rest)
    return DensityMatrix(FockDims((d,)), np.trace(grouped, axis1=2, axis2=3))
