"""Pure and mixed state containers with validation on construction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotDensityMatrix, NotNormalized

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector.

    Parameters
    ----------
    amplitudes : array_like
        Complex amplitudes; must have unit 2-norm within ``1e-10``.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1 or not np.all(np.isfinite(amps)):
            raise NotNormalized("amplitudes must be a non-empty finite vector")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> PureState:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise NotNormalized("zero vector cannot be normalized")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __len__(self):
        return self.dim


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density matrix: Hermitian, positive semidefinite, unit trace."""

    density: np.ndarray

    def __post_init__(self):
        rho = np.array(self.density, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or not np.all(np.isfinite(rho)):
            raise NotDensityMatrix("density must be a finite square matrix")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise NotDensityMatrix("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise NotDensityMatrix(f"trace {np.trace(rho).real!r} differs from 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise NotDensityMatrix("density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "density", rho)

    @classmethod
    def from_pure(cls, psi) -> MixedState:
        v = as_amplitudes(psi)
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return self.density.shape[0]


def as_amplitudes(psi) -> np.ndarray:
    """Return the amplitude vector of a ``PureState`` or array-like."""
    if isinstance(psi, PureState):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex).reshape(-1)


def as_pure_state(psi) -> PureState:
    return psi if isinstance(psi, PureState) else PureState(psi)


def check_dims(*dims: int) -> int:
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"dimensions do not match: {dims}")
    return dims[0]
