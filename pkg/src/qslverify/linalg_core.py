"""Dense Hermitian linear algebra for small generators.

The eigensolver is a cyclic complex Jacobi iteration; matrices handled here
are at most a few dozen rows, where Jacobi is unconditionally stable and
produces eigenvectors orthonormal to working precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NoConvergence, NotHermitian
from .states import PureState

__all__ = [
    "Config",
    "Generator",
    "eig_hermitian",
    "spectral_function",
    "random_hermitian",
    "random_pure_state",
    "as_rng",
]

HERMITIAN_RTOL = 1e-12
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class Config:
    """Global numerical settings.

    ``sing_margin`` is the half-width of the band around ``s = 0`` and
    ``s = pi`` where the analytic distance rate is refused and the
    expectation-value bound is reported as infinite.
    """

    hbar: float = 1.0
    fd_step: float = 1e-6
    sing_margin: float = 0.01
    tol_bound: float = 1e-4
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("hbar", "fd_step", "sing_margin", "tol_bound"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"Config.{name} must be a positive finite number, got {value!r}")
        if self.sing_margin >= math.pi / 2:
            raise ValueError("Config.sing_margin must be below pi/2")
        if self.rng_seed < 0:
            raise ValueError("Config.rng_seed must be non-negative")


@dataclass(frozen=True, eq=False)
class Generator:
    """Hermitian generator together with its ascending eigendecomposition.

    Build instances with :func:`eig_hermitian`; the constructor trusts its
    arguments.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("matrix", "eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def k_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def k_max(self) -> float:
        return float(self.eigenvalues[-1])

    def populations(self, psi) -> np.ndarray:
        """Weights ``|<v_i|psi>|^2`` of a state in the eigenbasis."""
        c = self.eigenvectors.conj().T @ np.asarray(psi, dtype=complex)
        return np.abs(c) ** 2


def _check_hermitian(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NotHermitian(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotHermitian("matrix has non-finite entries")
    scale = np.max(np.abs(m))
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_RTOL * scale:
        raise NotHermitian("matrix is not Hermitian")


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eig_hermitian(m) -> Generator:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it.  Sweeps
    stop once the off-diagonal Frobenius norm falls below ``1e-14 * ||M||``.

    Raises
    ------
    NotHermitian
        If ``m`` is not square, finite and Hermitian to relative ``1e-12``.
    NoConvergence
        If 100 sweeps do not reach the threshold.
    """
    m = np.array(m, dtype=complex)
    _check_hermitian(m)
    # symmetrize away the tolerated asymmetry so rotations see an exact Hermitian matrix
    a = 0.5 * (m + m.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_RTOL * np.linalg.norm(a)

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(tau * tau + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ rot
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        if _off_norm(a) > threshold:
            raise NoConvergence(f"Jacobi iteration exceeded {JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return Generator(matrix=m, eigenvalues=w[order], eigenvectors=v[:, order])


def spectral_function(g: Generator, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Return ``sum_i f(lambda_i) v_i v_i^dagger``.

    ``f`` is called once with the full eigenvalue array and must act
    elementwise.
    """
    fw = np.asarray(f(g.eigenvalues), dtype=complex)
    vecs = g.eigenvectors
    return (vecs * fw) @ vecs.conj().T


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def random_hermitian(d: int, seed) -> Generator:
    """GUE-style generator ``(A + A^dagger)/2`` with unit-variance complex entries in ``A``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    a = _complex_normal(as_rng(seed), (d, d))
    return eig_hermitian(0.5 * (a + a.conj().T))


def random_pure_state(d: int, seed) -> PureState:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return PureState.normalized(_complex_normal(as_rng(seed), d))
