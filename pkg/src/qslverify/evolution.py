"""Unitary evolution of pure and mixed states, phase freedom and purification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NotDensityMatrix
from .linalg_core import Config, Generator, eig_hermitian, spectral_function
from .states import MixedState, PureState, as_amplitudes, check_dims

__all__ = [
    "PhaseShift",
    "evolution_operator",
    "evolve",
    "evolve_many",
    "evolve_shifted",
    "evolve_mixed",
    "purify",
    "partial_trace_second",
    "lift_generator",
    "PureState",
    "MixedState",
]

DEFAULT_CONFIG = Config()


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PhaseShift:
    """Phase ``f(K, theta) = h(K) + g(theta)`` applied to an evolved state.

    ``h`` acts eigenvalue-wise on the spectrum of the generator and ``g`` on
    the scalar parameter.  ``kappa`` records the constant of the linear choice
    ``g(theta) = kappa * theta / hbar`` when that choice is used.
    """

    h: Callable = _zero
    g: Callable = _zero
    kappa: float | None = None

    @classmethod
    def linear(cls, kappa: float, hbar: float = 1.0) -> PhaseShift:
        """``g(theta) = kappa * theta / hbar``; shifts the generator to ``K - kappa``."""
        return cls(g=lambda theta: kappa * theta / hbar, kappa=kappa)

    @classmethod
    def ground(cls, gen: Generator, hbar: float = 1.0) -> PhaseShift:
        return cls.linear(gen.k_min, hbar)


def evolution_operator(g: Generator, theta: float, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """``exp(-i K theta / hbar)`` built from the eigendecomposition."""
    return spectral_function(g, lambda w: np.exp(-1j * w * theta / cfg.hbar))


def evolve(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> PureState:
    """Return ``exp(-i K theta / hbar) |psi0>``."""
    v = as_amplitudes(psi0)
    check_dims(g.dim, v.size)
    return PureState(evolution_operator(g, theta, cfg) @ v)


def evolve_many(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """Evolved amplitudes for every entry of ``thetas``, shape ``(len(thetas), d)``."""
    v = as_amplitudes(psi0)
    check_dims(g.dim, v.size)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    vecs = g.eigenvectors
    coeffs = vecs.conj().T @ v
    phases = np.exp(-1j * np.outer(thetas, g.eigenvalues) / cfg.hbar)
    return (phases * coeffs) @ vecs.T


def evolve_shifted(g: Generator, psi0, theta: float, shift: PhaseShift,
                   cfg: Config = DEFAULT_CONFIG) -> PureState:
    """Evolve and multiply by ``exp(i (h(K) + g(theta)))``.

    With ``shift = PhaseShift.ground(g)`` the result is
    ``exp(-i (K - K_min) theta / hbar) |psi0>``.
    """
    psi = evolve(g, psi0, theta, cfg).amplitudes
    rephase = spectral_function(g, lambda w: np.exp(1j * np.asarray(shift.h(w), dtype=float)))
    global_phase = np.exp(1j * float(shift.g(theta)))
    return PureState(global_phase * (rephase @ psi))


def evolve_mixed(g: Generator, rho0: MixedState, theta: float,
                 cfg: Config = DEFAULT_CONFIG) -> MixedState:
    check_dims(g.dim, rho0.dim)
    u = evolution_operator(g, theta, cfg)
    rho = u @ rho0.density @ u.conj().T
    # restore exact Hermiticity lost to round-off in the two products
    return MixedState(0.5 * (rho + rho.conj().T))


def partial_trace_second(psi, d: int) -> np.ndarray:
    """Reduced density matrix of the first factor of a ``d x d`` bipartite pure state."""
    m = as_amplitudes(psi).reshape(d, d)
    return m @ m.conj().T


def purify(rho: MixedState) -> PureState:
    """Canonical purification ``sum_i sqrt(p_i) |i> (x) |i>``.

    The eigenbasis of ``rho`` is used on both factors, ordered by descending
    eigenvalue.  Terms with weight below ``1e-14`` are left out but the
    returned vector always has dimension ``d**2``.
    """
    if not isinstance(rho, MixedState):
        try:
            rho = MixedState(rho)
        except Exception as exc:
            raise NotDensityMatrix(str(exc)) from exc
    dec = eig_hermitian(rho.density)
    weights = dec.eigenvalues[::-1]
    vecs = dec.eigenvectors[:, ::-1]
    weights = np.where(np.abs(weights) <= 1e-10, np.maximum(weights, 0.0), weights)
    weights = np.where(np.abs(weights - 1.0) <= 1e-10, np.minimum(weights, 1.0), weights)
    if np.any(weights < 0):
        raise NotDensityMatrix("density matrix has a negative eigenvalue")

    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for p, v in zip(weights, vecs.T):
        if p < 1e-14:
            continue
        psi += math.sqrt(p) * np.kron(v, v)
    return PureState.normalized(psi)


def lift_generator(g: Generator, d: int | None = None) -> Generator:
    """Return ``K (x) I_d`` with its eigendecomposition assembled directly.

    The eigenpairs of the lift are ``(lambda_i, v_i (x) e_j)``, so each
    ``lambda_i`` appears ``d`` times in a row and the ordering stays ascending.
    """
    d = g.dim if d is None else d
    eye = np.eye(d)
    matrix = np.kron(g.matrix, eye)
    vals = np.repeat(g.eigenvalues, d)
    vecs = np.kron(g.eigenvectors, eye)
    return Generator(matrix=matrix, eigenvalues=vals, eigenvectors=vecs)
