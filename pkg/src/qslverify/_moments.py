"""Moments of a generator in a pure state, computed in its eigenbasis."""
from __future__ import annotations

import math

import numpy as np

from .linalg_core import Generator
from .states import as_amplitudes, check_dims


def populations(g: Generator, psi) -> np.ndarray:
    v = as_amplitudes(psi)
    check_dims(g.dim, v.size)
    return g.populations(v)


def expectation(g: Generator, psi) -> float:
    p = populations(g, psi)
    return float(p @ g.eigenvalues / p.sum())


def std_dev(g: Generator, psi) -> float:
    # centred second moment: avoids the cancellation in <K^2> - <K>^2
    p = populations(g, psi)
    p = p / p.sum()
    mean = p @ g.eigenvalues
    return math.sqrt(max(float(p @ (g.eigenvalues - mean) ** 2), 0.0))


def mean_above_ground(g: Generator, psi) -> float:
    p = populations(g, psi)
    return max(float(p @ (g.eigenvalues - g.k_min) / p.sum()), 0.0)


def mean_abs_shift(g: Generator, psi, kappa: float) -> float:
    """``<|K - kappa|>`` through the spectral decomposition."""
    p = populations(g, psi)
    return float(p @ np.abs(g.eigenvalues - kappa) / p.sum())
