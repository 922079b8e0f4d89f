"""Distances between pure states along a unitary orbit and their rates of change.

The Wootters angle is evaluated as ``atan2(||b - <a|b> a||, |<a|b>|)``
rather than ``arccos|<a|b>|``.  Both agree in exact arithmetic; the arctangent
form keeps full relative accuracy for nearly parallel states, which is where
finite-difference rates are taken near ``theta = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._moments import std_dev
from .errors import ConservationError, NearSingular, SingularOverlap
from .evolution import DEFAULT_CONFIG, evolve, evolve_many
from .linalg_core import Config, Generator
from .states import as_amplitudes, check_dims

__all__ = [
    "DistanceSample",
    "overlap",
    "wootters_distance",
    "statistical_distance",
    "overlap_derivative",
    "distance_rate_analytic",
    "distance_rate_fd",
    "fs_path_length",
    "fs_path_length_curve",
    "distance_sample",
    "overlap_curve",
    "distance_curve",
    "distance_rate_fd_curve",
    "overlap_derivative_curve",
]

SINGULAR_OVERLAP = 1e-10
CONSERVATION_TOL = 1e-10


@dataclass(frozen=True)
class DistanceSample:
    theta: float
    overlap: float
    s_w: float
    s: float
    ds_dtheta_analytic: float | None  # None where the analytic formula is singular
    ds_dtheta_fd: float
    path_length: float


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    va, vb = as_amplitudes(a), as_amplitudes(b)
    check_dims(va.size, vb.size)
    return va, vb


def overlap(a, b) -> float:
    """``|<a|b>|`` clamped to ``[0, 1]``."""
    va, vb = _pair(a, b)
    return min(abs(np.vdot(va, vb)), 1.0)


def wootters_distance(a, b) -> float:
    """Angle between two pure states, in ``[0, pi/2]``."""
    va, vb = _pair(a, b)
    z = np.vdot(va, vb)
    perp = np.linalg.norm(vb - z * va)
    return math.atan2(perp, min(abs(z), 1.0))


def statistical_distance(a, b) -> float:
    """Twice the Wootters angle, in ``[0, pi]``."""
    return 2.0 * wootters_distance(a, b)


def _wootters_rows(a: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = rows @ a.conj()
    perp = np.linalg.norm(rows - z[:, None] * a[None, :], axis=1)
    mag = np.minimum(np.abs(z), 1.0)
    return mag, np.arctan2(perp, mag)


def overlap_curve(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """``|<psi0|psi_theta>|`` on an array of parameters."""
    v = as_amplitudes(psi0)
    mag, _ = _wootters_rows(v, evolve_many(g, v, thetas, cfg))
    return mag


def distance_curve(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """Statistical distance ``s(theta)`` on an array of parameters."""
    v = as_amplitudes(psi0)
    _, sw = _wootters_rows(v, evolve_many(g, v, thetas, cfg))
    return 2.0 * sw


def _overlap_derivative_rows(g, v, thetas, cfg):
    states = evolve_many(g, v, thetas, cfg)
    z = states @ v.conj()
    k_states = states @ g.matrix.T  # rows are K|psi_theta>
    kz = k_states @ v.conj()  # <psi0|K|psi_theta>
    return z, np.imag(kz * z.conj()) / (cfg.hbar * np.maximum(np.abs(z), 1e-300))


def overlap_derivative(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> float:
    """Exact derivative of ``theta -> |<psi0|psi_theta>|``.

    Uses ``Im(<psi0|K|psi_theta> <psi_theta|psi0>) / (hbar |z|)`` with
    ``z = <psi0|psi_theta>``.

    Raises
    ------
    SingularOverlap
        If ``|z| <= 1e-10``, where the magnitude is not differentiable.
    """
    v = as_amplitudes(psi0)
    check_dims(g.dim, v.size)
    z, deriv = _overlap_derivative_rows(g, v, [theta], cfg)
    if abs(z[0]) <= SINGULAR_OVERLAP:
        raise SingularOverlap(f"|<psi0|psi_theta>| = {abs(z[0]):.3e} at theta={theta}")
    return float(deriv[0])


def overlap_derivative_curve(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG):
    """Overlap magnitudes and their derivatives; derivative is NaN where singular."""
    v = as_amplitudes(psi0)
    check_dims(g.dim, v.size)
    z, deriv = _overlap_derivative_rows(g, v, thetas, cfg)
    mag = np.minimum(np.abs(z), 1.0)
    return mag, np.where(mag > SINGULAR_OVERLAP, deriv, np.nan)


def distance_rate_analytic(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> float:
    """``ds/dtheta = -2 (d|z|/dtheta) / sqrt(1 - |z|^2)``.

    Refused with :class:`NearSingular` unless ``s`` lies strictly inside
    ``(sing_margin, pi - sing_margin)``.
    """
    v = as_amplitudes(psi0)
    psi = evolve(g, v, theta, cfg)
    s = statistical_distance(v, psi)
    if not (cfg.sing_margin < s < math.pi - cfg.sing_margin):
        raise NearSingular(f"s = {s:.6g} outside the admissible band at theta={theta}")
    return -2.0 * overlap_derivative(g, v, theta, cfg) / math.sin(s / 2.0)


def distance_rate_fd_curve(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """Finite-difference ``ds/dtheta``: central, or forward when ``theta < fd_step``."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    h = cfg.fd_step
    forward = thetas < h
    lo = np.where(forward, thetas, thetas - h)
    hi = thetas + h
    span = np.where(forward, h, 2.0 * h)
    s = distance_curve(g, psi0, np.concatenate([lo, hi]), cfg)
    n = thetas.size
    return (s[n:] - s[:n]) / span


def distance_rate_fd(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> float:
    return float(distance_rate_fd_curve(g, psi0, [theta], cfg)[0])


def fs_path_length(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> float:
    """Fubini-Study length ``2 dK theta / hbar`` of the orbit up to ``theta``.

    The closed form relies on the spread of ``K`` being conserved; this is
    checked at ``theta/2`` and ``theta`` before it is used.
    """
    if theta < 0:
        raise ValueError("theta must be non-negative")
    v = as_amplitudes(psi0)
    dk = std_dev(g, v)
    for t in (0.5 * theta, theta):
        drift = abs(std_dev(g, evolve(g, v, t, cfg)) - dk)
        if drift > CONSERVATION_TOL:
            raise ConservationError(f"spread of K drifted by {drift:.3e} at theta={t}")
    return 2.0 * dk * theta / cfg.hbar


def fs_path_length_curve(g: Generator, psi0, thetas, cfg: Config = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorized :func:`fs_path_length`; conservation is checked at the largest ``theta``."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if np.any(thetas < 0):
        raise ValueError("theta must be non-negative")
    if thetas.size:
        fs_path_length(g, psi0, float(thetas.max()), cfg)
    return 2.0 * std_dev(g, psi0) * thetas / cfg.hbar


def distance_sample(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> DistanceSample:
    v = as_amplitudes(psi0)
    psi = evolve(g, v, theta, cfg)
    sw = wootters_distance(v, psi)
    try:
        analytic = distance_rate_analytic(g, v, theta, cfg)
    except (NearSingular, SingularOverlap):
        analytic = None
    return DistanceSample(
        theta=float(theta),
        overlap=overlap(v, psi),
        s_w=sw,
        s=2.0 * sw,
        ds_dtheta_analytic=analytic,
        ds_dtheta_fd=distance_rate_fd(g, v, theta, cfg),
        path_length=fs_path_length(g, v, theta, cfg),
    )
