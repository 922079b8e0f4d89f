"""Upper bounds on the rate of change of the statistical distance.

Two families are provided:

* the spread bound ``ds/dtheta <= 2 dK / hbar``, valid for every ``theta``;
* the energy-above-ground bound
  ``ds/dtheta <= 2 (<K> - K_min) / (hbar sin(s/2))`` and its shifted form
  with ``<|K - kappa|>`` in place of ``<K> - K_min``.

The second family diverges as ``s -> 0``.  Below ``cfg.sing_margin`` the
functions return ``math.inf``; serializers write it as the string ``"inf"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._moments import expectation, mean_above_ground, mean_abs_shift, std_dev
from .evolution import DEFAULT_CONFIG
from .linalg_core import Config, Generator
from .metrics import distance_curve, distance_rate_fd_curve
from .states import as_amplitudes, check_dims

__all__ = [
    "BoundReport",
    "std_dev",
    "expectation",
    "mean_above_ground",
    "mean_abs_shift",
    "mt_rate_bound",
    "ml_rate_bound",
    "generalized_rate_bound",
    "resolve_kappa",
    "bound_reports",
    "BoundCurves",
    "bound_curves",
]


@dataclass(frozen=True)
class BoundReport:
    theta: float
    rate: float
    mt_bound: float
    ml_bound: float
    generalized_bound: float
    kappa: float
    holds_mt: bool
    holds_ml: bool
    holds_generalized: bool


def mt_rate_bound(g: Generator, psi, cfg: Config = DEFAULT_CONFIG) -> float:
    """``2 dK / hbar``."""
    return 2.0 * std_dev(g, psi) / cfg.hbar


def _inverse_sine_prefactor(s: np.ndarray, cfg: Config) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        pref = 2.0 / np.sin(s / 2.0)
    return np.where(s < cfg.sing_margin, np.inf, pref)


def _scaled(pref: np.ndarray, weight) -> np.ndarray:
    # keep the infinite flag when the weight is zero (ground state at s = 0)
    with np.errstate(invalid="ignore"):
        return np.where(np.isinf(pref), np.inf, pref * weight)


def ml_rate_bound(g: Generator, psi0, theta: float, cfg: Config = DEFAULT_CONFIG) -> float:
    if theta < 0:
        raise ValueError("theta must be non-negative")
    s = distance_curve(g, psi0, [theta], cfg)
    energy = mean_above_ground(g, psi0)
    return float(_scaled(_inverse_sine_prefactor(s, cfg), energy / cfg.hbar)[0])


def generalized_rate_bound(g: Generator, psi0, theta: float, kappa: float,
                           cfg: Config = DEFAULT_CONFIG) -> float:
    """Bound with ``<|K - kappa|>``; equals :func:`ml_rate_bound` at ``kappa = K_min``."""
    s = distance_curve(g, psi0, [theta], cfg)
    return float(_scaled(_inverse_sine_prefactor(s, cfg), mean_abs_shift(g, psi0, kappa) / cfg.hbar)[0])


def resolve_kappa(g: Generator, psi0, choice) -> float:
    """Map a named anchor (``k_min``, ``zero``, ``mean``, ``k_max``) or a number to ``kappa``."""
    if isinstance(choice, str):
        anchors = {
            "k_min": lambda: g.k_min,
            "zero": lambda: 0.0,
            "mean": lambda: expectation(g, psi0),
            "k_max": lambda: g.k_max,
        }
        try:
            return float(anchors[choice]())
        except KeyError:
            raise ValueError(f"unknown kappa anchor {choice!r}") from None
    return float(choice)


@dataclass(frozen=True)
class BoundCurves:
    """Vectorized bound comparison on a parameter grid.

    ``generalized`` has one row per entry of ``kappas``.  ``in_band`` marks
    grid points with ``s`` strictly inside ``(sing_margin, pi - sing_margin)``.
    """

    thetas: np.ndarray
    s: np.ndarray
    rate: np.ndarray
    mt_bound: float
    ml_bound: np.ndarray
    kappas: np.ndarray
    generalized: np.ndarray
    in_band: np.ndarray
    tol: float

    @property
    def mt_margin(self) -> np.ndarray:
        """Signed slack ``bound - rate``; negative means the rate exceeds the bound."""
        return self.mt_bound - self.rate

    @property
    def ml_margin(self) -> np.ndarray:
        return self.ml_bound - self.rate

    @property
    def generalized_margin(self) -> np.ndarray:
        return self.generalized - self.rate[None, :]

    @property
    def holds_mt(self) -> np.ndarray:
        return self.rate <= self.mt_bound + self.tol

    @property
    def holds_ml(self) -> np.ndarray:
        return self.rate <= self.ml_bound + self.tol

    @property
    def holds_generalized(self) -> np.ndarray:
        return self.rate[None, :] <= self.generalized + self.tol


def bound_curves(g: Generator, psi0, thetas, kappas=("k_min",),
                 cfg: Config = DEFAULT_CONFIG) -> BoundCurves:
    v = as_amplitudes(psi0)
    check_dims(g.dim, v.size)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    s = distance_curve(g, v, thetas, cfg)
    rate = distance_rate_fd_curve(g, v, thetas, cfg)
    pref = _inverse_sine_prefactor(s, cfg) / cfg.hbar
    kappa_values = np.array([resolve_kappa(g, v, k) for k in kappas], dtype=float)
    weights = np.array([mean_abs_shift(g, v, k) for k in kappa_values])
    band = (s > cfg.sing_margin) & (s < math.pi - cfg.sing_margin)
    return BoundCurves(
        thetas=thetas,
        s=s,
        rate=rate,
        mt_bound=mt_rate_bound(g, v, cfg),
        ml_bound=_scaled(pref, mean_above_ground(g, v)),
        kappas=kappa_values,
        generalized=_scaled(pref[None, :], weights[:, None]),
        in_band=band,
        tol=cfg.tol_bound,
    )


def bound_reports(curves: BoundCurves) -> list[BoundReport]:
    """Expand curves into one :class:`BoundReport` per grid point and ``kappa``."""
    reports = []
    holds_mt, holds_ml, holds_gen = curves.holds_mt, curves.holds_ml, curves.holds_generalized
    for j, kappa in enumerate(curves.kappas):
        for i, theta in enumerate(curves.thetas):
            reports.append(BoundReport(
                theta=float(theta),
                rate=float(curves.rate[i]),
                mt_bound=float(curves.mt_bound),
                ml_bound=float(curves.ml_bound[i]),
                generalized_bound=float(curves.generalized[j, i]),
                kappa=float(kappa),
                holds_mt=bool(holds_mt[i]),
                holds_ml=bool(holds_ml[i]),
                holds_generalized=bool(holds_gen[j, i]),
            ))
    return reports
