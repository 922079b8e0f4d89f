"""Speed limits derived from the rate bounds, optimal states and orthogonality times."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._moments import mean_above_ground, std_dev
from .errors import DegenerateSpectrum, InvalidDistance, ZeroEnergy, ZeroVariance
from .evolution import DEFAULT_CONFIG
from .linalg_core import Config, Generator
from .metrics import distance_curve, distance_rate_fd_curve, fs_path_length_curve, overlap_curve
from .states import PureState, as_amplitudes

__all__ = [
    "SpeedLimitReport",
    "mt_time",
    "new_qsl_time",
    "ml_time",
    "generalized_qsl",
    "optimal_state",
    "orthogonality_time",
    "default_grid_points",
    "check_saturation",
    "speed_limit_report",
]

ZERO_TOL = 1e-12
GRID_TRIGGER = 1e-3
ORTHOGONAL_ACCEPT = 1e-6
SATURATION_RATE_TOL = 1e-5
GEODESIC_TOL = 1e-6


def _spread(g, psi) -> float:
    dk = std_dev(g, psi)
    if dk <= ZERO_TOL:
        raise ZeroVariance("state has zero spread in K; it never becomes orthogonal")
    return dk


def _energy(g, psi) -> float:
    e = mean_above_ground(g, psi)
    if e <= ZERO_TOL:
        raise ZeroEnergy("zero energy above ground")
    return e


def mt_time(g: Generator, psi, cfg: Config = DEFAULT_CONFIG) -> float:
    """Mandelstam-Tamm time ``(pi/2) hbar / dK``."""
    return 0.5 * math.pi * cfg.hbar / _spread(g, psi)


def new_qsl_time(g: Generator, psi, cfg: Config = DEFAULT_CONFIG) -> float:
    """``hbar / E`` with ``E = <K> - K_min``."""
    return cfg.hbar / _energy(g, psi)


def ml_time(g: Generator, psi, cfg: Config = DEFAULT_CONFIG) -> float:
    """Margolus-Levitin time ``(pi/2) hbar / E``, a factor ``pi/2`` above :func:`new_qsl_time`."""
    return 0.5 * math.pi * new_qsl_time(g, psi, cfg)


def generalized_qsl(g: Generator, psi, s_max: float, cfg: Config = DEFAULT_CONFIG) -> float:
    """Minimum parameter needed to travel statistical distance ``s_max``.

    ``2 sin^2(s_max / 4) hbar / E``; reduces to ``hbar / E`` at ``s_max = pi``.
    """
    if not (0.0 < s_max <= math.pi):
        raise InvalidDistance(f"s_max must lie in (0, pi], got {s_max!r}")
    return 2.0 * math.sin(0.25 * s_max) ** 2 * cfg.hbar / _energy(g, psi)


def optimal_state(g: Generator, phi: float = 0.0) -> PureState:
    """Equal superposition ``(|k_min> + e^{i phi} |k_max>) / sqrt(2)``.

    Rejects generators whose extreme eigenvalues are not simple, since the
    extreme eigenvectors are then not unique (rotate the basis first).
    """
    w = g.eigenvalues
    if g.dim < 2 or w[-1] - w[0] <= ZERO_TOL:
        raise DegenerateSpectrum("generator has a single distinct eigenvalue")
    if w[1] - w[0] <= ZERO_TOL or w[-1] - w[-2] <= ZERO_TOL:
        raise DegenerateSpectrum("extreme eigenvalues of the generator are degenerate")
    vecs = g.eigenvectors
    return PureState.normalized(vecs[:, 0] + np.exp(1j * phi) * vecs[:, -1])


def _refine_minimum(fun, grid, j):
    step = grid[1] - grid[0]
    right = grid[j + 1] if j + 1 < grid.size else grid[j] + step
    try:
        x = optimize.golden(fun, brack=(grid[j - 1], grid[j], right), tol=1e-12)
    except ValueError:
        # tied neighbours make the triple an invalid bracket
        x = optimize.minimize_scalar(fun, bounds=(grid[j - 1], right), method="bounded",
                                     options={"xatol": 1e-13}).x
    return float(x), float(fun(x))


def default_grid_points(g: Generator, psi0, theta_max: float, cfg: Config = DEFAULT_CONFIG) -> int:
    """Grid size whose spacing is at most ``1e-3 hbar / dK``.

    The overlap magnitude changes at most at rate ``dK / hbar``, so any exact
    zero then has a grid neighbour with overlap below ``5e-4``.
    """
    dk = std_dev(g, psi0)
    return max(2048, int(math.ceil(theta_max * dk / (cfg.hbar * 1e-3))) + 1)


def orthogonality_time(g: Generator, psi0, theta_max: float, grid_points: int | None = None,
                       cfg: Config = DEFAULT_CONFIG) -> float | None:
    """First parameter at which the evolved state is orthogonal to ``psi0``.

    Scans ``|<psi0|psi_theta>|`` on a uniform grid over ``[0, theta_max]``.
    Grid local minima below ``1e-3`` are refined by golden-section search in
    order; the first refined minimum below ``1e-6`` is returned.  Returns
    ``None`` when no such minimum exists.  Without ``grid_points`` the grid
    is fine enough that no exact zero can be missed.
    """
    if theta_max <= 0:
        raise ValueError("theta_max must be positive")
    if grid_points is None:
        grid_points = default_grid_points(g, psi0, theta_max, cfg)
    if grid_points < 16:
        raise ValueError("grid_points must be at least 16")
    v = as_amplitudes(psi0)
    grid = np.linspace(0.0, theta_max, grid_points)
    ov = overlap_curve(g, v, grid, cfg)
    if ov.min() >= GRID_TRIGGER:
        return None

    def fun(theta):
        return float(overlap_curve(g, v, [theta], cfg)[0])

    padded = np.concatenate([[np.inf], ov, [np.inf]])
    local_min = (ov <= padded[:-2]) & (ov <= padded[2:]) & (ov < GRID_TRIGGER)
    for j in np.flatnonzero(local_min):
        theta, value = _refine_minimum(fun, grid, int(j))
        if value < ORTHOGONAL_ACCEPT and theta <= theta_max * (1 + 1e-12):
            return theta
    return None


def _saturation_grid(g, psi0, cfg):
    period = mt_time(g, psi0, cfg)
    return np.linspace(0.0, period, 66)[1:-1]


def check_saturation(g: Generator, psi0, cfg: Config = DEFAULT_CONFIG) -> tuple[bool, bool]:
    """Whether ``psi0`` saturates the spread bound and moves along a geodesic.

    Both checks run on 64 interior points of ``(0, pi hbar / (2 dK))``:
    the finite-difference rate must equal ``2 dK / hbar`` within ``1e-5`` and
    the path length must equal the statistical distance within ``1e-6``.
    """
    thetas = _saturation_grid(g, psi0, cfg)
    bound = 2.0 * std_dev(g, psi0) / cfg.hbar
    rate = distance_rate_fd_curve(g, psi0, thetas, cfg)
    s = distance_curve(g, psi0, thetas, cfg)
    path = fs_path_length_curve(g, psi0, thetas, cfg)
    saturates = bool(np.all(np.abs(rate - bound) <= SATURATION_RATE_TOL))
    geodesic = bool(np.all(np.abs(path - s) <= GEODESIC_TOL))
    return saturates, geodesic


@dataclass(frozen=True)
class SpeedLimitReport:
    """Speed limits of one initial state.

    Fields are ``None`` when undefined; ``reasons`` then names the cause.
    """

    t_mt: float | None
    t_new: float | None
    t_ml: float | None
    s_max: float
    t_generalized: float | None
    t_orthogonal: float | None
    saturates_mt: bool
    saturates_ml: bool
    geodesic: bool
    reasons: dict = field(default_factory=dict)

    @property
    def ml_over_new(self) -> float | None:
        if self.t_ml is None or self.t_new is None:
            return None
        return self.t_ml / self.t_new

    def as_dict(self) -> dict:
        return {
            "t_mt": self.t_mt,
            "t_new": self.t_new,
            "t_ml": self.t_ml,
            "s_max": self.s_max,
            "t_generalized": self.t_generalized,
            "t_orthogonal": self.t_orthogonal,
            "ratio_t_ml_over_t_new": self.ml_over_new,
            "saturates_mt": self.saturates_mt,
            "saturates_ml": self.saturates_ml,
            "geodesic": self.geodesic,
            "reasons": dict(self.reasons),
        }


def speed_limit_report(g: Generator, psi0, cfg: Config = DEFAULT_CONFIG, s_max: float = math.pi,
                       theta_max: float | None = None,
                       grid_points: int | None = None) -> SpeedLimitReport:
    """Evaluate every speed limit and locate the orthogonality time.

    ``theta_max`` defaults to ``2 pi hbar / dK``, four times the
    Mandelstam-Tamm time.  An orthogonal state reached later is not reported.
    """
    reasons = {}
    t_mt = t_new = t_ml = t_gen = t_orth = None
    saturates_mt = geodesic = False
    try:
        t_mt = mt_time(g, psi0, cfg)
    except ZeroVariance:
        reasons["t_mt"] = "zero variance"
    try:
        t_new = new_qsl_time(g, psi0, cfg)
        t_ml = ml_time(g, psi0, cfg)
        t_gen = generalized_qsl(g, psi0, s_max, cfg)
    except ZeroEnergy:
        for key in ("t_new", "t_ml", "t_generalized"):
            reasons[key] = "zero energy above ground"

    if t_mt is not None:
        span = theta_max if theta_max is not None else 4.0 * t_mt
        t_orth = orthogonality_time(g, psi0, span, grid_points, cfg)
        saturates_mt, geodesic = check_saturation(g, psi0, cfg)
    if t_orth is None:
        reasons["t_orthogonal"] = "no orthogonal state reached"
    saturates_ml = (t_orth is not None and t_ml is not None
                    and abs(t_orth - t_ml) <= 1e-6 * max(1.0, t_ml))
    return SpeedLimitReport(
        t_mt=t_mt, t_new=t_new, t_ml=t_ml, s_max=s_max, t_generalized=t_gen,
        t_orthogonal=t_orth, saturates_mt=saturates_mt, saturates_ml=bool(saturates_ml),
        geodesic=geodesic, reasons=reasons,
    )
