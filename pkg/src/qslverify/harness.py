"""Randomized verification campaigns over seeded problem instances.

Every instance draws from its own stream ``default_rng([seed, index])``, so
the instance set does not depend on grid size, on which campaign runs, or
on the number of worker threads.  Results are kept in index order.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._moments import mean_above_ground, std_dev
from .bounds import BoundCurves, bound_curves, bound_reports
from .evolution import DEFAULT_CONFIG, MixedState, lift_generator, purify
from .linalg_core import Config, Generator, random_hermitian, random_pure_state
from .metrics import overlap_derivative, overlap_derivative_curve
from .speed_limits import optimal_state, speed_limit_report
from .states import as_amplitudes

__all__ = [
    "CampaignSpec",
    "CampaignResult",
    "InstanceResult",
    "Violation",
    "instance_rng",
    "random_instance",
    "random_mixed_state",
    "run_bound_campaign",
    "run_counterexample_campaign",
    "run_purified_campaign",
    "run_saturation_survey",
    "canonical_json",
]

KAPPA_ANCHORS = ("k_min", "zero", "mean", "k_max")
SMALL_THETA = 1e-4
MIN_SPREAD = 1e-6
MOMENT_TOL = 1e-10


@dataclass(frozen=True)
class CampaignSpec:
    """Parameters of a campaign.

    ``theta_span`` is ``"mt_period"`` (grid over ``[0, pi hbar / (2 dK)]``
    per instance) or a positive number used as a fixed upper limit.
    """

    n_instances: int = 500
    dims: tuple = (2, 3, 4, 5, 6, 7, 8)
    grid_points: int = 256
    theta_span: str | float = "mt_period"
    kappa_choices: tuple = KAPPA_ANCHORS
    seed: int = 42

    def __post_init__(self):
        if self.n_instances < 1:
            raise ValueError("n_instances must be at least 1")
        if self.grid_points < 16:
            raise ValueError("grid_points must be at least 16")
        if not self.dims or any(int(d) < 2 for d in self.dims):
            raise ValueError("dims must be a non-empty list of integers >= 2")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.theta_span != "mt_period":
            if isinstance(self.theta_span, str) or not float(self.theta_span) > 0:
                raise ValueError("theta_span must be 'mt_period' or a positive number")
        for k in self.kappa_choices:
            if isinstance(k, str) and k not in KAPPA_ANCHORS:
                raise ValueError(f"unknown kappa anchor {k!r}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "kappa_choices", tuple(self.kappa_choices))

    def as_dict(self) -> dict:
        return {
            "n_instances": self.n_instances,
            "dims": list(self.dims),
            "grid_points": self.grid_points,
            "theta_span": self.theta_span,
            "kappa_choices": list(self.kappa_choices),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Violation:
    instance: int
    theta: float
    bound: str
    margin: float

    def as_dict(self) -> dict:
        return {"instance": self.instance, "theta": self.theta,
                "bound": self.bound, "margin": self.margin}


@dataclass
class InstanceResult:
    index: int
    dim: int
    delta_k: float
    energy: float
    curves: BoundCurves | None = None
    violations: list = field(default_factory=list)
    record: dict = field(default_factory=dict)

    def reports(self):
        return [] if self.curves is None else bound_reports(self.curves)

    def as_dict(self) -> dict:
        out = {"index": self.index, "dim": self.dim,
               "delta_k": self.delta_k, "energy": self.energy}
        out.update(self.record)
        return out


@dataclass
class CampaignResult:
    kind: str
    spec: CampaignSpec
    instances: list
    violations: list
    counterexample_records: list
    summary: dict

    def as_dict(self, include_instances: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "spec": self.spec.as_dict(),
            "summary": self.summary,
            "violations": [v.as_dict() for v in self.violations],
            "counterexample_records": self.counterexample_records,
        }
        if include_instances:
            out["instances"] = [r.as_dict() for r in self.instances]
        return out


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return x
    return obj


def canonical_json(obj) -> str:
    """Sorted-key JSON; infinities become the string ``"inf"``."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def random_instance(spec: CampaignSpec, index: int) -> tuple[Generator, np.ndarray]:
    rng = instance_rng(spec.seed, index)
    d = spec.dims[int(rng.integers(len(spec.dims)))]
    g = random_hermitian(d, rng)
    psi = random_pure_state(d, rng)
    return g, psi.amplitudes


def random_mixed_state(d: int, rng: np.random.Generator, components: int = 3) -> MixedState:
    """Mixture of seeded random pure states with flat Dirichlet weights."""
    weights = rng.dirichlet(np.ones(components))
    rho = np.zeros((d, d), dtype=complex)
    for w in weights:
        v = random_pure_state(d, rng).amplitudes
        rho += w * np.outer(v, v.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return MixedState(rho / np.trace(rho).real)


def _theta_grid(spec: CampaignSpec, delta_k: float, cfg: Config) -> np.ndarray:
    if spec.theta_span == "mt_period":
        span = 0.5 * math.pi * cfg.hbar / delta_k if delta_k > MIN_SPREAD else 1.0
    else:
        span = float(spec.theta_span)
    return np.linspace(0.0, span, spec.grid_points)


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_bounds(index: int, g: Generator, psi, spec: CampaignSpec, cfg: Config) -> InstanceResult:
    dk = std_dev(g, psi)
    curves = bound_curves(g, psi, _theta_grid(spec, dk, cfg), spec.kappa_choices, cfg)
    band = curves.in_band
    violations = [Violation(index, float(curves.thetas[i]), "mt", float(curves.mt_margin[i]))
                  for i in np.flatnonzero(~curves.holds_mt)]
    violations += [Violation(index, float(curves.thetas[i]), "ml", float(curves.ml_margin[i]))
                   for i in np.flatnonzero(~curves.holds_ml & band)]
    gen_fail = ~curves.holds_generalized & band[None, :]
    for j, i in zip(*np.nonzero(gen_fail)):
        violations.append(Violation(index, float(curves.thetas[i]),
                                    f"generalized[kappa={curves.kappas[j]!r}]",
                                    float(curves.generalized_margin[j, i])))

    def worst(margins):
        finite = margins[np.isfinite(margins)]
        return float(finite.min()) if finite.size else math.inf

    record = {
        "worst_margin_mt": worst(curves.mt_margin),
        "worst_margin_ml": worst(curves.ml_margin[band]),
        "worst_margin_generalized": worst(curves.generalized_margin[:, band]),
        "band_points": int(band.sum()),
        "kappas": [float(k) for k in curves.kappas],
        "violations": len(violations),
    }
    return InstanceResult(index=index, dim=g.dim, delta_k=dk,
                          energy=mean_above_ground(g, psi), curves=curves,
                          violations=violations, record=record)


def _bound_summary(results: list, violations: list) -> dict:
    def worst(key):
        vals = [r.record[key] for r in results if math.isfinite(r.record[key])]
        return min(vals) if vals else math.inf

    by_kind = {}
    for v in violations:
        kind = v.bound.split("[")[0]
        by_kind[kind] = by_kind.get(kind, 0) + 1
    return {
        "instances": len(results),
        "comparisons": int(sum(r.curves.thetas.size for r in results)),
        "band_comparisons": int(sum(r.record["band_points"] for r in results)),
        "violation_count": len(violations),
        "violations_by_bound": by_kind,
        "worst_margin_mt": worst("worst_margin_mt"),
        "worst_margin_ml": worst("worst_margin_ml"),
        "worst_margin_generalized": worst("worst_margin_generalized"),
    }


def run_bound_campaign(spec: CampaignSpec, cfg: Config = DEFAULT_CONFIG,
                       instances: Sequence | None = None, workers: int = 1) -> CampaignResult:
    """Compare the finite-difference rate against every bound on each grid.

    The spread bound is checked at every grid point; the energy bounds only
    where ``s`` lies in the admissible band.  ``instances`` optionally
    replaces the random draw with explicit ``(generator, state)`` pairs.
    """
    if instances is None:
        def task(i):
            g, psi = random_instance(spec, i)
            return _check_bounds(i, g, psi, spec, cfg)
        indices = range(spec.n_instances)
    else:
        def task(i):
            g, psi = instances[i]
            return _check_bounds(i, g, as_amplitudes(psi), spec, cfg)
        indices = range(len(instances))

    results = _map(task, indices, workers)
    violations = [v for r in results for v in r.violations]
    return CampaignResult("bound", spec, results, violations, [],
                          _bound_summary(results, violations))


def _counterexample(index: int, g: Generator, psi, spec: CampaignSpec, cfg: Config) -> InstanceResult:
    dk = std_dev(g, psi)
    result = InstanceResult(index=index, dim=g.dim, delta_k=dk, energy=mean_above_ground(g, psi))
    if dk <= MIN_SPREAD:
        result.record = {"skipped": "stationary"}
        return result
    small = overlap_derivative(g, psi, SMALL_THETA, cfg)
    record = {"theta": SMALL_THETA, "derivative": small, "negative": small < 0.0,
              "positive_theta": None, "positive_derivative": None}
    # search past the first grid span so the overlap has room to turn around
    grid = _theta_grid(spec, dk, cfg)
    search = np.linspace(0.0, 4.0 * grid[-1], 4 * spec.grid_points)[1:]
    _, deriv = overlap_derivative_curve(g, psi, search, cfg)
    positive = np.flatnonzero(np.nan_to_num(deriv, nan=0.0) > 1e-12)
    if positive.size:
        k = int(positive[0])
        record["positive_theta"] = float(search[k])
        record["positive_derivative"] = float(deriv[k])
    if not record["negative"]:
        result.violations.append(Violation(index, SMALL_THETA, "negative_derivative", small))
    result.record = record
    return result


def run_counterexample_campaign(spec: CampaignSpec, cfg: Config = DEFAULT_CONFIG,
                                instances: Sequence | None = None,
                                workers: int = 1) -> CampaignResult:
    """Show that the overlap magnitude falls at small ``theta`` and rises elsewhere.

    Instances with spread at most ``1e-6`` are stationary and skipped.
    """
    if instances is None:
        def task(i):
            g, psi = random_instance(spec, i)
            return _counterexample(i, g, psi, spec, cfg)
        indices = range(spec.n_instances)
    else:
        def task(i):
            g, psi = instances[i]
            return _counterexample(i, g, as_amplitudes(psi), spec, cfg)
        indices = range(len(instances))

    results = _map(task, indices, workers)
    checked = [r for r in results if "skipped" not in r.record]
    records = [{"instance": r.index, **r.record} for r in checked]
    n_negative = sum(1 for r in checked if r.record["negative"])
    n_positive = sum(1 for r in checked if r.record["positive_theta"] is not None)
    violations = [v for r in results for v in r.violations]
    summary = {
        "instances": len(results),
        "checked": len(checked),
        "skipped_stationary": len(results) - len(checked),
        "negative_at_small_theta": n_negative,
        "positive_found": n_positive,
        "violation_count": len(violations),
        "complete": n_negative == len(checked) and n_positive >= 1,
    }
    return CampaignResult("counterexample", spec, results, violations, records, summary)


def _purified(index: int, g: Generator, rho: MixedState, spec: CampaignSpec,
              cfg: Config) -> InstanceResult:
    big_psi = purify(rho).amplitudes
    lifted = lift_generator(g, rho.dim)
    k_psi = lifted.matrix @ big_psi
    first = float(np.vdot(big_psi, k_psi).real)
    second = float(np.vdot(k_psi, k_psi).real)
    first_ref = float(np.trace(rho.density @ g.matrix).real)
    second_ref = float(np.trace(rho.density @ g.matrix @ g.matrix).real)
    result = _check_bounds(index, lifted, big_psi, spec, cfg)
    result.dim = rho.dim
    err1, err2 = abs(first - first_ref), abs(second - second_ref)
    if err1 > MOMENT_TOL:
        result.violations.append(Violation(index, 0.0, "moment_first", -err1))
    if err2 > MOMENT_TOL:
        result.violations.append(Violation(index, 0.0, "moment_second", -err2))
    result.record.update({
        "lifted_dim": lifted.dim,
        "moment_first": first, "moment_first_ref": first_ref,
        "moment_second": second, "moment_second_ref": second_ref,
        "moment_error": max(err1, err2),
        "violations": len(result.violations),
    })
    return result


def run_purified_campaign(spec: CampaignSpec, cfg: Config = DEFAULT_CONFIG,
                          instances: Sequence | None = None,
                          workers: int = 1) -> CampaignResult:
    """Bound checks on canonical purifications evolved by ``K (x) I``.

    Each random instance mixes three seeded pure states with Dirichlet(1, 1, 1)
    weights.  ``instances`` may supply explicit ``(generator, MixedState)``
    pairs instead.
    """
    if instances is None:
        def task(i):
            rng = instance_rng(spec.seed, i)
            d = spec.dims[int(rng.integers(len(spec.dims)))]
            g = random_hermitian(d, rng)
            return _purified(i, g, random_mixed_state(d, rng), spec, cfg)
        indices = range(spec.n_instances)
    else:
        def task(i):
            g, rho = instances[i]
            return _purified(i, g, rho, spec, cfg)
        indices = range(len(instances))

    results = _map(task, indices, workers)
    violations = [v for r in results for v in r.violations]
    summary = _bound_summary(results, violations)
    summary["max_moment_error"] = max(r.record["moment_error"] for r in results)
    return CampaignResult("purified", spec, results, violations, [], summary)


def _survey(index: int, spec: CampaignSpec, cfg: Config) -> InstanceResult:
    rng = instance_rng(spec.seed, index)
    d = spec.dims[int(rng.integers(len(spec.dims)))]
    g = random_hermitian(d, rng)
    psi = random_pure_state(d, rng).amplitudes
    result = InstanceResult(index=index, dim=d, delta_k=std_dev(g, psi),
                            energy=mean_above_ground(g, psi))
    records = {}
    for label, state in (("random", psi), ("optimal", optimal_state(g).amplitudes)):
        rep = speed_limit_report(g, state, cfg)
        records[label] = rep.as_dict()
        t_orth = rep.t_orthogonal
        if t_orth is None:
            continue
        for name in ("t_mt", "t_new", "t_ml"):
            bound = getattr(rep, name)
            if bound is not None and t_orth < bound - 1e-8:
                result.violations.append(Violation(index, t_orth, f"{label}:{name}", t_orth - bound))
    opt = records["optimal"]
    if opt["t_orthogonal"] is None or not (opt["saturates_mt"] and opt["saturates_ml"] and opt["geodesic"]):
        result.violations.append(Violation(index, 0.0, "optimal:saturation", 0.0))
    result.record = records
    return result


def run_saturation_survey(spec: CampaignSpec, cfg: Config = DEFAULT_CONFIG,
                          workers: int = 1) -> CampaignResult:
    """Speed-limit reports for a random state and the optimal state of each generator.

    Flags any orthogonality time below a speed limit and any optimal state
    that fails to saturate both limits or leaves the geodesic.
    """
    results = _map(lambda i: _survey(i, spec, cfg), range(spec.n_instances), workers)
    violations = [v for r in results for v in r.violations]
    reached = sum(1 for r in results if r.record["random"]["t_orthogonal"] is not None)
    summary = {
        "instances": len(results),
        "random_states_reaching_orthogonality": reached,
        "violation_count": len(violations),
    }
    return CampaignResult("saturation", spec, results, violations, [], summary)
