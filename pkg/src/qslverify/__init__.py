"""Numerical checks of quantum speed limits for unitary evolution of pure states.

The package evolves states under a Hermitian generator ``K``, measures the
statistical distance ``s = 2 arccos|<psi0|psi_theta>|`` and its rate, and
compares that rate against two upper bounds: ``2 dK / hbar`` and
``2 (<K> - K_min) / (hbar sin(s/2))``.
"""
from .bounds import (BoundReport, generalized_rate_bound, mean_above_ground, ml_rate_bound,
                     mt_rate_bound, std_dev)
from .errors import *  # noqa: F401,F403
from .evolution import (MixedState, PhaseShift, PureState, evolve, evolve_mixed, evolve_shifted,
                        lift_generator, purify)
from .harness import (CampaignResult, CampaignSpec, run_bound_campaign,
                      run_counterexample_campaign, run_purified_campaign, run_saturation_survey)
from .linalg_core import (Config, Generator, eig_hermitian, random_hermitian, random_pure_state,
                          spectral_function)
from .metrics import (DistanceSample, distance_rate_analytic, distance_rate_fd, fs_path_length,
                      overlap, overlap_derivative, statistical_distance, wootters_distance)
from .speed_limits import (SpeedLimitReport, check_saturation, generalized_qsl, ml_time, mt_time,
                           new_qsl_time, optimal_state, orthogonality_time, speed_limit_report)

__version__ = "0.1.0"
