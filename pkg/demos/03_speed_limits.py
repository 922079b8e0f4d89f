"""Speed limits for a uniform qutrit and for the optimal state of the same generator.

The uniform state never saturates: it first turns orthogonal at 2 pi / 3,
above both the spread time and the energy time.  The equal superposition of
the extreme eigenvectors reaches orthogonality exactly at both limits.
"""
import numpy as np

from qslverify import eig_hermitian, optimal_state, speed_limit_report

g = eig_hermitian(np.diag([0.0, 1.0, 2.0]))

for label, psi in [("uniform", np.ones(3) / np.sqrt(3)), ("optimal", optimal_state(g).amplitudes)]:
    r = speed_limit_report(g, psi)
    print(label)
    for key in ("t_mt", "t_new", "t_ml", "t_orthogonal"):
        print(f"  {key:14s} {getattr(r, key):.10f}")
    print("  t_ml / t_new  ", r.ml_over_new)
    print("  saturates     ", r.saturates_mt, r.saturates_ml, " geodesic", r.geodesic)
