"""Mixed states through purification.

A d x d density matrix is purified into a pure state in dimension d^2,
and K acts there as K (x) I.  Moments of the lifted
generator match the traces with rho, so the pure-state bounds carry over.
"""
import numpy as np

from qslverify import lift_generator, mt_rate_bound, purify, random_hermitian
from qslverify.evolution import partial_trace_second
from qslverify.harness import random_mixed_state
from qslverify.metrics import distance_rate_fd_curve

rng = np.random.default_rng(3)
g = random_hermitian(3, rng)
rho = random_mixed_state(3, rng)

big = purify(rho).amplitudes
lifted = lift_generator(g, 3)
print("eigenvalues of rho:", np.round(np.linalg.eigvalsh(rho.density), 6))
print("partial trace recovers rho:", np.allclose(partial_trace_second(big, 3), rho.density, atol=1e-12))
print("<K (x) I> =", np.vdot(big, lifted.matrix @ big).real, " Tr(rho K) =", np.trace(rho.density @ g.matrix).real)

thetas = np.linspace(0.01, 2.0, 200)
rates = distance_rate_fd_curve(lifted, big, thetas)
print("max rate", rates.max(), "<= spread bound", mt_rate_bound(lifted, big))
