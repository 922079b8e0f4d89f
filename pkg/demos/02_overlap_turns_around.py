"""The overlap magnitude falls at first and can rise again later.

For any state that is not stationary the derivative of |<psi0|psi_theta>| is
negative just after theta = 0.  Past a minimum of the overlap it is positive,
so the overlap is not monotone in theta.
"""
import numpy as np

from qslverify import overlap_derivative, random_hermitian, random_pure_state, std_dev
from qslverify.metrics import overlap_derivative_curve

rng = np.random.default_rng(7)
g = random_hermitian(4, rng)
psi = random_pure_state(4, rng).amplitudes
print("dK =", std_dev(g, psi))
print("d|z|/dtheta at 1e-4:", overlap_derivative(g, psi, 1e-4))

thetas = np.linspace(1e-3, 4 * np.pi / std_dev(g, psi), 2000)
mag, deriv = overlap_derivative_curve(g, psi, thetas)
first_up = np.argmax(deriv > 0)
print(f"first rise at theta = {thetas[first_up]:.4f}, |z| = {mag[first_up]:.4f}, "
      f"d|z|/dtheta = {deriv[first_up]:.4f}")
print("fraction of the grid where |z| increases:", np.mean(deriv > 0))
