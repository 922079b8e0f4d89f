"""A two-level system evolving under K = diag(-1, 1).

The equal superposition moves along a great circle: the overlap is |cos theta|,
the statistical distance grows at exactly 2 dK / hbar, and the path length
equals the distance until the state turns orthogonal at theta = pi/2.
"""
import numpy as np

from qslverify import eig_hermitian, mt_rate_bound, std_dev
from qslverify.metrics import distance_curve, distance_rate_fd_curve, fs_path_length_curve, overlap_curve

g = eig_hermitian(np.diag([-1.0, 1.0]))
psi = np.array([1.0, 1.0]) / np.sqrt(2)

thetas = np.linspace(0.05, np.pi / 2 - 0.05, 8)
ov = overlap_curve(g, psi, thetas)
s = distance_curve(g, psi, thetas)
rate = distance_rate_fd_curve(g, psi, thetas)
path = fs_path_length_curve(g, psi, thetas)

print("dK =", std_dev(g, psi), " spread bound =", mt_rate_bound(g, psi))
print(f"{'theta':>8} {'|<0|t>|':>10} {'|cos|':>10} {'s':>10} {'L':>10} {'ds/dt':>10}")
for row in zip(thetas, ov, np.abs(np.cos(thetas)), s, path, rate):
    print(" ".join(f"{x:10.6f}" for x in row))
