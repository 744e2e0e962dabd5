"""MRS numbers, the equilibrium density and the profile Phi_n for an exponential-type field."""

import math

import numpy as np

from entropylab.equilibrium import (equilibrium_profile, levin_integral, mrs_closed_form,
                                    mrs_number, truncated_log_moment)
from entropylab.orthopoly import PollaczekParams

print("a = 0 closed form:")
for n in (1, 10, 100):
    s = mrs_number(n, PollaczekParams(1.5, 0))
    print(f"  n={n:3d}  alpha={s.alpha_n:.15f}  closed={mrs_closed_form(n, 1.5):.15f}")

p = PollaczekParams(5, 5)
print("(5, 5): n (1 - alpha_n) approaches a = 5")
for n in (31, 125, 500):
    s = mrs_number(n, p)
    print(f"  n={n:3d}  1-alpha={s.gap:.3e}  n(1-alpha)={n * s.gap:.4f}")

for n in (20, 200):
    prof = equilibrium_profile(n, p)
    sup = np.max(np.abs(prof.phi - prof.theta_grid))
    print(f"n={n:3d}: sup|Phi-theta|={sup:.4f}  int|Phi'-1|={prof.phi_l1_defect:.4f}  "
          f"Phi(pi)-pi={prof.normalization_defect:.1e}")

print("Levin integral at 500:", levin_integral(500, p))
print("truncated log moment at 200:", truncated_log_moment(200, p), "vs -log 2 =", -math.log(2))
