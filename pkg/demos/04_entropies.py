"""Entropy E_n = F_n + G_n computed two ways, against the large-n predictions."""

import math

from entropylab.entropy import (LOG_PI_MINUS_ONE, compute_E_potential, compute_report,
                                gamma_shape_closed_form, gamma_shape_integral)
from entropylab.orthopoly import PollaczekParams

cheb = PollaczekParams(1, 0)
print("Chebyshev-U: E_n = -n/(n+1)")
for n in (1, 10, 100):
    print(f"  n={n:3d}  E={compute_report(n, cheb).E:+.12f}  exact={-n / (n + 1):+.12f}")

p = PollaczekParams(5, 5)
print("(5, 5):")
for n in (20, 80, 320):
    r = compute_report(n, p)
    print(f"  n={n:3d}  E={r.E:+.6f}  potential={compute_E_potential(n, p):+.6f}  "
          f"E-pred={r.E_residual:+.4f}  G-pred={r.G_residual:+.4f}  "
          f"F-(log pi-1)={r.F - LOG_PI_MINUS_ONE:+.4f}")

q = PollaczekParams(1, 1)
print("gamma-shape integral:", gamma_shape_integral(q), "closed form:", gamma_shape_closed_form(q))
print("log(pi) - 1 =", math.log(math.pi) - 1)
