"""Complex log-gamma on the line lam + i t, and its digamma/trigamma companions."""

import math

import numpy as np

from entropylab.specfun import abs_gamma_sq, digamma, log_abs_gamma_sq, log_gamma_complex, trigamma

# |Gamma(1/2 + i t)|^2 = pi / cosh(pi t): a reflection-formula check
t = np.array([0.0, 1.0, 5.0])
print("|Gamma(1/2+it)|^2:", abs_gamma_sq(0.5, t))
print("pi/cosh(pi t):    ", math.pi / np.cosh(math.pi * t))

# far out on the line the value underflows, the log does not
print("log|Gamma(1+200i)|^2 =", log_abs_gamma_sq(1.0, 200.0))

print("log Gamma(3+4i) =", log_gamma_complex(3 + 4j))
print("psi(1) = -gamma:", digamma(1.0))
print("psi'(1) = pi^2/6:", trigamma(1.0), math.pi ** 2 / 6)
