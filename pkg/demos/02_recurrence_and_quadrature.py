"""Orthonormal Pollaczek polynomials from the scaled recurrence, zeros and Gauss rules."""

import numpy as np

from entropylab.entropy import cached_coefficients
from entropylab.orthopoly import PollaczekParams, evaluate, zeros
from entropylab.quadrature import derivative_moment, gauss_w_rule

params = PollaczekParams(lam=5, a=5)
coeffs = cached_coefficients(params)

# high degrees stay finite because the exponent is carried separately
b = evaluate(0.3, 2000, coeffs)
print(f"p_2000(0.3) = {b.scaled_values[-1]:.6f} * 2^{b.exponent}")

z = zeros(40, coeffs)
print("largest zero of p_40:", z.max())

# Gram matrix of p_0..p_10 under the 128-point Gauss rule for w
rule = gauss_w_rule(128, coeffs)
vals = np.array([[evaluate(x, k, coeffs).value() for x in rule.nodes] for k in range(11)])
gram = (vals * rule.weights) @ vals.T
print("max |Gram - I| =", np.abs(gram - np.eye(11)).max())

# int x p_n p_n' w dx = n
for n in (1, 10, 50):
    print(f"n={n:3d}: x p p' moment = {derivative_moment(n, coeffs):.12f}")
