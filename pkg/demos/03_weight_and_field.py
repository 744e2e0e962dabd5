"""The Pollaczek weight, its external field Q and the sampled field-class check."""

import numpy as np

from entropylab.orthopoly import PollaczekParams
from entropylab.weight import Q, Q_prime, log_weight, validate_field_class

for lam, a in [(1, 0), (1, 1), (5, 5)]:
    p = PollaczekParams(lam, a)
    x = np.array([0.0, 0.5, 0.9, 0.999])
    print(f"(lam, a) = ({lam}, {a})")
    print("  log w(x):", np.round(log_weight(x, p), 6))
    print("  Q(x):    ", np.round([Q(v, p) for v in x], 6))
    print("  Q'(x):   ", np.round([Q_prime(v, p) for v in x], 6))
    rep = validate_field_class(p)
    print("  field class conditions:", rep.passed)
    print("  empirical Lambda:", rep.empirical_Lambda)
