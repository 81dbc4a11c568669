"""A three-variable mask with complex coefficients.

The mask is built from g = z1^3 + z2^3 + z3^3 - 3 z1 z2 z3, rotated so that
q(1, 1, 1) = 1.  It is sub-QMF, yet the nonnegative-coefficient
construction does not apply to it.
"""

import numpy as np

from tightframe import PreconditionError, agler_nonneg, dyadic, grid_min, subqmf_defect
from tightframe import fixtures

p = fixtures.fixture_drury()
setup = dyadic(3)
print("p(1, 1, 1) =", p(np.ones(3)))

try:
    agler_nonneg(p, setup)
except PreconditionError as exc:
    print("nonnegative construction rejects it:", str(exc).splitlines()[0])

print("defect grid minimum (32^3):", grid_min(subqmf_defect(p, setup), 32))
gmax = float(np.abs(fixtures.drury_g().grid_values(64)).max())
print(f"max |g| on the 64^3 torus grid: {gmax:.4f}  (3 sqrt 3 = {3 * np.sqrt(3):.4f})")
