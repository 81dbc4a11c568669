"""Two-generator tight frames for univariate B-spline masks ((1 + z)/2)^k.

The defect 1 - |f_p|^2 is a single hermitian square (Fejer-Riesz), the
resulting inner function has a realization with nilpotent D, and the
unitary completion yields exactly m generators.
"""

import numpy as np

from tightframe import LaurentPoly, fejer_riesz, univariate_tight_frame

z = LaurentPoly.var(1, 0)

f = LaurentPoly(1, {(0,): 2, (1,): -1, (-1,): -1}) / 8
h = fejer_riesz(f).factor
print("Fejer-Riesz factor of (2 - xi - 1/xi)/8:", h)

for k in (1, 2, 3, 4):
    p = ((1 + z) / 2) ** k
    fs = univariate_tight_frame(p, 2)
    D = fs.realization.D
    print(f"\nk = {k}: {fs.N} generators, UEP residual {fs.report.residual:.1e}, state dim {D.shape[0]}")
    for j, a in enumerate(fs.masks, 1):
        coeffs = [a.coeff((e,)) for e in range(a.degree_box()[0][0], a.degree_box()[1][0] + 1)] if a else []
        print(f"  a_{j} coefficients:", np.round(np.real_if_close(coeffs), 4))
