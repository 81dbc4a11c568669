"""Walk through the nonnegative-coefficient construction on the three-direction box spline.

    p(z) = (1 + z1)(1 + z2)(1 + z1 z2) / 8,  M = 2I

Steps: sum rules and sub-QMF check, the Gram decomposition of the defect,
a sum-of-squares certificate, and an isometric transfer-function realization.
"""

import numpy as np

from tightframe import (
    agler_nonneg,
    build_realization,
    certificate_from_agler,
    dyadic,
    grid_min,
    psd_factor,
    subqmf_defect,
    sum_rules_check,
    transfer_expand,
    verify_sos,
)
from tightframe import fixtures

np.set_printoptions(precision=4, suppress=True)

p = fixtures.b111_mask()
setup = dyadic(2)
print("mask p =", p)

# The mask must satisfy the sum rules and have a nonnegative defect 1 - sum |p(.+pi nu)|^2.
print("sum rules pass:", sum_rules_check(p, setup).passed)
print("defect grid minimum:", grid_min(subqmf_defect(p, setup)))

# Nonnegative coefficients give the defect as A0-part plus one diagonal part per variable.
dec = agler_nonneg(p, setup)
print("\nA0 * 16 =\n", (16 * dec.A0).real)
print("A1 * 4 =", (4 * dec.A_diag[0]).real.ravel())
print("A2 * 8 =", (8 * dec.A_diag[1]).real.ravel())
print("bilinear residual:", dec.bilinear_residual())

# A0 has rank 3, so the certificate needs three squares.
cert = certificate_from_agler(dec)
print("\ncertificate length:", cert.length, " residual:", verify_sos(cert).residual)

# Factor A0 = H^* H and build the isometric colligation; E(xi) = diag(xi1, xi2, xi2).
R = build_realization(dec, psd_factor(dec.A0))
print("\nstate blocks:", R.state_blocks)
print("isometry defect:", R.isometry_defect())
print("D nilpotent, residual:", R.nilpotency_residual())
f = transfer_expand(R)
print("transfer function has", f.shape[0], "rows; ||f||^2 on the torus equals 1:",
      ((f.adjoint() @ f).entry(0, 0) - 1).max_abs() <= 1e-12)
