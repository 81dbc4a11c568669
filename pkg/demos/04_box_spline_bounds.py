"""Certificate lengths for box splines against the bound d + (r - d) 2^d."""

from tightframe import BoxSplineSpec, bound_L, sos_boxspline, verify_sos

CASES = {
    "tensor Haar": ([(1, 0), (0, 1)], None),
    "three-direction": ([(1, 0), (0, 1), (1, 1)], None),
    "four-direction": ([(1, 0), (0, 1), (1, 1), (1, -1)], None),
    "three-direction, doubled": ([(1, 0), (0, 1), (1, 1)], [2, 2, 2]),
    "trivariate, r = 4": ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], None),
}

print(f"{'spec':28s} {'d':>2s} {'r':>2s} {'length':>7s} {'bound':>6s} {'residual':>10s}")
for name, (dirs, mult) in CASES.items():
    spec = BoxSplineSpec.create(dirs, mult)
    cert = sos_boxspline(spec)
    res = verify_sos(cert).residual
    print(f"{name:28s} {spec.dim:2d} {spec.r:2d} {cert.length:7d} {bound_L(spec):6d} {res:10.1e}")
