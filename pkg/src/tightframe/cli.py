"""Command-line front end.  Every subcommand prints one JSON report.

Exit codes: 0 when every checked residual is within tolerance, 1 on a
verification failure, 2 on bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fixtures
from .boxspline import BoxSplineSpec, bound_L, boxspline_mask, sos_boxspline
from .certify import agler_nonneg, certificate_from_agler, psd_factor, verify_sos, SosCertificate
from .errors import PreconditionError, TightFrameError, VerificationError
from .laurent import LaurentPoly, PolyMatrix
from .realize import build_realization, transfer_expand
from .symmetry import (
    DilationSetup,
    defect_xi,
    default_grid,
    dyadic,
    grid_min,
    qmf_check,
    setup_dilation,
    subqmf_defect,
    sum_rules_check,
)
from .synth import FrameletSet, _custom_realization, frame_pipeline, verify_uep
from .univariate import univariate_tight_frame

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: list
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    timing: float | None = None

    def check(self, name: str, value: float, tol: float) -> None:
        self.residuals[name] = float(value)
        self.tolerances[name] = float(tol)

    def flag(self, name: str, ok: bool) -> None:
        self.flags[name] = bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] <= self.tolerances[k] for k in self.residuals) and all(self.flags.values())

    def to_dict(self) -> dict:
        out = {"command": self.command, "passed": self.passed, "residuals": self.residuals, "flags": self.flags}
        out.update(self.payload)
        if self.timing is not None:
            out["seconds"] = self.timing
        return out


# ---------------------------------------------------------------------------
# input helpers


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _load_mask(args) -> LaurentPoly:
    if not args.mask:
        raise UsageError("--mask FILE is required")
    try:
        return LaurentPoly.from_dict(_read_json(args.mask))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.mask}: not a polynomial ({exc})") from None


def _load_dilation(spec: str | None, dim: int) -> DilationSetup:
    if spec is None:
        return dyadic(dim)
    if spec.startswith("2I"):
        try:
            d = int(spec.split(":", 1)[1]) if ":" in spec else dim
        except ValueError:
            raise UsageError(f"bad dilation {spec!r}; use 2I:d") from None
        setup = dyadic(d)
    else:
        data = json.loads(spec) if spec.lstrip().startswith("[") else _read_json(spec)
        M = data["M"] if isinstance(data, dict) else data
        setup = setup_dilation(M)
    if setup.dim != dim:
        raise UsageError(f"dilation has dimension {setup.dim}, mask has {dim}")
    return setup


def _load_q0(path: str, dim: int) -> PolyMatrix:
    data = _read_json(path)
    rows = data["rows"] if isinstance(data, dict) else data
    polys = [LaurentPoly.from_dict(r) for r in rows]
    if any(q.dim != dim for q in polys):
        raise UsageError("q0 rows must have the mask's dimension")
    return PolyMatrix.column(polys, dim)


def _parse_int_rows(text: str) -> list[list[int]]:
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {text!r}; expected e.g. '1,0;0,1;1,1'") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args, rep: RunReport) -> None:
    p = _load_mask(args)
    setup = _load_dilation(args.dilation, p.dim)
    sr = sum_rules_check(p, setup, args.tol)
    f = subqmf_defect(p, setup)
    n = args.grid or default_grid(p.dim)
    gmin = grid_min(f, n)
    for i, r in enumerate(sr.residuals):
        rep.check(f"sumRule[{i}]", r, args.tol)
    rep.check("defectGridMin", max(0.0, -gmin), 1e-9)
    rep.payload.update(
        {
            "setup": setup.to_dict(),
            "sumRuleResiduals": sr.residuals,
            "qmf": qmf_check(p, setup, args.tol),
            "defectGridMin": gmin,
            "grid": n,
            "defect": f.to_dict(),
        }
    )


def cmd_certify(args, rep: RunReport) -> None:
    p = _load_mask(args)
    setup = _load_dilation(args.dilation, p.dim)
    dec = agler_nonneg(p, setup)
    cert = certificate_from_agler(dec)
    sos = verify_sos(cert, args.tol)
    rep.check("bilinear", dec.bilinear_residual(), args.tol)
    rep.check("sos", sos.residual, args.tol)
    rep.payload.update(cert.to_dict())


def cmd_realize(args, rep: RunReport) -> None:
    p = _load_mask(args)
    setup = _load_dilation(args.dilation, p.dim)
    from .symmetry import fp_vector

    fp = fp_vector(p, setup)
    if args.q0:
        q0 = _load_q0(args.q0, p.dim)
        R = _custom_realization(fp, q0, p.dim, args.tol)
        target = PolyMatrix.vstack([fp, q0])
    else:
        dec = agler_nonneg(p, setup)
        H = psd_factor(dec.A0)
        R = build_realization(dec, H)
        target = PolyMatrix.vstack([fp, H @ dec.v()]) if H.shape[0] else fp
    rep.check("isometry", R.isometry_defect(), args.tol)
    rep.check("nilpotency", R.nilpotency_residual(), 1e-12)
    rep.check("transfer", (transfer_expand(R) - target).max_abs(), args.tol)
    rep.payload.update(R.to_dict())


def _frameset_payload(fs: FrameletSet) -> dict:
    return fs.to_dict()


def cmd_framelets(args, rep: RunReport) -> None:
    p = _load_mask(args)
    setup = _load_dilation(args.dilation, p.dim)
    q0 = _load_q0(args.q0, p.dim) if args.q0 else None
    fs = frame_pipeline(p, setup, custom_q0=q0, tol=args.tol)
    rep.check("uep", fs.report.residual, args.tol)
    rep.check("uepSamples", fs.report.sample_residual, args.tol)
    rep.payload.update(_frameset_payload(fs))


def cmd_univariate(args, rep: RunReport) -> None:
    p = _load_mask(args)
    if p.dim != 1:
        raise UsageError("univariate needs a one-variable mask")
    fs = univariate_tight_frame(p, args.m, args.tol)
    rep.check("uep", fs.report.residual, args.tol)
    rep.check("nilpotency", fs.realization.nilpotency_residual(), 1e-12)
    rep.payload.update(_frameset_payload(fs))


def cmd_boxspline(args, rep: RunReport) -> None:
    if not args.directions:
        raise UsageError("--directions is required, e.g. '1,0;0,1;1,1'")
    dirs = _parse_int_rows(args.directions)
    mult = _parse_int_rows(args.mult)[0] if args.mult else None
    spec = BoxSplineSpec.create(dirs, mult)
    p = boxspline_mask(spec)
    cert = sos_boxspline(spec, args.tol)
    rep.check("sos", cert.residual(), args.tol)
    rep.flag("lengthWithinBound", cert.length <= bound_L(spec))
    rep.payload.update(
        {
            "directions": [list(t) for t in spec.directions],
            "multiplicities": list(spec.multiplicities),
            "mask": p.to_dict(),
            "bound": bound_L(spec),
            "certificate": cert.to_dict(),
        }
    )
    if args.framelets:
        fs = frame_pipeline(p, spec.setup(), tol=args.tol)
        rep.check("uep", fs.report.residual, args.tol)
        rep.payload["framelets"] = _frameset_payload(fs)


def cmd_verify(args, rep: RunReport) -> None:
    p = _load_mask(args)
    setup = _load_dilation(args.dilation, p.dim)
    if not args.frame and not args.cert:
        raise UsageError("verify needs --frame FILE or --cert FILE")
    if args.frame:
        data = _read_json(args.frame)
        masks = [LaurentPoly.from_dict(a) for a in (data["masks"] if isinstance(data, dict) else data)]
        fs = FrameletSet(masks, PolyMatrix(setup.dim, (setup.m, 0)))
        report = verify_uep(p, fs, setup, args.tol)
        rep.check("uep", report.residual, args.tol)
        rep.check("uepSamples", report.sample_residual, args.tol)
        for j, v in enumerate(report.vanishing):
            rep.check(f"vanishing[{j}]", v, args.tol)
        rep.payload["uep"] = report.to_dict()
    if args.cert:
        data = _read_json(args.cert)
        factors = [LaurentPoly.from_dict(h) for h in data["factors"]]
        cert = SosCertificate(defect_xi(p, setup), factors, p)
        rep.check("sos", verify_sos(cert, args.tol).residual, args.tol)


def _example_b111(args, rep: RunReport) -> None:
    p, setup = fixtures.b111_mask(), fixtures.b111_setup()
    dec = agler_nonneg(p, setup)
    rep.check("A0", np.abs(dec.A0 - fixtures.b111_A0()).max(), 1e-12)
    rep.check("A1", np.abs(dec.A_diag[0] - fixtures.b111_A1()).max(), 1e-12)
    rep.check("A2", np.abs(dec.A_diag[1] - fixtures.b111_A2()).max(), 1e-12)
    cert = certificate_from_agler(dec)
    rep.check("sos", cert.residual(), 1e-12)
    R = build_realization(dec, fixtures.b111_H0())
    rep.check("isometry", R.isometry_defect(), 1e-12)
    rep.check("transfer", (transfer_expand(R) - fixtures.b111_inner()).max_abs(), 1e-12)
    rep.payload.update({"certificateLength": cert.length, "stateBlocks": list(R.state_blocks)})
    if args.framelets:
        _example_b111a(args, rep)


def _example_b111a(args, rep: RunReport) -> None:
    p, setup = fixtures.b111_mask(), fixtures.b111_setup()
    fs = frame_pipeline(p, setup, custom_q0=fixtures.b111a_q0(), tol=args.tol)
    rep.check("u", (fs.u - fixtures.b111a_u()).max_abs(), 1e-10)
    rep.check("uep", fs.report.residual, args.tol)
    rep.flag("N=5", fs.N == 5)
    rep.payload.update({"N": fs.N, "uepResidual": fs.report.residual, "framelets": _frameset_payload(fs)})


def _example_drury(args, rep: RunReport) -> None:
    p = fixtures.fixture_drury()
    setup = dyadic(3)
    try:
        agler_nonneg(p, setup)
        rejected, reason = False, None
    except PreconditionError as exc:
        rejected, reason = True, str(exc)
    n = args.grid or default_grid(3)
    gmin = grid_min(subqmf_defect(p, setup), n)
    gmax = float(np.abs(fixtures.drury_g().grid_values(64)).max())
    rep.flag("rejectedByNonnegativeConstruction", rejected)
    rep.check("defectGridMin", max(0.0, -gmin), 1e-9)
    rep.check("maxAbsG", abs(gmax - 3 * np.sqrt(3)), 1e-2)
    rep.payload.update({"rejection": reason, "defectGridMin": gmin, "grid": n, "maxAbsG": gmax, "maxAbsGGrid": 64})


EXAMPLES = {"b111": _example_b111, "b111a": _example_b111a, "drury": _example_drury}


def cmd_example(args, rep: RunReport) -> None:
    EXAMPLES[args.name](args, rep)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tightframe", description="Tight wavelet frames from polynomial masks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, mask=True):
        sp = sub.add_parser(name, help=help_)
        if mask:
            sp.add_argument("--mask", metavar="FILE", help="mask polynomial JSON")
            sp.add_argument("--dilation", metavar="FILE|2I:d", help="dilation matrix (default 2I)")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--grid", type=int, default=None, help="points per axis for grid checks")
        sp.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "sum rules, QMF flag and defect grid minimum")
    add("certify", cmd_certify, "sum-of-squares certificate for a nonnegative mask")
    add("realize", cmd_realize, "isometric transfer-function realization").add_argument("--q0", metavar="FILE")
    add("framelets", cmd_framelets, "framelet masks via the full pipeline").add_argument("--q0", metavar="FILE")
    add("univariate", cmd_univariate, "m-generator univariate tight frame").add_argument("--m", type=int, default=2)
    sp = add("boxspline", cmd_boxspline, "box-spline mask, length bound and certificate", mask=False)
    sp.add_argument("--directions", help="e.g. '1,0;0,1;1,1'")
    sp.add_argument("--mult", help="e.g. '1,1,1'")
    sp.add_argument("--framelets", action="store_true")
    sp = add("verify", cmd_verify, "check framelets or a certificate against a mask")
    sp.add_argument("--frame", metavar="FILE", help="framelet JSON with a 'masks' list")
    sp.add_argument("--cert", metavar="FILE", help="certificate JSON with a 'factors' list")
    sp = add("example", cmd_example, "built-in worked examples", mask=False)
    sp.add_argument("name", choices=sorted(EXAMPLES))
    sp.add_argument("--framelets", action="store_true")
    return parser


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    rep = RunReport(command=argv)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except (UsageError, PreconditionError, KeyError, TypeError, ValueError) as exc:
        _emit({"command": argv, "passed": False, "error": "input", "message": str(exc)}, args.out)
        return EXIT_USAGE
    except TightFrameError as exc:
        body = {"command": argv, "passed": False, "error": "verification", "message": str(exc)}
        if isinstance(exc, VerificationError):
            body.update({"stage": exc.stage, "residual": exc.residual})
        _emit(body, args.out)
        return EXIT_FAIL
    if args.timing:
        rep.timing = time.perf_counter() - start
    _emit(rep.to_dict(), args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


cmd_dispatch = main

if __name__ == "__main__":
    sys.exit(main())
