"""Command-line front end.

Every command reads and writes :mod:`shearct.arrayfile` files, so a shell
pipeline reproduces the in-process library calls bit for bit::

    shearct phantom --kind shepp_logan --n 128 --out x.arr --png
    shearct radon --in x.arr --out lin.arr
    shearct noise --in lin.arr --sigma 20 --seed 1 --out noisy.arr
    shearct reconstruct --in noisy.arr --threshold hard --universal --out rec.arr --ref x.arr

Exit status is 0 on success, 1 on a usage or input error and 2 on a numeric
failure. A numeric failure is a non-finite result, a frame refinement that
ends above ``--tol`` after ``--max-iter`` iterations, or a failed acceptance
check in ``verify``. Errors go to standard error as
``shearct: error[<code>]: <message>``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import arrayfile as af
from .frame import FrameParams, build_masks
from .phantoms import KINDS, PhantomSpec, make_phantom
from .radon import NoiseSpec, add_noise, radon_forward
from .reconstruction import ThresholdRule, reconstruct
from .testbench import compute_metrics, run_experiment

__all__ = ["main", "build_parser", "render_png", "EXIT_OK", "EXIT_USAGE", "EXIT_NUMERIC"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
DEFAULT_MAX_ITER = 50


class UsageError(Exception):
    code = "usage"


class NumericFailure(Exception):
    code = "numeric"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def render_png(data, path) -> None:
    """8-bit grayscale rendering, min-max scaled; complex data shows magnitude.

    Arrays with more than two axes are stacked vertically along their leading
    axes.
    """
    from PIL import Image

    a = np.abs(data) if np.iscomplexobj(data) else np.asarray(data, dtype=float)
    a = a.reshape(-1, a.shape[-1])
    lo, hi = float(a.min()), float(a.max())
    scaled = np.zeros(a.shape) if hi == lo else (a - lo) / (hi - lo)
    Image.fromarray(np.round(scaled * 255).astype(np.uint8), mode="L").save(path)


def _save(args, arr: af.ArrayFile) -> None:
    af.write_array(args.out, arr)
    if args.png:
        render_png(arr.data, Path(args.out).with_suffix(".png"))


def _finite(x, what: str) -> None:
    if not np.all(np.isfinite(x)):
        raise NumericFailure(f"{what} contains NaN or Inf")


def _rule(args) -> ThresholdRule | None:
    if args.threshold == "none":
        if args.tvalue is not None or args.universal:
            raise UsageError("--tvalue/--universal need --threshold hard or soft")
        return None
    if args.tvalue is None and not args.universal:
        raise UsageError(f"--threshold {args.threshold} needs --tvalue or --universal")
    if args.tvalue is not None:
        return ThresholdRule(args.threshold, t=args.tvalue)
    return ThresholdRule(args.threshold, universal=True, sigma=args.sigma)


def _emit(pairs: dict) -> None:
    for k, v in pairs.items():
        print(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}")


def cmd_phantom(args) -> int:
    img = make_phantom(PhantomSpec(args.kind, args.n, args.radius))
    _save(args, af.ArrayFile("image", img, args.n))
    return EXIT_OK


def cmd_radon(args) -> int:
    img = af.read_array(args.inp, "image")
    _save(args, af.linogram_to_array(radon_forward(img.data)))
    return EXIT_OK


def cmd_noise(args) -> int:
    if args.sigma is None:
        raise UsageError("noise needs --sigma")
    lin = af.array_to_linogram(af.read_array(args.inp, "linogram"))
    _save(args, af.linogram_to_array(add_noise(lin, NoiseSpec(args.sigma, args.seed))))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    lin = af.array_to_linogram(af.read_array(args.inp, "linogram"))
    rule = _rule(args)
    ms = build_masks(FrameParams(lin.N, args.scales))
    img, info = reconstruct(lin, ms, rule, args.tol, args.max_iter, full_output=True)
    _finite(img, "reconstruction")
    if args.out:
        _save(args, af.ArrayFile("image", img, lin.N))
    out = {"N": lin.N, "J": ms.J, "threshold": args.threshold,
           "t": math.nan if info.threshold is None else float(info.threshold),
           "sigma": math.nan if info.sigma is None else float(info.sigma),
           "iterations": info.solve.iterations, "residual": float(info.solve.residual),
           "converged": info.solve.converged}
    if args.ref:
        ref = af.read_array(args.ref, "image").data
        m = compute_metrics(ref, img)
        out.update(mse=m.mse, psnr=m.psnr, rel_l2=m.rel_l2)
    _emit(out)
    if not info.solve.converged:
        raise NumericFailure(f"refinement ended at residual {info.solve.residual:.3g} "
                             f"> tol {args.tol:g} after {info.solve.iterations} iterations")
    return EXIT_OK


def cmd_masks(args) -> int:
    ms = build_masks(FrameParams(args.n, args.scales))
    _save(args, af.masks_to_array(ms))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import CHECKS, run_check

    numbers = args.criterion or range(1, len(CHECKS) + 1)
    failed = []
    for n in numbers:
        if not 1 <= n <= len(CHECKS):
            raise UsageError(f"no criterion {n}")
        r = run_check(n)
        print(r.line(), flush=True)
        if not r.passed:
            failed.append(n)
    if failed:
        raise NumericFailure("acceptance criteria failed: " + ",".join(map(str, failed)))
    return EXIT_OK


def cmd_report(args) -> int:
    if args.sigma is None:
        raise UsageError("report needs --sigma")
    if args.threshold == "none":
        raise UsageError("report compares against a threshold: use --threshold hard or soft")
    if args.tvalue is None and not args.universal:
        args.universal = True
    rule = _rule(args)
    if rule.universal and rule.sigma is None:
        rule = ThresholdRule(rule.kind, universal=True, sigma=args.sigma)
    images = {} if args.png else None
    rep = run_experiment(PhantomSpec(args.kind, args.n, args.radius), args.sigma, args.seed,
                         rule, J=args.scales, tol=args.tol, max_iter=args.max_iter,
                         images=images)
    text = rep.to_text()
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
        if images:
            for name, img in images.items():
                render_png(img, Path(args.out).with_name(f"{Path(args.out).stem}_{name}.png"))
    elif args.png:
        raise UsageError("--png with report needs --out")
    for which in ("plain", "denoised"):
        res = getattr(rep, f"{which}_residual")
        if not math.isfinite(getattr(rep, f"{which}_mse")):
            raise NumericFailure(f"{which} reconstruction is not finite")
        if res > args.tol:
            raise NumericFailure(f"{which} refinement ended at residual {res:.3g} > tol {args.tol:g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shearct", description="Shearlet tomography on the pseudo-polar grid.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def size(q, required=False):
        q.add_argument("--n", type=int, default=None if required else 128, required=required,
                       help="image size N (even)")

    def scales(q):
        q.add_argument("--scales", type=int, default=None, help="number of scales J")

    def output(q, required=True):
        q.add_argument("--out", required=required, help="output path")
        q.add_argument("--png", action="store_true", help="also write an 8-bit PNG rendering")

    def inp(q):
        q.add_argument("--in", dest="inp", required=True, help="input array file")

    def shape_opts(q):
        q.add_argument("--kind", choices=KINDS, default="shepp_logan")
        q.add_argument("--radius", type=float, default=0.3, help="circle radius in [0, 1]")

    def solver(q):
        q.add_argument("--tol", type=float, default=1e-6, help="refinement tolerance")
        q.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)

    def thresholds(q, default):
        q.add_argument("--threshold", choices=("hard", "soft", "none"), default=default)
        g = q.add_mutually_exclusive_group()
        g.add_argument("--tvalue", type=float, help="fixed threshold level")
        g.add_argument("--universal", action="store_true",
                       help="universal level sigma * sqrt(2 ln K)")
        q.add_argument("--sigma", type=float, help="noise level (estimated when omitted)")

    q = sub.add_parser("phantom", help="write a phantom image")
    shape_opts(q), size(q), output(q)
    q.set_defaults(func=cmd_phantom)

    q = sub.add_parser("radon", help="linogram of an image")
    inp(q), output(q)
    q.set_defaults(func=cmd_radon)

    q = sub.add_parser("noise", help="add Gaussian noise to a linogram")
    inp(q), output(q)
    q.add_argument("--sigma", type=float)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_noise)

    q = sub.add_parser("reconstruct", help="image from a linogram")
    inp(q), output(q, required=False), scales(q), solver(q), thresholds(q, "none")
    q.add_argument("--ref", help="reference image for error metrics")
    q.set_defaults(func=cmd_reconstruct)

    q = sub.add_parser("masks", help="write the subband masks")
    size(q), scales(q), output(q)
    q.set_defaults(func=cmd_masks)

    q = sub.add_parser("verify", help="run the acceptance checks")
    q.add_argument("--criterion", type=int, action="append",
                   help="run only this criterion (repeatable)")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("report", help="simulate, reconstruct and report metrics")
    shape_opts(q), size(q), scales(q), solver(q), thresholds(q, "hard")
    q.add_argument("--seed", type=int, default=0)
    output(q, required=False)
    q.set_defaults(func=cmd_report)
    return p


def _fail(code: str, message: str, status: int) -> int:
    print(f"shearct: error[{code}]: {message}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except af.ArrayFileError as exc:
        return _fail(exc.code, str(exc), EXIT_USAGE)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_USAGE)
    except (NumericFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numeric", str(exc), EXIT_NUMERIC)
    except ValueError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
