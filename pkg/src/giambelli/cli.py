"""Command-line interface.

Every command prints a JSON object {"manifest": ..., "result": ...} (or CSV
with the manifest as leading '#' lines).  Exit codes: 0 ok, 2 bad input,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from importlib import metadata

from . import kernels, ope, verify
from .partition import Partition, as_half_integer, from_parts, partitions_up_to
from .specfun import ConvergenceError, PoleError, PrecisionPolicy
from .zmeasure import (
    MixedZParams,
    ZParams,
    expect_fs,
    giambelli_expectation_check,
    mixed_ratio,
    sample_many,
    scalar_str,
    weight_mixed,
    weight_n,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


class InputError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("giambelli")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    precision: dict
    version: str = field(default_factory=_version)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        return asdict(self)


# --- argument helpers ----------------------------------------------------------------


def _parse_list(text: str) -> list[str]:
    """"[2,1]", "2,1" or "[-1/2, 1/2]" -> list of tokens."""
    t = text.strip()
    if t.startswith("["):
        if not t.endswith("]"):
            raise InputError(f"unbalanced list {text!r}")
        t = t[1:-1]
    return [s.strip().strip('"').strip("'") for s in t.split(",") if s.strip()]


def _partition(text: str) -> Partition:
    try:
        return from_parts([int(s) for s in _parse_list(text)])
    except ValueError as e:
        raise InputError(f"bad partition {text!r}: {e}") from None


def _points(text: str) -> list[Fraction]:
    try:
        return [as_half_integer(s) for s in _parse_list(text)]
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad half-integer list {text!r}: {e}") from None


def _half(text: str) -> Fraction:
    try:
        return as_half_integer(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(str(e)) from None


def _zparams(args) -> ZParams:
    if args.z is None or args.zp is None:
        raise InputError("--z and --zp are required")
    return ZParams(args.z, args.zp)


def _mixed(args) -> MixedZParams:
    if args.xi is None:
        raise InputError("--xi is required")
    return MixedZParams(_zparams(args), args.xi)


def _policy(args) -> PrecisionPolicy:
    return PrecisionPolicy(rtol=args.precision) if args.precision else PrecisionPolicy()


def _exact(x):
    """Rationals as "p/q" strings, floats as numbers, complex as {re, im}."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return float(x)


def _measure(args) -> ope.EnsembleSpec:
    if not args.measure:
        raise InputError("--measure is required (CSV file or inline JSON)")
    text = args.measure.strip()
    if text.startswith(("{", "[")):
        alpha = ope.measure_from_json(text)
    else:
        alpha = ope.measure_from_csv(text)
    if args.N is None:
        raise InputError("--N is required")
    return ope.EnsembleSpec(alpha, args.N)


# --- commands ---------------------------------------------------------------------------


def cmd_zmeasure(args) -> tuple[dict, int]:
    action = args.action
    if action == "weight":
        lam = _partition(args.lam)
        zp = _zparams(args)
        out = {"lambda": lam.to_json(), "weight_n": _exact(weight_n(lam, zp))}
        if args.xi is not None:
            mp = _mixed(args)
            out["mixed_ratio"] = _exact(mixed_ratio(lam, mp))
            out["weight_mixed"] = weight_mixed(lam, mp)
        return out, EXIT_OK
    if action == "expect-fs":
        mu = _partition(args.mu)
        return {"mu": mu.to_json(), "value": _exact(expect_fs(mu, _mixed(args)))}, EXIT_OK
    if action == "giambelli-check":
        mp = _mixed(args)
        worst = 0
        for lam in partitions_up_to(args.max_size):
            r = giambelli_expectation_check(lam, mp)
            worst = max(worst, r)
        value = int(worst) if worst == 0 else _exact(worst)
        return {"max_residual": value, "max_size": args.max_size, "exact": mp.exact}, EXIT_OK
    if action == "sample":
        mp = _mixed(args)
        draws = sample_many(mp, args.count, args.seed or 0, args.threads)
        return {"samples": [lam.to_json() for lam in draws], "sizes": [lam.size for lam in draws]}, EXIT_OK
    raise InputError(f"unknown zmeasure action {action}")


def _kernel_fn(args):
    if args.method == "residue":
        return kernels.kernel_via_residues, {}
    return kernels.kernel_discrete, {"diagonal": args.diagonal}


def cmd_kernel(args) -> tuple[dict | str, int]:
    action = args.action
    policy = _policy(args)
    if action == "whittaker-eval":
        zp = _zparams(args)
        x = float(Fraction(args.x))
        y = float(Fraction(args.y)) if args.y is not None else x
        return {"x": x, "y": y, "K": kernels.kernel_whittaker(x, y, zp, policy)}, EXIT_OK
    mp = _mixed(args)
    fn, extra = _kernel_fn(args)
    if action == "eval":
        x = _half(args.x)
        y = _half(args.y) if args.y is not None else x
        return {"x": str(x), "y": str(y), "K": fn(x, y, mp, policy=policy, **extra), "method": args.method}, EXIT_OK
    if action == "rho":
        pts = _points(args.points)
        return {
            "points": [str(p) for p in pts],
            "rho": kernels.rho_m_det(pts, mp, kernel=fn, policy=policy, **extra),
        }, EXIT_OK
    if action == "jump-check":
        x = _half(args.x)
        return {"x": str(x), "residual": kernels.jump_check(x, mp, policy)}, EXIT_OK
    if action == "grid":
        lo, hi = (_half(s) for s in _parse_list(args.range))
        pts = kernels.half_integer_range(lo, hi)
        rows = []
        for x in pts:
            for y in pts:
                try:
                    rows.append({"x": str(x), "y": str(y), "K": fn(x, y, mp, policy=policy, **extra), "error": ""})
                except (PoleError, ConvergenceError, ArithmeticError) as e:
                    rows.append({"x": str(x), "y": str(y), "K": None, "error": str(e)})
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["x", "y", "K"])
            for r in rows:
                w.writerow([r["x"], r["y"], repr(r["K"]) if r["K"] is not None else "error: " + r["error"]])
            return buf.getvalue(), EXIT_OK
        return {"rows": rows}, EXIT_OK
    raise InputError(f"unknown kernel action {action}")


def cmd_verify(args) -> tuple[dict, int]:
    options = {"tol": args.tol, "samples": args.samples, "seed": args.seed, "workers": args.threads, "n": args.n}
    checks = verify.run_suite(args.suite, **options)
    gating_ok = all(c.passed for c in checks if c.gating)
    out = {"suite": args.suite, "pass": gating_ok, "checks": [c.to_dict() for c in checks]}
    return out, EXIT_OK if gating_ok else EXIT_VERIFY


def cmd_ope(args) -> tuple[dict, int]:
    spec = _measure(args)
    action = args.action
    if action == "prob":
        X = _parse_list(args.config)
        return {"config": X, "probability": str(ope.ensemble_prob([Fraction(t) for t in X], spec))}, EXIT_OK
    if action == "avg-schur":
        lam = _partition(args.lam)
        return {
            "lambda": lam.to_json(),
            "moment_determinant": str(ope.avg_schur(lam, spec)),
            "enumeration": str(ope.avg_schur_enum(lam, spec)),
        }, EXIT_OK
    if action == "giambelli-check":
        worst = max(ope.giambelli_check_ope(lam, spec) for lam in partitions_up_to(args.max_size))
        return {"max_residual": str(worst), "max_size": args.max_size}, EXIT_OK
    if action == "kernel":
        x, y = Fraction(args.x), Fraction(args.y if args.y is not None else args.x)
        fn = ope.residue_kernel if args.method == "residue" else ope.cd_kernel
        return {"x": str(x), "y": str(y), "K": str(fn(x, y, spec)), "method": args.method}, EXIT_OK
    if action == "rho":
        pts = [Fraction(t) for t in _parse_list(args.points)]
        return {
            "points": [str(p) for p in pts],
            "brute_force": str(ope.brute_rho(pts, spec)),
            "cd_kernel": str(ope.rho_det(pts, spec, ope.cd_kernel)),
            # the residue kernel is undefined at atom 0
            "residue_kernel": None if 0 in pts else str(ope.rho_det(pts, spec, ope.residue_kernel)),
        }, EXIT_OK
    raise InputError(f"unknown ope action {action}")


# --- parser ----------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--z", help='z, e.g. "1/2" or "0.5+1i"')
    g.add_argument("--zp", help="z'")
    g.add_argument("--xi", help="ξ in (0, 1)")
    g.add_argument("--precision", type=float, default=None, help="relative tolerance of series and quadrature")
    g.add_argument("--seed", type=int, default=None, help="random seed (default 0; suites use their own fixed seeds)")
    g.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out", help="write output to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="giambelli", description="z-measures, kernels and their verification")
    sub = parser.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zmeasure", parents=[common], help="z-measure weights, averages, sampling")
    z.add_argument("action", choices=("weight", "expect-fs", "giambelli-check", "sample"))
    z.add_argument("--lambda", dest="lam", default="[]", help="partition, e.g. [2,1]")
    z.add_argument("--mu", default="[1]")
    z.add_argument("--max-size", type=int, default=8)
    z.add_argument("--count", type=int, default=10)
    z.set_defaults(func=cmd_zmeasure)

    k = sub.add_parser("kernel", parents=[common], help="discrete and continuous correlation kernels")
    k.add_argument("action", choices=("eval", "grid", "rho", "jump-check", "whittaker-eval"))
    k.add_argument("--x")
    k.add_argument("--y")
    k.add_argument("--points", default="[1/2]")
    k.add_argument("--range", default="-7/2,7/2", help="lo,hi on the half-integer lattice")
    k.add_argument("--method", choices=("hypergeometric", "residue"), default="hypergeometric")
    k.add_argument("--diagonal", choices=("analytic", "richardson"), default="analytic")
    k.set_defaults(func=cmd_kernel)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(verify.SUITES))
    v.add_argument("--tol", type=float)
    v.add_argument("--samples", type=int)
    v.add_argument("--n", type=int, help="partition size for Monte Carlo images")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("ope", parents=[common], help="orthogonal polynomial ensembles on finite measures")
    o.add_argument("action", choices=("prob", "avg-schur", "giambelli-check", "kernel", "rho"))
    o.add_argument("--measure", help='CSV file (atom,weight) or JSON {"atoms": [...], "weights": [...]}')
    o.add_argument("--N", type=int)
    o.add_argument("--config", default="[]")
    o.add_argument("--lambda", dest="lam", default="[]")
    o.add_argument("--max-size", type=int, default=8)
    o.add_argument("--x")
    o.add_argument("--y")
    o.add_argument("--points", default="[]")
    o.add_argument("--method", choices=("cd", "residue"), default="cd")
    o.set_defaults(func=cmd_ope)
    return parser


def _parameters(args) -> dict:
    skip = {"func", "out", "format", "precision", "seed", "threads"}
    return {k: (scalar_str(v) if isinstance(v, Fraction) else v) for k, v in vars(args).items() if k not in skip and v is not None}


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _attach_negative_values(argv: list[str]) -> list[str]:
    """argparse takes "-3/2" for an option; bind such values as --opt=-3/2."""
    out: list[str] = []
    for tok in argv:
        if out and re.match(r"^-[0-9.]", tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    manifest = RunManifest(
        command=" ".join([args.command] + ([args.action] if hasattr(args, "action") else [args.suite])),
        parameters=_parameters(args),
        seed=args.seed,
        precision={"rtol": args.precision} if args.precision is not None else PrecisionPolicy().to_dict(),
    )
    try:
        result, code = args.func(args)
    except (InputError, ValueError, PoleError, ZeroDivisionError, KeyError) as e:
        err = {"manifest": manifest.to_dict(), "error": {"type": type(e).__name__, "message": str(e)}}
        _emit(json.dumps(err, indent=2) + "\n", args)
        return EXIT_INPUT
    if isinstance(result, str):
        head = "".join(f"# {k}: {json.dumps(v)}\n" for k, v in manifest.to_dict().items())
        _emit(head + result, args)
    else:
        _emit(json.dumps({"manifest": manifest.to_dict(), "result": result}, indent=2) + "\n", args)
    return code


if __name__ == "__main__":
    sys.exit(main())
