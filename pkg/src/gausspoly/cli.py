"""Command-line front end: ``gausspoly <subcommand> [options]``.

Every subcommand prints ResultRecords, one JSON object per line by default
or CSV with ``--format csv``. Reals are written with ``repr``, the shortest
string that reloads to the same double.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

from gausspoly import asymptotics as asy
from gausspoly.expectations import Model, RandomPolytopeModel, expected_intrinsic_volume, expected_volume
from gausspoly.heteroscedastic import (
    ScaleVector, SignedScaleVector, crosspolytope_intrinsic_volume, heteroscedastic_expected_volume,
    rect_simplex_intrinsic_volume, simplex_intrinsic_volume,
)
from gausspoly.montecarlo import estimate_expected_volume, estimate_multiplicity_event
from gausspoly.orderstats import (
    IDENTITY, ONE, SampleFamily, conditional_max_cdf, conditional_max_density, conditional_max_limit_density,
    indicator_leq, intrinsic_volume_via_multiple_maxima, multiplicity_event_moment, partial_integration_check,
)
from gausspoly.quadrature import DEFAULT_REL_TOL
from gausspoly.regular import Family, RegularFamily, external_angle, intrinsic_volume
from gausspoly.verify import SUITES, run_suite

CSV_HEADER = ("quantity", "params", "value", "abs_error", "std_error", "method", "seed")
METHODS = ("quadrature", "closed_form", "expansion", "monte_carlo")


@dataclass
class ResultRecord:
    quantity: str
    params: dict
    value: float
    method: str
    abs_error: float | None = None
    std_error: float | None = None
    seed: int | None = None
    passed: bool | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "monte_carlo":
            if self.std_error is None or self.abs_error is not None:
                raise ValueError("monte_carlo records carry std_error only")
        elif self.abs_error is None or self.std_error is not None:
            raise ValueError(f"{self.method} records carry abs_error only")

    def as_dict(self) -> dict:
        out = {
            "quantity": self.quantity,
            "params": self.params,
            "value": self.value,
            "abs_error": self.abs_error,
            "std_error": self.std_error,
            "method": self.method,
            "seed": self.seed,
        }
        if self.passed is not None:
            out["passed"] = self.passed
        return out


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _quad(quantity, params, value, rel_tol=DEFAULT_REL_TOL) -> ResultRecord:
    # the adaptive rule meets the requested relative tolerance
    return ResultRecord(quantity, params, value, "quadrature", abs_error=rel_tol * abs(value))


def _closed(quantity, params, value) -> ResultRecord:
    return ResultRecord(quantity, params, value, "closed_form", abs_error=0.0)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit(records, fmt: str, stream) -> None:
    if fmt == "json":
        for r in records:
            stream.write(json.dumps(r.as_dict(), allow_nan=True) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.quantity, json.dumps(r.params, sort_keys=True), _fmt(r.value), _fmt(r.abs_error),
                         _fmt(r.std_error), r.method, _fmt(r.seed)])
    stream.write(buf.getvalue())


def _parse_list(text: str | None):
    if text is None:
        return None
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"could not parse scale list {text!r}") from None


def _count(text: str) -> int:
    """Accept 1000000 or 1e6."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v) or v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


# -- subcommands -----------------------------------------------------------------

def cmd_intrinsic(a):
    scales = _parse_list(a.scales)
    minus = _parse_list(a.minus)
    params = {"family": a.family, "n": a.n, "k": a.k}
    if a.family == "cube":
        return [_closed("intrinsic_volume", params, intrinsic_volume(RegularFamily(Family.CUBE, a.n), a.k))]
    if a.family == "parallelotope":
        if scales is None:
            raise UsageError("--family parallelotope needs --scales")
        params["scales"] = list(scales)
        return [_closed("intrinsic_volume", params, intrinsic_volume(RegularFamily.parallelotope(scales), a.k))]
    if scales is not None:
        params["scales"] = list(scales)
        m = a.k + 1
        if a.family == "simplex":
            value = simplex_intrinsic_volume(ScaleVector(scales), m)
        elif a.family == "crosspolytope":
            params["minus"] = list(minus or scales)
            value = crosspolytope_intrinsic_volume(SignedScaleVector(scales, minus or scales), m)
        else:
            value = rect_simplex_intrinsic_volume(ScaleVector(scales), m)
        return [_quad("intrinsic_volume", params, value)]
    fam = RegularFamily(Family(a.family), a.n)
    value = intrinsic_volume(fam, a.k)
    closed = a.k == fam.dim
    return [(_closed if closed else _quad)("intrinsic_volume", params, value)]


def cmd_angle(a):
    value = external_angle(RegularFamily(Family(a.family), a.n), a.k)
    return [_quad("external_angle", {"family": a.family, "n": a.n, "k": a.k}, value)]


def _model(name: str, n, lam, d) -> RandomPolytopeModel:
    tag = Model(name)
    if tag.poisson:
        if lam is None:
            raise UsageError(f"--model {name} needs --lambda")
        return RandomPolytopeModel(tag, lam, d)
    if n is None:
        raise UsageError(f"--model {name} needs --n")
    return RandomPolytopeModel(tag, n, d)


def _scale_object(model, scales, minus):
    if scales is None:
        return None
    if minus is not None:
        return SignedScaleVector(scales, minus)
    if model.tag is Model.SYMMETRIC:
        return SignedScaleVector(scales, scales)
    return ScaleVector(scales)


def cmd_expected_volume(a):
    model = _model(a.model, a.n, a.lam, a.d)
    params = {"model": a.model, "d": a.d}
    params.update({"lambda": a.lam} if model.tag.poisson else {"n": a.n})
    scales, minus = _parse_list(a.scales), _parse_list(a.minus)
    if a.m is not None:
        params["m"] = a.m
        return [_quad("expected_intrinsic_volume", params, expected_intrinsic_volume(model, a.m))]
    if scales is not None:
        obj = _scale_object(model, scales, minus)
        if model.tag not in (Model.GAUSSIAN, Model.SYMMETRIC) or len(scales) != model.n:
            raise UsageError("--scales needs the gaussian or symmetric model with one scale per point")
        params["scales"] = list(scales)
        if minus is not None:
            params["minus"] = list(minus)
        return [_quad("expected_volume", params, heteroscedastic_expected_volume(obj, a.d))]
    value = expected_volume(model)
    closed = model.tag is Model.ZONOTOPE or (model.tag is Model.SYMMETRIC and model.n == model.d)
    return [(_closed if closed else _quad)("expected_volume", params, value)]


def _expansion_record(quantity, params, exp: asy.AsymptoticExpansion):
    params = {**params, "u": exp.u, "leading": exp.leading, "correction": exp.correction}
    return ResultRecord(quantity, params, exp.value, "expansion", abs_error=abs(exp.correction))


def cmd_asymptotic(a):
    arg = a.lam if a.lam is not None else a.n
    t = a.target
    if t in ("gamma-correction", "festoon"):
        if a.d is None:
            raise UsageError(f"--target {t} needs --d")
        fn = asy.gamma_correction_constant if t == "gamma-correction" else asy.festoon_height_constant
        return [_closed(t.replace("-", "_"), {"d": a.d}, fn(a.d))]
    if arg is None:
        raise UsageError(f"--target {t} needs --n or --lambda")
    if t == "norming":
        return [_closed("norming_constant", {"n": arg}, asy.evt_norming_constant(arg))]
    if t == "volume":
        if a.d is None:
            raise UsageError("--target volume needs --d")
        model = asy.ExpansionModel(a.model)
        return [_expansion_record("expected_volume_expansion", {"model": a.model, "n": arg, "d": a.d},
                                  asy.expected_volume_expansion(model, arg, a.d))]
    if t == "intrinsic":
        if a.d is None:
            raise UsageError("--target intrinsic needs --d")
        fam = asy.ExpansionFamily(a.family)
        return [_expansion_record("intrinsic_volume_expansion", {"family": a.family, "n": arg, "d": a.d},
                                  asy.intrinsic_volume_expansion(fam, arg, a.d))]
    if a.alpha is None:
        raise UsageError("--target integral needs --alpha")
    kind = asy.IntegralKind(a.kind)
    return [_expansion_record("integral_asymptotic", {"kind": a.kind, "n": arg, "alpha": a.alpha},
                              asy.integral_asymptotic(a.alpha, arg, kind))]


def _moment_fn(name: str, t):
    if name == "one":
        return ONE
    if name == "identity":
        return IDENTITY
    if t is None:
        raise UsageError("--f indicator needs --t")
    return indicator_leq(t)


def cmd_orderstats(a):
    fam = SampleFamily(a.family)
    params = {"n": a.n, "k": a.k, "family": a.family}
    q = a.quantity
    if q == "moment":
        params["f"] = a.f
        if a.t is not None:
            params["t"] = a.t
        return [_quad("multiplicity_event_moment", params, multiplicity_event_moment(_moment_fn(a.f, a.t), a.n, a.k, fam))]
    if q in ("density", "cdf", "limit-density"):
        if a.t is None:
            raise UsageError(f"--quantity {q} needs --t")
        params["t"] = a.t
        if q == "limit-density":
            return [_closed("conditional_max_limit_density", {"k": a.k, "z": a.t},
                            conditional_max_limit_density(a.t, a.k))]
        fn = conditional_max_density if q == "density" else conditional_max_cdf
        return [_quad(f"conditional_max_{q}", params, fn(a.t, a.n, a.k, fam))]
    if q == "intrinsic":
        return [_quad("intrinsic_volume_via_multiple_maxima", params,
                      intrinsic_volume_via_multiple_maxima(a.n, a.k, fam))]
    lhs, rhs = partial_integration_check(a.n, a.k)
    return [_quad("partial_integration_lhs", {"n": a.n, "k": a.k}, lhs),
            _quad("partial_integration_rhs", {"n": a.n, "k": a.k}, rhs)]


def cmd_mc(a):
    if a.target == "event":
        if a.n is None or a.k is None or a.eps is None:
            raise UsageError("--target event needs --n, --k and --eps")
        fam = SampleFamily(a.family)
        est = estimate_multiplicity_event(a.n, a.k, a.eps, _moment_fn(a.f, a.t), fam, a.samples, a.seed, a.workers)
        params = {"n": a.n, "k": a.k, "eps": a.eps, "f": a.f, "family": a.family}
        quantity = "multiplicity_event"
    else:
        if a.d is None or a.model is None:
            raise UsageError("--target volume needs --model and --d")
        model = _model(a.model, a.n, a.lam, a.d)
        scales = _parse_list(a.scales)
        obj = _scale_object(model, scales, _parse_list(a.minus))
        est = estimate_expected_volume(model, obj, a.samples, a.seed, a.workers)
        params = {"model": a.model, "d": a.d}
        params.update({"lambda": a.lam} if model.tag.poisson else {"n": a.n})
        if scales is not None:
            params["scales"] = list(scales)
        quantity = "expected_volume"
    params.update({"samples": est.samples, "workers": est.workers})
    return [ResultRecord(quantity, params, est.mean, "monte_carlo", std_error=est.std_error, seed=est.seed)]


def cmd_verify(a):
    checks = run_suite(a.suite, samples=a.samples, seed=a.seed, event_samples=a.event_samples, workers=a.workers)
    records = []
    for c in checks:
        params = {**c.params, "reference": c.reference, "gap": c.gap, "tolerance": c.tolerance}
        if c.method == "monte_carlo":
            rec = ResultRecord(c.name, params, c.value, "monte_carlo", std_error=c.std_error, seed=c.seed,
                               passed=c.passed)
        else:
            rec = ResultRecord(c.name, params, c.value, c.method, abs_error=abs(c.value - c.reference),
                               passed=c.passed)
        records.append(rec)
    failed = [c for c in checks if not c.passed]
    err = getattr(a, "stderr", None) or sys.stderr
    for c in failed:
        print(f"FAIL {c.name} {c.params}: gap {c.gap!r} > tolerance {c.tolerance!r}", file=err)
    print(f"{a.suite}: {len(checks) - len(failed)}/{len(checks)} checks passed", file=err)
    return records, (1 if failed else 0)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gausspoly", description="Gaussian polytopes, intrinsic volumes and multiple maxima.")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("intrinsic", help="intrinsic volume V_k of a regular or scaled polytope")
    s.add_argument("--family", required=True,
                   choices=("simplex", "crosspolytope", "rect_simplex", "cube", "parallelotope"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--scales", help="comma-separated l_i (or l_i^+)")
    s.add_argument("--minus", help="comma-separated l_i^- for the crosspolytope")
    s.set_defaults(func=cmd_intrinsic)

    s = sub.add_parser("angle", help="external angle at a k-face")
    s.add_argument("--family", required=True, choices=("simplex", "crosspolytope", "rect_simplex"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_angle)

    s = sub.add_parser("expected-volume", help="expected volume (or --m intrinsic volume) of a random polytope")
    s.add_argument("--model", required=True, choices=[m.value for m in Model])
    s.add_argument("--n", type=int)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--scales")
    s.add_argument("--minus")
    s.set_defaults(func=cmd_expected_volume)

    s = sub.add_parser("asymptotic", help="large-n expansions and constants")
    s.add_argument("--target", required=True,
                   choices=("volume", "intrinsic", "integral", "norming", "festoon", "gamma-correction"))
    s.add_argument("--model", default="gaussian", choices=[m.value for m in asy.ExpansionModel])
    s.add_argument("--family", default="simplex", choices=[f.value for f in asy.ExpansionFamily])
    s.add_argument("--kind", default="binomial", choices=[k.value for k in asy.IntegralKind])
    s.add_argument("--n", type=float)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--d", type=int)
    s.add_argument("--alpha", type=float)
    s.set_defaults(func=cmd_asymptotic)

    s = sub.add_parser("orderstats", help="multiple-maximum quantities")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--family", default="plain", choices=("plain", "absolute"))
    s.add_argument("--f", default="one", choices=("one", "identity", "indicator"))
    s.add_argument("--t", type=float)
    s.add_argument("--quantity", default="moment",
                   choices=("moment", "density", "cdf", "intrinsic", "partial-integration", "limit-density"))
    s.set_defaults(func=cmd_orderstats)

    s = sub.add_parser("mc", help="Monte Carlo estimates")
    s.add_argument("--target", default="volume", choices=("volume", "event"))
    s.add_argument("--model", choices=[m.value for m in Model])
    s.add_argument("--n", type=int)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--d", type=int)
    s.add_argument("--scales")
    s.add_argument("--minus")
    s.add_argument("--k", type=int)
    s.add_argument("--eps", type=float)
    s.add_argument("--f", default="identity", choices=("one", "identity", "indicator"))
    s.add_argument("--t", type=float)
    s.add_argument("--family", default="plain", choices=("plain", "absolute"))
    s.add_argument("--samples", type=_count, default=10**6)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("verify", help="run an acceptance suite")
    s.add_argument("--suite", required=True, choices=SUITES)
    s.add_argument("--samples", type=_count, default=10**6)
    s.add_argument("--event-samples", type=_count, default=10**7)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(str(exc))
        return 2
    except SystemExit as exc:   # --help
        return int(exc.code or 0)
    args.stderr = stderr
    try:
        out = args.func(args)
    except UsageError as exc:
        stderr.write(f"gausspoly: error: {exc}\n")
        return 2
    except (ValueError, TypeError) as exc:
        stderr.write(f"gausspoly: error: {exc}\n")
        return 2
    records, code = out if isinstance(out, tuple) else (out, 0)
    emit(records, args.format, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
