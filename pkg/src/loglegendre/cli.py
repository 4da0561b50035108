"""Command-line front end.

Subcommands: bound, verify, asymptotics, construct, delta, presets.
Exit codes: 0 success, 2 usage error, 3 theorem-hypothesis failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import json
import sys
from fractions import Fraction

import mpmath as mp

from . import corpus
from .divisors import (
    divisor_rate,
    floor_gain_profile,
    guaranteed_divisor,
    log_guaranteed_divisor,
    strong_integrality_check,
)
from .errors import HypothesisError, InternalCheckError, ParamError, PrecisionError
from .exact import DensePoly
from .legendre import (
    ParamSet,
    build_record,
    legendre_poly,
    reduced_form_value,
    structural_identity_suite,
)
from .measures import measure_bound, preset_catalog
from .series import (
    derivative_series_identity,
    hyperharmonic_identity,
    oracle_legendre,
)
from .spectral import spectral_data

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 2, 3, 4


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text:
        raise ParamError("z must be an exact rational 'a/b', not a decimal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParamError(f"cannot parse rational {text!r}") from exc


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise ParamError(f"cannot parse integer list {text!r}") from exc


def _load_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParamError(f"bad config line: {raw.rstrip()}")
            out[key.strip()] = value.strip()
    return out


def _resolve_params(args) -> ParamSet:
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}

    def pick(flag, key):
        val = getattr(args, flag, None)
        return val if val is not None else cfg.get(key)

    preset = pick("preset", "preset")
    if preset:
        catalog = preset_catalog()
        if preset not in catalog:
            raise ParamError(f"unknown preset {preset!r}; try 'presets'")
        return catalog[preset]
    z, p, q = pick("z", "z"), pick("p", "p"), pick("q", "q")
    if not (z and p and q):
        raise ParamError("need --preset or all of --z, --p, --q")
    m = pick("m", "m")
    params = ParamSet(
        p=_parse_int_list(p) if isinstance(p, str) else p,
        q=_parse_int_list(q) if isinstance(q, str) else q,
        z=_parse_rational(z) if isinstance(z, str) else z,
        m=int(m) if m is not None else None,
    )
    n = pick("n", "n")
    if n is not None and int(n) != params.n:
        raise ParamError(f"--n {n} contradicts the {params.n} exponent pairs given")
    return params


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_bound(args) -> int:
    params = _resolve_params(args)
    report = measure_bound(params, precision=args.precision)
    if args.format == "table":
        _emit(report.to_table(), args.out)
    elif args.format == "csv":
        d = report.to_dict()
        rows = ["key,value"] + [
            f"{k},{d[k]}" for k in
            ("divisor_rate", "log_v_max", "log_v_capped", "log_threshold",
             "growth_rate", "decay_rate", "poly_exponent", "approx_exponent")]
        _emit("\n".join(rows), args.out)
    else:
        payload = report.to_dict()
        payload["timestamp"] = _timestamp()
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return EXIT_OK


def _verify_structural(count, seed, lines) -> int:
    failures = 0
    for params, t in corpus.oracle_corpus(seed, count, max_weight=40):
        for rep in structural_identity_suite(params, t, grid_step=Fraction(1, 50)):
            if not rep.passed:
                failures += 1
                lines.append(f"  FAIL {rep.name} at p={params.p} q={params.q} "
                             f"t={t}: {rep.witness}")
    return failures


def _verify_oracle(count, seed, lines) -> int:
    failures = 0
    for params, t in corpus.oracle_corpus(seed, count, max_weight=50):
        if oracle_legendre(params, t) != legendre_poly(params, t):
            failures += 1
            lines.append(f"  FAIL oracle mismatch at p={params.p} q={params.q} t={t}")
    return failures


def _verify_hyperharmonic(maximum, lines) -> int:
    failures = 0
    for j in range(maximum + 1):
        for k in range(maximum + 1):
            ok, lhs, rhs = hyperharmonic_identity(j, k)
            if not ok:
                failures += 1
                lines.append(f"  FAIL hyperharmonic j={j} k={k}: {lhs} != {rhs}")
    return failures


def _verify_derivative(count, seed, lines) -> int:
    import random
    rng = random.Random(seed)
    failures = 0
    for i in range(count):
        poly = DensePoly([rng.randint(-9, 9) for _ in range(rng.randint(1, 16))])
        if not derivative_series_identity(poly):
            failures += 1
            lines.append(f"  FAIL derivative-series on {list(poly.coeffs)}")
    return failures


def _verify_integrality(count, seed, lines) -> int:
    failures = 0
    for params, t in corpus.oracle_corpus(seed, count, max_weight=30, with_m=True):
        rec = build_record(params, t)
        if not strong_integrality_check(params, t, rec.transforms):
            failures += 1
            lines.append(f"  FAIL integrality at p={params.p} q={params.q} "
                         f"m={params.m} t={t}")
    return failures


def cmd_verify(args) -> int:
    suites = {
        "structural": lambda L: _verify_structural(args.count, args.seed, L),
        "oracle": lambda L: _verify_oracle(args.count, args.seed, L),
        "hyperharmonic": lambda L: _verify_hyperharmonic(args.max, L),
        "derivative": lambda L: _verify_derivative(args.count, args.seed, L),
        "integrality": lambda L: _verify_integrality(max(4, args.count // 5), args.seed, L),
    }
    chosen = suites if args.suite == "all" else {args.suite: suites[args.suite]}
    total = 0
    for name, run in chosen.items():
        lines: list[str] = []
        bad = run(lines)
        total += bad
        print(f"{name}: {'PASS' if bad == 0 else f'FAIL ({bad})'}")
        for line in lines:
            print(line)
    return EXIT_OK if total == 0 else EXIT_INTERNAL


def _asym_point(job) -> tuple[int, float]:
    kind, params, t, precision = job
    L = legendre_poly(params, t)
    if kind == "L":
        from .legendre import eval_at_rational
        val = eval_at_rational(L, params.z)
        with mp.workprec(64):
            return t, float(mp.log(abs(mp.mpf(val.numerator)) / val.denominator))
    val = reduced_form_value(params, t, 1, precision, L=L)
    return t, float(mp.log(abs(val)))


def cmd_asymptotics(args) -> int:
    params = _resolve_params(args)
    if args.t_max is None:
        raise ParamError("--t-max is required")
    seq = args.sequence
    if seq == "I" and params.m is None:
        raise ParamError("the I sequence needs the form order m")
    jobs = [(seq, params, t, args.precision) for t in range(1, args.t_max + 1)]
    if args.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.threads) as pool:
            pairs = sorted(pool.map(_asym_point, jobs))
    else:
        pairs = [_asym_point(j) for j in jobs]
    logs = [v for _, v in pairs]
    window = params.n
    wmax = [max(logs[i : i + window]) for i in range(len(logs) - window + 1)]
    slope = _slope_from_logs(logs, window)
    sd = spectral_data(params, max(args.precision, 128))
    if seq == "L":
        target = float(sd.log_v_max)
    else:
        z = params.z
        with mp.workprec(128):
            target = float(sd.log_v_capped
                           - params.q[0] * mp.log(abs(mp.mpf(z.numerator)) / z.denominator)
                           - params.p[0] * mp.log(abs(mp.mpf((1 - z).numerator)) / (1 - z).denominator))
    rel = abs(slope - target) / abs(target) if target else float("inf")
    rows = ["t,log_windowed_max"]
    for i, v in enumerate(wmax):
        rows.append(f"{i + 1},{v!r}")
    rows.append(f"slope,{slope!r}")
    rows.append(f"target,{target!r}")
    rows.append(f"relative_error,{rel!r}")
    _emit("\n".join(rows), args.out)
    return EXIT_OK


def _slope_from_logs(logs: list[float], window: int) -> float:
    wmax = [max(logs[i : i + window]) for i in range(len(logs) - window + 1)]
    ts = list(range(1, len(wmax) + 1))
    half = len(wmax) // 2
    xs, ys = ts[half:], wmax[half:]
    k = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    return (k * sxy - sx * sy) / (k * sxx - sx * sx)


def cmd_construct(args) -> int:
    params = _resolve_params(args)
    t = args.t or 1
    rec = build_record(params, t)
    parts = [rec.L.render()]
    for i, tr in enumerate(rec.transforms, start=1):
        parts.append(f"# transform {i}")
        parts.append(tr.render())
    _emit("\n".join(parts), args.out)
    return EXIT_OK


def cmd_delta(args) -> int:
    params = _resolve_params(args)
    t = args.t or 1
    delta_t = guaranteed_divisor(params, t)
    log_dt = log_guaranteed_divisor(params, t)
    limit = divisor_rate(params, args.precision)
    payload = {
        "t": t,
        "divisor": str(delta_t),
        "log_divisor_over_t": log_dt / t,
        "rate_limit": mp.nstr(limit, max(6, int(args.precision * 0.3010))),
        "mu_profile": json.loads(floor_gain_profile(params).to_json()),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return EXIT_OK


def cmd_presets(args) -> int:
    for name, params in preset_catalog().items():
        d = params.describe()
        print(f"{name:12s} n={d['n']} m={d['m']} z={d['z']} p={d['p']} q={d['q']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_instance_flags(sp):
    sp.add_argument("--preset")
    sp.add_argument("--config", help="flat key=value file; flags override")
    sp.add_argument("--z", help="exact rational a/b (no decimals)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--p", help="comma-separated positive integers")
    sp.add_argument("--q", help="comma-separated nonnegative integers")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="loglegendre",
        description="Measure bounds for logarithms of rationals via exact "
                    "multiple Legendre polynomials")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bound", help="compute a measure report")
    _add_instance_flags(sp)
    sp.add_argument("--precision", type=int, default=512)
    sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="run the exact identity suites")
    sp.add_argument("--suite", default="all",
                    choices=("all", "structural", "oracle", "hyperharmonic",
                             "derivative", "integrality"))
    sp.add_argument("--count", type=int, default=25)
    sp.add_argument("--max", type=int, default=25, help="hyperharmonic j,k range")
    sp.add_argument("--seed", type=int, default=20240901)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("asymptotics", help="growth-rate experiment over t")
    _add_instance_flags(sp)
    sp.add_argument("--sequence", choices=("L", "I"), default="L")
    sp.add_argument("--t-max", dest="t_max", type=int)
    sp.add_argument("--precision", type=int, default=64)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=("csv",), default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("construct", help="dump a polynomial in canonical text form")
    _add_instance_flags(sp)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("delta", help="guaranteed divisor and its growth rate")
    _add_instance_flags(sp)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--precision", type=int, default=128)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("presets", help="list shipped parameter sets")
    sp.set_defaults(func=cmd_presets)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    precision = getattr(args, "precision", None)
    if precision is not None and precision < 64:
        ap.exit(EXIT_USAGE, "precision must be at least 64 bits\n")
    try:
        return args.func(args)
    except ParamError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InternalCheckError, PrecisionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
