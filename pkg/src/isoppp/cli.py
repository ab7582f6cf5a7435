"""Command-line front end.

Subcommands compute single values or parameter sweeps and emit CSV (default)
or JSON.  Every output embeds the fully resolved configuration as a
'#'-prefixed JSON line (CSV) or a "config" key (JSON) so any result file is
reproducible from its own artifact.  Exit codes: 0 success, 2 configuration
error, 3 numeric non-convergence, 4 divergent-regime request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import applications, mcsim, outage, shapes
from .analytic import ChannelModel, FadingLaw, LinkConfig, laplace_transform, mean_interference
from .errors import (
    DivergentIntegral,
    DomainError,
    IsopppError,
    NoFiniteTruncation,
    NonConvergence,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_DIVERGENT = 4


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _add_shape_args(p):
    p.add_argument(
        "--shape",
        help="shape descriptor: JSON like "
        '\'{"scenario":"C","params":{"rho":100}}\' or a bare scenario name',
    )
    p.add_argument("--scenario-file", help="path to a JSON shape descriptor file")


def _add_channel_args(p, default_c):
    p.add_argument("--alpha", type=float, default=None, help="path-loss exponent")
    p.add_argument("--c", type=float, default=default_c, help="path-loss constant")
    p.add_argument(
        "--fading", choices=["rayleigh", "unit"], default="rayleigh", help="fading law"
    )


def _add_link_args(p):
    p.add_argument("--lambda", dest="lambda_scale", type=float, default=1e-3,
                   help="intensity scale (nodes per unit area)")
    p.add_argument("--y0", type=float, default=0.0, help="receiver offset from the centre")
    p.add_argument("--d", type=float, default=10.0, help="link distance")
    p.add_argument("--beta", type=float, default=1.0, help="SINR threshold")
    p.add_argument("--eta-db", dest="eta_db", type=float, default=math.inf,
                   help="mean SNR in dB ('inf' for a noise-free link)")


def _add_output_args(p):
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--sweep", help="axis spec 'name=start:stop:step'")
    p.add_argument("--workers", type=int, default=1, help="worker threads for sweeps")


def _resolve_shape(args) -> shapes.ShapeFunction:
    if getattr(args, "scenario_file", None):
        with open(args.scenario_file, "r", encoding="utf-8") as fh:
            descriptor = json.load(fh)
        return shapes.from_descriptor(descriptor)
    raw = getattr(args, "shape", None)
    if not raw:
        raise DomainError("a shape is required: pass --shape or --scenario-file")
    raw = raw.strip()
    if raw.startswith("{"):
        descriptor = json.loads(raw)
    else:
        descriptor = {"scenario": raw, "params": {}}
    return shapes.from_descriptor(descriptor)


def _fading(name: str) -> FadingLaw:
    return FadingLaw.rayleigh() if name == "rayleigh" else FadingLaw.unit()


def _channel(args, alpha=None) -> ChannelModel:
    a = alpha if alpha is not None else args.alpha
    if a is None:
        raise DomainError("--alpha is required for this command")
    return ChannelModel(alpha=a, c=args.c, fading=_fading(args.fading))


def _link(args, **overrides) -> LinkConfig:
    kwargs = {
        "lambda_scale": args.lambda_scale,
        "y0_norm": args.y0,
        "d": args.d,
        "beta": args.beta,
        "eta_db": args.eta_db,
    }
    kwargs.update(overrides)
    return LinkConfig(**kwargs)


def _parse_axis(spec: str):
    """Parse 'name=start:stop:step' into (name, values); inclusive stop."""
    try:
        name, rng = spec.split("=", 1)
        start_s, stop_s, step_s = rng.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as exc:
        raise DomainError(f"bad axis spec {spec!r}; expected name=start:stop:step") from exc
    if step <= 0:
        raise DomainError("axis step must be positive")
    if stop < start:
        return name.strip(), np.empty(0)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return name.strip(), start + step * np.arange(count)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _emit(config: dict, columns: list, rows: list, args) -> None:
    if args.format == "json":
        payload = {"config": config, "columns": columns, "rows": rows}
        text = json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_config(args, command: str, shape=None, extras=None) -> dict:
    cfg = {"command": command}
    if shape is not None:
        cfg["shape"] = shape.descriptor
    for key in ("alpha", "c", "fading", "lambda_scale", "y0", "d", "beta", "eta_db", "tol"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    if getattr(args, "sweep", None):
        cfg["sweep"] = args.sweep
    if extras:
        cfg.update(extras)
    return cfg


# ---------------------------------------------------------------------------
# sweep engine
# ---------------------------------------------------------------------------


def _run_points(point_fn, values, axis: str, workers: int, value_columns: list):
    """Evaluate one row per axis point; per-point failures land in the error
    column and the run continues.  Output order follows the axis order."""

    def one(v):
        try:
            return [*point_fn(v), ""]
        except IsopppError as exc:
            return [None] * len(value_columns) + [f"{type(exc).__name__}: {exc}"]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, values))
    else:
        results = [one(v) for v in values]
    return [[v, *row] for v, row in zip(values, results)]


def _single_or_sweep(args, command, shape, value_columns, point_fn, axes, extras=None):
    """Shared driver: one row without --sweep, axis-ordered rows with it."""
    config = _base_config(args, command, shape, extras)
    if getattr(args, "sweep", None):
        axis, values = _parse_axis(args.sweep)
        if axis not in axes:
            raise DomainError(f"command {command!r} cannot sweep axis {axis!r}; allowed: {sorted(axes)}")
        rows = _run_points(lambda v: point_fn(**{axes[axis]: v}), values, axis, args.workers, value_columns)
        _emit(config, [axis, *value_columns, "error"], rows, args)
    else:
        _emit(config, value_columns, [list(point_fn())], args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_mean(args) -> int:
    shape = _resolve_shape(args)
    channel = _channel(args)

    def point(y0=None, lam=None, **_):
        y0 = args.y0 if y0 is None else y0
        lam = args.lambda_scale if lam is None else lam
        res = mean_interference(shape, channel, lam, y0, args.tol)
        return [res.value, res.abs_error, res.converged]

    return _single_or_sweep(
        args, "mean", shape, ["value", "abs_error", "converged"], point,
        axes={"y0": "y0", "lambda": "lam"},
    )


def _cmd_laplace(args) -> int:
    shape = _resolve_shape(args)
    channel = _channel(args)

    def point(y0=None, s=None, lam=None, **_):
        y0 = args.y0 if y0 is None else y0
        s = args.s if s is None else s
        lam = args.lambda_scale if lam is None else lam
        return [laplace_transform(shape, channel, lam, y0, s, args.tol)]

    return _single_or_sweep(
        args, "laplace", shape, ["value"], point,
        axes={"y0": "y0", "s": "s", "lambda": "lam"},
        extras={"s": args.s},
    )


def _outage_like(args, command, fn) -> int:
    shape = _resolve_shape(args)
    channel = _channel(args)

    def point(y0=None, d=None, beta=None, lam=None, **_):
        link = _link(
            args,
            **{
                k: v
                for k, v in {
                    "y0_norm": y0,
                    "d": d,
                    "beta": beta,
                    "lambda_scale": lam,
                }.items()
                if v is not None
            },
        )
        return [fn(shape, channel, link, args.tol)]

    return _single_or_sweep(
        args, command, shape, ["value"], point,
        axes={"y0": "y0", "d": "d", "beta": "beta", "lambda": "lam"},
    )


def _cmd_outage(args) -> int:
    return _outage_like(args, "outage", outage.outage_exact)


def _cmd_divergence(args) -> int:
    return _outage_like(args, "divergence", outage.log_divergence)


def _cmd_relerror(args) -> int:
    return _outage_like(args, "relerror", outage.relative_error)


def _cmd_capacity(args) -> int:
    shape = _resolve_shape(args)
    channel = _channel(args)

    def point(y0=None, d=None, beta=None, **_):
        link = _link(
            args,
            **{k: v for k, v in {"y0_norm": y0, "d": d, "beta": beta}.items() if v is not None},
        )
        return [applications.local_transmission_capacity(shape, channel, link, args.epsilon, args.tol)]

    return _single_or_sweep(
        args, "capacity", shape, ["value"], point,
        axes={"y0": "y0", "d": "d", "beta": "beta"},
        extras={"epsilon": args.epsilon},
    )


def _cmd_fhds(args) -> int:
    shape = _resolve_shape(args)

    def point(m=None, d=None, beta=None, **_):
        gain = applications.fh_ds_gain(
            shape,
            args.d if d is None else d,
            args.beta if beta is None else beta,
            args.m_gain if m is None else m,
            args.tol,
        )
        return [gain.ratio, gain.asymptote]

    return _single_or_sweep(
        args, "fhds", shape, ["ratio", "asymptote"], point,
        axes={"M": "m", "d": "d", "beta": "beta"},
        extras={"m": args.m_gain},
    )


def _delta_linear(args) -> float:
    if args.delta is not None and args.delta_db is not None:
        raise DomainError("pass either --delta or --delta-db, not both")
    if args.delta is not None:
        return args.delta
    if args.delta_db is not None:
        return 10.0 ** (args.delta_db / 10.0)
    raise DomainError("--delta or --delta-db is required")


def _cmd_csma(args) -> int:
    delta = _delta_linear(args)
    alpha = args.alpha if args.alpha is not None else 4.0

    def point(d=None, delta_=None, beta=None, lam=None, **_):
        dd = args.d if d is None else d
        dl = delta if delta_ is None else delta_
        bb = args.beta if beta is None else beta
        ll = args.lambda_scale if lam is None else lam
        lam_active = applications.csma_large_scale_density(ll, alpha, dl)
        loss = applications.csma_accuracy_loss(ll, dl, dd, bb, args.tol, alpha=alpha)
        return [lam_active, loss]

    config_shape = applications.csma_shape(delta, alpha)
    return _single_or_sweep(
        args, "csma", config_shape, ["lambda_large_scale", "accuracy_loss"], point,
        axes={"d": "d", "delta": "delta_", "beta": "beta", "lambda": "lam"},
        extras={"delta": delta},
    )


def _parse_grid(text: str | None):
    if not text:
        return None
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_simulate(args) -> int:
    shape = _resolve_shape(args)
    channel = _channel(args)
    link = _link(args)
    cfg = mcsim.SimConfig(
        trials=args.trials,
        seed=args.seed,
        truncation_tol_fraction=args.trunc_tol,
        max_radius_override=args.max_radius,
    )
    z_grid = _parse_grid(args.z)
    s_grid = _parse_grid(args.s)
    if getattr(args, "sweep", None):
        axis, values = _parse_axis(args.sweep)
        if axis != "z":
            raise DomainError("simulate sweeps only the z axis (tail levels)")
        z_grid = list(values)
    want = args.what
    outcome = mcsim.simulate(
        shape, channel, link, cfg,
        z_grid=z_grid if want == "tail" else None,
        s_grid=s_grid if want == "laplace" else None,
        want_outage=(want == "outage"),
    )
    extras = {
        "what": want,
        "trials": args.trials,
        "seed": args.seed,
        "trunc_tol": args.trunc_tol,
        "max_radius_override": args.max_radius,
    }
    config = _base_config(args, "simulate", shape, extras)
    base = [outcome.mean, outcome.mean_half_width95, outcome.truncation_bias_bound,
            outcome.trials_used, outcome.max_radius]
    base_cols = ["mean", "mean_half_width95", "truncation_bias_bound", "trials", "max_radius"]
    if want == "mean":
        _emit(config, base_cols, [base], args)
    elif want == "outage":
        _emit(config, ["outage_freq", "outage_half_width95", *base_cols],
              [[outcome.outage_freq, outcome.outage_half_width95, *base]], args)
    elif want == "tail":
        if not outcome.tail_freq:
            raise DomainError("--what tail needs --z or --sweep z=...")
        rows = [
            [z, outcome.tail_freq[z], outcome.tail_half_width95[z], *base]
            for z in sorted(outcome.tail_freq)
        ]
        _emit(config, ["z", "tail_freq", "tail_half_width95", *base_cols], rows, args)
    else:  # laplace
        if not outcome.laplace_est:
            raise DomainError("--what laplace needs --s")
        rows = [
            [s, outcome.laplace_est[s], outcome.laplace_half_width95[s], *base]
            for s in sorted(outcome.laplace_est)
        ]
        _emit(config, ["s", "laplace", "laplace_half_width95", *base_cols], rows, args)
    return EXIT_OK


_SWEEP_TASKS = {}


def _cmd_sweep(args) -> int:
    handler = _SWEEP_TASKS.get(args.task)
    if handler is None:
        raise DomainError(f"unknown sweep task {args.task!r}")
    args.sweep = args.axis
    return handler(args)


def _cmd_replot_check(args) -> int:
    path = args.file
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        for key in ("config", "columns", "rows"):
            if key not in payload:
                raise DomainError(f"JSON artifact is missing the {key!r} key")
        if json.loads(json.dumps(payload)) != payload:
            raise DomainError("JSON artifact does not round-trip")
        return EXIT_OK
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise DomainError("CSV artifact is missing its '# {json}' config line")
    json.loads(lines[0][2:])
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    table = list(reader)
    if not table:
        raise DomainError("CSV artifact has no header row")
    width = len(table[0])
    for row in table[1:]:
        if len(row) != width:
            raise DomainError("CSV artifact has ragged rows")
        for cell in row:
            if cell == "":
                continue
            try:
                value = float(cell)
            except ValueError:
                continue  # non-numeric column (flags, error messages)
            if _fmt_cell(value) != cell:
                raise DomainError(
                    f"cell {cell!r} does not round-trip through the CSV dialect"
                )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoppp",
        description="Interference, outage and throughput statistics for "
        "isotropic Poisson wireless networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def computational(name, help_, handler, default_c=1.0, link=True):
        p = sub.add_parser(name, help=help_)
        _add_shape_args(p)
        _add_channel_args(p, default_c)
        if link:
            _add_link_args(p)
        _add_output_args(p)
        p.set_defaults(handler=handler)
        return p

    computational("mean", "mean interference lambda * A_alpha(y0, c)", _cmd_mean)

    p = computational("laplace", "interference Laplace transform at s", _cmd_laplace)
    p.add_argument("--s", type=float, default=1.0, help="transform variable")

    computational("outage", "exact Rayleigh outage probability", _cmd_outage)
    computational("divergence", "log-divergence of the local approximation",
                  _cmd_divergence, default_c=0.0)
    computational("relerror", "relative error of the local approximation",
                  _cmd_relerror, default_c=0.0)

    p = computational("capacity", "local transmission capacity", _cmd_capacity, default_c=0.0)
    p.add_argument("--epsilon", type=float, required=True, help="outage budget in (0, 1)")

    p = sub.add_parser("fhds", help="FH over DS CDMA capacity gain at the centre")
    _add_shape_args(p)
    p.add_argument("--d", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--m-gain", dest="m_gain", type=float, default=4.0, help="processing gain M")
    _add_output_args(p)
    p.set_defaults(handler=_cmd_fhds)

    p = sub.add_parser("csma", help="carrier-sense density and co-location accuracy loss")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda", dest="lambda_scale", type=float, default=1e-3)
    p.add_argument("--d", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=None, help="sensing threshold (linear)")
    p.add_argument("--delta-db", dest="delta_db", type=float, default=None,
                   help="sensing threshold in dB")
    _add_output_args(p)
    p.set_defaults(handler=_cmd_csma)

    p = computational("simulate", "Monte-Carlo estimates with confidence intervals",
                      _cmd_simulate)
    p.add_argument("--what", choices=["mean", "outage", "tail", "laplace"], default="mean")
    p.add_argument("--trials", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trunc-tol", dest="trunc_tol", type=float, default=1e-3)
    p.add_argument("--max-radius", dest="max_radius", type=float, default=None)
    p.add_argument("--z", help="comma-separated tail levels")
    p.add_argument("--s", help="comma-separated transform variables")

    p = sub.add_parser("sweep", help="run any analytic task over a parameter axis")
    p.add_argument("--task", required=True,
                   choices=["mean", "laplace", "outage", "divergence", "relerror",
                            "capacity", "fhds", "csma"])
    p.add_argument("--axis", required=True, help="axis spec 'name=start:stop:step'")
    _add_shape_args(p)
    _add_channel_args(p, 1.0)
    _add_link_args(p)
    _add_output_args(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--m-gain", dest="m_gain", type=float, default=4.0)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--delta-db", dest="delta_db", type=float, default=None)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("replot-check", help="verify a result file re-reads losslessly")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_replot_check)

    return parser


_SWEEP_TASKS.update(
    mean=_cmd_mean,
    laplace=_cmd_laplace,
    outage=_cmd_outage,
    divergence=_cmd_divergence,
    relerror=_cmd_relerror,
    capacity=_cmd_capacity,
    fhds=_cmd_fhds,
    csma=_cmd_csma,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DivergentIntegral, NoFiniteTruncation) as exc:
        print(f"isoppp: divergent regime: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except NonConvergence as exc:
        print(f"isoppp: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except IsopppError as exc:
        print(f"isoppp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"isoppp: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
