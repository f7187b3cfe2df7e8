"""
Command-line front end.

Subcommands: ``eval``, ``sample``, ``plot``, ``fit``, ``table``.
Exit status is 0 on success, 1 on an I/O failure and 2 on bad flags,
unparseable input or any domain error.  Diagnostics go to stderr; stdout
only ever carries a successful result.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

from .curve_core import (
    CurveParams,
    DomainError,
    curve,
    curve_inverse,
    schlick_bias,
    schlick_gain,
)
from .curve_tools import build_lut, fit_params, sample_curve
from .plot_emit import (
    DEFAULT_A_VALUES,
    DEFAULT_S_VALUES,
    DEFAULT_T_VALUES,
    FamilySpec,
    FormatError,
    PlotSpec,
    _json_number,
    emit_csv,
    emit_json,
    emit_lut_csv,
    emit_svg_family,
    emit_svg_grid,
    fmt_number,
    parse_csv,
    parse_json,
)

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2


class CliIOError(Exception):
    pass


def _decimal(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _decimal_list(text: str) -> List[float]:
    items = [c.strip() for c in text.split(",")]
    if not items or any(not c for c in items):
        raise argparse.ArgumentTypeError(f"malformed comma list: {text!r}")
    return [_decimal(c) for c in items]


def _integer(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biasgain",
        description="Schlick bias/gain and the generalized (s, t) curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one curve value")
    p.add_argument("--mode", choices=("curve", "bias", "gain", "inverse"), default="curve")
    p.add_argument("--x", type=_decimal, help="input for curve/bias/gain")
    p.add_argument("--y", type=_decimal, help="input for inverse")
    p.add_argument("--s", type=_decimal, help="slope at the threshold")
    p.add_argument("--t", type=_decimal, help="threshold")
    p.add_argument("--a", type=_decimal, help="bias/gain shape in (0, 1)")
    p.add_argument("--clamp", action="store_true", help="clamp the input into [0, 1] instead of failing")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="sample a curve on an even grid")
    p.add_argument("--s", type=_decimal, required=True)
    p.add_argument("--t", type=_decimal, required=True)
    p.add_argument("--n", type=_integer, default=33)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("plot", help="write a figure as SVG")
    p.add_argument("--figure", choices=("bias", "gain", "grid"), default="grid")
    p.add_argument("--out", default="-")
    p.add_argument("--s-values", type=_decimal_list, default=list(DEFAULT_S_VALUES))
    p.add_argument("--t-values", type=_decimal_list, default=list(DEFAULT_T_VALUES))
    p.add_argument("--a-values", type=_decimal_list, default=list(DEFAULT_A_VALUES))
    p.add_argument("--samples", type=_integer, default=None, help="points per curve")
    p.add_argument("--width", type=_integer, default=None)
    p.add_argument("--height", type=_integer, default=None)
    p.add_argument("--no-knots", action="store_true")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("fit", help="fit (s, t) to a CSV or JSON sample file")
    p.add_argument("input", help="sample file, '-' for stdin")
    p.add_argument("--format", choices=("auto", "csv", "json"), default="auto")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("table", help="write a lookup table as i,x,y CSV")
    p.add_argument("--s", type=_decimal, required=True)
    p.add_argument("--t", type=_decimal, required=True)
    p.add_argument("--resolution", type=_integer, default=256)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_table)
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliIOError(f"cannot write {path}: {exc.strerror or exc}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise FormatError(f"{path} is not UTF-8 text") from None


def _require(parser, args, mode, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        parser.error(f"eval --mode {mode} requires {', '.join(missing)}")


def cmd_eval(args, parser) -> str:
    mode = args.mode
    if mode == "inverse":
        _require(parser, args, mode, "y", "s", "t")
        value = args.y
    elif mode == "curve":
        _require(parser, args, mode, "x", "s", "t")
        value = args.x
    else:
        _require(parser, args, mode, "x", "a")
        value = args.x
    if args.clamp:
        value = min(max(value, 0.0), 1.0)

    if mode == "curve":
        y = curve(value, CurveParams(args.s, args.t))
    elif mode == "inverse":
        y = curve_inverse(value, CurveParams(args.s, args.t))
    elif mode == "bias":
        y = schlick_bias(value, args.a)
    else:
        y = schlick_gain(value, args.a)
    return fmt_number(y) + "\n"


def cmd_sample(args, parser) -> None:
    p = CurveParams(args.s, args.t)
    series = sample_curve(p, args.n)
    text = emit_csv(series) if args.format == "csv" else emit_json(series, p) + "\n"
    _write(args.out, text)


def cmd_plot(args, parser) -> None:
    sizes = {k: getattr(args, k) for k in ("width", "height") if getattr(args, k) is not None}
    if args.samples is not None:
        sizes["samples_per_curve"] = args.samples
    if args.figure == "grid":
        spec = PlotSpec(s_values=tuple(args.s_values), t_values=tuple(args.t_values),
                        show_knots=not args.no_knots, **sizes)
        text = emit_svg_grid(spec)
    else:
        spec = FamilySpec(kind=args.figure, a_values=tuple(args.a_values), **sizes)
        text = emit_svg_family(spec)
    _write(args.out, text)


def cmd_fit(args, parser) -> str:
    text = _read(args.input)
    fmt = args.format
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    series = parse_json(text)[0] if fmt == "json" else parse_csv(text)
    result = fit_params(series)
    obj = {
        "s": _json_number(result.params.s),
        "t": _json_number(result.params.t),
        "rmse": _json_number(result.rmse),
        "iterations": result.iterations,
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def cmd_table(args, parser) -> None:
    lut = build_lut(CurveParams(args.s, args.t), args.resolution)
    _write(args.out, emit_lut_csv(lut))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, FormatError) as exc:
        print(f"biasgain {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliIOError as exc:
        print(f"biasgain {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO
    if out is not None:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
