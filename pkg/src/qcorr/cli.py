"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numeric-contract failure.
Threshold and boundary values are printed with 6 decimals; CSV uses 9.
"""
from __future__ import annotations

import argparse
import json
import sys

from .channels import ChannelKind, parse_side
from .errors import NumericError, UsageError
from .selfcheck import run_selfcheck
from .sweep import (
    SweepSpec,
    emit_csv,
    evaluate_point,
    find_separability_boundaries,
    find_violation_threshold,
    run_sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _unit_interval(name):
    def parse(text):
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not 0.0 <= x <= 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in [0, 1], got {text}")
        return x
    return parse


def _positive(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return x


def _p_list(text):
    parse = _unit_interval("p")
    return [parse(tok) for tok in text.split(",") if tok.strip()]


def _channel(text):
    try:
        return ChannelKind.parse(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _side(text):
    try:
        return parse_side(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcorr", description="Negativity, discord and CHSH violation "
                     "of a two-qubit state family under decoherence.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, side=True):
        p.add_argument("--channel", type=_channel, required=True, help="adc, pdc, dpc or none")
        if side:
            p.add_argument("--side", type=_side, default="both", help="a, b or both (default)")

    m = sub.add_parser("measure", help="evaluate all measures at one (p, alpha)")
    common(m)
    m.add_argument("--alpha", type=_unit_interval("alpha"), required=True)
    m.add_argument("--p", type=_unit_interval("p"), required=True)
    m.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("sweep", help="CSV over a (p, alpha) grid")
    common(s)
    s.add_argument("--p-list", type=_p_list, required=True)
    s.add_argument("--alpha-steps", type=int, required=True)
    s.add_argument("--include-endpoints", action="store_true")
    s.add_argument("--out", help="write CSV here instead of stdout")
    s.add_argument("--workers", type=int, default=1, help=argparse.SUPPRESS)

    t = sub.add_parser("threshold", help="p beyond which CHSH is no longer violated")
    common(t)
    t.add_argument("--alpha", type=_unit_interval("alpha"), default=2 ** -0.5)
    t.add_argument("--tol", type=_positive, default=1e-6)

    b = sub.add_parser("boundaries", help="alpha intervals where the state is separable")
    common(b)
    b.add_argument("--p", type=_unit_interval("p"), required=True)
    b.add_argument("--tol", type=_positive, default=1e-6)

    sub.add_parser("selfcheck", help="run the invariant suite")
    return parser


def _measure(args, out):
    rec = evaluate_point(args.channel, args.p, args.alpha, args.side)
    if args.format == "json":
        payload = {
            "channel": rec.channel, "p": rec.p, "alpha": rec.alpha,
            "negativity": rec.negativity, "discord": rec.discord, "bchsh": rec.bchsh,
            "m_value": rec.m_value, "min_pt_eig": rec.min_pt_eig, "separable": rec.separable,
        }
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(emit_csv([rec]))
    return EXIT_OK


def _sweep(args, out):
    spec = SweepSpec(args.channel, tuple(args.p_list), args.alpha_steps, side=args.side,
                     include_endpoints=args.include_endpoints)
    text = emit_csv(run_sweep(spec, workers=args.workers))
    if args.out:
        with open(args.out, "w", newline="\n", encoding="ascii") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _threshold(args, out):
    p_star = find_violation_threshold(args.channel, args.side, args.alpha, args.tol)
    out.write("none\n" if p_star is None else f"{p_star:.6f}\n")
    return EXIT_OK


def _boundaries(args, out):
    for lo, hi in find_separability_boundaries(args.channel, args.side, args.p, args.tol):
        out.write(f"{lo:.6f},{hi:.6f}\n")
    return EXIT_OK


def _selfcheck(args, out):
    return EXIT_OK if run_selfcheck(out) else EXIT_NUMERIC


COMMANDS = {
    "measure": _measure,
    "sweep": _sweep,
    "threshold": _threshold,
    "boundaries": _boundaries,
    "selfcheck": _selfcheck,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"qcorr: error: {exc}\n")
        return EXIT_USAGE
    except NumericError as exc:
        err.write(f"qcorr: numeric error: {exc}\n")
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
