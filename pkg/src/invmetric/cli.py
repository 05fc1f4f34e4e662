"""Command-line front end: ``sweep``, ``emit`` and ``verify``.

Exit codes: 0 success / all checks pass, 1 check or I/O failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import checks
from .sweep import (
    QUANTITIES,
    EmissionError,
    SweepError,
    SweepSpec,
    emit,
    parse_direction,
    parse_grid,
    render,
    run_sweep,
)

log = logging.getLogger("invmetric")


def _sweep_options():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("quantity", choices=QUANTITIES)
    p.add_argument("--grid", help='"a,b,c", "log:start:stop:n" or "lin:start:stop:n"')
    p.add_argument("--delta", help="alias of --grid for the Kobayashi quantities")
    p.add_argument("--r", type=float, help="inner radius of the ring domain")
    p.add_argument("--direction", action="append", default=[],
                   help='N, T, or "custom re,im[,re,im]"; repeatable')
    p.add_argument("--tol", type=float, default=1e-12,
                   help="relative inversion tolerance for the punctured plane")
    p.add_argument("--max-index", type=int, default=None,
                   help="fixed series cutoff for the modular function")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="invmetric",
        description="Invariant metrics on punctured planar domains, the ball and the ring domain.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    opts = _sweep_options()
    sp = sub.add_parser("sweep", parents=[opts], help="evaluate a quantity over a grid")
    sp.add_argument("--out", help="write to this path instead of stdout")

    ep = sub.add_parser("emit", parents=[opts], help="evaluate a sweep and write it to a file")
    ep.add_argument("--out", required=True)

    vp = sub.add_parser("verify", help="run verification suites")
    vp.add_argument("suite", nargs="?", choices=sorted(checks.SUITES))
    vp.add_argument("--all", action="store_true", help="run every suite")
    vp.add_argument("--format", choices=("text", "json"), default="text")
    vp.add_argument("--out")
    vp.add_argument("--timing", action="store_true",
                    help="include runtimes (makes the report non-reproducible)")
    return parser


def _spec_from_args(args):
    grid_text = args.grid if args.grid is not None else args.delta
    if grid_text is None:
        raise SweepError("give --grid (or --delta)")
    return SweepSpec(
        quantity=args.quantity,
        grid=parse_grid(grid_text),
        r=args.r,
        directions=[parse_direction(d) for d in args.direction],
        tol=args.tol,
        max_index=args.max_index,
    )


def cmd_sweep(args):
    rows = run_sweep(_spec_from_args(args))
    if args.out:
        emit(rows, args.format, args.out)
    else:
        sys.stdout.write(render(rows, args.format))
    return 0


def cmd_emit(args):
    rows = run_sweep(_spec_from_args(args))
    path = emit(rows, args.format, args.out)
    log.info("wrote %d rows to %s", len(rows), path)
    return 0


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def render_report(results, fmt="text", timing=False) -> str:
    if fmt == "json":
        return json.dumps([_clean(r.as_dict(timing)) for r in results], indent=2) + "\n"
    lines = []
    for r in results:
        parts = [("PASS" if r.passed else "FAIL"), r.check]
        parts += [f"{k}={_clean(v)!r}" for k, v in r.witness.items()]
        if r.failure:
            parts.append(f"at={json.dumps(_clean(r.failure), sort_keys=True)}")
        if timing:
            parts.append(f"runtime={r.runtime:.3f}s")
        lines.append("  ".join(parts))
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    if args.all == (args.suite is not None):
        raise SweepError("give exactly one of SUITE or --all")
    results = checks.run_all() if args.all else checks.run_suite(args.suite)
    text = render_report(results, args.format, args.timing)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise EmissionError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {"sweep": cmd_sweep, "emit": cmd_emit, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except SweepError as exc:
        parser.error(str(exc))  # exits 2
    except EmissionError as exc:
        print(f"invmetric: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
