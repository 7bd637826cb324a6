"""Command-line entry point: ``minklen <subcommand> [options]``.

Exit codes: 0 success, 1 bad arguments, 2 I/O failure, 3 degenerate input.
"""

from __future__ import annotations

import argparse
import sys

from minklen import harness
from minklen.estimator import EstimatorConfig, rasterize_boundary_estimate
from minklen.geometry import parse_frame, parse_shape
from minklen.raster import (
    PBMError,
    add_noise_patches,
    area_based_length,
    digitize,
    exhaustive_with_smoothing,
    perimeter_exhaustive,
    read_pbm,
    write_pbm,
)
from minklen.sampling import data_stream, draw_labeled_sample, measure_stream, noise_stream

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_DEGENERATE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _resolution(text: str) -> tuple[int, int]:
    w, _, h = text.lower().partition("x")
    try:
        return int(w), int(h or w)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--reps", type=int, default=1, help="number of replications")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (results do not depend on it)")

    p = _Parser(prog="minklen", description="Minkowski-content boundary length estimation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def est_opts(sp, n_default=None):
        sp.add_argument("--n", type=int, required=n_default is None, default=n_default)
        sp.add_argument("--eps", type=_floats, required=True, help="one or more smoothing values, comma separated")
        sp.add_argument("--mc-budget", type=int, default=1500)
        sp.add_argument("--g1", type=int, default=1)
        sp.add_argument("--r1", type=int, default=1)

    sp = sub.add_parser("estimate", parents=[common], help="estimate the boundary length of a shape")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--frame", type=parse_frame, default=None)
    est_opts(sp)
    sp.add_argument("--brute-force", action="store_true", help="use the exhaustive O(nB) evaluation")
    sp.add_argument("--area", action="store_true", help="also report the MC area and contour index")
    sp.add_argument("--raster", default=None, metavar="OUT.pbm:WxH", help="write T_n of replication 0 as an image")

    sp = sub.add_parser("table", parents=[common], help="reproduce a table preset")
    sp.add_argument("--which", choices=("1", "2", "3"), required=True)
    sp.add_argument("--image", default=None, help="PBM image for table 1")
    sp.add_argument("--mc-budget", type=int, default=1500)

    sp = sub.add_parser("converge", parents=[common], help="bias and L1 error versus sample size")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--n-list", type=_ints, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--mc-budget", type=int, default=None)

    sp = sub.add_parser("ci", parents=[common], help="contour index of an image or shape")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--image")
    src.add_argument("--shape")
    est_opts(sp)

    sp = sub.add_parser("digitize", parents=[common], help="rasterize a shape to PBM")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--res", type=_resolution, required=True, help="WxH")
    sp.add_argument("--frame", type=parse_frame, default=None)
    sp.add_argument("--plain", action="store_true", help="write P1 instead of P4")

    for name, help_ in (("perimeter", "pixel-edge perimeter"), ("area-length", "boundary-pixel area length")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--image", required=True)

    sp = sub.add_parser("exhaustive-smooth", parents=[common], help="all-pixel estimate with smoothing")
    sp.add_argument("--image", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--g1", type=int, default=1)
    sp.add_argument("--r1", type=int, default=1)

    sp = sub.add_parser("noise", parents=[common], help="add circular noise patches to an image")
    sp.add_argument("--image", required=True)
    sp.add_argument("--k", type=int, default=4)
    sp.add_argument("--radius", type=float, default=0.25)
    sp.add_argument("--plain", action="store_true")

    sp = sub.add_parser("noise-compare", parents=[common], help="exhaustive vs random method on noisy images")
    sp.add_argument("--shape", default="tschirnhausen:1")
    sp.add_argument("--res", type=int, default=300)
    sp.add_argument("--k", type=int, default=4)
    sp.add_argument("--radius", type=float, default=0.25)
    sp.add_argument("--n", type=int, default=5000)
    sp.add_argument("--eps", type=float, default=0.94)
    sp.add_argument("--mc-budget", type=int, default=1500)
    return p


def _scalar(args, name: str, value: float, **extra):
    harness.emit_report([{"quantity": name, "value": value, **extra}], args.format, args.out)


def _run(args) -> int:
    cmd = args.command
    if cmd == "estimate":
        outputs = ("length", "area", "ci") if args.area else ("length",)
        spec = harness.ExperimentSpec(args.shape, args.n, args.eps, args.mc_budget, args.g1, args.r1,
                                      reps=args.reps, seed=args.seed, frame=args.frame, outputs=outputs,
                                      mode="brute-force" if args.brute_force else "random")
        report = harness.run_replications(spec, threads=args.threads)
        if args.raster:
            path, _, res = args.raster.rpartition(":")
            w, h = _resolution(res)
            shape, frame = spec.resolve_shape(), spec.resolve_frame()
            sample = draw_labeled_sample(shape, frame, args.n, data_stream(args.seed, 0))
            cfg = EstimatorConfig(args.eps[0], args.mc_budget, args.g1, args.r1, measure_stream(args.seed, 0))
            write_pbm(rasterize_boundary_estimate(sample, frame, cfg, w, h), path)
        harness.emit_report(report, args.format, args.out)
    elif cmd == "table":
        specs = harness.table_specs(args.which, args.reps, args.seed, args.mc_budget, args.image)
        reports = [harness.ci_pipeline(args.image, s, args.threads) if args.which == "1"
                   else harness.run_replications(s, args.threads) for s in specs]
        merged = harness.ReplicationReport(f"table{args.which}", [r for rep in reports for r in rep.rows])
        harness.emit_report(merged, args.format, args.out)
    elif cmd == "converge":
        rows = harness.convergence_study(args.shape, args.n_list, args.c, args.mc_budget, args.reps, args.seed,
                                         threads=args.threads)
        harness.emit_report(rows, args.format, args.out)
    elif cmd == "ci":
        spec = harness.ExperimentSpec(args.shape or "image", args.n, args.eps, args.mc_budget, args.g1, args.r1,
                                      reps=args.reps, seed=args.seed, experiment_id="ci")
        report = harness.ci_pipeline(args.image or args.shape, spec, args.threads)
        harness.emit_report(report, args.format, args.out)
    elif cmd == "digitize":
        shape = parse_shape(args.shape)
        frame = args.frame or shape.default_frame()
        img = digitize(shape, frame, *args.res)
        if args.out == "-":
            raise ValueError("digitize needs --out PATH.pbm")
        write_pbm(img, args.out, raw=not args.plain)
    elif cmd == "perimeter":
        _scalar(args, "perimeter_exhaustive", perimeter_exhaustive(read_pbm(args.image)))
    elif cmd == "area-length":
        _scalar(args, "area_based_length", area_based_length(read_pbm(args.image)))
    elif cmd == "exhaustive-smooth":
        img = read_pbm(args.image)
        _scalar(args, "exhaustive_with_smoothing", exhaustive_with_smoothing(img, args.eps, (args.g1, args.r1)),
                eps=args.eps)
    elif cmd == "noise":
        if args.out == "-":
            raise ValueError("noise needs --out PATH.pbm")
        img = add_noise_patches(read_pbm(args.image), args.k, args.radius, noise_stream(args.seed, 0))
        write_pbm(img, args.out, raw=not args.plain)
    elif cmd == "noise-compare":
        cmp_ = harness.noise_compare(args.shape, args.res, args.k, args.radius, args.n, args.eps,
                                     args.reps, args.seed, args.mc_budget, args.threads)
        rows = [dict(r, flags=";".join(r["flags"])) for r in cmp_.rows]
        if args.format == "json":
            import json

            text = json.dumps({"rows": rows, "summary": cmp_.summary()}, indent=2) + "\n"
            if args.out == "-":
                sys.stdout.write(text)
            else:
                with open(args.out, "w") as fh:
                    fh.write(text)
        else:
            harness.emit_report(rows, "csv", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except harness.DegenerateInputError as exc:
        print(f"minklen: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, PBMError) as exc:
        print(f"minklen: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"minklen: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
