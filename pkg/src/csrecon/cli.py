"""Command-line interface: ``csrecon {reconstruct,sweep,synth,transform}``.

Standard output carries ``key=value`` lines only; diagnostics go to stderr.
Exit status 0 on success (non-convergence is a warning), 2 for argument
errors, 3 for I/O errors.
"""

import argparse
import logging
import sys

import numpy as np

from .evaluation import SweepSpec, run_cell, run_sweep, write_csv
from .signal_io import (
    Frame, SynthKind, SynthSpec, WavError, read_wav_frame, synthesize, write_wav,
)
from .solver import SolverConfig
from .transforms import Basis, forward, sparsity_count

EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _add_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="16-bit PCM WAV file")
    src.add_argument("--synth-kind", choices=[k.value for k in SynthKind])
    p.add_argument("--frame-start", type=int, default=0)
    p.add_argument("--frame-len", type=int, default=3000)
    _add_synth_params(p)


def _add_synth_params(p):
    p.add_argument("--synth-n", type=int, default=3000)
    p.add_argument("--synth-k", type=int, default=10)
    p.add_argument("--fundamental", type=int, default=8)
    p.add_argument("--harmonics", type=int, default=10)
    p.add_argument("--decay", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)


def _add_solver(p):
    defaults = SolverConfig()
    p.add_argument("--max-iters", type=int, default=defaults.max_iters)
    p.add_argument("--residual-tol", type=float, default=defaults.residual_tol)
    p.add_argument("--rho", type=float, default=defaults.admm_rho)


def _basis_arg(p, required=True, default=None):
    p.add_argument("--basis", choices=[b.value for b in Basis], required=required, default=default)


def build_parser():
    parser = argparse.ArgumentParser(prog="csrecon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reconstruct", help="recover one frame from a random sample subset")
    _add_source(p)
    _basis_arg(p, required=False, default="dct")
    p.add_argument("--percent", type=int, default=50)
    p.add_argument("--output", help="write the reconstruction as WAV")
    _add_solver(p)

    p = sub.add_parser("sweep", help="MSE versus measurement percentage for each basis")
    _add_source(p)
    _basis_arg(p, required=False)
    p.add_argument("--percent-min", type=int, default=20)
    p.add_argument("--percent-max", type=int, default=90)
    p.add_argument("--percent-step", type=int, default=10)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--csv", help="write per-trial rows to this CSV file")
    _add_solver(p)

    p = sub.add_parser("synth", help="write a synthetic test frame as WAV")
    p.add_argument("--synth-kind", choices=[k.value for k in SynthKind], required=True)
    _add_synth_params(p)
    _basis_arg(p, required=False, default="dct")
    p.add_argument("--output", required=True)

    p = sub.add_parser("transform", help="list the dominant coefficients of a frame")
    _add_source(p)
    _basis_arg(p, required=False, default="dct")
    p.add_argument("--top-k", type=int, default=10)
    return parser


def _synth_spec(args):
    return SynthSpec(
        kind=args.synth_kind, n=args.synth_n, k=args.synth_k,
        fundamental_index=args.fundamental, harmonic_count=args.harmonics,
        decay=args.decay, seed=args.seed,
    )


def _load_frame(args, basis):
    if args.input is not None:
        if args.frame_len < 1 or args.frame_start < 0:
            raise UsageError("--frame-len must be >= 1 and --frame-start >= 0")
        return read_wav_frame(args.input, args.frame_start, args.frame_len)
    return synthesize(_synth_spec(args), basis)


def _solver(args):
    return SolverConfig(max_iters=args.max_iters, residual_tol=args.residual_tol,
                        admm_rho=args.rho)


def _check_percent(p):
    if not 1 <= p <= 100:
        raise UsageError(f"percent must lie in [1, 100], got {p}")


def cmd_reconstruct(args, out):
    _check_percent(args.percent)
    basis = Basis(args.basis)
    frame = _load_frame(args, basis)
    row, rec = run_cell(frame, basis, args.percent, args.seed, _solver(args),
                        return_reconstruction=True)
    if args.output:
        write_wav(args.output, Frame(rec.frame.samples, frame.sample_rate, "reconstruction"))
    print(
        f"basis={basis.value} percent={args.percent} M={row.m} mse={row.mse:.6e} "
        f"converged={str(row.converged).lower()} iters={row.iterations}",
        file=out,
    )
    return 0


def cmd_sweep(args, out):
    for p in (args.percent_min, args.percent_max):
        _check_percent(p)
    if args.percent_min > args.percent_max:
        raise UsageError("--percent-min exceeds --percent-max")
    if args.percent_step < 1:
        raise UsageError("--percent-step must be >= 1")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    bases = (Basis(args.basis),) if args.basis else (Basis.DCT, Basis.DFT)
    frame = _load_frame(args, bases[0])
    spec = SweepSpec(
        frame=frame,
        percentages=tuple(range(args.percent_min, args.percent_max + 1, args.percent_step)),
        trials=args.trials, bases=bases, base_seed=args.seed, solver=_solver(args),
    )
    report = run_sweep(spec)
    if args.csv:
        write_csv(report, args.csv)
    for (kind, pct), (mean, median) in report.aggregate().items():
        print(f"basis={kind.value} percent={pct} mean_mse={mean:.6e} median_mse={median:.6e}",
              file=out)
    return 0


def cmd_synth(args, out):
    frame = synthesize(_synth_spec(args), args.basis)
    write_wav(args.output, frame)
    print(f"wrote={args.output} kind={args.synth_kind} n={len(frame)} basis={args.basis}",
          file=out)
    return 0


def cmd_transform(args, out):
    if args.top_k < 1:
        raise UsageError("--top-k must be >= 1")
    frame = _load_frame(args, args.basis)
    coeffs = forward(frame, args.basis)
    mags = coeffs.magnitudes
    # stable sort keeps the lower index first among equal magnitudes
    order = np.argsort(-mags, kind="stable")[: args.top_k]
    for k in order:
        print(f"index={int(k)} magnitude={mags[k]:.6e}", file=out)
    print(f"sparsity_count={sparsity_count(coeffs, 1e-3)} threshold=1e-3", file=out)
    return 0


COMMANDS = {
    "reconstruct": cmd_reconstruct,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "transform": cmd_transform,
}


def _log_to_stderr():
    pkg = logging.getLogger("csrecon")
    for h in [h for h in pkg.handlers if getattr(h, "_csrecon_cli", False)]:
        pkg.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    handler._csrecon_cli = True
    pkg.addHandler(handler)
    pkg.setLevel(logging.WARNING)


def main(argv=None, out=None):
    out = out or sys.stdout
    _log_to_stderr()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"csrecon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WavError, OSError) as exc:
        print(f"csrecon: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"csrecon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
