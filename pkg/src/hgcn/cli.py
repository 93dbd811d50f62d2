"""Command-line entry point: ``hgcn stats|analyze|oracle|matrix``."""

import argparse
import logging
import sys

from .common import ValidationError
from .config import PipelineConfig

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

log = logging.getLogger("hgcn")


def _jobs(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("--jobs must be >= 1")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="hgcn", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value pipeline config file")
        p.add_argument("--jobs", type=_jobs, default=1, help="worker threads")

    p = sub.add_parser("stats", help="per-bin log-magnitude statistics of a WAV directory")
    p.add_argument("--in", dest="indir", required=True)
    p.add_argument("--out", required=True)
    common(p)

    p = sub.add_parser("analyze", help="pitch, energy labels, VAD/VRD and gate for one WAV")
    p.add_argument("--in", dest="wav", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--plot", action="store_true", help="also write gate_process.png")
    common(p)

    p = sub.add_parser("oracle", help="oracle-gate compensation of a noisy/clean pair")
    p.add_argument("--noisy", required=True)
    p.add_argument("--clean", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--figure", help="optional PNG with spectrograms and mask")
    common(p)

    p = sub.add_parser("matrix", help="export the harmonic integral matrix")
    p.add_argument("--out", required=True)
    p.add_argument("--sr", type=int, default=8000, help="Nyquist frequency in Hz")
    p.add_argument("--bins", type=int, default=257)
    common(p)
    return parser


def run(args):
    from . import pipeline

    cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    if args.command == "stats":
        stats = pipeline.run_stats(args.indir, args.out, cfg, jobs=args.jobs)
        print(f"clips={stats.clip_count} bins={stats.n_bins} -> {args.out}")
    elif args.command == "analyze":
        res = pipeline.run_analyze(args.wav, args.stats, args.outdir, cfg,
                                   jobs=args.jobs, plot=args.plot)
        print(f"frames={len(res.vad)} vad={int(res.vad.sum())} "
              f"gate_open={int(res.gate.sum())} -> {args.outdir}")
    elif args.command == "oracle":
        res = pipeline.run_oracle_gate(args.noisy, args.clean, args.stats, args.out,
                                       args.report, cfg, figure=args.figure)
        print(f"si_sdr before={res.si_sdr_before:.3f} dB after={res.si_sdr_after:.3f} dB")
    elif args.command == "matrix":
        U = pipeline.integral_matrix(args.sr, args.bins, cfg.valley_rule)
        U.save(args.out)
        print(f"{U.values.shape[0]}x{U.values.shape[1]} -> {args.out}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
