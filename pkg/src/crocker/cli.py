"""Command-line entry point: ``python -m crocker <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import formats, pipeline
from .errors import InvalidInput, IoError


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--preset", choices=sorted(pipeline.PRESETS))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, default=Path("crocker_out"))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--paper-scale", action="store_true",
                   help="n=300, box 25, T=2000, 100 simulations per eta")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crocker", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("simulate", help="generate Vicsek traces and manifest.json"))
    _common(sub.add_parser("summarize", help="order parameters, barcodes and crocker stacks"))

    p = sub.add_parser("distances", help="distance matrix for one feature kind")
    _common(p)
    p.add_argument("--feature", action="append", required=True)
    p.add_argument("--pca", type=int, help="reduce to k principal components first")

    p = sub.add_parser("cluster", help="K-medoids on a distance matrix")
    _common(p)
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("-K", type=int)

    _common(sub.add_parser("experiment", help="simulate, summarize, compare and cluster"))

    p = sub.add_parser("render", help="CSV grid and PGM heatmap per alpha slice")
    p.add_argument("input", type=Path, help="stack JSON file")
    p.add_argument("--out", type=Path, default=Path("render"))
    p.add_argument("--clamp", type=float)
    p.add_argument("--no-clamp", action="store_true")
    return parser


def _config(args) -> pipeline.ExperimentConfig:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise InvalidInput(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    overrides["seed"] = args.seed
    overrides["threads"] = args.threads
    return pipeline.load_config(args.config, args.preset, args.paper_scale, overrides)


def _manifest_config(args):
    manifest = formats.read_manifest(args.out / "manifest.json")
    cfg = pipeline.config_from_manifest(manifest, threads=args.threads)
    return manifest, cfg


def run(args) -> int:
    cmd = args.command
    if cmd == "render":
        clamp = args.clamp
        for path in pipeline.cmd_render(args.input, args.out, clamp, dim_default_clamp=not args.no_clamp):
            print(path)
        return 0
    if cmd == "simulate":
        manifest = pipeline.cmd_simulate(_config(args), args.out)
        print(f"{len(manifest['simulations'])} traces written to {args.out}")
    elif cmd == "summarize":
        manifest, cfg = _manifest_config(args)
        pipeline.cmd_summarize(manifest, cfg, args.out)
        print(f"summaries written under {args.out / 'features'}")
    elif cmd == "distances":
        manifest, cfg = _manifest_config(args)
        _, path = pipeline.cmd_distances(manifest, args.feature, cfg, args.out, pca=args.pca)
        print(path)
    elif cmd == "cluster":
        manifest, cfg = _manifest_config(args)
        dm = formats.read_distance_matrix(args.matrix)
        target = args.out / "clusters" / (args.matrix.stem + ".json")
        _, acc = pipeline.cmd_cluster(dm, pipeline.load_labels(manifest), args.K, cfg.seed, target)
        print(f"accuracy {acc.accuracy:.4f}")
        print(pipeline.format_confusion(acc))
    elif cmd == "experiment":
        report = pipeline.cmd_experiment(_config(args), args.out)
        print(pipeline.format_report(report), end="")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
