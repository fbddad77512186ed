"""Command line entry point: ``python -m lialgebroid --manifest FILE``.

Exit status is 0 when every verification task passes, 1 when any fails
or errors, and 2 for usage or manifest errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .manifest import ManifestError, bundled_manifest_text, bundled_manifests, parse_manifest, parse_range
from .runner import DEFAULT_WEIGHTS, RunOptions, build_objects, run_tasks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _weights_arg(text):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonnegative(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lialgebroid",
        description="Verify algebroid manifests and compute exact cohomology.")
    p.add_argument("--manifest", required=True,
                   help="manifest file, or bundled:NAME for a shipped example")
    p.add_argument("--out", help="write tab-separated task/object/key/value records here")
    p.add_argument("--weights", type=_weights_arg, default=DEFAULT_WEIGHTS, metavar="LO..HI",
                   help="weight range for cohomology tasks (default -4..4)")
    p.add_argument("--max-degree", type=_nonnegative, default=None,
                   help="report cohomology only up to this degree")
    p.add_argument("--threads", type=_positive, default=1,
                   help="worker threads for weight slices")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return p


def _read_manifest(spec: str) -> str:
    if spec.startswith("bundled:"):
        name = spec.split(":", 1)[1]
        if name + ".manifest" not in bundled_manifests() and name not in bundled_manifests():
            raise FileNotFoundError(f"no bundled manifest {name!r}; available: "
                                    + ", ".join(bundled_manifests()))
        return bundled_manifest_text(name)
    return Path(spec).read_text(encoding="utf-8")


def _join_negative_values(argv):
    # "--weights -2..2" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for a in it:
        if a == "--weights":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        text = _read_manifest(args.manifest)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        manifest = parse_manifest(text)
        objects = build_objects(manifest)
    except ManifestError as exc:
        print(f"{args.manifest}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    opts = RunOptions(weights=args.weights, max_degree=args.max_degree, threads=args.threads)
    report = run_tasks(manifest, opts, objects)
    sys.stdout.write(report.table())
    if args.out:
        Path(args.out).write_text(report.tsv(), encoding="utf-8")
    if not report.ok:
        print("failed: " + ", ".join(report.failures), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
