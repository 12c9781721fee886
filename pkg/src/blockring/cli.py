"""Command-line front end.

    blockring build   --topology block-ring --qubits 9 --block-size 3 --out br9.qasm
    blockring expr    --topology ring --qubits 4 --samples 2048 --out ring.json
    blockring ent     --topology all-to-all --qubits 8 --format csv
    blockring suite   --qubits 8 --layers 1 2 --out suite.csv --format csv
    blockring sweep-m --qubits 8 --layers 1
    blockring rerun   suite.csv --out again.csv
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from .experiment import ExperimentSpec, execute, read_spec
from .topology import TOPOLOGIES


def _add_circuit_flags(p: argparse.ArgumentParser, single_layer: bool = True) -> None:
    p.add_argument("--topology", choices=TOPOLOGIES)
    p.add_argument("--block-size", type=int, help="qubits per block (block-ring); default: divisor of n nearest sqrt(n)")
    p.add_argument("--stride", type=int, default=3, help="second-cycle stride for ring-stride (default 3)")
    if single_layer:
        p.add_argument("--layers", type=int, default=1)
    p.add_argument("--entangler", choices=("crx", "crz"), default="crx")
    p.add_argument("--idle", action="store_true", help="use the empty circuit")
    p.add_argument("--no-entanglers", action="store_true", help="drop all two-qubit gates")


def _add_sampling_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=20480)
    p.add_argument("--bins", type=int, default=75)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on this)")


def _add_common(p: argparse.ArgumentParser, formats: tuple[str, ...], default_format: str) -> None:
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=default_format)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockring", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="export a circuit as OpenQASM 2.0 with seeded angles")
    _add_common(p, ("qasm",), "qasm")
    _add_circuit_flags(p)

    for name, what in (("expr", "expressibility (KL divergence, nats)"), ("ent", "entangling capability (mean MW Q)")):
        p = sub.add_parser(name, help=f"estimate {what}")
        _add_common(p, ("json", "csv"), "json")
        _add_circuit_flags(p)
        _add_sampling_flags(p)

    p = sub.add_parser("suite", help="cost and descriptors of the ten comparison circuits")
    _add_common(p, ("csv", "json"), "csv")
    p.add_argument("--topology", choices=("suite",), default="suite", help=argparse.SUPPRESS)
    p.add_argument("--block-size", type=int)
    p.add_argument("--layers", type=int, nargs="+", default=[1, 2])
    _add_sampling_flags(p)

    p = sub.add_parser("sweep-m", help="Block-Ring cost and descriptors for every block size dividing n")
    _add_common(p, ("csv", "json"), "csv")
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--entangler", choices=("crx", "crz"), default="crx")
    _add_sampling_flags(p)

    p = sub.add_parser("rerun", help="regenerate a report from the experiment spec embedded in it")
    p.add_argument("report", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    layers = args.layers if isinstance(args.layers, list) else [args.layers]
    return ExperimentSpec(
        command=args.command,
        qubits=args.qubits,
        topology=None if args.command in ("suite", "sweep-m") else args.topology,
        block_size=getattr(args, "block_size", None),
        stride=getattr(args, "stride", 3),
        layers=tuple(layers),
        entangler=getattr(args, "entangler", "crx"),
        samples=getattr(args, "samples", 20480),
        bins=getattr(args, "bins", 75),
        seed=args.seed,
        repeats=getattr(args, "repeats", 1),
        idle=getattr(args, "idle", False),
        no_entanglers=getattr(args, "no_entanglers", False),
        format=args.format,
    )


def _check_writable(path: Path | None) -> None:
    if path is None:
        return
    parent = path.resolve().parent
    if not parent.is_dir():
        raise ValueError(f"output directory {parent} does not exist")
    if not os.access(parent, os.W_OK):
        raise ValueError(f"output directory {parent} is not writable")


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    # write-then-rename so a failed run never leaves a partial report behind
    fd, tmp = tempfile.mkstemp(dir=path.resolve().parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "rerun":
            spec = read_spec(args.report.read_text(encoding="utf-8"))
        else:
            spec = spec_from_args(args)
        _check_writable(args.out)
        spec.check()
        text = execute(spec, workers=args.workers if hasattr(args, "workers") else 1)
        _write(text, args.out)
    except (ValueError, OSError) as exc:
        print(f"blockring: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
