"""Command-line front end.

Examples::

    qmatops hadamard A.json B.json --trace
    qmatops kron A.json B.json --stats
    qmatops col-swap A.json --k 0 --l 1 --sample 1000 --seed 7
    qmatops verify col-add A.json --k 0 --l 1
    qmatops stats-sweep hadamard --sizes 2,3,4

Exit status: 0 success, 1 verification mismatch, 2 invalid input,
3 post-selection impossible, 4 qubit cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import oracle
from .algorithms import ALGORITHMS, AlgorithmResult
from .errors import PostSelectionImpossible, QubitCapExceeded, ValidationError
from .gates import GateStats
from .matrixio import load_matrix, matrix_to_obj

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_POSTSELECT, EXIT_CAP = 0, 1, 2, 3, 4

COMMANDS = ("hadamard", "kron", "col-add", "col-swap", "verify", "stats-sweep")
_TWO_INPUTS = {"hadamard", "kron"}
_COLUMN_OPS = {"col-add", "col-swap"}

SWEEP_COLUMNS = (
    "n",
    "m",
    "pattern_controlled_x_count",
    "total_control_qubits",
    "cswap_count",
    "swap_count",
    "depth_layers",
)
DEFAULT_SWEEP_SIZES = {
    "hadamard": (2, 3, 4, 5, 6),
    "kron": (1, 2, 3),
    "col-add": (1, 2, 3, 4),
    "col-swap": (1, 2, 3, 4),
}


@dataclass
class RunConfig:
    command: str
    algorithm: str | None = None
    inputs: list[str] = field(default_factory=list)
    k: int | None = None
    l: int | None = None
    trace: bool = False
    stats: bool = False
    sample_count: int | None = None
    seed: int = 0
    general_kron: bool = False
    out: str | None = None
    sizes: list[int] | None = None

    @property
    def target(self) -> str:
        """Algorithm the command runs (``verify``/``stats-sweep`` name it separately)."""
        return self.algorithm if self.command in ("verify", "stats-sweep") else self.command

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(f"command: unknown {self.command!r}")
        algo = self.target
        if algo not in ALGORITHMS:
            raise ValidationError(f"algorithm: expected one of {sorted(ALGORITHMS)}, got {algo!r}")
        if self.command != "stats-sweep":
            want = 2 if algo in _TWO_INPUTS else 1
            if len(self.inputs) != want:
                raise ValidationError(f"inputs: {algo} takes {want} matrix file(s), got {len(self.inputs)}")
            has_kl = self.k is not None or self.l is not None
            if algo in _COLUMN_OPS and (self.k is None or self.l is None):
                raise ValidationError(f"--k/--l: required for {algo}")
            if algo not in _COLUMN_OPS and has_kl:
                raise ValidationError(f"--k/--l: only valid for column operations, not {algo}")
        if self.general_kron and algo != "kron":
            raise ValidationError("--general: only valid for kron")
        if self.sample_count is not None and self.sample_count < 1:
            raise ValidationError("--sample: must be a positive count")


def _round_prob(p: float) -> float:
    return float(f"{p:.15g}")


def _call(algo: str, mats: list[np.ndarray], cfg: RunConfig) -> AlgorithmResult:
    fn = ALGORITHMS[algo]
    if algo == "kron":
        return fn(mats[0], mats[1], general=cfg.general_kron)
    if algo in _COLUMN_OPS:
        return fn(mats[0], cfg.k, cfg.l)
    return fn(mats[0], mats[1])


def _result_report(result: AlgorithmResult, cfg: RunConfig) -> dict:
    report = {
        "algorithm": cfg.target,
        "decoded_matrix": matrix_to_obj(result.decoded()),
        "scale": result.output.scale,
        "success_probability": _round_prob(result.success_probability),
        "gate_stats": result.stats.to_dict(),
    }
    if cfg.trace:
        report["trace"] = result.trace_dicts()
    if cfg.stats:
        report["stage_stats"] = [
            {"stage": rec.stage, **rec.stats.to_dict()} for rec in result.stage_trace
        ]
    if cfg.sample_count is not None:
        rng = np.random.default_rng(cfg.seed)
        hits = int(np.count_nonzero(rng.random(cfg.sample_count) < result.success_probability))
        report["samples"] = {
            "count": cfg.sample_count,
            "seed": cfg.seed,
            "successes": hits,
            "estimate": hits / cfg.sample_count,
        }
    return report


def _verify_report(result: AlgorithmResult, mats: list[np.ndarray], cfg: RunConfig) -> dict:
    algo = cfg.target
    b = mats[1] if len(mats) > 1 else None
    expected = oracle.expected_output(algo, mats[0], b, k=cfg.k, l=cfg.l)
    p_exp = oracle.expected_probability(algo, mats[0], b, k=cfg.k, l=cfg.l)
    rep = oracle.compare(result.decoded(), expected, result.success_probability, p_exp)
    return {
        "algorithm": algo,
        "expected": matrix_to_obj(rep.expected),
        "rescale_factor": rep.rescale_factor,
        "max_abs_diff": rep.max_abs_diff,
        "probability_expected": _round_prob(rep.probability_expected),
        "probability_observed": _round_prob(rep.probability_observed),
        "passed": rep.passed(),
    }


def _sweep_shapes(algo: str, size: int) -> tuple[int, int, list[tuple[int, int]]]:
    """(n, m, input shapes) for one sweep point."""
    if algo == "hadamard":
        if size < 2:
            raise ValidationError(f"--sizes: hadamard sweeps n+m >= 2, got {size}")
        n = size // 2
        m = size - n
        return n, m, [(1 << n, 1 << m)] * 2
    if size < 1:
        raise ValidationError(f"--sizes: m must be >= 1, got {size}")
    if algo == "kron":
        return 1, size, [(2, 1 << size), (1 << size, 2)]
    return 1, size, [(2, 1 << size)]


def stats_sweep(algorithm: str, sizes: Sequence[int], seed: int = 0, draws: int = 3) -> list[dict]:
    """Gate statistics per size, checked to be identical over ``draws`` random inputs.

    ``sizes`` are values of n+m for ``hadamard`` and of m otherwise.
    """
    if algorithm not in ALGORITHMS:
        raise ValidationError(f"algorithm: expected one of {sorted(ALGORITHMS)}, got {algorithm!r}")
    rng = np.random.default_rng(seed)
    rows = []
    for size in sizes:
        n, m, shapes = _sweep_shapes(algorithm, size)
        seen: set[GateStats] = set()
        for _ in range(draws):
            mats = [rng.normal(size=s) + 1j * rng.normal(size=s) for s in shapes]
            if algorithm in _COLUMN_OPS:
                result = ALGORITHMS[algorithm](mats[0], 0, 1)
            else:
                result = ALGORITHMS[algorithm](*mats)
            seen.add(result.stats)
        if len(seen) != 1:
            raise RuntimeError(f"gate statistics depend on the input at size {size}: {seen}")
        stats = seen.pop().to_dict()
        rows.append({"n": n, "m": m, **{c: stats[c] for c in SWEEP_COLUMNS[2:]}})
    return rows


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a command; returns (exit status, text to emit)."""
    cfg.validate()
    if cfg.command == "stats-sweep":
        sizes = cfg.sizes or list(DEFAULT_SWEEP_SIZES[cfg.target])
        rows = stats_sweep(cfg.target, sizes, seed=cfg.seed)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return EXIT_OK, buf.getvalue()

    mats = [load_matrix(p) for p in cfg.inputs]
    result = _call(cfg.target, mats, cfg)
    if cfg.command == "verify":
        report = _verify_report(result, mats, cfg)
        status = EXIT_OK if report["passed"] else EXIT_MISMATCH
    else:
        report = _result_report(result, cfg)
        status = EXIT_OK
    return status, json.dumps(report, indent=2, sort_keys=True) + "\n"


def _sizes(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="source column (0-based)")
    common.add_argument("--l", type=int, help="target column (0-based)")
    common.add_argument("--trace", action="store_true", help="include per-stage norms and flag masses")
    common.add_argument("--stats", action="store_true", help="include per-stage gate statistics")
    common.add_argument("--sample", type=int, dest="sample_count", metavar="N",
                        help="draw N Bernoulli post-selection samples")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--general", action="store_true", dest="general_kron",
                        help="kron: allow arbitrary shapes (register reordering)")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="qmatops", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ALGORITHMS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("inputs", nargs="+", metavar="MATRIX.json")
    p = sub.add_parser("verify", parents=[common], help="compare against the classical oracle")
    p.add_argument("algorithm", choices=sorted(ALGORITHMS))
    p.add_argument("inputs", nargs="+", metavar="MATRIX.json")
    p = sub.add_parser("stats-sweep", parents=[common], help="gate counts over a size grid (CSV)")
    p.add_argument("algorithm", choices=sorted(ALGORITHMS))
    p.add_argument("--sizes", type=_sizes, help="n+m values for hadamard, m values otherwise")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        algorithm=getattr(args, "algorithm", None),
        inputs=list(getattr(args, "inputs", [])),
        k=args.k,
        l=args.l,
        trace=args.trace,
        stats=args.stats,
        sample_count=args.sample_count,
        seed=args.seed,
        general_kron=args.general_kron,
        out=args.out,
        sizes=getattr(args, "sizes", None),
    )
    try:
        status, text = run(cfg)
    except ValidationError as exc:
        print(f"qmatops: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PostSelectionImpossible as exc:
        print(f"qmatops: post-selection impossible: {exc}", file=sys.stderr)
        return EXIT_POSTSELECT
    except QubitCapExceeded as exc:
        print(f"qmatops: {exc}", file=sys.stderr)
        return EXIT_CAP
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
