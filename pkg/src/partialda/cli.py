"""Command line front end.

Subcommands: ``gen-synth`` writes a synthetic benchmark, ``adapt`` runs the
full adaptation loop, ``baseline`` runs the single-propagation reference and
``eval`` scores saved soft labels against ground truth.  Exit codes: 0 on
success, 1 for parse, validation or configuration problems, 2 for numerical
failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .core import AdaptationConfig, accuracy, hard_labels, make_one_hot
from .data import (
    ResultReport,
    SyntheticSpec,
    generate_synthetic,
    load_features_csv,
    load_labels,
    load_soft_labels,
    save_features_csv,
    save_labels,
    save_report,
    save_soft_labels,
)
from .errors import ConfigurationError, NumericalError, ParseError, ValidationError
from .pipeline import AdaptationResult, adapt, baseline_propagate


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_io_arguments(sub):
    sub.add_argument("--source-features", required=True, help="CSV, one sample per row")
    sub.add_argument("--source-labels", required=True, help="one integer per line")
    sub.add_argument("--target-features", required=True, help="CSV, one sample per row")
    sub.add_argument("--target-labels", help="optional ground truth for scoring")
    sub.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partialda", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    p_adapt = commands.add_parser("adapt", help="run the adaptation loop")
    _add_io_arguments(p_adapt)
    p_adapt.add_argument("--alpha-p", type=float, default=1.0)
    p_adapt.add_argument("--alpha-c", type=float, default=1.0)
    p_adapt.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p_adapt.add_argument("--k", type=int, default=100)
    p_adapt.add_argument("--sigma", type=float, default=0.1)
    p_adapt.add_argument("--delta", type=float, default=1e-3)
    p_adapt.add_argument("--max-iterations", type=int, default=10)
    p_adapt.add_argument("--kernel", choices=("none", "linear"), default="none")
    p_adapt.add_argument("--seed", type=int, default=0)
    p_adapt.add_argument("--convergence-tol", type=float, default=0.0)
    p_adapt.add_argument("--binary-sample-weights", action="store_true")
    p_adapt.add_argument("--rhs-reg", type=float, default=1e-6)
    p_adapt.set_defaults(func=cmd_adapt)

    p_base = commands.add_parser("baseline", help="single propagation, no projection")
    _add_io_arguments(p_base)
    p_base.add_argument("--sigma", type=float, default=0.1)
    p_base.set_defaults(func=cmd_baseline)

    spec_defaults = SyntheticSpec()
    p_gen = commands.add_parser("gen-synth", help="write a synthetic benchmark")
    p_gen.add_argument("--out-dir", required=True)
    p_gen.add_argument(
        "--num-source-classes", type=int, default=spec_defaults.num_source_classes
    )
    p_gen.add_argument(
        "--num-target-classes", type=int, default=spec_defaults.num_target_classes
    )
    p_gen.add_argument("--dim", type=int, default=spec_defaults.dim)
    p_gen.add_argument(
        "--samples-per-class-source",
        type=int,
        default=spec_defaults.samples_per_class_source,
    )
    p_gen.add_argument(
        "--samples-per-class-target",
        type=int,
        default=spec_defaults.samples_per_class_target,
    )
    p_gen.add_argument(
        "--cluster-radius", type=float, default=spec_defaults.cluster_radius
    )
    p_gen.add_argument("--noise-std", type=float, default=spec_defaults.noise_std)
    p_gen.add_argument(
        "--shift-rotation-deg", type=float, default=spec_defaults.shift_rotation_deg
    )
    p_gen.add_argument(
        "--shift-translation", type=float, default=spec_defaults.shift_translation
    )
    p_gen.add_argument("--seed", type=int, default=spec_defaults.seed)
    p_gen.set_defaults(func=cmd_gen_synth)

    p_eval = commands.add_parser("eval", help="score saved soft labels")
    p_eval.add_argument("pred_soft_labels", help="CSV written by adapt or baseline")
    p_eval.add_argument("truth_labels", help="one integer per line")
    p_eval.set_defaults(func=cmd_eval)
    return parser


def _load_domains(args):
    x_s = load_features_csv(args.source_features)
    labels_s = load_labels(args.source_labels)
    y_s = make_one_hot(labels_s, num_classes=int(labels_s.max()) + 1)
    x_t = load_features_csv(args.target_features)
    return x_s, y_s, x_t


def _score(result: AdaptationResult, args):
    if not args.target_labels:
        return None, None
    truth = load_labels(args.target_labels)
    overall, per_class = accuracy(result.hard_labels, truth)
    return overall, per_class


def _write_outputs(result: AdaptationResult, config_echo: dict, args,
                   duration: float) -> tuple[float | None, Path]:
    overall, per_class = _score(result, args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = ResultReport(
        config=config_echo,
        overall_accuracy=overall,
        per_class_accuracy=per_class,
        class_weights=[float(v) for v in result.class_weights.weights],
        class_mask=[int(v) for v in result.class_weights.mask],
        iterations_run=result.iterations_run,
        history=[asdict(rec) for rec in result.history],
        warnings={
            "mask_fallbacks": sum(r.mask_fallbacks for r in result.history),
            "graph_fallbacks": sum(r.graph_fallbacks for r in result.history),
        },
        duration_seconds=duration,
    )
    save_report(report, out_dir / "report.json")
    save_soft_labels(result.soft_labels, out_dir / "soft_labels.csv")
    return overall, out_dir


def _summary_line(kind: str, overall, result: AdaptationResult) -> str:
    acc = "n/a" if overall is None else f"{overall:.4f}"
    return (f"{kind}: accuracy={acc} "
            f"surviving_classes={result.class_weights.surviving} "
            f"iterations={result.iterations_run}")


def cmd_adapt(args) -> int:
    x_s, y_s, x_t = _load_domains(args)
    config = AdaptationConfig(
        alpha_p=args.alpha_p, alpha_c=args.alpha_c, lam=args.lam, k=args.k,
        sigma=args.sigma, delta=args.delta, max_iterations=args.max_iterations,
        kernel=args.kernel, seed=args.seed, convergence_tol=args.convergence_tol,
        binary_sample_weights=args.binary_sample_weights, rhs_reg=args.rhs_reg,
    )
    start = time.perf_counter()
    result = adapt(x_s, y_s, x_t, config)
    duration = time.perf_counter() - start
    overall, _ = _write_outputs(result, asdict(config), args, duration)
    print(_summary_line("adapt", overall, result))
    return 0


def cmd_baseline(args) -> int:
    x_s, y_s, x_t = _load_domains(args)
    start = time.perf_counter()
    result = baseline_propagate(x_s, y_s, x_t, sigma=args.sigma)
    duration = time.perf_counter() - start
    overall, _ = _write_outputs(result, {"sigma": args.sigma}, args, duration)
    print(_summary_line("baseline", overall, result))
    return 0


def cmd_gen_synth(args) -> int:
    spec = SyntheticSpec(
        num_source_classes=args.num_source_classes,
        num_target_classes=args.num_target_classes,
        dim=args.dim,
        samples_per_class_source=args.samples_per_class_source,
        samples_per_class_target=args.samples_per_class_target,
        cluster_radius=args.cluster_radius,
        noise_std=args.noise_std,
        shift_rotation_deg=args.shift_rotation_deg,
        shift_translation=args.shift_translation,
        seed=args.seed,
    )
    dataset = generate_synthetic(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_features_csv(dataset.x_s, out_dir / "source_features.csv")
    save_labels(dataset.y_s, out_dir / "source_labels.txt")
    save_features_csv(dataset.x_t, out_dir / "target_features.csv")
    save_labels(dataset.y_t, out_dir / "target_labels.txt")
    (out_dir / "spec.json").write_text(json.dumps(asdict(spec), indent=2) + "\n")
    print(f"gen-synth: wrote {dataset.x_s.shape[1]} source and "
          f"{dataset.x_t.shape[1]} target samples to {out_dir}")
    return 0


def cmd_eval(args) -> int:
    p = load_soft_labels(args.pred_soft_labels)
    truth = load_labels(args.truth_labels)
    pred = hard_labels(p)
    overall, per_class = accuracy(pred, truth)
    print(f"overall_accuracy {overall:.6f}")
    for c in sorted(per_class):
        print(f"class {c} accuracy {per_class[c]:.6f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on usage errors and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, ConfigurationError, ParseError) as exc:
        print(f"partialda: error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        name = exc.filename if exc.filename else exc
        print(f"partialda: error: file not found: {name}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"partialda: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"partialda: numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
