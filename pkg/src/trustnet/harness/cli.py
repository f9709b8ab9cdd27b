"""Command line interface.

Subcommands: run (single scenario), sweep (malicious-fraction experiment
over the comparator suite), gen-dataset, train-anfis, report. Exit codes:
0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .. import metrics as metrics_mod
from ..anfis import (
    TrainingConfig,
    fis_model,
    grid_model,
    load_model,
    prune_rules,
    rmse,
    save_model,
    train_hybrid,
)
from ..simnet.config import ScenarioConfig
from ..simnet.engine import Simulator
from .configio import load_config, save_config
from .dataset import (
    TrainingDatasetSpec,
    dataset_arrays,
    generate_dataset,
    read_dataset,
    write_dataset,
)
from .experiment import COMPARATORS, ExperimentSpec, run_experiment
from .report import report_run_dir

__all__ = ["main", "build_parser", "parse_sweep_values"]


def parse_sweep_values(text: str) -> tuple[float, ...]:
    """Accept '0.1:0.5:0.1' (inclusive range), '0.1,0.3,0.5', or one value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        values = []
        value = start
        while value <= stop + 1e-9:
            values.append(round(value, 10))
            value += step
        return tuple(values)
    return tuple(float(p) for p in text.split(","))


def _add_scenario_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="scenario config file (key=value lines)")
    parser.add_argument("--nodes", type=int, help="node count")
    parser.add_argument("--range", type=float, dest="tx_range", help="radio range, m")
    parser.add_argument("--speed", type=float, help="node speed, m/s")
    parser.add_argument("--duration", type=float, help="simulated seconds")
    parser.add_argument("--connections", type=int, help="concurrent CBR flows")
    parser.add_argument("--rate", type=float, help="CBR packets/s per flow")
    parser.add_argument("--kind", choices=("hide", "drop", "mixed"),
                        help="malicious behavior")
    parser.add_argument("--threshold", type=float, help="trust threshold on [0, 2]")
    parser.add_argument("--seed", type=int, help="scenario seed")


def _scenario_from_args(args, malicious: float | None = None) -> ScenarioConfig:
    overrides = {}
    for attr, key in (("nodes", "node_count"), ("tx_range", "tx_range"),
                      ("speed", "speed"), ("duration", "sim_duration"),
                      ("connections", "max_connections"), ("rate", "cbr_rate"),
                      ("kind", "malicious_kind"), ("threshold", "trust_threshold"),
                      ("seed", "seed")):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    if malicious is not None:
        overrides["malicious_fraction"] = malicious
    if args.config:
        return load_config(args.config, overrides)
    config = ScenarioConfig.from_dict(overrides) if overrides else ScenarioConfig()
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustnet",
        description="trust-managed multihop network simulator and experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and print its metrics")
    _add_scenario_overrides(p_run)
    p_run.add_argument("--malicious", type=float, default=None,
                       help="malicious node fraction in [0, 1]")
    trust = p_run.add_mutually_exclusive_group()
    trust.add_argument("--trust", action="store_true", help="enable the trust system")
    trust.add_argument("--no-trust", action="store_true", help="disable the trust system")
    p_run.add_argument("--model", help="trained model file (default: fixed comparator)")
    p_run.add_argument("--out", help="directory for the event log and scenario echo")

    p_sweep = sub.add_parser("sweep", help="comparator sweep over malicious fractions")
    _add_scenario_overrides(p_sweep)
    p_sweep.add_argument("--malicious", type=parse_sweep_values,
                         default=(0.1, 0.2, 0.3, 0.4, 0.5),
                         help="sweep values: start:stop:step or comma list")
    p_sweep.add_argument("--reps", type=int, default=20, help="repetitions per cell")
    p_sweep.add_argument("--comparators", default=",".join(COMPARATORS),
                         help="comma list out of aodv,fis_trust,anfis_tmm")
    p_sweep.add_argument("--model", help="trained model file (trains one when absent)")
    p_sweep.add_argument("--keep-logs", action="store_true",
                         help="persist every run's event log")
    p_sweep.add_argument("--out", default="experiment_out", help="output directory")

    p_gen = sub.add_parser("gen-dataset", help="generate model training data")
    p_gen.add_argument("--nodes", type=int, default=50)
    p_gen.add_argument("--malicious", type=parse_sweep_values, default=(0.2,),
                       help="malicious fraction(s)")
    p_gen.add_argument("--kind", choices=("hide", "drop", "mixed"), default="drop")
    p_gen.add_argument("--snapshots", type=int, default=10, help="snapshots per run")
    p_gen.add_argument("--duration", type=float, default=60.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--soft-labels", action="store_true",
                       help="use observed success rates as targets")
    p_gen.add_argument("--out", required=True, help="output dataset (tsv)")

    p_train = sub.add_parser("train-anfis", help="fit the adaptive model on a dataset")
    p_train.add_argument("--dataset", required=True)
    p_train.add_argument("--epochs", type=int, default=50)
    p_train.add_argument("--learning-rate", type=float, default=0.05)
    p_train.add_argument("--mf", type=int, choices=(3, 5), default=3,
                         help="linguistic terms per input")
    p_train.add_argument("--rules", type=int, default=None,
                         help="prune the rule base to this many rules")
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", required=True, help="output model file")

    p_report = sub.add_parser("report", help="summarize a finished experiment")
    p_report.add_argument("--dir", required=True, help="experiment output directory")

    return parser


def _cmd_run(args) -> int:
    config = _scenario_from_args(args, args.malicious)
    if args.trust and args.no_trust:
        raise ValueError("--trust and --no-trust are mutually exclusive")
    trust_enabled = args.trust or (config.trust_enabled and not args.no_trust)
    config = config.replace(trust_enabled=trust_enabled)
    model = None
    if trust_enabled:
        if args.model:
            with open(args.model) as fh:
                model = load_model(fh.read())
        else:
            model = fis_model()
    log = Simulator(config, trust_model=model).run()
    report = metrics_mod.report_from_log(log)
    for name in metrics_mod.MetricReport.column_names():
        value = getattr(report, name)
        print(f"{name}: {'-' if value is None else f'{value:.6f}'}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        log.write(out_dir / "events.log")
        save_config(config, out_dir / "scenario.cfg")
        print(f"event log written to {out_dir / 'events.log'}")
    return 0


def _cmd_sweep(args) -> int:
    base = _scenario_from_args(args)
    comparators = tuple(args.comparators.split(","))
    spec = ExperimentSpec(
        base_config=base,
        sweep_values=args.malicious,
        comparators=comparators,
        repetitions=args.reps,
        base_seed=args.seed if args.seed is not None else 1000,
        output_dir=args.out,
        model_path=args.model,
    )
    result = run_experiment(spec, keep_logs=args.keep_logs)
    print(f"{len(result.rows)} runs -> {result.runs_csv}")
    print(f"aggregates -> {result.aggregate_csv}")
    report = report_run_dir(args.out)
    print(report.render_text())
    return 0


def _cmd_gen_dataset(args) -> int:
    spec = TrainingDatasetSpec(
        node_count=args.nodes,
        malicious_fractions=args.malicious,
        malicious_kind=args.kind,
        snapshots_per_run=args.snapshots,
        sim_duration=args.duration,
        seed=args.seed,
        soft_labels=args.soft_labels,
    )
    rows = generate_dataset(spec)
    write_dataset(rows, args.out)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def _cmd_train(args) -> int:
    rows = read_dataset(args.dataset)
    X, y = dataset_arrays(rows)
    model = grid_model(args.mf)
    if args.rules is not None:
        model = prune_rules(model, X, args.rules)
    config = TrainingConfig(epochs=args.epochs, learning_rate=args.learning_rate,
                            seed=args.seed)
    initial = rmse(model, (X, y))
    result = train_hybrid(model, (X, y), config)
    with open(args.out, "w") as fh:
        fh.write(save_model(result.model))
    print(f"rmse {initial:.6f} -> {result.loss_history[-1]:.6f} "
          f"over {len(result.loss_history)} epochs")
    print(f"model -> {args.out}")
    return 0


def _cmd_report(args) -> int:
    print(report_run_dir(args.dir).render_text())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    commands = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "gen-dataset": _cmd_gen_dataset,
        "train-anfis": _cmd_train,
        "report": _cmd_report,
    }
    try:
        return commands[args.command](args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # runtime failures exit 1 with a diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
