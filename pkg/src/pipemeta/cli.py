#!/usr/bin/env python3
"""
pipemeta - Command Line Interface

Subcommands: datasets synth, run, metafeatures, metadataset, train-meta,
simulate and report. Every flag may also come from a key=value file passed
with ``--config``; flags given on the command line win.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from .core.config import CLEAN_MODES, PipemetaConfig, RunConfig, load_config_file
from .core.exceptions import PipemetaError
from .core.logging_utils import close_logging, setup_logging
from .core.seeding import derive_seed
from .core.validation import (
    ValidationError,
    validate_boolean_param,
    validate_existing_path,
    validate_integer_param,
)

USAGE_EXAMPLES = """
Usage:
  pipemeta datasets synth --n 12 --out data/ --seed 7
  pipemeta run --data-dir data/ --out results.jsonl --seed 7 --jobs 4
  pipemeta metafeatures --data-dir data/ --out metafeatures.csv --seed 7
  pipemeta metadataset --results results.jsonl --metafeatures metafeatures.csv --out meta.csv
  pipemeta train-meta --meta meta.csv --seed 7 --report
  pipemeta simulate --results results.jsonl --metafeatures metafeatures.csv --seed 7
  pipemeta report table1 --results results.jsonl
"""

BOOLEAN_DESTS = {"report", "pooled", "mode_includes_none"}
REPORT_KINDS = ["table1", "table2", "fig1", "table3", "summary"]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value file of flag defaults")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (default: LOG_LEVEL or INFO)")
    return common


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Run seed (default: PIPEMETA_SEED)")


def _add_execution(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data-dir", type=Path, help="Directory of dataset CSVs")
    parser.add_argument("--jobs", type=int, help="Worker processes (default: PIPEMETA_JOBS or 1)")
    parser.add_argument("--clean-mode", choices=CLEAN_MODES,
                        help="Fit imputation/encoding before or after the train/test split")
    parser.add_argument("--split-ratio", type=float, help="Training share of each dataset (default: 0.7)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="pipemeta",
        description="Preprocessing pipeline benchmark and metalearning workbench",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=USAGE_EXAMPLES,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    datasets = commands.add_parser("datasets", help="Dataset utilities")
    datasets_commands = datasets.add_subparsers(dest="datasets_command", required=True)
    synth = datasets_commands.add_parser("synth", parents=[common], help="Write a synthetic dataset corpus")
    synth.add_argument("--n", type=int, default=12, help="Number of datasets (default: 12)")
    synth.add_argument("--out", type=Path, help="Output directory")
    synth.add_argument("--missing-rate", type=float, default=0.05,
                       help="Missing-cell rate for the mixed datasets (default: 0.05)")
    _add_seed(synth)

    run = commands.add_parser("run", parents=[common], help="Run every pipeline on every dataset")
    _add_execution(run)
    run.add_argument("--out", type=Path, help="Results JSON-lines file (resumed when it exists)")
    run.add_argument("--ica-max-iter", type=int, help="FastICA iteration cap (default: 200)")
    run.add_argument("--max-matrix-bytes", type=int, help="Largest transformed matrix allowed")
    _add_seed(run)

    metafeatures = commands.add_parser("metafeatures", parents=[common], help="Extract dataset metafeatures")
    _add_execution(metafeatures)
    metafeatures.add_argument("--out", type=Path, help="Metafeature CSV")
    _add_seed(metafeatures)

    metadataset = commands.add_parser("metadataset", parents=[common], help="Build the metadataset")
    metadataset.add_argument("--results", type=Path, help="Results JSON-lines file")
    metadataset.add_argument("--metafeatures", type=Path, help="Metafeature CSV")
    metadataset.add_argument("--out", type=Path, help="Metadataset CSV")
    metadataset.add_argument("--comparator", choices=[">=", ">"], default=">=",
                             help="Label a pipeline 1 when test accuracy is >= (or >) baseline")

    train_meta = commands.add_parser("train-meta", parents=[common], help="Train and evaluate metamodels")
    train_meta.add_argument("--meta", type=Path, help="Metadataset CSV")
    train_meta.add_argument("--split-ratio", type=float, default=0.7, help="Training share of datasets")
    train_meta.add_argument("--pooled", action="store_true", help="One metamodel across all classifiers")
    train_meta.add_argument("--report", action="store_true", help="Print and save the holdout evaluation")
    _add_seed(train_meta)

    simulate = commands.add_parser("simulate", parents=[common], help="Run the agent simulation")
    simulate.add_argument("--results", type=Path, help="Results JSON-lines file")
    simulate.add_argument("--metafeatures", type=Path, help="Metafeature CSV")
    simulate.add_argument("--split", type=float, default=0.7, help="Training share of datasets (default: 0.7)")
    simulate.add_argument("--out", type=Path, help="Report CSV (default: <results>_simulation.csv)")
    simulate.add_argument("--decision-log", type=Path, help="Decision log (default: <out>_decisions.jsonl)")
    simulate.add_argument("--metric", choices=["relative", "absolute"], default="relative",
                          help="Percent worse relative to, or in points below, the optimum")
    simulate.add_argument("--mode-includes-none", action=argparse.BooleanOptionalAction, default=True,
                          help="Let the Mode agent choose no preprocessor")
    simulate.add_argument("--pooled", action="store_true", help="One metamodel across all classifiers")
    simulate.add_argument("--comparator", choices=[">=", ">"], default=">=", help="Metadataset label comparator")
    simulate.add_argument("--repeats", type=int, default=1, help="Repeat with derived seeds and average")
    _add_seed(simulate)

    report = commands.add_parser("report", parents=[common], help="Print a report table and save it as CSV")
    report.add_argument("kind", choices=REPORT_KINDS)
    report.add_argument("--results", type=Path, help="Results JSON-lines file")
    report.add_argument("--comparator", choices=[">", ">="], default=">",
                        help="Table 1 accuracy comparator (default: strictly greater)")
    report.add_argument("--truncate-at", type=float, default=3.0, help="Histogram truncation (default: 3.0)")
    report.add_argument("--simulation", type=Path, help="Simulation CSV for table3")
    return parser


def _leaf_parsers(parser: argparse.ArgumentParser) -> List[argparse.ArgumentParser]:
    leaves = []
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for child in action.choices.values():
                leaves.extend(_leaf_parsers(child) or [child])
    return leaves


def _apply_config_defaults(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    values: Dict[str, object] = dict(load_config_file(known.config))
    for dest in BOOLEAN_DESTS & values.keys():
        values[dest] = validate_boolean_param(values[dest], dest)
    for leaf in _leaf_parsers(parser):
        leaf.set_defaults(**values)


def _require(value, flag: str):
    if value is None:
        raise ValidationError(f"{flag} is required")
    return value


def _resolve_seed(args, env: PipemetaConfig) -> Optional[int]:
    seed = args.seed if getattr(args, "seed", None) is not None else env.seed
    return None if seed is None else validate_integer_param(seed, "seed", min_value=0)


def _execution_config(args, env: PipemetaConfig, out: Path) -> RunConfig:
    data_dir = validate_existing_path(_require(args.data_dir, "--data-dir"), "--data-dir", directory=True)
    return RunConfig(
        data_dir=data_dir,
        out_paths={"out": out},
        seed=_resolve_seed(args, env),
        jobs=args.jobs if args.jobs is not None else env.jobs,
        clean_mode=args.clean_mode or env.clean_mode,
        split_ratio=args.split_ratio if args.split_ratio is not None else env.split_ratio,
        ica_max_iter=getattr(args, "ica_max_iter", None) or env.ica_max_iter,
        ica_tol=env.ica_tol,
        max_matrix_bytes=getattr(args, "max_matrix_bytes", None) or env.max_matrix_bytes,
    )


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}_{suffix}")


def cmd_datasets_synth(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .data import write_corpus

    out = _require(args.out, "--out")
    config = RunConfig(out_paths={"out": out}, seed=_resolve_seed(args, env))
    n = validate_integer_param(args.n, "--n", min_value=1)
    paths = write_corpus(n, out, config.require_seed(), missing_rate=args.missing_rate)
    logger.info(f"Wrote {len(paths)} dataset(s) to {out}")
    return 0


def cmd_run(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .runner import run_experiments

    config = _execution_config(args, env, _require(args.out, "--out"))
    config.require_seed()
    logger.info(f"Run configuration: jobs={config.jobs}, clean_mode={config.clean_mode}, "
                f"split_ratio={config.split_ratio}")
    store = run_experiments(config, args.out)
    print(f"{len(store)} records in {args.out} ({sum(1 for r in store if not r.ok)} failed)")
    return 0


def cmd_metafeatures(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .metafeatures import extract_corpus, write_metafeatures

    config = _execution_config(args, env, _require(args.out, "--out"))
    vectors = extract_corpus(config)
    if not vectors:
        raise PipemetaError("no dataset produced metafeatures")
    write_metafeatures(vectors, args.out)
    print(f"Metafeatures for {len(vectors)} dataset(s) written to {args.out}")
    return 0


def cmd_metadataset(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .metafeatures import read_metafeatures
    from .metalearning import build_metadataset, write_metadataset
    from .runner import ResultsStore

    results = validate_existing_path(_require(args.results, "--results"), "--results")
    mf_path = validate_existing_path(_require(args.metafeatures, "--metafeatures"), "--metafeatures")
    out = _require(args.out, "--out")
    RunConfig(input_paths={"results": results, "metafeatures": mf_path}, out_paths={"out": out},
              label_comparator=args.comparator)

    instances = build_metadataset(ResultsStore.load(results), read_metafeatures(mf_path), comparator=args.comparator)
    write_metadataset(instances, out)
    positives = sum(instance.label for instance in instances)
    print(f"{len(instances)} meta-instances ({positives} labelled 1) written to {out}")
    return 0


def cmd_train_meta(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .metalearning import evaluate_by_dataset_split, read_metadataset, train_metamodels
    from .reports import write_csv

    meta = validate_existing_path(_require(args.meta, "--meta"), "--meta")
    config = RunConfig(input_paths={"meta": meta}, seed=_resolve_seed(args, env), pooled=args.pooled,
                       split_ratio=args.split_ratio)
    seed = config.require_seed()
    instances = read_metadataset(meta)
    if not instances:
        raise ValidationError(f"{meta} has no meta-instances")

    models = train_metamodels(instances, seed, pooled=config.pooled)
    for name, model in models.items():
        flag = " (single label, constant)" if model.degenerate else ""
        logger.info(f"Metamodel {name}: {model.n_train} instances, {model.positive_fraction:.1%} labelled 1{flag}")

    if args.report:
        evaluation = evaluate_by_dataset_split(instances, seed, ratio=config.split_ratio, pooled=config.pooled)
        print("Metamodel holdout evaluation (70/30 by dataset)")
        print(evaluation.to_string(float_format=lambda v: f"{v:.3f}"))
        write_csv(evaluation.reset_index(), _sibling(meta, "evaluation.csv"))
    else:
        print(f"Trained {len(models)} metamodel(s) on {len(instances)} instances")
    return 0


def cmd_simulate(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from .agents import simulate, simulate_many
    from .metafeatures import read_metafeatures
    from .reports import render_table3, write_csv
    from .runner import ResultsStore

    results = validate_existing_path(_require(args.results, "--results"), "--results")
    mf_path = validate_existing_path(_require(args.metafeatures, "--metafeatures"), "--metafeatures")
    out = args.out or _sibling(results, "simulation.csv")
    decision_log = args.decision_log or _sibling(out, "decisions.jsonl")
    config = RunConfig(
        input_paths={"results": results, "metafeatures": mf_path},
        out_paths={"out": out, "decision_log": decision_log},
        seed=_resolve_seed(args, env),
        split_ratio=args.split,
        metric=args.metric,
        mode_includes_none=args.mode_includes_none,
        pooled=args.pooled,
        label_comparator=args.comparator,
    )
    seed = config.require_seed()
    repeats = validate_integer_param(args.repeats, "--repeats", min_value=1)
    store, mf = ResultsStore.load(results), read_metafeatures(mf_path)
    options = dict(split_ratio=config.split_ratio, metric=config.metric,
                   mode_includes_none=config.mode_includes_none, pooled=config.pooled,
                   label_comparator=config.label_comparator)

    if repeats == 1:
        report = simulate(store, mf, seed, **options)
        report.write_csv(out)
        report.write_decision_log(decision_log)
        print(render_table3(report.summary))
        return 0

    seeds = [derive_seed(seed, "repeat", i) for i in range(repeats)]
    reports, summary = simulate_many(store, mf, seeds, **options)
    reports[0].write_csv(out)
    reports[0].write_decision_log(decision_log)
    write_csv(summary.reset_index(), _sibling(out, "repeats.csv"))
    print(render_table3(reports[0].summary))
    print(f"\nMean over {repeats} seeds")
    print(summary.to_string(float_format=lambda v: f"{v:.2f}"))
    return 0


def cmd_report(args, env: PipemetaConfig, logger: logging.Logger) -> int:
    from . import reports
    from .runner import (
        ResultsStore,
        accuracy_deltas,
        improvement_counts,
        runtime_histogram,
        runtime_summary,
        top_pipeline_usage,
        tradeoff_quartiles,
    )

    results = validate_existing_path(_require(args.results, "--results"), "--results")
    if args.kind == "table3":
        simulation = args.simulation or _sibling(results, "simulation.csv")
        frame = reports.read_simulation(simulation)
        print(reports.render_table3(frame))
        return 0

    store = ResultsStore.load(results)
    if args.kind == "table1":
        counts = improvement_counts(store, comparator=args.comparator)
        print(reports.render_table1(counts))
        reports.write_csv(reports.table1_frame(counts), _sibling(results, "table1.csv"))
    elif args.kind == "table2":
        deltas = accuracy_deltas(store)
        print(reports.render_table2(deltas))
        reports.write_csv(deltas.reset_index(), _sibling(results, "table2.csv"))
    elif args.kind == "fig1":
        histogram = runtime_histogram(store, truncate_at=args.truncate_at)
        print(reports.render_fig1(histogram))
        reports.write_csv(reports.fig1_frame(histogram), _sibling(results, "fig1.csv"))
    else:
        summary, usage, tradeoffs = runtime_summary(store), top_pipeline_usage(store), tradeoff_quartiles(store)
        print(reports.render_summary(summary, usage, tradeoffs))
        reports.write_csv(reports.summary_frame(summary, usage, tradeoffs), _sibling(results, "summary.csv"))
    return 0


COMMANDS = {
    "datasets": cmd_datasets_synth,
    "run": cmd_run,
    "metafeatures": cmd_metafeatures,
    "metadataset": cmd_metadataset,
    "train-meta": cmd_train_meta,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_defaults(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except PipemetaError as e:
        print(f"pipemeta: error: {e}", file=sys.stderr)
        return 1

    try:
        env = PipemetaConfig()
    except ValueError as e:
        print(f"pipemeta: error: {e}", file=sys.stderr)
        return 1

    logger = setup_logging(env, args.log_level)
    logger.debug(f"Settings: {env.get_settings_info()}")
    try:
        return COMMANDS[args.command](args, env, logger)
    except (PipemetaError, PydanticValidationError, FileNotFoundError) as e:
        if isinstance(e, PydanticValidationError):
            message = "; ".join(error["msg"] for error in e.errors())
        else:
            message = str(e)
        print(f"pipemeta: error: {message}", file=sys.stderr)
        return 1
    finally:
        close_logging()
