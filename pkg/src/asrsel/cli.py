"""Command-line surface for the transcript-reliability pipeline.

Subcommands cover the full flow: ``synth`` (generate a synthetic dataset),
``validate`` (schema-check record files), ``featurize``, ``train``,
``select``, ``cv`` and ``sweep`` (evaluation reports), and ``lexstats``
(lexical fidelity analysis). Exit codes: 0 success, 1 data error, 2 usage
error. The data root defaults to $ASRSEL_DATA_ROOT when set.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import DataError, FeaturizeError, SchemaError
from .evaluation import CvConfig, collect_labeled, run_cv, sweep_fp_cost
from .features import FEATURE_NAMES, assemble, feature_from_row, feature_row, \
    fit_standardizer, transform
from .ingest import Dataset, dataset_stats, parse_manifest
from .lexical import FrequencyTable, Scope, correlation_table, count_lemmas, \
    frequency_rows, mean_counts_per_pos, scatter_data
from .records import atomic_write_text, read_record_file, write_record_file
from .reporting import RunManifest, cv_report, correlation_report_doc, dump_json, \
    render_scatter_svg, sweep_report
from .svm import Label, LabeledExample, load_model, make_label, predict, save_model, \
    train as train_model
from .synth import generate, load_config
from .textnorm import NormalizationPolicy, load_tagged, normalize, tag


def _default_data_root() -> str:
    return os.environ.get("ASRSEL_DATA_ROOT", ".")


def _data_files(data_dir: str) -> list[Path]:
    root = Path(data_dir)
    if not root.is_dir():
        raise DataError(f"data directory {data_dir!r} does not exist")
    files = sorted(root.glob("*.jsonl"))
    if not files:
        raise DataError(f"no inputs: no .jsonl record files in {data_dir!r}")
    return files


def _load_dataset(data_dir: str, min_duration_ms: int) -> Dataset:
    return parse_manifest(_data_files(data_dir), min_duration_ms=min_duration_ms)


def _add_policy_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--expand-contractions", action="store_true",
                        help="expand colloquial contractions before scoring")
    parser.add_argument("--spell-numerals", action="store_true",
                        help="spell out digit tokens before scoring")


def _policy(args: argparse.Namespace) -> NormalizationPolicy:
    return NormalizationPolicy(
        expand_contractions=getattr(args, "expand_contractions", False),
        spell_out_numerals=getattr(args, "spell_numerals", False),
    )


def _cv_config(args: argparse.Namespace) -> CvConfig:
    return CvConfig(wer_threshold=args.wer_threshold, fn_cost=args.fn_cost,
                    regularization=args.reg, seed=args.seed, policy=_policy(args))


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--wer-threshold", type=float, default=0.30,
                        help="WER at or below this labels an utterance acceptable")
    parser.add_argument("--fn-cost", type=float, default=1.0)
    parser.add_argument("--reg", type=float, default=1.0,
                        help="soft-margin cost multiplier C")
    parser.add_argument("--seed", type=int, default=0)
    _add_policy_flags(parser)


def cmd_validate(args: argparse.Namespace) -> int:
    paths: list[Path]
    if args.inputs:
        paths = [Path(p) for p in args.inputs]
    else:
        paths = _data_files(args.data)
    errors = 0
    schema_counts: dict[str, int] = {}
    core: list[Path] = []
    for path in paths:
        if not path.exists():
            print(f"error: {path}: no such file", file=sys.stderr)
            errors += 1
            continue
        try:
            rf = read_record_file(path)
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            errors += 1
            continue
        schema_counts[rf.schema] = schema_counts.get(rf.schema, 0) + len(rf.rows)
        if rf.schema in ("utterances", "hypotheses", "alignment", "acoustics"):
            core.append(path)
    warnings: list[str] = []
    if errors == 0 and core:
        try:
            ds = parse_manifest(core, min_duration_ms=args.min_duration_ms)
            warnings.extend(ds.warnings)
            if ds.dropped_short:
                warnings.append(f"{ds.dropped_short} utterance(s) below the "
                                f"{args.min_duration_ms} ms duration floor; dropped")
            print(f"joined dataset: {len(ds)} utterances, "
                  f"{len(ds.corpora)} corpora")
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            errors += 1
    for schema in sorted(schema_counts):
        print(f"{schema_counts[schema]} {schema} record(s)")
    for w in warnings:
        print(f"warning: {w}")
    print(f"{errors} error(s), {len(warnings)} warning(s)")
    return 0 if errors == 0 else 1


def cmd_featurize(args: argparse.Namespace) -> int:
    ds = _load_dataset(args.data, args.min_duration_ms)
    policy = _policy(args)
    rows = []
    failures: list[str] = []
    for bundle in ds.bundles():
        try:
            fv = assemble(bundle, policy)
        except FeaturizeError as exc:
            failures.append(str(exc))
            continue
        rows.append(feature_row(bundle.utterance.id, fv))
    write_record_file(args.out, "features", rows,
                      extra_header={"feature_names": list(FEATURE_NAMES),
                                    "normalization": policy.as_dict()})
    if not rows:
        print("warning: empty dataset, wrote an empty features file",
              file=sys.stderr)
    print(f"wrote {len(rows)} feature vector(s) to {args.out}")
    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    return 1 if failures else 0


def _labeled_features(ds: Dataset, features_path: str,
                      policy: NormalizationPolicy, wer_threshold: float):
    """Join a features file with WER labels computed from the dataset."""
    rf = read_record_file(features_path)
    if rf.schema != "features":
        raise DataError(f"{features_path}: expected a features file, "
                        f"got schema {rf.schema!r}")
    names = rf.header.get("feature_names")
    if names is not None and tuple(names) != FEATURE_NAMES:
        raise DataError(f"{features_path}: feature names do not match this tool: "
                        f"{names}")
    labeled, skipped = collect_labeled(ds, policy)
    wer_by_id = {u.utterance_id: u for u in labeled}
    joined = []
    for row in rf.rows:
        u = wer_by_id.get(row["utterance_id"])
        if u is None:
            skipped["not_labelable"] = skipped.get("not_labelable", 0) + 1
            continue
        joined.append((u, feature_from_row(row)))
    return joined, skipped


def cmd_train(args: argparse.Namespace) -> int:
    if args.fp_cost <= 0:
        raise UsageError("--fp-cost must be > 0")
    ds = _load_dataset(args.data, args.min_duration_ms)
    policy = _policy(args)
    joined, skipped = _labeled_features(ds, args.features, policy,
                                        args.wer_threshold)
    if not joined:
        raise DataError("no labelable utterances in the features file")
    standardizer = fit_standardizer([fv for _, fv in joined])
    examples = [
        LabeledExample(features=tuple(transform(standardizer, fv)),
                       label=make_label(u.wer, args.wer_threshold),
                       wer=u.wer, duration_ms=u.duration_ms, corpus=u.corpus)
        for u, fv in joined
    ]
    counts = {Label.LOW: 0, Label.HIGH: 0}
    minutes = {Label.LOW: 0.0, Label.HIGH: 0.0}
    for ex in examples:
        counts[ex.label] += 1
        minutes[ex.label] += ex.duration_ms / 60000.0
    total_n = len(examples)
    total_min = minutes[Label.LOW] + minutes[Label.HIGH]
    for label, name in ((Label.LOW, "low-WER (acceptable)"),
                        (Label.HIGH, "high-WER (discard)")):
        pct_n = 100.0 * counts[label] / total_n
        pct_m = 100.0 * minutes[label] / total_min if total_min else 0.0
        print(f"class balance: {name}: {counts[label]} utterances ({pct_n:.1f}%), "
              f"{minutes[label]:.1f} min ({pct_m:.1f}%)")
    model = train_model(examples, args.fp_cost, args.fn_cost, args.reg, args.seed,
                        standardizer=standardizer,
                        wer_threshold=args.wer_threshold)
    save_model(model, args.out)
    if skipped:
        print("skipped: " + ", ".join(f"{k}={v}" for k, v in sorted(skipped.items())),
              file=sys.stderr)
    print(f"wrote model to {args.out}")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    ds = _load_dataset(args.data, args.min_duration_ms)
    policy = _policy(args)
    features_by_id = {}
    if args.features:
        rf = read_record_file(args.features)
        if rf.schema != "features":
            raise DataError(f"{args.features}: expected a features file")
        names = rf.header.get("feature_names")
        if names is not None and tuple(names) != tuple(model.feature_names):
            raise DataError(f"{args.features}: feature names do not match the "
                            f"model's: {names} vs {list(model.feature_names)}")
        features_by_id = {row["utterance_id"]: feature_from_row(row)
                          for row in rf.rows}
    rows = []
    dur_selected = 0
    dur_total = 0
    n_total = 0
    for bundle in ds.bundles():
        if bundle.strong is None:
            continue
        uid = bundle.utterance.id
        fv = features_by_id.get(uid)
        if fv is None:
            try:
                fv = assemble(bundle, policy)
            except FeaturizeError:
                continue
        n_total += 1
        dur_total += bundle.utterance.duration_ms
        label, value = predict(model, fv)
        if label == Label.LOW:
            dur_selected += bundle.utterance.duration_ms
            rows.append({"utterance_id": uid, "transcript": bundle.strong.text,
                         "decision": value})
    pct_dur = 100.0 * dur_selected / dur_total if dur_total else 0.0
    pct_count = 100.0 * len(rows) / n_total if n_total else 0.0
    summary = {"utterance_id": "", "transcript": "", "decision": 0.0,
               "summary": {"selected": len(rows), "total": n_total,
                           "pct_duration_selected": pct_dur,
                           "pct_count_selected": pct_count}}
    write_record_file(args.out, "selection", rows + [summary],
                      extra_header={"model": Path(args.model).name})
    print(f"selected {len(rows)}/{n_total} utterances "
          f"({pct_dur:.1f}% of duration) -> {args.out}")
    return 0


def _write_reports(doc: dict, text: str, args: argparse.Namespace) -> None:
    if args.out_json:
        atomic_write_text(args.out_json, dump_json(doc))
    if args.out_text:
        atomic_write_text(args.out_text, text)
    print(text, end="")


def cmd_cv(args: argparse.Namespace) -> int:
    if args.fp_cost <= 0:
        raise UsageError("--fp-cost must be > 0")
    ds = _load_dataset(args.data, args.min_duration_ms)
    result = run_cv(ds, args.fp_cost, _cv_config(args))
    manifest = RunManifest.create(
        "cv", {"fp_cost": args.fp_cost, "wer_threshold": args.wer_threshold,
               "fn_cost": args.fn_cost, "reg": args.reg,
               "min_duration_ms": args.min_duration_ms,
               "normalization": _policy(args).as_dict()},
        _data_files(args.data), seed=args.seed)
    doc, text = cv_report(result, manifest)
    _write_reports(doc, text, args)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        grid = [float(v) for v in args.grid.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --grid value: {exc}") from exc
    if not grid or any(v <= 0 for v in grid):
        raise UsageError("--grid must be a comma-separated list of positive costs")
    ds = _load_dataset(args.data, args.min_duration_ms)
    result = sweep_fp_cost(ds, grid, _cv_config(args))
    manifest = RunManifest.create(
        "sweep", {"grid": grid, "wer_threshold": args.wer_threshold,
                  "fn_cost": args.fn_cost, "reg": args.reg,
                  "min_duration_ms": args.min_duration_ms,
                  "normalization": _policy(args).as_dict()},
        _data_files(args.data), seed=args.seed)
    doc, text = sweep_report(result, manifest)
    _write_reports(doc, text, args)
    return 0


def cmd_lexstats(args: argparse.Namespace) -> int:
    ds = _load_dataset(args.data, args.min_duration_ms)
    policy = _policy(args)
    selected_ids: set[str] | None = None
    if args.selection:
        rf = read_record_file(args.selection)
        if rf.schema != "selection":
            raise DataError(f"{args.selection}: expected a selection file")
        selected_ids = {row["utterance_id"] for row in rf.rows
                        if row["utterance_id"]}
    external = load_tagged(args.tagged) if args.tagged else {}

    pairs = []
    for bundle in ds.bundles():
        u = bundle.utterance
        if u.reference is None or bundle.strong is None:
            continue
        if selected_ids is not None and u.id not in selected_ids:
            continue
        manual = external.get((u.id, "manual")) or tag(normalize(u.reference, policy))
        automatic = external.get((u.id, "automatic")) or \
            tag(normalize(bundle.strong.text, policy))
        pairs.append((manual, automatic))
    if not pairs:
        raise DataError("no transcript pairs (references and strong hypotheses "
                        "are required)")
    scope = Scope.SELECTED if selected_ids is not None else Scope.ALL
    table = count_lemmas(pairs, scope)

    floors = [0]
    if args.min_auto_count > 0:
        floors.append(args.min_auto_count)
    rows_by_floor = {floor: correlation_table(table, floor) for floor in floors}

    scatter_table = table
    if args.pos:
        scatter_table = FrequencyTable(
            entries={k: v for k, v in table.entries.items() if k[1] == args.pos},
            scope=table.scope)

    manifest = RunManifest.create(
        "lexstats", {"min_auto_count": args.min_auto_count, "pos": args.pos,
                     "selection": Path(args.selection).name if args.selection else None,
                     "normalization": policy.as_dict()},
        _data_files(args.data))
    doc, text = correlation_report_doc(rows_by_floor, scope.value,
                                       policy.as_dict(), manifest,
                                       mean_counts=mean_counts_per_pos(table))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out_dir / "frequencies.tsv",
                      "\n".join(frequency_rows(table)) + "\n")
    atomic_write_text(out_dir / "correlations.json", dump_json(doc))
    atomic_write_text(out_dir / "correlations.txt", text)
    sd = scatter_data(scatter_table, min_auto_count=args.min_auto_count,
                      max_labels=args.max_labels)
    title = f"Word log-counts, automatic vs. manual ({scope.value}"
    title += f", {args.pos})" if args.pos else ")"
    atomic_write_text(out_dir / "scatter.svg", render_scatter_svg(sd, title))
    print(text, end="")
    print(f"wrote frequencies.tsv, correlations.json, correlations.txt, "
          f"scatter.svg to {out_dir}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except (ValueError, KeyError) as exc:
        raise DataError(f"bad synth config: {exc}") from exc
    paths = generate(config, args.out)
    ds = parse_manifest(paths.values(), min_duration_ms=0)
    stats = dataset_stats(ds)
    print(f"generated {stats.total_utterances} utterances, "
          f"{stats.total_minutes} min across {len(ds.corpora)} corpora "
          f"-> {args.out}")
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asrsel",
        description="Decide which utterances in longform child-centered audio "
                    "can be trusted to an ASR system, and evaluate the result.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def _common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--data", default=_default_data_root(),
                       help="directory of record files "
                            "(default: $ASRSEL_DATA_ROOT or '.')")
        p.add_argument("--min-duration-ms", type=int, default=300,
                       help="drop utterances shorter than this")

    p = sub.add_parser("validate", help="schema-check record files")
    p.add_argument("inputs", nargs="*", help="record files (default: --data dir)")
    _common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("featurize", help="compute per-utterance feature vectors")
    _common(p)
    _add_policy_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="train the reliability classifier")
    _common(p)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fp-cost", type=float, required=True,
                   help="misclassification cost of letting a bad transcript through")
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("select", help="apply a model and emit trusted transcripts")
    _common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--features", help="precomputed features file (else computed)")
    _add_policy_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("cv", help="leave-one-corpus-out cross-validation")
    _common(p)
    p.add_argument("--fp-cost", type=float, required=True)
    _add_train_flags(p)
    p.add_argument("--out-json")
    p.add_argument("--out-text")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("sweep", help="sweep the false-positive cost grid")
    _common(p)
    p.add_argument("--grid", default="1.0,1.5,2.0,2.2,2.5",
                   help="comma-separated fp costs")
    _add_train_flags(p)
    p.add_argument("--out-json")
    p.add_argument("--out-text")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lexstats", help="lexical fidelity of automatic transcripts")
    _common(p)
    _add_policy_flags(p)
    p.add_argument("--selection", help="restrict to utterances in this selection file")
    p.add_argument("--tagged", help="externally tagged tokens overriding the "
                                    "built-in tagger")
    p.add_argument("--min-auto-count", type=int, default=5)
    p.add_argument("--pos", choices=["NOUN", "VERB", "ADJ", "ADV", "PRON"],
                   help="restrict the scatter plot to one part of speech")
    p.add_argument("--max-labels", type=int, default=40)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_lexstats)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
