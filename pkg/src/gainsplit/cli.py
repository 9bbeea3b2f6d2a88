"""Command-line front end: train, compare, predict.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal invariant
failure. Every artifact embeds the run manifest that produced it, and the
structured outputs (tree JSON, report JSON lines) are byte-identical across
runs with equal manifests; timing lives only in the human-readable output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .dataset import Dataset, Schema, encode_with, load_csv, read_schema_file
from .errors import DataError, InvariantError
from .evaluation import CVPlan, EvaluationReport, compare
from .impurity import Criterion
from .tree import (
    InductionConfig,
    from_node_dict,
    induce,
    predict,
    to_node_dict,
    to_text,
    training_accuracy,
    tree_stats,
)

CRITERION_NAMES = [c.value for c in Criterion]

#: json.dumps recurses per nesting level; stay well under the C stack.
_MAX_SERIALIZABLE_DEPTH = 9000


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a run's outputs."""

    command: str
    data: str
    schema: str | None
    target: str | None
    criteria: list[str]
    folds: int | None
    repeats: int | None
    seed: int | None
    min_samples_split: int
    max_depth: int | None
    pruning: str
    out: str
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gainsplit",
        description="Decision-tree induction and split-criterion benchmarking")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_data_flags(p):
        p.add_argument("--data", required=True, help="input CSV (header row required)")
        p.add_argument("--schema", help="sidecar schema file (name,kind lines + target=)")
        p.add_argument("--target", help="target column name (schema inferred)")

    def induction_flags(p):
        p.add_argument("--min-samples-split", type=int, default=2,
                       help="smallest node eligible for splitting (default 2)")
        p.add_argument("--max-depth", type=int, default=None,
                       help="depth cap (default unlimited)")
        p.add_argument("--no-prune", action="store_true",
                       help="skip pessimistic error pruning")

    train = sub.add_parser("train", help="induce a tree and write it out")
    common_data_flags(train)
    train.add_argument("--gain", default="balanced-gain-ratio", choices=CRITERION_NAMES,
                       metavar="CRITERION",
                       help=f"split criterion, one of: {', '.join(CRITERION_NAMES)}")
    induction_flags(train)
    train.add_argument("--out", help="tree file path (default <data stem>.tree.json)")

    comp = sub.add_parser("compare", help="cross-validated criterion comparison")
    common_data_flags(comp)
    comp.add_argument("--gains", default="gain-ratio,balanced-gain-ratio",
                      help="comma-separated criteria (default gain-ratio,balanced-gain-ratio)")
    comp.add_argument("--folds", type=int, default=5)
    comp.add_argument("--repeats", type=int, default=10)
    comp.add_argument("--seed", type=int, default=0)
    induction_flags(comp)
    comp.add_argument("--out", help="report base path (default <data stem>.report)")
    comp.add_argument("--format", choices=["md", "json-lines"], default="md",
                      help="what to print on stdout")

    pred = sub.add_parser("predict", help="append tree predictions to a CSV")
    pred.add_argument("--tree", required=True, help="tree file written by train")
    pred.add_argument("--data", required=True, help="input CSV with the feature columns")
    pred.add_argument("--out", help="output CSV (default <data stem>.predictions.csv)")
    return parser


def _load_dataset(args) -> Dataset:
    if args.schema:
        schema = read_schema_file(args.schema)
        return load_csv(args.data, schema=schema)
    if not args.target:
        raise UsageError("either --schema or --target is required")
    return load_csv(args.data, target=args.target)


class UsageError(Exception):
    pass


def _default_out(data_path: str, suffix: str) -> Path:
    return Path(Path(data_path).stem + suffix)


def _dump_json(payload: dict, depth_hint: int) -> str:
    if depth_hint > _MAX_SERIALIZABLE_DEPTH:
        raise DataError(f"tree too deep to serialize ({depth_hint} levels)")
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * depth_hint + 1000))
    try:
        return json.dumps(payload, indent=1)
    finally:
        sys.setrecursionlimit(limit)


def cmd_train(args) -> int:
    manifest = RunManifest(
        command="train", data=args.data, schema=args.schema, target=args.target,
        criteria=[args.gain], folds=None, repeats=None, seed=None,
        min_samples_split=args.min_samples_split, max_depth=args.max_depth,
        pruning="none" if args.no_prune else "pessimistic",
        out=str(args.out or _default_out(args.data, ".tree.json")))
    dataset = _load_dataset(args)
    config = InductionConfig(criterion=Criterion(args.gain),
                             min_samples_split=args.min_samples_split,
                             max_depth=args.max_depth, pruning=manifest.pruning)
    tree = induce(dataset, config)
    stats = tree_stats(tree)
    accuracy = training_accuracy(tree, dataset)

    payload = {
        "kind": "gainsplit-tree",
        "manifest": manifest.to_dict(),
        "schema": dataset.schema.to_dict(),
        "categories": {dataset.schema.columns[j][0]: values
                       for j, values in sorted(dataset.categories.items())},
        "class_labels": dataset.class_labels,
        "stats": {"depth": stats.depth, "leaf_count": stats.leaf_count,
                  "node_count": stats.node_count,
                  "training_accuracy": accuracy,
                  "n_rows": dataset.n, "n_dropped": dataset.n_dropped},
        "root": to_node_dict(tree, dataset),
    }
    out = Path(manifest.out)
    out.write_text(_dump_json(payload, stats.depth) + "\n", encoding="utf-8")
    out.with_suffix(".txt").write_text(to_text(tree, dataset), encoding="utf-8")

    print(f"trained on {dataset.n} rows ({dataset.n_dropped} dropped), "
          f"criterion {args.gain}")
    print(f"depth {stats.depth}, leaves {stats.leaf_count}, nodes {stats.node_count}, "
          f"training accuracy {accuracy:.2f}%")
    print(f"tree written to {out} (text form: {out.with_suffix('.txt')})")
    return 0


def _report_jsonl(report: EvaluationReport, manifest: RunManifest, dataset_name: str) -> str:
    lines = [json.dumps({"record": "manifest", **manifest.to_dict()})]
    for result in report.results:
        lines.append(json.dumps({
            "record": "criterion", "dataset": dataset_name,
            "criterion": result.criterion.value,
            "mean_accuracy": result.mean_accuracy,
            "stddev_accuracy": result.stddev_accuracy,
            "mean_depth": result.mean_depth, "max_depth": result.max_depth,
            "mean_leaves": result.mean_leaves,
        }))
        for f in result.fold_scores:
            lines.append(json.dumps({
                "record": "fold", "criterion": result.criterion.value,
                "repeat": f.repeat, "fold": f.fold, "accuracy": f.accuracy,
                "depth": f.depth, "leaves": f.leaves,
            }))
    for first, second, diff in report.differences:
        lines.append(json.dumps({
            "record": "difference", "dataset": dataset_name,
            "first": first.value, "second": second.value, "diff": diff,
        }))
    return "\n".join(lines) + "\n"


def _report_markdown(report: EvaluationReport, dataset_name: str) -> str:
    lines = [
        f"### {dataset_name}: criterion comparison "
        f"({report.plan.repeats}x{report.plan.k}-fold CV, seed {report.plan.seed})",
        "",
        "| Criterion | Accuracy (%) | Std | Mean depth | Max depth | Mean leaves | Time (s) |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in report.results:
        lines.append(f"| {r.criterion.value} | {r.mean_accuracy:.2f} | "
                     f"{r.stddev_accuracy:.2f} | {r.mean_depth:.1f} | {r.max_depth} | "
                     f"{r.mean_leaves:.1f} | {r.wall_time_s:.2f} |")
    if report.differences:
        lines.append("")
        for first, second, diff in report.differences:
            lines.append(f"Diff. {second.value} vs {first.value}: {diff:+.2f}")
    return "\n".join(lines) + "\n"


def cmd_compare(args) -> int:
    names = [g.strip() for g in args.gains.split(",") if g.strip()]
    criteria = [Criterion.from_name(g) for g in names]
    manifest = RunManifest(
        command="compare", data=args.data, schema=args.schema, target=args.target,
        criteria=[c.value for c in criteria],
        folds=args.folds, repeats=args.repeats, seed=args.seed,
        min_samples_split=args.min_samples_split, max_depth=args.max_depth,
        pruning="none" if args.no_prune else "pessimistic",
        out=str(args.out or _default_out(args.data, ".report")))
    dataset = _load_dataset(args)
    plan = CVPlan(k=args.folds, repeats=args.repeats, seed=args.seed)
    report = compare(dataset, criteria, plan,
                     min_samples_split=args.min_samples_split,
                     max_depth=args.max_depth, pruning=manifest.pruning)

    dataset_name = Path(args.data).stem
    out_base = Path(manifest.out)
    jsonl_path = out_base.parent / (out_base.name + ".jsonl")
    md_path = out_base.parent / (out_base.name + ".md")
    jsonl = _report_jsonl(report, manifest, dataset_name)
    markdown = _report_markdown(report, dataset_name)
    jsonl_path.write_text(jsonl, encoding="utf-8")
    md_path.write_text(markdown, encoding="utf-8")
    sys.stdout.write(jsonl if args.format == "json-lines" else markdown)
    print(f"report written to {jsonl_path} and {md_path}", file=sys.stderr)
    return 0


def cmd_predict(args) -> int:
    try:
        model = json.loads(Path(args.tree).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read tree file {args.tree}: {exc}") from exc
    if model.get("kind") != "gainsplit-tree":
        raise DataError(f"{args.tree} is not a tree file")
    schema = Schema.from_dict(model["schema"])
    name_to_index = {name: j for j, (name, _) in enumerate(schema.columns)}
    categories = {name_to_index[name]: values
                  for name, values in model["categories"].items()}
    class_labels = model["class_labels"]
    tree = from_node_dict(model["root"], schema, categories, class_labels)

    encoded, raw_rows, header, dropped, unseen = encode_with(
        schema, categories, args.data, require_target=False)
    rows = [[encoded.columns[j][i] for j in range(len(schema.columns))]
            for i in range(encoded.n)]
    predictions = [class_labels[predict(tree, row)] for row in rows]

    out = Path(args.out or _default_out(args.data, ".predictions.csv"))
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header + [f"predicted_{schema.target}"])
        for raw, label in zip(raw_rows, predictions):
            writer.writerow(raw + [label])
    print(f"{len(predictions)} predictions written to {out}")
    if dropped:
        print(f"warning: {dropped} rows dropped (missing numeric or unparseable)",
              file=sys.stderr)
    if unseen:
        print(f"warning: {unseen} categorical values unseen in training "
              f"(majority fallback used)", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"train": cmd_train, "compare": cmd_compare, "predict": cmd_predict}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
