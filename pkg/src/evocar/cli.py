"""Command line interface: mine rules, cross-validate, predict.

Exit status 0 on success, 1 on any pipeline failure (single-line
diagnostic on stderr), 2 on usage errors. Reports are written atomically
(temp file + rename) so a failed run never leaves a partial file, and
every report embeds the fully resolved configuration and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

from .classifier import build, cross_validate, load_model, predict
from .dataset import discretize, load_csv, schema_to_json
from .evolution import GAConfig, evolve
from .gini import score_attributes
from .rules import generate_initial_rules, rule_text, rule_to_dict
from .ztest import ZTestConfig


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    class_column: str | None
    output: str | None
    report_format: str
    bins: int
    max_len: int
    k: int | None
    ga: GAConfig
    ztest: ZTestConfig
    trace: str | None = None
    save_model: str | None = None
    model: str | None = None

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError("--bins must be at least 2")
        if self.max_len < 1:
            raise ValueError("--max-len must be at least 1")
        if self.k is not None and self.k < 2:
            raise ValueError("--k must be at least 2")
        if self.report_format not in ("json", "text"):
            raise ValueError("--format must be json or text")

    def to_dict(self) -> dict:
        # everything needed to reproduce the computation; output destination
        # and file format deliberately excluded so reruns stay byte-identical
        data = {
            "command": self.command,
            "input": self.input,
            "class_column": self.class_column,
            "bins": self.bins,
            "minsup": self.ztest.minsup,
            "max_len": self.max_len,
            "ga": asdict(self.ga),
            "ztest": asdict(self.ztest),
        }
        if self.k is not None:
            data["k"] = self.k
        return data


def _add_mining_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="training CSV (header row required)")
    parser.add_argument("--class", dest="class_column", required=True,
                        help="name of the class column")
    parser.add_argument("--bins", type=int, default=3,
                        help="equal-width intervals per numeric attribute (default 3)")
    parser.add_argument("--minsup", type=float, default=0.1,
                        help="minimum support threshold in (0,1) (default 0.1)")
    parser.add_argument("--max-len", type=int, default=4,
                        help="maximum antecedent length for generated rules (default 4)")
    parser.add_argument("--alpha", type=float, default=0.05,
                        help="significance level 0.01/0.05/0.10 (default 0.05)")
    parser.add_argument("--tail", choices=("two", "right", "left"), default="right",
                        help="test tail (default right)")
    parser.add_argument("--z-alpha", type=float, default=None,
                        help="explicit critical value, overrides --alpha/--tail")
    parser.add_argument("--population-size", type=int, default=50)
    parser.add_argument("--generations", type=int, default=30)
    parser.add_argument("--crossover-rate", type=float, default=0.8)
    parser.add_argument("--mutation-rate", type=float, default=0.1)
    parser.add_argument("--tournament-size", type=int, default=2)
    parser.add_argument("--elite-count", type=int, default=2)
    parser.add_argument("--pool-size", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42, help="rng seed (default 42)")
    parser.add_argument("--output", default=None, help="report file path")
    parser.add_argument("--format", dest="report_format", choices=("json", "text"),
                        default="json", help="report file format (default json)")
    parser.add_argument("--save-model", default=None,
                        help="also write the built classifier model (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evocar",
        description="Mine class association rules with a genetic algorithm, "
                    "build an ordered-rule classifier, and evaluate it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mine = sub.add_parser("mine", help="mine the rule pool from a training CSV")
    _add_mining_options(mine)
    mine.add_argument("--trace", default=None,
                      help="write a per-generation fitness trace CSV here")

    cv = sub.add_parser("cv", help="stratified k-fold cross validation")
    _add_mining_options(cv)
    cv.add_argument("--k", type=int, default=10, help="number of folds (default 10)")

    pred = sub.add_parser("predict", help="label a CSV with a saved model")
    pred.add_argument("--model", required=True, help="model JSON from mine/cv --save-model")
    pred.add_argument("--input", required=True, help="CSV of rows to label")
    pred.add_argument("--output", default=None, help="output CSV (default stdout)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "predict":
        return RunConfig(
            command="predict", input=args.input, class_column=None,
            output=args.output, report_format="json", bins=3, max_len=4,
            k=None, ga=GAConfig(), ztest=ZTestConfig(), model=args.model,
        )
    ga = GAConfig(
        population_size=args.population_size,
        generations=args.generations,
        crossover_rate=args.crossover_rate,
        mutation_rate=args.mutation_rate,
        tournament_size=args.tournament_size,
        elite_count=args.elite_count,
        pool_size=args.pool_size,
        rng_seed=args.seed,
    )
    ztest = ZTestConfig(minsup=args.minsup, alpha=args.alpha, tail=args.tail,
                        z_alpha=args.z_alpha)
    return RunConfig(
        command=args.command,
        input=args.input,
        class_column=args.class_column,
        output=args.output,
        report_format=args.report_format,
        bins=args.bins,
        max_len=args.max_len,
        k=getattr(args, "k", None),
        ga=ga,
        ztest=ztest,
        trace=getattr(args, "trace", None),
        save_model=getattr(args, "save_model", None),
    )


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".evocar-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _render_mine_text(report: dict) -> str:
    out = io.StringIO()
    cfg = report["config"]
    print(f"input: {cfg['input']} (class={cfg['class_column']})", file=out)
    tie = " (tie broken by schema order)" if report["anchor_tied"] else ""
    print(f"anchor: {report['anchor']}{tie}", file=out)
    print("attribute gini (ascending):", file=out)
    for score in report["gini_scores"]:
        print(f"  {score['attribute']:<20} {score['gini']:.6f}", file=out)
    print(f"rules ({report['rule_count']}):", file=out)
    for rule in report["rules"]:
        print(
            f"  z={rule['z']:>8.4f}  support={rule['support']:.4f}  "
            f"confidence={rule['confidence']:.4f}  {rule['text']}",
            file=out,
        )
    return out.getvalue()


def _render_cv_text(report: dict) -> str:
    out = io.StringIO()
    print(f"{'fold':>4}  {'size':>4}  {'correct':>7}  {'accuracy':>8}  {'rules':>5}  anchor",
          file=out)
    for fold in report["folds"]:
        print(
            f"{fold['fold']:>4}  {fold['test_size']:>4}  {fold['correct']:>7}  "
            f"{fold['accuracy']:>8.4f}  {fold['rule_count']:>5}  {fold['anchor']}",
            file=out,
        )
    print(
        f"overall accuracy: {report['overall_accuracy']:.4f} "
        f"({report['total_correct']}/{report['total_size']})",
        file=out,
    )
    return out.getvalue()


def _emit(report: dict, render_text, cfg: RunConfig) -> None:
    text = render_text(report)
    sys.stdout.write(text)
    if cfg.output:
        content = _json_text(report) if cfg.report_format == "json" else text
        _write_atomic(cfg.output, content)


def cmd_mine(cfg: RunConfig) -> None:
    ds = load_csv(cfg.input, cfg.class_column)
    data = discretize(ds, cfg.bins)
    scores = score_attributes(data)
    anchor = scores[0].attribute
    anchor_tied = len(scores) > 1 and scores[1].gini == scores[0].gini
    initial = generate_initial_rules(data, anchor, max_len=cfg.max_len,
                                     minsup=cfg.ztest.minsup)
    trace_rows: list[tuple[int, float, float, int]] = []

    def trace(generation, population, pool):
        best = max(c.fitness for c in population)
        mean = sum(c.fitness for c in population) / len(population)
        trace_rows.append((generation, best, mean, len(pool)))

    pool = evolve(initial, data, anchor, cfg.ga, cfg.ztest,
                  observer=trace if cfg.trace else None)
    class_attr = data.class_attribute.name
    report = {
        "command": "mine",
        "config": cfg.to_dict(),
        "schema": schema_to_json(data.schema),
        "gini_scores": [
            {"attribute": s.attribute, "gini": s.gini,
             "per_value": [list(pv) for pv in s.per_value]}
            for s in scores
        ],
        "anchor": anchor,
        "anchor_tied": anchor_tied,
        "rule_count": len(pool),
        "rules": [
            {**rule_to_dict(r), "text": rule_text(r, class_attr)} for r in pool.rules
        ],
    }
    if cfg.trace:
        lines = ["generation,best_fitness,mean_fitness,pool_size"]
        lines += [f"{g},{b!r},{m!r},{p}" for g, b, m, p in trace_rows]
        _write_atomic(cfg.trace, "\n".join(lines) + "\n")
    if cfg.save_model:
        model = build(pool, data, anchor, cfg.to_dict())
        _write_atomic(cfg.save_model, _json_text(model.to_json_dict()))
    _emit(report, _render_mine_text, cfg)


def cmd_cv(cfg: RunConfig) -> None:
    ds = load_csv(cfg.input, cfg.class_column)
    evaluation = cross_validate(ds, cfg.k, bins=cfg.bins, max_len=cfg.max_len,
                                ga=cfg.ga, ztest=cfg.ztest, config=cfg.to_dict())
    report = {
        "command": "cv",
        "schema": schema_to_json(ds.schema),
        **evaluation.to_json_dict(),
    }
    if cfg.save_model:
        data = discretize(ds, cfg.bins)
        scores = score_attributes(data)
        anchor = scores[0].attribute
        initial = generate_initial_rules(data, anchor, max_len=cfg.max_len,
                                         minsup=cfg.ztest.minsup)
        pool = evolve(initial, data, anchor, cfg.ga, cfg.ztest)
        model = build(pool, data, anchor, cfg.to_dict())
        _write_atomic(cfg.save_model, _json_text(model.to_json_dict()))
    _emit(report, _render_cv_text, cfg)


def cmd_predict(cfg: RunConfig) -> None:
    model = load_model(cfg.model)
    with open(cfg.input, newline="", encoding="utf-8") as handle:
        records = list(csv.reader(handle))
    if not records:
        raise ValueError(f"{cfg.input}: empty file (header row required)")
    header, body = records[0], records[1:]
    if not body:
        raise ValueError(f"{cfg.input}: no data rows after the header")
    predicted_column = f"predicted_{model.class_attribute}"
    out_rows = [header + [predicted_column]]
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValueError(
                f"{cfg.input}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        out_rows.append(row + [predict(model, dict(zip(header, row)))])
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(out_rows)
    if cfg.output:
        _write_atomic(cfg.output, buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"mine": cmd_mine, "cv": cmd_cv, "predict": cmd_predict}
    try:
        cfg = _config_from_args(args)
        handlers[args.command](cfg)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # single-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
