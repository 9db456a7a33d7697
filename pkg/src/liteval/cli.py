"""Command line interface.

Subcommands mirror the analysis modules: ``stats``, ``score``, ``agree``,
``adequacy``, ``diversity``, ``literalness``, ``judge``, plus the service
commands ``serve``, ``make-tasks``, ``export`` and the ``demo-corpus``
generator. Run ``liteval <command> --help`` for the full flag list.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from pathlib import Path

from .adequacy import DEFAULT_TOP_SYSTEMS, adequacy_matrix
from .corpus import corpus_stats, import_metric_scores, load_corpus
from .model import Era, EvaluatorRole, LanguagePair
from .scoring import (
    SeverityWeights,
    combined_score,
    minmax_scale,
    mqm_scores_by_segment,
    sqm_scores_by_segment,
    system_ranking,
)


def _role_evaluators(corpus, role: str) -> set[str] | None:
    if role == "all":
        return None
    wanted = EvaluatorRole(role)
    return {e.id for e in corpus.evaluators.values() if e.role is wanted}


def cmd_stats(args) -> int:
    stats = corpus_stats(load_corpus(args.corpus))
    rows = [r for r in stats.per_pair if args.pair in (None, r.pair)]
    rows.append(stats.total) if args.pair is None else None
    if args.format == "json":
        print(json.dumps([r.__dict__ for r in rows], indent=2))
        return 0
    sep = "," if args.format == "csv" else "\t"
    print(sep.join(
        ["pair", "paragraphs", "segments", "sentences", "src_sent_per_para",
         "tgt_sent_per_para"]
    ))
    for r in rows:
        print(sep.join([
            r.pair, str(r.paragraph_count), str(r.segment_count),
            str(r.sentence_count), f"{r.mean_source_sentences:.1f}",
            f"{r.mean_target_sentences:.1f}",
        ]))
    return 0


def _parse_weights(text: str) -> SeverityWeights:
    nt, major, minor = (float(x) for x in text.split(","))
    return SeverityWeights(non_translation=nt, major=major, minor=minor)


def cmd_score(args) -> int:
    corpus = load_corpus(args.corpus)
    evaluators = _role_evaluators(corpus, args.role)
    weights = _parse_weights(args.weights)
    if args.scheme == "mqm":
        scores = mqm_scores_by_segment(corpus, evaluators, weights)
    elif args.scheme == "sqm":
        scores = sqm_scores_by_segment(corpus, evaluators)
    else:
        mqm = mqm_scores_by_segment(corpus, evaluators, weights)
        sqm = sqm_scores_by_segment(corpus, evaluators)
        shared = sorted(set(mqm) & set(sqm))
        if not shared:
            print("no segments carry both scores", file=sys.stderr)
            return 1
        scaled = dict(zip(shared, minmax_scale([mqm[s] for s in shared], 0.0, 6.0)))
        scores = {
            s: combined_score(scaled[s], sqm[s], args.alpha) for s in shared
        }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ranking = system_ranking(scores, corpus, args.scheme)
    print("# rank\tsystem\tmean\tn_segments")
    for entry in ranking.entries:
        print(f"{entry.rank}\t{entry.system_id}\t{entry.mean_score:.4f}"
              f"\t{entry.n_segments}")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["segment_id", "scheme", "score"])
            for sid in sorted(scores):
                writer.writerow([sid, args.scheme, f"{scores[sid]:.6f}"])
    return 0


def cmd_agree(args) -> int:
    from .agreement import (
        bws_agreement,
        kendall_tau_b,
        span_match_kappa_multi,
    )
    from .scoring import mqm_score

    corpus = load_corpus(args.corpus)
    e1, e2 = args.evaluators.split(",")
    if args.scheme == "bws":
        j1 = [j for j in corpus.bws if j.evaluator_id == e1]
        j2 = [j for j in corpus.bws if j.evaluator_id == e2]
        value = bws_agreement(j1, j2)
        n = sum(len(j.segment_ids) for j in j1)
    elif args.scheme in ("mqm", "span"):
        ann1 = {a.segment_id: a for a in corpus.mqm if a.evaluator_id == e1}
        ann2 = {a.segment_id: a for a in corpus.mqm if a.evaluator_id == e2}
        shared = sorted(set(ann1) & set(ann2))
        n = len(shared)
        if args.scheme == "mqm":
            weights = _parse_weights(args.weights)
            x = [mqm_score(ann1[s], corpus.segments[s].sentence_count, weights)
                 for s in shared]
            y = [mqm_score(ann2[s], corpus.segments[s].sentence_count, weights)
                 for s in shared]
            value = kendall_tau_b(x, y)
        else:
            pairs = [(ann1[s], ann2[s], corpus.segments[s]) for s in shared]
            value = span_match_kappa_multi(pairs, args.mode)
    else:
        r1 = {r.segment_id: r.score for r in corpus.sqm if r.evaluator_id == e1}
        r2 = {r.segment_id: r.score for r in corpus.sqm if r.evaluator_id == e2}
        shared = sorted(set(r1) & set(r2))
        n = len(shared)
        value = kendall_tau_b([r1[s] for s in shared], [r2[s] for s in shared])
    statistic = {
        "mqm": "kendall_tau_b", "sqm": "kendall_tau_b",
        "bws": "cohen_kappa", "span": f"span_kappa_{args.mode}",
    }[args.scheme]
    print(f"{args.scheme}\t{statistic}\t{value:.4f}\tn={n}")
    return 0


def cmd_adequacy(args) -> int:
    corpus = load_corpus(args.corpus)
    top = frozenset(args.top_systems.split(",")) if args.top_systems else DEFAULT_TOP_SYSTEMS
    metric_scores = None
    metrics_file = Path(args.corpus) / "metric_scores.csv"
    if args.with_metrics and metrics_file.exists():
        per_metric: dict[str, dict[str, float]] = {}
        for score in import_metric_scores(metrics_file, corpus):
            per_metric.setdefault(score.metric_id, {})[score.segment_id] = score.value
        metric_scores = per_metric
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = adequacy_matrix(corpus, human_system=args.human_system,
                               top_systems=top, metric_scores=metric_scores)
    selected = [
        r for r in rows
        if (args.scheme is None or r.scheme == args.scheme)
        and (args.evaluator_role is None or r.evaluator_role == args.evaluator_role)
        and (args.scenario is None or r.scenario == args.scenario)
    ]
    print("# scheme\trole\tscenario\tmean_pct\tper_pair")
    out_rows = []
    for r in selected:
        per_pair = ";".join(f"{p.pair}={p.percentage:.1f}" for p in r.per_pair)
        print(f"{r.scheme}\t{r.evaluator_role}\t{r.scenario}"
              f"\t{r.mean_percentage:.2f}\t{per_pair}")
        for p in r.per_pair:
            out_rows.append([r.scheme, r.evaluator_role, r.scenario, p.pair,
                             f"{p.percentage:.4f}", p.n_paragraphs,
                             p.preferred_count])
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["scheme", "role", "scenario", "pair", "percentage",
                             "n_paragraphs", "preferred"])
            writer.writerows(out_rows)
    return 0


def _load_tree_docs(corpus, trees_dir: Path):
    from .textstats import load_tree_doc

    docs = {}
    for name in sorted(corpus.paragraphs) + sorted(corpus.segments):
        path = trees_dir / f"{name}.txt"
        if path.exists():
            docs[name] = load_tree_doc(path, name)
    return docs


def cmd_diversity(args) -> int:
    from .textstats import doc_syntactic_similarity, pairwise_lexical_overlap

    corpus = load_corpus(args.corpus)
    era = Era(args.era) if args.era else None
    means, matrix = pairwise_lexical_overlap(corpus, era)

    syn_means: dict[str, float] = {}
    if args.trees:
        docs = _load_tree_docs(corpus, Path(args.trees))
        sums: dict[str, list[float]] = {}
        for seg in corpus.segments.values():
            para = corpus.paragraphs[seg.source_id]
            if era is not None and para.era is not era:
                continue
            if seg.source_id in docs and seg.id in docs:
                sums.setdefault(seg.system_id, []).append(
                    doc_syntactic_similarity(docs[seg.source_id], docs[seg.id],
                                             args.lam)
                )
        syn_means = {s: sum(v) / len(v) for s, v in sums.items() if v}

    header = "# system\tmean_overlap"
    if syn_means:
        header += "\tsyntactic_similarity"
    print(header)
    for system, value in sorted(means.items(), key=lambda kv: kv[1]):
        line = f"{system}\t{value:.2f}"
        if syn_means:
            line += f"\t{syn_means.get(system, float('nan')):.4f}"
        print(line)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["system"] + list(matrix.systems))
            for i, system in enumerate(matrix.systems):
                writer.writerow(
                    [system] + [f"{matrix.values[i, j]:.3f}"
                                for j in range(len(matrix.systems))]
                )
    return 0


def cmd_literalness(args) -> int:
    from .textstats import literalness_report

    corpus = load_corpus(args.corpus)
    trees_dir = Path(args.trees) if args.trees else Path(args.corpus) / "trees"
    docs = _load_tree_docs(corpus, trees_dir)
    evaluators = _role_evaluators(corpus, "student")
    human_scores = mqm_scores_by_segment(corpus, evaluators)
    judge_scores = None
    if args.judge_scores:
        judge_scores = {}
        with open(args.judge_scores, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                judge_scores[row["segment_id"]] = float(row["score"])
    era = Era(args.era) if args.era else None
    rows = literalness_report(corpus, docs, human_scores, judge_scores,
                              lam=args.lam, era=era)
    print("# system\tmean_score\tsyntactic_similarity\tlexical_overlap"
          "\trank_pair")
    for r in rows:
        judge_rank = r.rank_judge if r.rank_judge is not None else "-"
        print(f"{r.system_id}\t{r.mean_human_score:.3f}"
              f"\t{r.syntactic_similarity:.4f}\t{r.lexical_overlap:.2f}"
              f"\t[{r.rank_human},{judge_rank}]")
    return 0


def cmd_judge(args) -> int:
    from .judge import (
        HttpChatClient,
        ResponseCache,
        TEMPLATES,
        consistency_analysis,
        judge_inputs_from_corpus,
        run_judge,
    )

    # flags override the optional JSON config file
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    endpoint = args.endpoint or config.get("endpoint")
    model = args.model or config.get("model", "gpt-4o-mini")
    temperatures = args.temperatures or str(
        ",".join(str(t) for t in config.get("temperatures", [0]))
    )
    n_queries = args.queries or int(config.get("n_queries", 1))
    parallelism = args.parallelism or int(config.get("parallelism", 4))

    corpus = load_corpus(args.corpus)
    template = TEMPLATES[
        {"literary": "gemba_literary", "original": "gemba_original",
         "rubric": "rubric_sqm"}[args.template]
    ]
    segment_ids = sorted(corpus.segments)
    if args.pair:
        pair = LanguagePair.parse(args.pair)
        segment_ids = [s for s in segment_ids if corpus.pair_of_segment(s) == pair]
    if args.limit:
        segment_ids = segment_ids[: args.limit]
    inputs = judge_inputs_from_corpus(corpus, segment_ids)
    api_key = os.environ.get("LITEVAL_JUDGE_API_KEY")
    if not endpoint:
        print("no endpoint configured (flag --endpoint or config file); "
              "nothing to query", file=sys.stderr)
        return 1
    client = HttpChatClient(endpoint, model, api_key)
    cache = ResponseCache(args.cache) if args.cache else None
    all_runs = []
    for temperature in (float(t) for t in temperatures.split(",")):
        runs = run_judge(
            client, inputs, template, temperature, n_queries,
            cache=cache, parallelism=parallelism, audit_path=args.audit,
        )
        all_runs.extend(runs)
        failed = sum(1 for r in runs if r.failed)
        unparsed = sum(1 for r in runs if r.parse_failed and not r.failed)
        print(f"temperature={temperature}: {len(runs)} runs, {failed} failed, "
              f"{unparsed} unparseable")
    if n_queries >= 2:
        for report in consistency_analysis([r for r in all_runs if not r.failed]):
            print(
                f"temperature={report.temperature}: spearman={report.mean_spearman:.3f} "
                f"delta<=1 {report.pct_delta_le_1:.1f}% | 1<delta<=5 "
                f"{report.pct_delta_1_5:.1f}% | delta>5 {report.pct_delta_gt_5:.1f}%"
            )
    if args.scores_out:
        with open(args.scores_out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["segment_id", "template", "temperature",
                             "query_index", "score", "failed"])
            for r in all_runs:
                writer.writerow([r.segment_id, r.template_id, r.temperature,
                                 r.query_index, f"{r.score:.4f}", int(r.failed)])
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import TaskStore, create_app, load_tasks

    tasks = load_tasks(args.tasks)
    store = TaskStore(tasks, args.journal)
    app = create_app(store, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_make_tasks(args) -> int:
    from .service import make_tasks, save_tasks

    corpus = load_corpus(args.corpus)
    systems = args.systems.split(",") if args.systems else None
    tasks = make_tasks(corpus, args.scheme, args.evaluator, systems=systems,
                       limit=args.limit)
    save_tasks(tasks, args.out)
    print(f"wrote {len(tasks)} tasks to {args.out}")
    return 0


def cmd_export(args) -> int:
    from .service import TaskStore, load_tasks

    store = TaskStore(load_tasks(args.tasks), args.journal)
    counts = store.export(args.out)
    for scheme, count in sorted(counts.items()):
        print(f"{scheme}: {count} records")
    return 0


def cmd_demo_corpus(args) -> int:
    from .datagen import generate_demo_corpus

    corpus = generate_demo_corpus(
        args.out, seed=args.seed, trees=not args.no_trees,
        metric_scores=not args.no_metrics,
    )
    print(f"demo corpus written to {args.out}: {len(corpus.paragraphs)} paragraphs, "
          f"{len(corpus.segments)} segments")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liteval",
        description="Literary machine-translation evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus statistics per language pair")
    p.add_argument("corpus")
    p.add_argument("--pair")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("score", help="segment scores and system ranking")
    p.add_argument("corpus")
    p.add_argument("--scheme", choices=("mqm", "sqm", "combined"), default="mqm")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--weights", default="25,5,1")
    p.add_argument("--role", choices=("student", "professional", "all"),
                   default="student",
                   help="which evaluators' judgments to aggregate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("agree", help="inter-annotator agreement")
    p.add_argument("corpus")
    p.add_argument("--evaluators", required=True, help="two ids, comma separated")
    p.add_argument("--scheme", choices=("mqm", "sqm", "bws", "span"), default="mqm")
    p.add_argument("--mode", choices=("binary", "category"), default="binary")
    p.add_argument("--weights", default="25,5,1")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("adequacy", help="human-vs-machine preference rates")
    p.add_argument("corpus")
    p.add_argument("--scheme")
    p.add_argument("--evaluator-role", choices=("student", "professional", "metric"))
    p.add_argument("--scenario", choices=("top", "other"))
    p.add_argument("--human-system", default="human")
    p.add_argument("--top-systems",
                   help="comma separated; default gpt4o,deepl,google,qwen")
    p.add_argument("--with-metrics", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_adequacy)

    p = sub.add_parser("diversity", help="pairwise lexical overlap")
    p.add_argument("corpus")
    p.add_argument("--trees", help="also report tree-kernel syntactic similarity")
    p.add_argument("--lambda", dest="lam", type=float, default=0.4)
    p.add_argument("--era", choices=("classic", "contemporary"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("literalness", help="syntactic similarity / overlap table")
    p.add_argument("corpus")
    p.add_argument("--trees")
    p.add_argument("--lambda", dest="lam", type=float, default=0.4)
    p.add_argument("--era", choices=("classic", "contemporary"))
    p.add_argument("--judge-scores")
    p.set_defaults(func=cmd_literalness)

    p = sub.add_parser("judge", help="run a chat-model judge over segments")
    p.add_argument("corpus")
    p.add_argument("--template", choices=("literary", "original", "rubric"),
                   default="literary")
    p.add_argument("--config", help="JSON file with endpoint/model/temperatures/"
                                    "n_queries defaults")
    p.add_argument("--temperatures")
    p.add_argument("--queries", type=int)
    p.add_argument("--cache", default=".judge-cache")
    p.add_argument("--endpoint")
    p.add_argument("--model")
    p.add_argument("--pair")
    p.add_argument("--limit", type=int)
    p.add_argument("--parallelism", type=int)
    p.add_argument("--audit")
    p.add_argument("--scores-out")
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("serve", help="run the annotation task service")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--tasks", required=True)
    p.add_argument("--journal", default="journal.jsonl")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="directory with the built browser UI")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("make-tasks", help="derive annotation tasks from a corpus")
    p.add_argument("corpus")
    p.add_argument("--scheme", choices=("mqm", "sqm", "bws", "free"), required=True)
    p.add_argument("--evaluator", required=True)
    p.add_argument("--systems")
    p.add_argument("--limit", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_tasks)

    p = sub.add_parser("export", help="export journal submissions to corpus files")
    p.add_argument("--tasks", required=True)
    p.add_argument("--journal", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("demo-corpus", help="generate the bundled demo corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--no-trees", action="store_true")
    p.add_argument("--no-metrics", action="store_true")
    p.set_defaults(func=cmd_demo_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
