"""Command-line interface.

Every pipeline stage is a subcommand reading and writing the documented
file formats, so stages can be chained by hand or replayed individually;
`run` composes them end to end from a config file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import annotation, clustering, corpus, extraction, metrics, pipeline, scoring, sentiment, yake

logger = logging.getLogger(__name__)


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _csv_strs(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-miner",
        description="Phrase-based summarization and clustering of discussion threads.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read threads JSONL into a corpus file")
    p.add_argument("--in", dest="input", required=True, help="threads JSONL path")
    p.add_argument("--out", required=True, help="corpus file to write")
    p.add_argument("--raw", action="store_true", help="skip preprocessing filters")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="print corpus statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("annotate-check", help="validate annotations against a corpus")
    p.add_argument("--conllu", required=True)
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_annotate_check)

    p = sub.add_parser("extract", help="extract action-object pairs per thread")
    p.add_argument("--corpus", required=True)
    p.add_argument("--conllu", required=True)
    p.add_argument("--out", required=True, help="pairs JSONL to write")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fit-tfidf", help="fit the composite TF-IDF model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--conllu", help="annotations for lemma documents (fallback: lowercased tokens)")
    p.set_defaults(func=cmd_fit_tfidf)

    p = sub.add_parser("summarize", help="score pairs and keep the top phrases per rule")
    p.add_argument("--pairs", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="summaries JSONL to write")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("sentiment", help="aspect sentiment scores and rankings")
    p.add_argument("--pairs", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", help="TSV lemma<TAB>valence; bundled lexicon if omitted")
    p.add_argument("--out", required=True, help="aspects JSONL to write")
    p.add_argument("--conllu", help="annotations for comment lemmas (fallback: lowercased tokens)")
    p.add_argument("--match-window", type=int, help="require aspect words within N consecutive tokens")
    p.add_argument("--vr-out", help="also write top-variance summaries JSONL (rule VR)")
    p.set_defaults(func=cmd_sentiment)

    p = sub.add_parser("yake", help="keyword-extraction baseline summaries")
    p.add_argument("--corpus", required=True)
    p.add_argument("--n", type=_csv_ints, default=(2, 3), help="n-gram sizes, e.g. 2,3")
    p.add_argument("--topk", type=int, default=10)
    p.add_argument("--dedup", type=float, default=0.9)
    p.add_argument("--window", type=int, default=1, help="co-occurrence window")
    p.add_argument("--stopwords", help="stopword list file; bundled list if omitted")
    p.add_argument("--conllu", help="annotations for POS tags on keywords (default: NOUN)")
    p.add_argument("--out", required=True, help="summaries JSONL to write (rule YAKE)")
    p.set_defaults(func=cmd_yake)

    p = sub.add_parser("cluster", help="cluster threads by their summaries")
    p.add_argument("--summaries", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--linkage", default="upgma", choices=clustering.LINKAGES)
    p.add_argument("--method", default="VN", help="summary rule to cluster on (default VN)")
    p.add_argument("--out", required=True, help="clusters JSON to write")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("metrics", help="cluster-quality and context metrics")
    p.add_argument("--clusters", required=True)
    p.add_argument("--summaries", required=True)
    p.add_argument("--out", required=True, help="report JSON to write")
    p.add_argument("--hist", required=True, help="per-cluster CSV to write")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("run", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", help="override: threads JSONL")
    p.add_argument("--conllu", help="override: annotations")
    p.add_argument("--out", help="override: output directory")
    p.add_argument("--lexicon", help="override: sentiment lexicon")
    p.add_argument("--k", type=_csv_ints, help="override: k values, e.g. 10,20")
    p.add_argument("--methods", type=_csv_strs, help="override: methods, e.g. VN,YAKE")
    p.add_argument("--linkage", choices=clustering.LINKAGES, help="override: linkage")
    p.add_argument("--jobs", type=int, help="override: worker threads")
    p.set_defaults(func=cmd_run)

    return parser


def _load_threads(path: str) -> list[corpus.Thread]:
    return corpus.load_corpus(path)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.readlines()


def _aligned(corpus_path: str, conllu_path: str) -> tuple[list[corpus.Thread], annotation.ParseResult, annotation.AlignedCorpus]:
    threads = _load_threads(corpus_path)
    with open(conllu_path, encoding="utf-8") as fh:
        parsed = annotation.parse_conllu(fh)
    return threads, parsed, annotation.align(threads, parsed.sentences)


def cmd_ingest(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as fh:
        threads, issues = corpus.ingest_threads(fh)
    for issue in issues:
        logger.warning("line %d (%s): %s", issue.line_no, issue.kind, issue.detail)
    if not args.raw:
        threads = corpus.preprocess(threads)
    corpus.save_corpus(threads, args.out)
    n_comments = sum(len(t.comments) for t in threads)
    print(f"ingested {len(threads)} threads, {n_comments} comments, {len(issues)} issue(s)")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    stats = corpus.compute_stats(_load_threads(args.corpus))
    rows = [
        ("posts", f"{stats.n_posts}"),
        ("comments", f"{stats.n_comments}"),
        ("avg_comments_per_post", f"{stats.avg_comments_per_post:.2f}"),
        ("avg_post_len_words", f"{stats.avg_post_len_words:.2f}"),
        ("avg_comment_len_words", f"{stats.avg_comment_len_words:.2f}"),
        ("avg_thread_span_days", f"{stats.avg_thread_span_days:.2f}"),
    ]
    if args.csv:
        print(",".join(name for name, _ in rows))
        print(",".join(value for _, value in rows))
    else:
        width = max(len(name) for name, _ in rows)
        for name, value in rows:
            print(f"{name.ljust(width)}  {value}")
    return 0


def cmd_annotate_check(args: argparse.Namespace) -> int:
    threads, parsed, aligned = _aligned(args.corpus, args.conllu)
    print(f"sentences accepted: {len(parsed.sentences)}")
    print(f"sentences rejected: {len(parsed.rejects)}")
    for diagnostic in parsed.rejects:
        print(f"  reject: {diagnostic}", file=sys.stderr)
    print(f"coverage: {aligned.coverage:.4f}")
    print(f"comments without annotation: {len(aligned.missing_ids)}")
    print(f"annotated ids not in corpus: {len(aligned.unknown_ids)}")
    return 1 if parsed.rejects else 0


def cmd_extract(args: argparse.Namespace) -> int:
    threads, _, aligned = _aligned(args.corpus, args.conllu)
    pairs_by_thread = {t.id: extraction.extract_thread_pairs(t, aligned.annotations) for t in threads}
    with open(args.out, "w", encoding="utf-8") as fh:
        extraction.write_pairs_jsonl(pairs_by_thread, fh)
    total = sum(len(p) for p in pairs_by_thread.values())
    print(f"extracted {total} pairs across {len(threads)} threads")
    return 0


def cmd_fit_tfidf(args: argparse.Namespace) -> int:
    threads = _load_threads(args.corpus)
    annotations = None
    if args.conllu:
        with open(args.conllu, encoding="utf-8") as fh:
            parsed = annotation.parse_conllu(fh)
        annotations = annotation.align(threads, parsed.sentences).annotations
    comment_lemmas = sentiment.build_comment_lemmas(threads, annotations)
    documents = [comment_lemmas[c.id] for t in threads for c in t.comments]
    model = scoring.fit_tfidf(documents)
    scoring.save_model(model, args.out)
    print(f"fitted on {model.n_docs} documents, vocabulary {len(model.vocabulary)}")
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    pairs_by_thread = extraction.read_pairs_jsonl(_read_lines(args.pairs))
    model = scoring.load_model(args.model)
    with open(args.out, "w", encoding="utf-8") as fh:
        for thread_id, pairs in pairs_by_thread.items():
            summary = scoring.summarize_thread(thread_id, pairs, model)
            scoring.write_summaries_jsonl(scoring.summary_rows(summary), fh)
    print(f"summarized {len(pairs_by_thread)} threads")
    return 0


def cmd_sentiment(args: argparse.Namespace) -> int:
    threads = _load_threads(args.corpus)
    pairs_by_thread = extraction.read_pairs_jsonl(_read_lines(args.pairs))
    annotations = None
    if args.conllu:
        with open(args.conllu, encoding="utf-8") as fh:
            parsed = annotation.parse_conllu(fh)
        annotations = annotation.align(threads, parsed.sentences).annotations
    if args.lexicon:
        with open(args.lexicon, encoding="utf-8") as fh:
            lexicon = sentiment.load_lexicon(fh)
    else:
        lexicon = sentiment.load_default_lexicon()
    comment_lemmas = sentiment.build_comment_lemmas(threads, annotations)

    vr_rows = []
    with open(args.out, "w", encoding="utf-8") as fh:
        for thread in threads:
            lemmas = {c.id: comment_lemmas[c.id] for c in thread.comments}
            aspects = sentiment.thread_aspects(
                thread.id, pairs_by_thread.get(thread.id, []), lemmas, lexicon, args.match_window,
            )
            sentiment.write_aspects_jsonl(((thread.id, a) for a in aspects), fh)
            vr_rows.append((thread.id, "VR", sentiment.variant_summary(aspects)))
    if args.vr_out:
        with open(args.vr_out, "w", encoding="utf-8") as fh:
            scoring.write_summaries_jsonl(vr_rows, fh)
    print(f"scored aspects for {len(threads)} threads")
    return 0


def cmd_yake(args: argparse.Namespace) -> int:
    threads = _load_threads(args.corpus)
    stopwords = yake.load_default_stopwords()
    if args.stopwords:
        with open(args.stopwords, encoding="utf-8") as fh:
            stopwords = frozenset(
                line.strip().lower() for line in fh
                if line.strip() and not line.startswith("#")
            )
    config = yake.YakeConfig(
        ngram_sizes=args.n,
        top_k=args.topk,
        dedup_threshold=args.dedup,
        window=args.window,
        stopwords=stopwords,
    )
    pos_table: dict[str, str] = {}
    if args.conllu:
        with open(args.conllu, encoding="utf-8") as fh:
            pos_table = annotation.majority_upos(annotation.parse_conllu(fh).sentences)
    rows = []
    for thread in threads:
        keywords = yake.extract_keywords(yake.thread_text(thread), config)
        phrases = [
            scoring.SummaryPhrase(
                text=kw.text,
                score=kw.score,
                pos=tuple(pos_table.get(w, "NOUN") for w in kw.text.split()),
            )
            for kw in keywords
        ]
        rows.append((thread.id, "YAKE", phrases))
    with open(args.out, "w", encoding="utf-8") as fh:
        scoring.write_summaries_jsonl(rows, fh)
    print(f"extracted keywords for {len(threads)} threads")
    return 0


def cmd_cluster(args: argparse.Namespace) -> int:
    summaries = scoring.read_summaries_jsonl(_read_lines(args.summaries))
    per_thread = summaries.get(args.method)
    if not per_thread:
        print(f"error: no summaries with rule {args.method!r} in {args.summaries}", file=sys.stderr)
        return 1
    model = scoring.load_model(args.model)
    vectors = [
        clustering.vectorize_summary(thread_id, phrases, model)
        for thread_id, phrases in per_thread.items()
    ]
    assignment = clustering.agglomerative_cluster(vectors, args.k, args.method, args.linkage)
    with open(args.out, "w", encoding="utf-8") as fh:
        clustering.save_clusters(assignment, vectors, args.linkage, fh)
    print(f"clustered {len(vectors)} threads into {args.k} clusters")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    with open(args.clusters, encoding="utf-8") as fh:
        assignment, vectors = clustering.load_clusters(fh)
    summaries = scoring.read_summaries_jsonl(_read_lines(args.summaries))
    per_thread = summaries.get(assignment.method_tag, {})
    report = metrics.compute_report(assignment, vectors, per_thread)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(metrics.report_to_dict(report), fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(args.hist, "w", encoding="utf-8") as fh:
        metrics.write_hist_csv([report], fh)
    print(metrics.format_table([report]))
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config_text = Path(args.config).read_text(encoding="utf-8")
    config = pipeline.config_from_mapping(pipeline.parse_config_text(config_text))
    config = pipeline.apply_overrides(
        config,
        threads=args.threads,
        conllu=args.conllu,
        out_dir=args.out,
        lexicon=args.lexicon,
        k_values=args.k,
        methods=args.methods,
        linkage=args.linkage,
        jobs=args.jobs,
    )
    reports = pipeline.run_pipeline(config)
    print(metrics.format_table(reports))
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except pipeline.StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, corpus.DuplicatePostError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
