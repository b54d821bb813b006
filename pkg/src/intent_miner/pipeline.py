"""End-to-end pipeline: ingest through clustering metrics.

Stages run sequentially, writing every intermediate artifact into the
output directory so each one can be re-run standalone with the CLI. A
stage failure aborts the run with the stage name attached; artifacts
already written stay on disk. Given identical inputs and configuration,
two runs produce byte-identical outputs.
"""

from __future__ import annotations

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Iterator, Sequence, TypeVar

from . import annotation, clustering, corpus, extraction, metrics, scoring, sentiment, yake

logger = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")

METHODS = ("VN", "VR", "YAKE")


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.__cause__ = cause


@contextmanager
def _stage(name: str) -> Iterator[None]:
    logger.info("stage %s", name)
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


@dataclass(frozen=True)
class RunConfig:
    threads: str
    conllu: str
    out_dir: str
    lexicon: str | None = None  # None = bundled lexicon
    k_values: tuple[int, ...] = (50, 100)
    methods: tuple[str, ...] = METHODS
    linkage: str = "upgma"
    ngram_sizes: tuple[int, ...] = (2, 3)
    top_k: int = 10
    dedup_threshold: float = 0.9
    window: int = 1
    match_window: int | None = None
    jobs: int = 1
    seed: int = 0  # reserved; the pipeline is deterministic

    def __post_init__(self) -> None:
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; expected subset of {METHODS}")
        if not self.k_values:
            raise ValueError("k_values must be non-empty")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


# Config-file keys -> RunConfig fields. Kept flat on purpose; see
# parse_config_text for the accepted syntax.
_CONFIG_KEYS = {
    "threads": "threads",
    "conllu": "conllu",
    "out": "out_dir",
    "lexicon": "lexicon",
    "k": "k_values",
    "methods": "methods",
    "linkage": "linkage",
    "ngrams": "ngram_sizes",
    "topk": "top_k",
    "dedup": "dedup_threshold",
    "window": "window",
    "match_window": "match_window",
    "jobs": "jobs",
    "seed": "seed",
}

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    for ch in line:
        if ch == '"':
            in_string = not in_string
        if ch == "#" and not in_string:
            break
        out.append(ch)
    return "".join(out).strip()


def _split_array(body: str) -> list[str]:
    items = []
    depth = 0
    in_string = False
    current = []
    for ch in body:
        if ch == '"':
            in_string = not in_string
        if not in_string:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "," and depth == 0:
                items.append("".join(current).strip())
                current = []
                continue
        current.append(ch)
    tail = "".join(current).strip()
    if tail:
        items.append(tail)
    return items


def _parse_value(text: str) -> object:
    if text.startswith("[") and text.endswith("]"):
        return [_parse_value(item) for item in _split_array(text[1:-1])]
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        return text[1:-1]
    if text in ("true", "false"):
        return text == "true"
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    raise ValueError(f"cannot parse value {text!r} (strings need double quotes)")


def parse_config_text(text: str) -> dict[str, object]:
    """Read a flat `key = value` config file.

    Supported values: double-quoted strings, integers, floats, booleans,
    and one-level arrays of these. Comments start with #. Section headers
    are not supported; all keys are top-level.
    """
    mapping: dict[str, object] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("["):
            raise ValueError(f"config line {line_no}: section tables are not supported; use flat keys")
        if "=" not in line:
            raise ValueError(f"config line {line_no}: expected key = value")
        key, _, value = line.partition("=")
        mapping[key.strip()] = _parse_value(value.strip())
    return mapping


def config_from_mapping(mapping: dict[str, object]) -> RunConfig:
    unknown = set(mapping) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs: dict[str, object] = {}
    for key, value in mapping.items():
        field = _CONFIG_KEYS[key]
        if isinstance(value, list):
            value = tuple(value)
        kwargs[field] = value
    missing = {"threads", "conllu", "out_dir"} - set(kwargs)
    if missing:
        raise ValueError(f"config missing required keys: {sorted(missing)}")
    return RunConfig(**kwargs)  # type: ignore[arg-type]


def apply_overrides(config: RunConfig, **overrides: object) -> RunConfig:
    """Overlay non-None CLI flag values; flags win over file values."""
    valid = {f.name for f in fields(RunConfig)}
    updates = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(updates) - valid
    if unknown:
        raise ValueError(f"unknown config overrides: {sorted(unknown)}")
    return replace(config, **updates) if updates else config


def _map_jobs(fn: Callable[[T], U], items: Sequence[T], jobs: int) -> list[U]:
    """Order-preserving map, parallel across threads when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_pipeline(config: RunConfig) -> list[metrics.MetricsReport]:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with _stage("ingest"):
        with open(config.threads, encoding="utf-8") as fh:
            threads, issues = corpus.ingest_threads(fh)
        threads = corpus.preprocess(threads)
        if issues:
            logger.warning("ingest recorded %d issue(s)", len(issues))
        if not threads:
            raise ValueError("no threads after preprocessing")
        corpus.save_corpus(threads, str(out_dir / "corpus.bin"))

    with _stage("annotate"):
        with open(config.conllu, encoding="utf-8") as fh:
            parsed = annotation.parse_conllu(fh)
        if parsed.rejects:
            logger.warning("rejected %d annotation sentence(s)", len(parsed.rejects))
        aligned = annotation.align(threads, parsed.sentences)
        logger.info("annotation coverage %.3f", aligned.coverage)

    with _stage("extract"):
        pairs_by_thread = {
            t.id: extraction.extract_thread_pairs(t, aligned.annotations) for t in threads
        }
        with open(out_dir / "pairs.jsonl", "w", encoding="utf-8") as fh:
            extraction.write_pairs_jsonl(pairs_by_thread, fh)

    with _stage("fit-tfidf"):
        comment_lemmas = sentiment.build_comment_lemmas(threads, aligned.annotations)
        documents = [comment_lemmas[c.id] for t in threads for c in t.comments]
        model = scoring.fit_tfidf(documents)
        scoring.save_model(model, str(out_dir / "model.tfidf"))

    summaries_by_rule: dict[str, dict[str, list[scoring.SummaryPhrase]]] = {}

    with _stage("summarize"):
        thread_summaries = _map_jobs(
            lambda t: scoring.summarize_thread(t.id, pairs_by_thread[t.id], model),
            threads, config.jobs,
        )
        rows = []
        for summary in thread_summaries:
            for thread_id, rule, phrases in scoring.summary_rows(summary):
                rows.append((thread_id, rule, phrases))
                summaries_by_rule.setdefault(rule, {})[thread_id] = list(phrases)

    with _stage("sentiment"):
        lexicon = _load_lexicon(config.lexicon)

        def thread_sentiment(t: corpus.Thread) -> list[sentiment.AspectScore]:
            lemmas = {c.id: comment_lemmas[c.id] for c in t.comments}
            return sentiment.thread_aspects(
                t.id, pairs_by_thread[t.id], lemmas, lexicon, config.match_window,
            )

        aspect_lists = _map_jobs(thread_sentiment, threads, config.jobs)
        with open(out_dir / "aspects.jsonl", "w", encoding="utf-8") as fh:
            sentiment.write_aspects_jsonl(
                ((t.id, a) for t, aspects in zip(threads, aspect_lists) for a in aspects), fh,
            )
        for t, aspects in zip(threads, aspect_lists):
            phrases = sentiment.variant_summary(aspects)
            rows.append((t.id, "VR", phrases))
            summaries_by_rule.setdefault("VR", {})[t.id] = phrases

    with _stage("yake"):
        yake_config = yake.YakeConfig(
            ngram_sizes=config.ngram_sizes,
            top_k=config.top_k,
            dedup_threshold=config.dedup_threshold,
            window=config.window,
        )
        pos_table = annotation.majority_upos(parsed.sentences)
        keyword_lists = _map_jobs(
            lambda t: yake.extract_keywords(yake.thread_text(t), yake_config),
            threads, config.jobs,
        )
        for t, keywords in zip(threads, keyword_lists):
            phrases = [
                scoring.SummaryPhrase(
                    text=kw.text,
                    score=kw.score,
                    pos=tuple(pos_table.get(w, "NOUN") for w in kw.text.split()),
                )
                for kw in keywords
            ]
            rows.append((t.id, "YAKE", phrases))
            summaries_by_rule.setdefault("YAKE", {})[t.id] = phrases
        with open(out_dir / "summaries.jsonl", "w", encoding="utf-8") as fh:
            scoring.write_summaries_jsonl(rows, fh)

    reports: list[metrics.MetricsReport] = []
    for method in config.methods:
        for k in config.k_values:
            with _stage(f"cluster:{method}:k={k}"):
                per_thread = summaries_by_rule.get(method, {})
                vectors = [
                    clustering.vectorize_summary(t.id, per_thread.get(t.id, []), model)
                    for t in threads
                ]
                assignment = clustering.agglomerative_cluster(vectors, k, method, config.linkage)
                with open(out_dir / f"clusters_{method}_{k}.json", "w", encoding="utf-8") as fh:
                    clustering.save_clusters(assignment, vectors, config.linkage, fh)
            with _stage(f"metrics:{method}:k={k}"):
                reports.append(metrics.compute_report(assignment, vectors, per_thread))

    with _stage("report"):
        payload = {"rows": [metrics.report_to_dict(r) for r in reports]}
        with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        with open(out_dir / "hist.csv", "w", encoding="utf-8") as fh:
            metrics.write_hist_csv(reports, fh)

    return reports


def _load_lexicon(path: str | None) -> sentiment.SentimentLexicon:
    if path is None:
        return sentiment.load_default_lexicon()
    with open(path, encoding="utf-8") as fh:
        return sentiment.load_lexicon(fh)
