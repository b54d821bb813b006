"""Thread corpus ingestion, preprocessing filters, and dataset statistics.

A thread is one post plus its top-level comments; the corpus is a list of
threads read from a JSONL stream (one post or comment object per line).
Preprocessing drops low-quality posts, non-active authors, and nested
comments. Statistics mirror the usual dataset-summary table: counts,
average lengths in words, and thread span in days.
"""

from __future__ import annotations

import json
import logging
import pickle
from dataclasses import dataclass, replace
from typing import IO, Iterable

from .textutil import tokenize

logger = logging.getLogger(__name__)

LOW_QUALITY_FLAIR = "Low-Quality Post"
AUTHOR_STATUSES = ("active", "deleted", "bot")

_CORPUS_FORMAT = "intent-miner-corpus"
_CORPUS_VERSION = 1


@dataclass(frozen=True)
class Post:
    id: str
    title: str
    body: str
    created_utc: int
    flair: str | None = None
    author_status: str = "active"


@dataclass(frozen=True)
class Comment:
    id: str
    post_id: str
    body: str
    created_utc: int
    depth: int = 0
    author_status: str = "active"


@dataclass(frozen=True)
class Thread:
    post: Post
    comments: tuple[Comment, ...] = ()

    @property
    def id(self) -> str:
        return self.post.id


@dataclass(frozen=True)
class CorpusStats:
    n_posts: int
    n_comments: int
    avg_comments_per_post: float
    avg_post_len_words: float
    avg_comment_len_words: float
    avg_thread_span_days: float


@dataclass(frozen=True)
class IngestIssue:
    """One recoverable problem hit during ingestion."""

    line_no: int
    kind: str  # "malformed" | "orphan" | "duplicate_comment"
    detail: str


class DuplicatePostError(ValueError):
    """Raised when two post lines share an id; ingestion aborts."""


def ingest_threads(source: Iterable[str] | IO[str]) -> tuple[list[Thread], list[IngestIssue]]:
    """Read a JSONL stream into threads grouped by post id.

    Comments are ordered by created_utc ascending (stable on ties).
    Malformed lines and orphan comments are recorded as issues and skipped;
    a duplicate comment id keeps the last occurrence with a warning.
    A duplicate post id aborts ingestion.
    """
    posts: dict[str, Post] = {}
    post_order: list[str] = []
    comments: dict[str, dict[str, tuple[int, Comment]]] = {}
    pending: list[tuple[int, dict]] = []
    issues: list[IngestIssue] = []

    def check_status(status: str) -> str:
        if status not in AUTHOR_STATUSES:
            raise ValueError(f"author_status must be one of {AUTHOR_STATUSES}, got {status!r}")
        return status

    def add_comment(line_no: int, obj: dict) -> None:
        post_id = obj["post_id"]
        if post_id not in posts:
            issues.append(IngestIssue(line_no, "orphan", f"comment {obj['id']!r} references unknown post_id {post_id!r}"))
            return
        depth = int(obj["depth"])
        if depth < 0:
            raise ValueError(f"depth must be non-negative, got {depth}")
        comment = Comment(
            id=obj["id"],
            post_id=post_id,
            body=obj["body"],
            created_utc=int(obj["created_utc"]),
            depth=depth,
            author_status=check_status(obj["author_status"]),
        )
        bucket = comments.setdefault(post_id, {})
        if comment.id in bucket:
            logger.warning("duplicate comment id %r on line %d; last occurrence wins", comment.id, line_no)
            issues.append(IngestIssue(line_no, "duplicate_comment", f"comment id {comment.id!r} repeated"))
            bucket[comment.id] = (bucket[comment.id][0], comment)
        else:
            bucket[comment.id] = (len(bucket), comment)

    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            kind = obj["kind"]
            if kind == "post":
                if obj["id"] in posts:
                    raise DuplicatePostError(f"duplicate post id {obj['id']!r} on line {line_no}")
                post = Post(
                    id=obj["id"],
                    title=obj["title"],
                    body=obj["body"],
                    created_utc=int(obj["created_utc"]),
                    flair=obj.get("flair"),
                    author_status=check_status(obj["author_status"]),
                )
                posts[post.id] = post
                post_order.append(post.id)
            elif kind == "comment":
                pending.append((line_no, obj))
            else:
                raise ValueError(f"unknown kind {kind!r}")
        except DuplicatePostError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            issues.append(IngestIssue(line_no, "malformed", str(exc)))

    # Comments are attached after all posts are known so that input order
    # of posts vs. comments does not matter.
    for line_no, obj in pending:
        try:
            add_comment(line_no, obj)
        except (ValueError, KeyError, TypeError) as exc:
            issues.append(IngestIssue(line_no, "malformed", str(exc)))

    threads = []
    for post_id in post_order:
        bucket = comments.get(post_id, {})
        ordered = sorted(bucket.values(), key=lambda item: (item[1].created_utc, item[0]))
        threads.append(Thread(post=posts[post_id], comments=tuple(c for _, c in ordered)))
    return threads, issues


def preprocess(threads: list[Thread]) -> list[Thread]:
    """Apply the corpus filters.

    Removes threads flaired low-quality, comments from deleted or bot
    authors, and comments below the top level. Threads left with no
    comments are kept with empty comment lists. Idempotent.
    """
    out = []
    for thread in threads:
        if thread.post.flair == LOW_QUALITY_FLAIR:
            continue
        kept = tuple(
            c for c in thread.comments
            if c.author_status == "active" and c.depth == 0
        )
        out.append(replace(thread, comments=kept))
    return out


def compute_stats(threads: list[Thread]) -> CorpusStats:
    """Dataset statistics over a (preprocessed) corpus.

    Word counts use the shared tokenizer on raw text; post length covers
    title plus body. Thread span is (max - min comment timestamp) in days,
    zero for threads with fewer than two comments; the span average covers
    threads with at least one comment.
    """
    n_posts = len(threads)
    n_comments = sum(len(t.comments) for t in threads)
    if n_posts == 0:
        return CorpusStats(0, 0, 0.0, 0.0, 0.0, 0.0)

    post_lens = [len(tokenize(t.post.title)) + len(tokenize(t.post.body)) for t in threads]
    comment_lens = [len(tokenize(c.body)) for t in threads for c in t.comments]
    spans = []
    for t in threads:
        if not t.comments:
            continue
        if len(t.comments) < 2:
            spans.append(0.0)
        else:
            stamps = [c.created_utc for c in t.comments]
            spans.append((max(stamps) - min(stamps)) / 86400.0)

    return CorpusStats(
        n_posts=n_posts,
        n_comments=n_comments,
        avg_comments_per_post=n_comments / n_posts,
        avg_post_len_words=sum(post_lens) / n_posts,
        avg_comment_len_words=sum(comment_lens) / n_comments if n_comments else 0.0,
        avg_thread_span_days=sum(spans) / len(spans) if spans else 0.0,
    )


def write_threads_jsonl(threads: list[Thread], sink: IO[str]) -> None:
    """Write threads back to the ingestion JSONL schema (posts then comments)."""
    for thread in threads:
        p = thread.post
        sink.write(json.dumps({
            "kind": "post", "id": p.id, "title": p.title, "body": p.body,
            "created_utc": p.created_utc, "flair": p.flair,
            "author_status": p.author_status,
        }, sort_keys=True) + "\n")
        for c in thread.comments:
            sink.write(json.dumps({
                "kind": "comment", "id": c.id, "post_id": c.post_id,
                "body": c.body, "created_utc": c.created_utc,
                "depth": c.depth, "author_status": c.author_status,
            }, sort_keys=True) + "\n")


def save_corpus(threads: list[Thread], path: str) -> None:
    with open(path, "wb") as fh:
        pickle.dump({"format": _CORPUS_FORMAT, "version": _CORPUS_VERSION, "threads": threads}, fh)


def load_corpus(path: str) -> list[Thread]:
    with open(path, "rb") as fh:
        try:
            payload = pickle.load(fh)
        except Exception as exc:
            raise ValueError(f"{path} is not an intent-miner corpus file") from exc
    if not isinstance(payload, dict) or payload.get("format") != _CORPUS_FORMAT:
        raise ValueError(f"{path} is not an intent-miner corpus file")
    if payload.get("version") != _CORPUS_VERSION:
        raise ValueError(f"unsupported corpus version {payload.get('version')!r}")
    return payload["threads"]


def validate_thread_jsonl(source: Iterable[str]) -> list[str]:
    """Schema-check a JSONL stream without building a corpus.

    Returns a list of human-readable problems; empty means the stream is
    valid. Used by the ingestion CLI and by external producers (the fetch
    adapter) to verify their output.
    """
    problems = []
    seen_posts: set[str] = set()
    post_ids: set[str] = set()
    deferred: list[tuple[int, str]] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            problems.append(f"line {line_no}: invalid JSON ({exc})")
            continue
        kind = obj.get("kind")
        if kind == "post":
            missing = [k for k in ("id", "title", "body", "created_utc", "author_status") if k not in obj]
            if missing:
                problems.append(f"line {line_no}: post missing fields {missing}")
                continue
            if not obj["id"]:
                problems.append(f"line {line_no}: empty post id")
            if obj["id"] in seen_posts:
                problems.append(f"line {line_no}: duplicate post id {obj['id']!r}")
            seen_posts.add(obj["id"])
            post_ids.add(obj["id"])
            if obj["author_status"] not in AUTHOR_STATUSES:
                problems.append(f"line {line_no}: bad author_status {obj['author_status']!r}")
            if not isinstance(obj["created_utc"], int) or obj["created_utc"] < 0:
                problems.append(f"line {line_no}: created_utc must be a non-negative integer")
        elif kind == "comment":
            missing = [k for k in ("id", "post_id", "body", "created_utc", "depth", "author_status") if k not in obj]
            if missing:
                problems.append(f"line {line_no}: comment missing fields {missing}")
                continue
            if obj["author_status"] not in AUTHOR_STATUSES:
                problems.append(f"line {line_no}: bad author_status {obj['author_status']!r}")
            if not isinstance(obj["depth"], int) or obj["depth"] < 0:
                problems.append(f"line {line_no}: depth must be a non-negative integer")
            deferred.append((line_no, obj["post_id"]))
        else:
            problems.append(f"line {line_no}: unknown kind {kind!r}")
    for line_no, post_id in deferred:
        if post_id not in post_ids:
            problems.append(f"line {line_no}: comment references unknown post_id {post_id!r}")
    return problems
