"""Fetch subreddit threads into the thread JSONL schema.

Reads the public Reddit JSON listings (no credentials needed): the
subreddit's /new listing for posts, then each post's comment page for
its top-level comments. Output rows follow the corpus schema exactly,
with author_status mapped from the listing ("deleted" for removed
authors or bodies, "bot" for known bot accounts). Transient failures
are retried with exponential backoff; when retries are exhausted the
rows fetched so far remain on disk and the command exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator

import requests

from intent_miner.corpus import validate_thread_jsonl

logger = logging.getLogger(__name__)

BASE_URL = "https://www.reddit.com"
USER_AGENT = "intent-miner-adapter/0.1 (research corpus collection)"
LISTING_PAGE_SIZE = 100
COMMENT_PAGE_LIMIT = 500

# Accounts treated as bots in addition to the ``*bot`` naming convention.
BOT_AUTHORS = frozenset({"automoderator"})

# transport(url, params) -> decoded JSON payload
Transport = Callable[[str, dict], object]


class FetchError(RuntimeError):
    """All retries for one request failed."""


@dataclass(frozen=True)
class FetchSpec:
    subreddit: str
    start_utc: int  # inclusive
    end_utc: int  # exclusive
    max_posts: int = 100

    def __post_init__(self) -> None:
        if not self.subreddit:
            raise ValueError("subreddit must be non-empty")
        if self.start_utc >= self.end_utc:
            raise ValueError("window start must be before its end")
        if self.max_posts < 0:
            raise ValueError("max_posts must be >= 0")


def http_transport(session: requests.Session | None = None) -> Transport:
    """Default transport over HTTPS with a descriptive user agent."""
    session = session or requests.Session()

    def get(url: str, params: dict) -> object:
        response = session.get(
            url, params=params, headers={"User-Agent": USER_AGENT}, timeout=30,
        )
        response.raise_for_status()
        return response.json()

    return get


def _request(
    transport: Transport,
    url: str,
    params: dict,
    attempts: int,
    backoff: float,
    sleep: Callable[[float], None],
) -> object:
    """One JSON request with exponential backoff on any transport error."""
    for attempt in range(attempts):
        try:
            return transport(url, params)
        except Exception as exc:
            if attempt == attempts - 1:
                raise FetchError(f"{url}: {exc}") from exc
            delay = backoff * (2 ** attempt)
            logger.warning("retrying %s in %.1fs: %s", url, delay, exc)
            sleep(delay)
    raise AssertionError("unreachable")


def author_status(author: str | None, body: str | None = None) -> str:
    """Map listing fields onto the corpus author_status enum."""
    if author is None or author == "[deleted]" or body in ("[deleted]", "[removed]"):
        return "deleted"
    lowered = author.lower()
    if lowered in BOT_AUTHORS or lowered.endswith("bot"):
        return "bot"
    return "active"


def post_row(data: dict) -> dict:
    return {
        "kind": "post",
        "id": f"t3_{data['id']}",
        "title": data.get("title", ""),
        "body": data.get("selftext", ""),
        "created_utc": int(data["created_utc"]),
        "flair": data.get("link_flair_text"),
        "author_status": author_status(data.get("author"), data.get("selftext")),
    }


def comment_row(data: dict, post_id: str) -> dict:
    return {
        "kind": "comment",
        "id": data["id"],
        "post_id": post_id,
        "body": data.get("body", ""),
        "created_utc": int(data["created_utc"]),
        "depth": 0,
        "author_status": author_status(data.get("author"), data.get("body")),
    }


def _listing_children(payload: object) -> list[dict]:
    if not isinstance(payload, dict):
        raise ValueError("unexpected listing payload shape")
    return payload.get("data", {}).get("children", [])


def fetch_threads(
    spec: FetchSpec,
    transport: Transport,
    attempts: int = 3,
    backoff: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
) -> Iterator[dict]:
    """Yield post and top-level comment rows for one subreddit window.

    Rows surface incrementally so a failure mid-run leaves the caller
    with everything fetched before it; the final FetchError propagates
    after the yielded rows.
    """
    if spec.max_posts == 0:
        return
    listing_url = f"{BASE_URL}/r/{spec.subreddit}/new.json"
    yielded = 0
    seen: set[str] = set()
    after: str | None = None
    while yielded < spec.max_posts:
        params: dict = {"limit": LISTING_PAGE_SIZE}
        if after:
            params["after"] = after
        payload = _request(transport, listing_url, params, attempts, backoff, sleep)
        children = _listing_children(payload)
        if not children:
            break
        exhausted = False
        for child in children:
            data = child.get("data", {})
            created = int(data.get("created_utc", 0))
            if created < spec.start_utc:
                # /new is newest-first; everything after this is older still.
                exhausted = True
                break
            if created >= spec.end_utc:
                continue
            if data.get("id") in seen:  # cursors may repeat a post
                continue
            seen.add(data.get("id"))
            post = post_row(data)
            yield post
            comments_url = f"{BASE_URL}/r/{spec.subreddit}/comments/{data['id']}.json"
            pages = _request(
                transport, comments_url,
                {"limit": COMMENT_PAGE_LIMIT, "depth": 1},
                attempts, backoff, sleep,
            )
            if not isinstance(pages, list) or len(pages) < 2:
                raise FetchError(f"{comments_url}: unexpected comment payload shape")
            for comment in _listing_children(pages[1]):
                if comment.get("kind") == "t1":
                    yield comment_row(comment.get("data", {}), post["id"])
            yielded += 1
            if yielded >= spec.max_posts:
                break
        if exhausted:
            break
        after = payload.get("data", {}).get("after") if isinstance(payload, dict) else None
        if not after:
            break


def write_rows(rows: Iterable[dict], sink) -> Iterator[dict]:
    """Write each row as one JSON line, re-yielding it for counting."""
    for row in rows:
        sink.write(json.dumps(row, sort_keys=True) + "\n")
        yield row


def _parse_date(text: str) -> int:
    try:
        parsed = datetime.strptime(text, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from exc
    return int(parsed.timestamp())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-adapter-fetch",
        description="Fetch subreddit threads into the thread JSONL schema.",
    )
    parser.add_argument("--subreddit", required=True)
    parser.add_argument("--from", dest="start", type=_parse_date, required=True,
                        help="window start date (YYYY-MM-DD, inclusive)")
    parser.add_argument("--to", dest="end", type=_parse_date, required=True,
                        help="window end date (YYYY-MM-DD, exclusive)")
    parser.add_argument("--out", required=True, help="threads JSONL to write")
    parser.add_argument("--max-posts", type=int, default=100)
    parser.add_argument("--attempts", type=int, default=3, help="tries per request")
    return parser


def main(argv: list[str] | None = None, transport: Transport | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        spec = FetchSpec(
            subreddit=args.subreddit,
            start_utc=args.start,
            end_utc=args.end,
            max_posts=args.max_posts,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    transport = transport or http_transport()

    out_path = Path(args.out)
    count = 0
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            for _ in write_rows(fetch_threads(spec, transport, attempts=args.attempts), fh):
                count += 1
    except FetchError as exc:
        print(f"error: {exc} ({count} rows kept)", file=sys.stderr)
        return 2

    with open(out_path, encoding="utf-8") as fh:
        problems = validate_thread_jsonl(fh)
    for problem in problems:
        logger.error("schema: %s", problem)
    if problems:
        return 1
    print(f"wrote {count} rows to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
