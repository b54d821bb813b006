"""Shared fixtures: a clean English thread and a canned listing API."""

from __future__ import annotations

import json

import pytest

# Epoch bounds matching --from 2023-11-01 --to 2023-12-01 (UTC).
WINDOW_START = 1698796800
WINDOW_END = 1701388800
IN_WINDOW = WINDOW_START + 86400

CLEAN_BODIES = [
    "I hope they add the ability to make it a joint account with a spouse.",
    "Nice to see they're attempting to compete with newer online banks.",
    "When they first opened up their HYSA they eventually had a signup bonus.",
    "The main difference between this and the HYSA is that it earns interest.",
    "If you link your new Checking account you get MR points on that transaction.",
    "Can you use Zelle through the account?",
    "The monthly fee gets waived with a direct deposit.",
    "I moved my savings there last year and the transfer was quick.",
]


def thread_rows(post_id: str = "t3_demo", bodies: list[str] | None = None) -> list[dict]:
    """One post plus one comment per body, in the corpus JSONL schema."""
    bodies = CLEAN_BODIES if bodies is None else bodies
    rows = [{
        "kind": "post", "id": post_id, "title": "Bank Rewards Checking Account",
        "body": "Bank Rewards Checking Account.", "created_utc": IN_WINDOW,
        "flair": None, "author_status": "active",
    }]
    for n, body in enumerate(bodies, start=1):
        rows.append({
            "kind": "comment", "id": f"{post_id}_c{n}", "post_id": post_id,
            "body": body, "created_utc": IN_WINDOW + n, "depth": 0,
            "author_status": "active",
        })
    return rows


def write_jsonl(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


@pytest.fixture
def clean_threads_path(tmp_path):
    path = tmp_path / "threads.jsonl"
    write_jsonl(path, thread_rows())
    return path


# ---------------------------------------------------------------------------
# Canned listing API in the upstream wire shape

def api_post(post_id: str, created_utc: int, author: str = "alice",
             title: str = "Bank Rewards Checking Account",
             selftext: str = "Sharing my experience with the new account.",
             flair: str | None = None) -> dict:
    return {
        "id": post_id, "title": title, "selftext": selftext,
        "created_utc": float(created_utc), "author": author,
        "link_flair_text": flair,
    }


def api_comment(comment_id: str, body: str, created_utc: int,
                author: str = "bob") -> dict:
    return {"id": comment_id, "body": body, "created_utc": float(created_utc),
            "author": author}


class FakeListingApi:
    """Transport double serving canned listing pages and comment pages.

    ``pages`` maps an after-cursor (None for the first request) to a
    (posts, next_cursor) pair; ``comments`` maps post id to its top-level
    comment payloads. Every request is recorded for assertions.
    """

    def __init__(self, pages, comments, fail_first: int = 0):
        self.pages = pages
        self.comments = comments
        self.fail_first = fail_first
        self.calls: list[tuple[str, dict]] = []

    def __call__(self, url: str, params: dict) -> object:
        self.calls.append((url, dict(params)))
        if self.fail_first > 0:
            self.fail_first -= 1
            raise ConnectionError("synthetic outage")
        if "/comments/" in url:
            post_id = url.rsplit("/", 1)[-1].removesuffix(".json")
            children = [{"kind": "t1", "data": c} for c in self.comments.get(post_id, [])]
            # Nested replies arrive in the same listing; the fetcher must
            # keep top-level "t1" children only, so include a "more" stub.
            children.append({"kind": "more", "data": {"count": 0}})
            return [
                {"kind": "Listing", "data": {"children": []}},
                {"kind": "Listing", "data": {"children": children}},
            ]
        posts, next_cursor = self.pages[params.get("after")]
        return {"kind": "Listing", "data": {
            "children": [{"kind": "t3", "data": p} for p in posts],
            "after": next_cursor,
        }}


@pytest.fixture
def single_page_api():
    posts = [api_post("aaa1", IN_WINDOW + 500), api_post("aaa2", IN_WINDOW + 400)]
    comments = {
        "aaa1": [api_comment("ca1", CLEAN_BODIES[0], IN_WINDOW + 510),
                 api_comment("ca2", CLEAN_BODIES[1], IN_WINDOW + 520)],
        "aaa2": [api_comment("cb1", CLEAN_BODIES[2], IN_WINDOW + 410)],
    }
    return FakeListingApi({None: (posts, None)}, comments)
