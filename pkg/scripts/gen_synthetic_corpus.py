#!/usr/bin/env python3
"""Generate a synthetic annotated thread corpus for pipeline tests.

Emits a threads JSONL file and a matching CoNLL-U file whose sentences
come from hand-parsed templates, so the dependency trees are valid by
construction and the extraction rules have known yields. Entity names are
generated from syllables and are unique per mention slot, which keeps
per-cluster unique-word counts roughly proportional to cluster size.
Verbs are kept several surface positions away from nouns (fronted
prepositional phrases, topicalized objects) so contiguous n-gram
candidates stay noun-phrase-like even though the dependency distance
between action and object remains small.

Usage:
  gen_synthetic_corpus.py --threads 240 --seed 20240817 --out-dir tests/fixtures/synthetic
  gen_synthetic_corpus.py --threads 10 --seed 7 --clean --out-dir tests/fixtures/demo
"""

from __future__ import annotations

import argparse
import json
import random
import re
from pathlib import Path

VERBS = [
    "accept", "activate", "adjust", "apply", "approve", "arrange", "attach", "audit",
    "authorize", "automate", "avoid", "balance", "battle", "block", "book", "boost",
    "borrow", "bridge", "budget", "bundle", "buy", "calculate", "cancel", "cap",
    "capture", "carry", "cash", "charge", "chase", "check", "claim", "clear",
    "close", "collect", "combine", "compare", "confirm", "connect", "consider",
    "consolidate", "convert", "correct", "cover", "credit", "debit", "decline",
    "deposit", "dispute", "downgrade", "drain", "drop", "earn", "enable", "enroll",
    "escalate", "exchange", "expedite", "extend", "file", "finance", "flag", "float",
    "forward", "freeze", "fund", "gift", "grab", "grow", "handle", "hedge", "hold",
    "initiate", "inspect", "insure", "invest", "invite", "juggle", "keep", "link",
    "load", "lock", "log", "lower", "manage", "match", "maximize", "merge", "migrate",
    "monitor", "move", "negotiate", "notify", "open", "order", "overdraw", "pause",
    "pay", "plan", "pledge", "pool", "port", "post", "prepay", "process", "protect",
    "prove", "qualify", "raise", "rebook", "redeem", "reduce", "refinance", "refresh",
    "register", "reimburse", "renew", "reorder", "report", "request", "reroute",
    "reserve", "reset", "resolve", "restore", "review", "route", "save", "scan",
    "schedule", "secure", "sell", "send", "settle", "shift", "ship", "shop", "sign",
    "skip", "sort", "split", "stack", "stage", "stop", "store", "submit", "swap",
    "switch", "sync", "tap", "track", "trade", "transfer", "trim", "unlock",
    "update", "upgrade", "verify", "wire", "withdraw",
]

NOUNS = [
    "account", "alert", "app", "balance", "bank", "bill", "bonus", "branch",
    "budget", "card", "cashback", "charge", "check", "claim", "credit", "cycle",
    "deadline", "deposit", "discount", "document", "fee", "form", "fund", "grace",
    "history", "insurance", "interest", "invoice", "ledger", "limit", "loan",
    "mailer", "membership", "minimum", "offer", "payment", "payout", "penalty",
    "perk", "pin", "plan", "points", "policy", "portal", "promo", "quote", "rate",
    "rebate", "receipt", "refund", "reward", "score", "statement", "status",
    "surcharge", "teller", "term", "threshold", "tier", "transaction", "transfer",
    "upgrade", "voucher", "waiver", "wallet", "widget", "window", "wire", "yield",
]

ADJECTIVES = [
    "annual", "automatic", "average", "basic", "busy", "combined", "current",
    "daily", "digital", "double", "early", "extra", "final", "flat", "flexible",
    "foreign", "formal", "fresh", "instant", "joint", "late", "local", "manual",
    "monthly", "mobile", "new", "official", "old", "online", "partial", "pending",
    "physical", "premium", "prior", "promotional", "quarterly", "regional",
    "regular", "rough", "separate", "standard", "temporary", "total", "weekly",
]

POSITIVE = ["amazing", "excellent", "fantastic", "great", "helpful", "reliable", "seamless", "smooth", "solid", "wonderful"]
NEGATIVE = ["awful", "broken", "confusing", "disappointing", "frustrating", "horrible", "slow", "terrible", "unreliable", "useless"]

SYLLABLE_HEADS = ["Bran", "Cor", "Dex", "Fin", "Gal", "Hale", "Jun", "Kel", "Lum", "Mon", "Nor", "Oris", "Pax", "Quil", "Riv", "Sol", "Tor", "Ved", "Wex", "Zan"]
SYLLABLE_TAILS = ["bank", "box", "dale", "dex", "flow", "ly", "mark", "mint", "nova", "pay", "port", "ra", "send", "sure", "tra", "vault", "via", "wise", "works", "zen"]

N_TOPICS = 12
TOPIC_SIZE = 9


def _tok(index, form, lemma, upos, head, deprel):
    return {"index": index, "form": form, "lemma": lemma, "upos": upos, "head": head, "deprel": deprel}


class Templates:
    """Hand-parsed sentence builders; each returns a token list."""

    @staticmethod
    def vn_entity(verb: str, entity: str) -> list[dict]:
        # "With <Entity> you could <verb> ."
        return [
            _tok(1, "With", "with", "ADP", 5, "prep"),
            _tok(2, entity, entity.lower(), "PROPN", 1, "pobj"),
            _tok(3, "you", "you", "PRON", 5, "nsubj"),
            _tok(4, "could", "could", "AUX", 5, "aux"),
            _tok(5, verb, verb, "VERB", 0, "root"),
            _tok(6, ".", ".", "PUNCT", 5, "punct"),
        ]

    @staticmethod
    def vn_noun(verb: str, noun: str) -> list[dict]:
        # "You could <verb> with the <noun> ."
        return [
            _tok(1, "You", "you", "PRON", 3, "nsubj"),
            _tok(2, "could", "could", "AUX", 3, "aux"),
            _tok(3, verb, verb, "VERB", 0, "root"),
            _tok(4, "with", "with", "ADP", 3, "prep"),
            _tok(5, "the", "the", "DET", 6, "det"),
            _tok(6, noun, noun, "NOUN", 4, "pobj"),
            _tok(7, ".", ".", "PUNCT", 3, "punct"),
        ]

    @staticmethod
    def vo_compound(verb: str, entity: str, noun: str) -> list[dict]:
        # "The <Entity> <noun> I could <verb> again ."
        return [
            _tok(1, "The", "the", "DET", 3, "det"),
            _tok(2, entity, entity.lower(), "PROPN", 3, "compound"),
            _tok(3, noun, noun, "NOUN", 6, "dobj"),
            _tok(4, "I", "i", "PRON", 6, "nsubj"),
            _tok(5, "could", "could", "AUX", 6, "aux"),
            _tok(6, verb, verb, "VERB", 0, "root"),
            _tok(7, "again", "again", "ADV", 6, "advmod"),
            _tok(8, ".", ".", "PUNCT", 6, "punct"),
        ]

    @staticmethod
    def an_copular(adj: str, noun: str, sent_adj: str) -> list[dict]:
        # "The <adj> <noun> is <sent_adj> ."
        return [
            _tok(1, "The", "the", "DET", 3, "det"),
            _tok(2, adj, adj, "ADJ", 3, "amod"),
            _tok(3, noun, noun, "NOUN", 4, "nsubj"),
            _tok(4, "is", "be", "AUX", 0, "root"),
            _tok(5, sent_adj, sent_adj, "ADJ", 4, "acomp"),
            _tok(6, ".", ".", "PUNCT", 4, "punct"),
        ]

    @staticmethod
    def ap_entity(sent_adj: str, entity: str) -> list[dict]:
        # "With <Entity> I am <sent_adj> ."
        return [
            _tok(1, "With", "with", "ADP", 5, "prep"),
            _tok(2, entity, entity.lower(), "PROPN", 1, "pobj"),
            _tok(3, "I", "i", "PRON", 4, "nsubj"),
            _tok(4, "am", "be", "AUX", 0, "root"),
            _tok(5, sent_adj, sent_adj, "ADJ", 4, "acomp"),
            _tok(6, ".", ".", "PUNCT", 4, "punct"),
        ]

    @staticmethod
    def neg_vn(verb: str, noun: str) -> list[dict]:
        # "You should not <verb> with the <noun> ."
        return [
            _tok(1, "You", "you", "PRON", 4, "nsubj"),
            _tok(2, "should", "should", "AUX", 4, "aux"),
            _tok(3, "not", "not", "PART", 4, "neg"),
            _tok(4, verb, verb, "VERB", 0, "root"),
            _tok(5, "with", "with", "ADP", 4, "prep"),
            _tok(6, "the", "the", "DET", 7, "det"),
            _tok(7, noun, noun, "NOUN", 5, "pobj"),
            _tok(8, ".", ".", "PUNCT", 4, "punct"),
        ]

    @staticmethod
    def opinion(sent_adj: str) -> list[dict]:
        # "It is <sent_adj> ."
        return [
            _tok(1, "It", "it", "PRON", 2, "nsubj"),
            _tok(2, "is", "be", "AUX", 0, "root"),
            _tok(3, sent_adj, sent_adj, "ADJ", 2, "acomp"),
            _tok(4, ".", ".", "PUNCT", 2, "punct"),
        ]


def render_text(sentences: list[list[dict]]) -> str:
    parts = []
    for tokens in sentences:
        text = " ".join(t["form"] for t in tokens)
        parts.append(re.sub(r" ([.,!?])", r"\1", text))
    return " ".join(parts)


class EntityNames:
    """Deterministic, globally unique brand-like names."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.seen: set[str] = set()

    def fresh(self) -> str:
        while True:
            name = self.rng.choice(SYLLABLE_HEADS) + self.rng.choice(SYLLABLE_TAILS)
            if name not in self.seen:
                self.seen.add(name)
                return name
            name = name + self.rng.choice(SYLLABLE_TAILS)
            if name not in self.seen:
                self.seen.add(name)
                return name


def build_thread(tid: int, rng: random.Random, names: EntityNames, base_time: int, clean: bool):
    topic = tid % N_TOPICS
    topic_nouns = [NOUNS[(topic * 5 + j) % len(NOUNS)] for j in range(TOPIC_SIZE)]

    def verb() -> str:
        return rng.choice(VERBS)

    def noun() -> str:
        return rng.choice(topic_nouns)

    e1, e2, e3, e4, e5, e6, e7, e8 = (names.fresh() for _ in range(8))
    n_a = noun()
    v6, n6 = verb(), noun()
    posit, negat = rng.choice(POSITIVE), rng.choice(NEGATIVE)

    comment_sentences = [
        [
            Templates.vo_compound(verb(), e1, n_a),
            Templates.vn_entity(verb(), e6),
            Templates.an_copular(rng.choice(ADJECTIVES), noun(), posit),
        ],
        [
            Templates.vn_entity(verb(), e2),
            Templates.vn_entity(verb(), e3),
            Templates.vn_entity(verb(), e8),
        ],
        [
            Templates.vn_noun(v6, n6),
            Templates.ap_entity(rng.choice(POSITIVE + NEGATIVE), e4),
            # Second mention of the first entity compound, so the keyword
            # baseline sees a repeated n-gram.
            Templates.vo_compound(verb(), e1, n_a),
        ],
        [
            Templates.vo_compound(verb(), e5, noun()),
            Templates.neg_vn(verb(), noun()),
            Templates.vn_entity(verb(), e7),
        ],
        [
            Templates.vn_noun(v6, n6),
            Templates.opinion(negat),
        ],
    ]

    post = {
        "kind": "post",
        "id": f"t3_s{tid:04d}",
        "title": f"Question about {topic_nouns[0]} and {topic_nouns[1]} options",
        "body": f"Looking for advice on my {topic_nouns[2]} before the next {topic_nouns[3]}.",
        "created_utc": base_time,
        "flair": None,
        "author_status": "active",
    }
    records = [post]
    conllu_blocks = []
    for ci, sentences in enumerate(comment_sentences):
        cid = f"c_s{tid:04d}_{ci}"
        records.append({
            "kind": "comment",
            "id": cid,
            "post_id": post["id"],
            "body": render_text(sentences),
            "created_utc": base_time + 1800 * (ci + 1) + rng.randrange(0, 900),
            "depth": 0,
            "author_status": "active",
        })
        for tokens in sentences:
            conllu_blocks.append((cid, tokens))

    if not clean:
        if tid % 5 == 0:
            records.append({
                "kind": "comment",
                "id": f"c_s{tid:04d}_bot",
                "post_id": post["id"],
                "body": "I am a bot and this action was performed automatically.",
                "created_utc": base_time + 60,
                "depth": 0,
                "author_status": "bot",
            })
        if tid % 4 == 0:
            records.append({
                "kind": "comment",
                "id": f"c_s{tid:04d}_reply",
                "post_id": post["id"],
                "body": "Replying to the comment above with the same question.",
                "created_utc": base_time + 7200,
                "depth": 1,
                "author_status": "active",
            })
    return records, conllu_blocks


def junk_thread(index: int, base_time: int) -> list[dict]:
    return [{
        "kind": "post",
        "id": f"t3_junk{index:02d}",
        "title": "misc weekly megathread",
        "body": "low effort content",
        "created_utc": base_time,
        "flair": "Low-Quality Post",
        "author_status": "active",
    }]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--threads", type=int, default=240)
    parser.add_argument("--seed", type=int, default=20240817)
    parser.add_argument("--clean", action="store_true", help="no junk threads, bot comments, or nested replies")
    parser.add_argument("--out-dir", required=True)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    names = EntityNames(rng)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = []
    conllu_blocks = []
    base_time = 1700000000
    for tid in range(args.threads):
        thread_records, thread_blocks = build_thread(tid, rng, names, base_time + tid * 86400 // 4, args.clean)
        records.extend(thread_records)
        conllu_blocks.extend(thread_blocks)
    if not args.clean:
        for j in range(6):
            records.extend(junk_thread(j, base_time + j * 1000))

    with open(out_dir / "threads.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    with open(out_dir / "anns.conllu", "w", encoding="utf-8") as fh:
        for cid, tokens in conllu_blocks:
            fh.write(f"# comment_id = {cid}\n")
            for t in tokens:
                fh.write("\t".join([
                    str(t["index"]), t["form"], t["lemma"], t["upos"], "_", "_",
                    str(t["head"]), t["deprel"], "_", "_",
                ]) + "\n")
            fh.write("\n")

    n_posts = sum(1 for r in records if r["kind"] == "post")
    n_comments = len(records) - n_posts
    print(f"wrote {n_posts} posts, {n_comments} comments, {len(conllu_blocks)} sentences to {out_dir}")


if __name__ == "__main__":
    main()
