"""Deterministic rule-based tokenizer, tagger, and dependency attacher.

Fallback annotator used when no statistical parser is importable in the
environment. It favours predictable, valid output over linguistic
accuracy: a closed-class lexicon plus suffix rules assign universal POS
tags, a small irregular table plus suffix stripping produces lemmas, and
a single left-to-right pass attaches heads. Every sentence is checked
mechanically (exactly one root, heads in range, all tokens reachable)
and falls back to a flat parse when a rule combination misbehaves, so
downstream validation never rejects a sentence produced here.
"""

from __future__ import annotations

import re
from typing import Iterator

# ---------------------------------------------------------------------------
# Sentence splitting and tokenization

_SENT_BOUNDARY = re.compile(r"(?<=[.!?])[\s ]+|\n+")
_TOKEN = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)*|\d+(?:[.,]\d+)*%?|[^\sA-Za-z0-9]")

# Clitics split off the host word, longest first so 'll beats 'l etc.
_CLITICS = ("n't", "'re", "'ve", "'ll", "'m", "'d", "'s")


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation or newlines; never returns blanks."""
    return [part.strip() for part in _SENT_BOUNDARY.split(text) if part.strip()]


def tokenize(sentence: str) -> list[str]:
    tokens: list[str] = []
    for match in _TOKEN.findall(sentence):
        lowered = match.lower()
        for clitic in _CLITICS:
            if lowered.endswith(clitic) and len(lowered) > len(clitic):
                tokens.append(match[: -len(clitic)])
                tokens.append(match[-len(clitic):])
                break
        else:
            tokens.append(match)
    return tokens


# ---------------------------------------------------------------------------
# Closed-class lexicons (disjoint by construction)

DETERMINERS = frozenset("""
a an the this these those my your his her its our their any some no every
each all both another either neither such which whose
""".split())

PRONOUNS = frozenset("""
i you he she it we they me him us them myself yourself himself herself
itself ourselves themselves who whom someone anyone everyone nobody
somebody anybody everybody something anything nothing everything mine
yours hers ours theirs one
""".split())

AUXILIARIES = frozenset("""
am is are was were be been being do does did done doing have has had
having will would can could shall should may might must ca wo sha ai
're 've 'll 'm 'd
""".split())

ADPOSITIONS = frozenset("""
of in on at by for with about against between into through during without
before after above below from up down over under across behind beyond
near toward towards upon within via per off around along despite except
than onto inside outside unlike amid among
""".split())

COORDINATORS = frozenset({"and", "or", "but", "nor", "&"})

SUBORDINATORS = frozenset("""
if when whenever because while although though unless until since whereas
whether
""".split())

PARTICLES = frozenset({"not", "n't", "'s"})

ADVERBS = frozenset("""
very really quite too also just only now then here there always never
often sometimes usually eventually finally soon still already again almost
enough even ever first maybe perhaps rather pretty currently recently
together instead anyway however actually probably definitely away back
once twice how why where so yet else ago far
""".split())

INTERJECTIONS = frozenset("yes oh wow hey hi hello yeah yep nope hmm ugh oops thanks".split())

NUMBER_WORDS = frozenset("""
zero one two three four five six seven eight nine ten eleven twelve
twenty thirty forty fifty hundred thousand million billion
""".split()) - {"one"}  # "one" reads better as a pronoun

# ---------------------------------------------------------------------------
# Open-class lexicons

VERB_BASES = frozenset("""
be do have get make go see know think take come want use find give tell
work call try ask need feel become leave put mean keep let begin seem
help talk turn start show hear play run move like live believe hold bring
happen write provide sit stand lose pay meet include continue set learn
change lead understand watch follow stop create speak read allow add
spend grow open walk win offer remember love consider appear buy wait
serve send expect build stay fall cut reach remain suggest raise pass
sell require report decide pull link earn apply transfer deposit withdraw
post close sign join switch check compare compete attempt hope recommend
avoid charge waive qualify redeem cancel upgrade downgrade churn fund
save invest wire refer claim receive confirm verify approve deny reject
submit process issue handle manage track monitor notice mention share
explain wonder guess assume agree disagree prefer enjoy hate worry trust
owe borrow lend repay refund credit debit wish thank say choose draw
throw accept access activate answer arrive attach belong book call care
carry catch clear click combine complain complete contact cost count
cover deal deliver depend describe die discuss drop eat end enter expire
fail fill fix fly forget forgive happen hit hurt imagine improve increase
install intend introduce kick land last laugh list listen lock look mail
mark match matter miss mix note obtain occur order pack park pick plan
point prepare press print promise prove push reduce release rely rent
reply request return review ring rise roll save search seek settle ship
shop shut skip sleep slip sort sound spell split spread state stick store
study succeed suppose teach test text tie touch train travel treat update
upload visit vote wake walk warn wash wear welcome wrap
""".split())

ADJECTIVE_BASES = frozenset("""
good new great little own other old right big high small large nice bad
same free low main joint online annual monthly available easy hard early
late best better worse worst happy sure clear recent current similar
different extra total minimum maximum eligible direct instant mobile
digital physical separate solid decent awesome terrible horrible amazing
excellent reliable quick fast slow simple full empty important possible
likely unlikely common rare cheap expensive safe risky local national
federal standard basic premium active inactive valid invalid wrong
correct glad sorry ready busy weird strange huge tiny long short wide
narrow major minor useful useless helpful friendly annoying frustrating
smooth rough fair unfair legit fine okay
""".split())

IRREGULAR_VERBS = {
    "got": "get", "gotten": "get", "made": "make", "went": "go",
    "gone": "go", "saw": "see", "seen": "see", "knew": "know",
    "known": "know", "thought": "think", "took": "take", "taken": "take",
    "came": "come", "found": "find", "gave": "give", "given": "give",
    "told": "tell", "left": "leave", "meant": "mean", "kept": "keep",
    "began": "begin", "begun": "begin", "held": "hold", "brought": "bring",
    "wrote": "write", "written": "write", "sat": "sit", "stood": "stand",
    "lost": "lose", "paid": "pay", "met": "meet", "led": "lead",
    "understood": "understand", "spoke": "speak", "spoken": "speak",
    "spent": "spend", "grew": "grow", "grown": "grow", "won": "win",
    "bought": "buy", "built": "build", "fell": "fall", "fallen": "fall",
    "sold": "sell", "sent": "send", "heard": "hear", "ran": "run",
    "said": "say", "chose": "choose", "chosen": "choose", "drew": "draw",
    "drawn": "draw", "threw": "throw", "thrown": "throw", "felt": "feel",
    "became": "become", "ate": "eat", "eaten": "eat", "hid": "hide",
    "flew": "fly", "forgot": "forget", "forgotten": "forget",
    "taught": "teach", "caught": "catch", "dealt": "deal", "woke": "wake",
    "wore": "wear", "rose": "rise", "had": "have", "has": "have",
    "having": "have", "did": "do", "does": "do", "done": "do",
    "was": "be", "were": "be", "been": "be",
}

AUX_LEMMAS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be", "'m": "be", "'re": "be", "ai": "be",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "has": "have", "had": "have", "having": "have", "'ve": "have",
    "'ll": "will", "wo": "will", "'d": "would", "ca": "can", "sha": "shall",
}

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship", "ism")
_ADJ_SUFFIXES = ("ous", "ful", "able", "ible", "ive")

_NOMINAL = frozenset({"NOUN", "PROPN", "PRON", "NUM"})
_NOUNISH = frozenset({"NOUN", "PROPN"})


def verb_base(word: str) -> str | None:
    """Base form when the word is a recognized verb inflection."""
    if word in VERB_BASES:
        return word
    if word in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[word]
    candidates: list[str] = []
    if word.endswith("ies") and len(word) > 4:
        candidates.append(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        candidates.append(word[:-2])
    if word.endswith("s") and len(word) > 2:
        candidates.append(word[:-1])
    for suffix in ("ing", "ed"):
        if word.endswith(suffix) and len(word) > len(suffix) + 2:
            stem = word[: -len(suffix)]
            candidates.append(stem)
            candidates.append(stem + "e")
            if len(stem) > 2 and stem[-1] == stem[-2]:
                candidates.append(stem[:-1])
    if word.endswith("ied") and len(word) > 4:
        candidates.append(word[:-3] + "y")
    for cand in candidates:
        if cand in VERB_BASES:
            return cand
        if cand in IRREGULAR_VERBS:
            return IRREGULAR_VERBS[cand]
    return None


def _strip_verb(word: str) -> str:
    """Generic inflection stripping for verbs outside the lexicon."""
    if word.endswith("ing") and len(word) > 5:
        stem = word[:-3]
    elif word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    elif word.endswith("ed") and len(word) > 4:
        stem = word[:-2]
    elif word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    elif word.endswith("s") and len(word) > 3 and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    else:
        return word
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
        stem = stem[:-1]
    return stem


def _singular(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ses", "xes", "zes", "ches", "shes")) and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and len(word) > 3 and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def _adjective_base(word: str) -> str | None:
    if word in ADJECTIVE_BASES:
        return word
    for suffix in ("er", "est"):
        if word.endswith(suffix) and len(word) > len(suffix) + 2:
            stem = word[: -len(suffix)]
            for cand in (stem, stem + "e", stem[:-1] if stem[-1:] == stem[-2:-1] else stem):
                if cand in ADJECTIVE_BASES:
                    return cand
    return None


def _lexical_tag(form: str, sentence_initial: bool) -> str:
    low = form.lower()
    if not any(ch.isalnum() for ch in form):
        return "PUNCT"
    if low[0].isdigit() or low in NUMBER_WORDS:
        return "NUM"
    for tag, lexicon in (
        ("AUX", AUXILIARIES), ("DET", DETERMINERS), ("PRON", PRONOUNS),
        ("ADP", ADPOSITIONS), ("CCONJ", COORDINATORS), ("SCONJ", SUBORDINATORS),
        ("PART", PARTICLES), ("ADV", ADVERBS), ("INTJ", INTERJECTIONS),
    ):
        if low in lexicon:
            return tag
    if form[0].isupper() and (not sentence_initial or (form.isupper() and len(form) > 1)):
        return "PROPN"
    if verb_base(low):
        return "VERB"
    if _adjective_base(low):
        return "ADJ"
    if low.endswith("ly") and len(low) > 4:
        return "ADV"
    if low.endswith(_NOUN_SUFFIXES):
        return "NOUN"
    if low.endswith(("ing", "ed")) and len(low) > 5:
        return "VERB"
    if low.endswith(_ADJ_SUFFIXES) and len(low) > 5:
        return "ADJ"
    return "NOUN"


def tag_tokens(tokens: list[str]) -> list[str]:
    """Assign universal POS tags, then apply the context fixups."""
    tags = [_lexical_tag(tok, i == 0) for i, tok in enumerate(tokens)]
    n = len(tags)
    # "have" heading a noun phrase is a main verb, not an auxiliary.
    for i, tok in enumerate(tokens):
        if tok.lower() in ("have", "has", "had", "having"):
            j = i + 1
            while j < n and tags[j] == "ADV":
                j += 1
            if j < n and tags[j] in ("DET", "NOUN", "PROPN", "PRON", "NUM", "ADJ"):
                tags[i] = "VERB"
    # A plural form right after a nominal or its modifiers reads as a
    # noun ("MR points", "the charges"), not a 3rd-person verb — unless
    # it is the only verb the sentence has.
    verbs_left = tags.count("VERB")
    for i, tok in enumerate(tokens):
        low = tok.lower()
        if (tags[i] == "VERB" and verbs_left > 1
                and low.endswith("s") and not low.endswith("ss")
                and i > 0 and tags[i - 1] in ("DET", "ADJ", "NOUN", "PROPN", "NUM")):
            tags[i] = "NOUN"
            verbs_left -= 1
    for i, tok in enumerate(tokens):
        low = tok.lower()
        if low == "to":
            follows_verb = i + 1 < n and tags[i + 1] in ("VERB", "AUX")
            tags[i] = "PART" if follows_verb else "ADP"
        elif low == "that":
            if i + 1 >= n or tags[i + 1] == "PUNCT":
                tags[i] = "PRON"
            elif tags[i + 1] in ("NOUN", "PROPN", "ADJ", "NUM"):
                tags[i] = "DET"
            else:
                tags[i] = "SCONJ"
    return tags


def lemmatize(form: str, upos: str) -> str:
    low = form.lower()
    if low == "n't":
        return "not"
    if upos == "AUX":
        return AUX_LEMMAS.get(low, low)
    if upos == "VERB":
        return verb_base(low) or _strip_verb(low)
    if upos in _NOUNISH:
        return _singular(low)
    if upos == "ADJ":
        return _adjective_base(low) or low
    return low


# ---------------------------------------------------------------------------
# Dependency attachment

def _pick_root(tags: list[str]) -> int:
    for wanted in ("VERB", "ADJ"):
        for i, tag in enumerate(tags):
            if tag == wanted:
                return i
    for i, tag in enumerate(tags):
        if tag in _NOMINAL:
            return i
    return 0


def _nearest(tags: list[str], start: int, step: int, wanted: frozenset[str]) -> int | None:
    i = start + step
    while 0 <= i < len(tags):
        if tags[i] in wanted:
            return i
        i += step
    return None


_VERB_SET = frozenset({"VERB"})
_VERBISH = frozenset({"VERB", "AUX"})
_ATTACHABLE = frozenset({"VERB", "ADJ", "NOUN", "PROPN", "PRON", "NUM"})


def attach(tokens: list[str], tags: list[str]) -> list[tuple[int, str]]:
    """Heads (1-based, 0 = root) and relations for one tagged sentence."""
    n = len(tokens)
    heads = [0] * n
    rels = ["dep"] * n
    root = _pick_root(tags)
    rels[root] = "root"

    consumed_adps: set[int] = set()
    has_nsubj: set[int] = set()
    has_dobj: set[int] = set()

    def link(i: int, head: int, rel: str) -> None:
        heads[i] = head + 1
        rels[i] = rel

    for i in range(n):
        if i == root:
            continue
        tag = tags[i]
        low = tokens[i].lower()

        if tag == "PUNCT":
            link(i, root, "punct")
        elif tag == "DET":
            noun = _nearest(tags, i, +1, _NOUNISH)
            link(i, noun, "det") if noun is not None else link(i, root, "dep")
        elif tag == "ADJ":
            noun = _nearest(tags, i, +1, _NOUNISH)
            blocked = noun is not None and any(
                tags[j] in ("VERB", "PUNCT") for j in range(i + 1, noun)
            )
            if noun is not None and not blocked:
                link(i, noun, "amod")
            else:
                verb = _nearest(tags, i, -1, _VERBISH)
                link(i, verb, "acomp") if verb is not None else link(i, root, "dep")
        elif tag == "ADV":
            verb = _nearest(tags, i, -1, _VERB_SET)
            if verb is None:
                verb = _nearest(tags, i, +1, _VERB_SET)
            link(i, verb, "advmod") if verb is not None else link(i, root, "advmod")
        elif tag == "AUX":
            verb = _nearest(tags, i, +1, _VERB_SET)
            if verb is None:
                verb = _nearest(tags, i, -1, _VERB_SET)
            if verb is not None:
                link(i, verb, "aux")
            else:
                link(i, root, "cop" if tags[root] not in _VERBISH else "aux")
        elif tag == "PART":
            if low in ("not", "n't"):
                verb = _nearest(tags, i, +1, _VERB_SET)
                if verb is None:
                    verb = _nearest(tags, i, -1, _VERBISH)
                link(i, verb, "neg") if verb is not None else link(i, root, "neg")
            elif low == "to":
                verb = _nearest(tags, i, +1, _VERB_SET)
                link(i, verb, "aux") if verb is not None else link(i, root, "dep")
            else:  # possessive 's
                host = i - 1 if i > 0 and tags[i - 1] in _NOMINAL else None
                link(i, host, "case") if host is not None else link(i, root, "dep")
        elif tag == "ADP":
            anchor = _nearest(tags, i, -1, _ATTACHABLE)
            link(i, anchor, "prep") if anchor is not None else link(i, root, "prep")
        elif tag == "CCONJ":
            conjunct = _nearest(tags, i, -1, _ATTACHABLE)
            link(i, conjunct, "cc") if conjunct is not None else link(i, root, "cc")
        elif tag == "SCONJ":
            verb = _nearest(tags, i, +1, _VERB_SET)
            link(i, verb, "mark") if verb is not None else link(i, root, "mark")
        elif tag == "INTJ":
            link(i, root, "dep")
        elif tag == "VERB":
            link(i, root, "conj")
        elif tag in _NOMINAL:
            _attach_nominal(i, tokens, tags, root, heads, rels,
                            consumed_adps, has_nsubj, has_dobj, link)
        else:
            link(i, root, "dep")

    if not _tree_ok(heads, rels):
        heads = [0] + [1] * (n - 1)
        rels = ["root"] + ["dep"] * (n - 1)
    return list(zip(heads, rels))


def _attach_nominal(i, tokens, tags, root, heads, rels,
                    consumed_adps, has_nsubj, has_dobj, link) -> None:
    n = len(tags)
    # Number directly modifying a following noun.
    if tags[i] == "NUM" and any(tags[j] in _NOUNISH for j in range(i + 1, min(i + 3, n))):
        noun = _nearest(tags, i, +1, _NOUNISH)
        link(i, noun, "nummod")
        return
    # Non-final member of a noun run modifies the run's last noun.
    if tags[i] in _NOUNISH and i + 1 < n and tags[i + 1] in _NOUNISH:
        j = i + 1
        while j + 1 < n and tags[j + 1] in _NOUNISH:
            j += 1
        link(i, j, "compound")
        return

    def nearest_open_adp() -> int | None:
        for j in range(i - 1, -1, -1):
            if tags[j] == "ADP" and j not in consumed_adps:
                return j
        return None

    def prev_conjunct() -> int | None:
        # A conjunct must sit left of this noun's whole compound run;
        # linking into the run would close a cycle with its members.
        start = i
        while start > 0 and tags[start - 1] in _NOUNISH:
            start -= 1
        return _nearest(tags, start, -1, _NOMINAL)

    if i < root:
        adp = nearest_open_adp()
        if adp is not None:
            consumed_adps.add(adp)
            link(i, adp, "pobj")
        elif root not in has_nsubj:
            has_nsubj.add(root)
            link(i, root, "nsubj")
        else:
            prev = prev_conjunct()
            link(i, prev, "conj") if prev is not None else link(i, root, "dep")
        return

    # After the root: a nominal directly before an unclaimed verb is its
    # subject ("...their HYSA they eventually had a signup bonus").
    skippable = ("ADV", "ADJ", "DET", "AUX")
    for j in range(i + 1, min(i + 4, n)):
        if tags[j] == "VERB":
            if j not in has_nsubj:
                has_nsubj.add(j)
                link(i, j, "nsubj")
                return
            break
        if tags[j] not in skippable:
            break

    verb = _nearest(tags, i, -1, _VERB_SET)
    adp = nearest_open_adp()
    if adp is not None and (verb is None or adp > verb):
        consumed_adps.add(adp)
        link(i, adp, "pobj")
    elif verb is not None:
        if verb not in has_dobj:
            has_dobj.add(verb)
            link(i, verb, "dobj")
        else:
            link(i, verb, "attr")
    else:
        prev = prev_conjunct()
        link(i, prev, "conj") if prev is not None else link(i, root, "dep")


def _tree_ok(heads: list[int], rels: list[str]) -> bool:
    """Mechanical well-formedness: one root, in-range heads, all reachable."""
    n = len(heads)
    roots = [i for i, h in enumerate(heads) if h == 0]
    if len(roots) != 1 or rels[roots[0]] != "root":
        return False
    children: dict[int, list[int]] = {}
    for i, h in enumerate(heads):
        if not 0 <= h <= n or h == i + 1:
            return False
        children.setdefault(h, []).append(i + 1)
    seen: set[int] = set()
    stack = [roots[0] + 1]
    while stack:
        node = stack.pop()
        if node in seen:
            return False
        seen.add(node)
        stack.extend(children.get(node, []))
    return len(seen) == n


# ---------------------------------------------------------------------------
# Public entry point

def annotate_text(text: str) -> Iterator[list[tuple[str, str, str, int, str]]]:
    """Yield one (form, lemma, upos, head, deprel) list per sentence."""
    for sentence in split_sentences(text):
        tokens = tokenize(sentence)
        if not any(ch.isalnum() for tok in tokens for ch in tok):
            continue  # nothing taggable: pure emoji or punctuation
        tags = tag_tokens(tokens)
        arcs = attach(tokens, tags)
        yield [
            (form, lemmatize(form, tag), tag, head, rel)
            for form, tag, (head, rel) in zip(tokens, tags, arcs)
        ]
