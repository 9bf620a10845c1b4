"""Text tokenization for the lexical retrieval route.

Pipeline: lowercase, split on non-alphanumeric runs, drop tokens shorter
than two characters, drop stopwords, then (optionally) Porter-stem what is
left.  The stemmer is the classic suffix-stripping algorithm in its widely
deployed form (including the bli/logi adjustments of the reference C
implementation), written here because no stemming package is available on
the package mirror.
"""

from __future__ import annotations

import re
from importlib import resources

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")

_VOWELS = "aeiou"


def _load_stopwords() -> frozenset[str]:
    text = resources.files("graphrec.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


DEFAULT_STOPWORDS = _load_stopwords()


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant alternations ([C](VC)^m[V])."""
    i, n, length = 0, 0, len(stem)
    while i < length and _is_cons(stem, i):
        i += 1
    while i < length:
        while i < length and not _is_cons(stem, i):
            i += 1
        if i >= length:
            break
        n += 1
        while i < length and _is_cons(stem, i):
            i += 1
    return n


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_cons(word, len(word) - 1)


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if not (_is_cons(word, len(word) - 3) and not _is_cons(word, len(word) - 2)
            and _is_cons(word, len(word) - 1)):
        return False
    return word[-1] not in "wxy"


# (suffix, replacement) rule tables; within a table the first textual match
# wins and the step ends, whether or not the measure condition then holds.
_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("bli", "ble"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _step1ab(b: str) -> str:
    if b.endswith("sses"):
        b = b[:-2]
    elif b.endswith("ies"):
        b = b[:-2]
    elif b.endswith("ss"):
        pass
    elif b.endswith("s"):
        b = b[:-1]

    if b.endswith("eed"):
        if _measure(b[:-3]) > 0:
            b = b[:-1]
    elif b.endswith("ed") and _has_vowel(b[:-2]):
        b = _restore_e(b[:-2])
    elif b.endswith("ing") and _has_vowel(b[:-3]):
        b = _restore_e(b[:-3])
    return b


def _restore_e(b: str) -> str:
    """After -ed/-ing removal: rebuild a trailing e or undo doubling."""
    if b.endswith(("at", "bl", "iz")):
        return b + "e"
    if _ends_double_cons(b) and b[-1] not in "lsz":
        return b[:-1]
    if _measure(b) == 1 and _ends_cvc(b):
        return b + "e"
    return b


def porter_stem(word: str) -> str:
    """Stem one lowercase token."""
    if len(word) <= 2:
        return word
    b = _step1ab(word)

    if b.endswith("y") and _has_vowel(b[:-1]):
        b = b[:-1] + "i"

    for suffix, replacement in _STEP2:
        if b.endswith(suffix):
            if _measure(b[: -len(suffix)]) > 0:
                b = b[: -len(suffix)] + replacement
            break

    for suffix, replacement in _STEP3:
        if b.endswith(suffix):
            if _measure(b[: -len(suffix)]) > 0:
                b = b[: -len(suffix)] + replacement
            break

    for suffix in _STEP4:
        if b.endswith(suffix):
            stem = b[: -len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                break
            if _measure(stem) > 1:
                b = stem
            break

    if b.endswith("e"):
        stem = b[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            b = stem

    if _measure(b) > 1 and _ends_double_cons(b) and b.endswith("l"):
        b = b[:-1]
    return b


def tokenize(text: str, *, stemming: bool = False,
             stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> list[str]:
    """Token stream for indexing and querying; both sides must share settings."""
    tokens = []
    for token in _TOKEN_SPLIT.split(text.lower()):
        if len(token) < 2 or token in stopwords:
            continue
        if stemming:
            token = porter_stem(token)
        tokens.append(token)
    return tokens
