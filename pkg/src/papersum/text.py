"""Shared text utilities: tokenization, stopwords, de-hyphenation, joining."""

from __future__ import annotations

import re
import unicodedata
from functools import lru_cache
from importlib import resources

_TOKEN_RE = re.compile(r"[0-9A-Za-z]+")
_WS_RE = re.compile(r"\s+")


def normalize(text: str) -> str:
    """NFC-normalize and collapse internal whitespace."""
    return _WS_RE.sub(" ", unicodedata.normalize("NFC", text)).strip()


def tokenize(text: str, fold_case: bool = True) -> list[str]:
    """Maximal alphanumeric runs, optionally lowercased."""
    tokens = _TOKEN_RE.findall(text)
    if fold_case:
        tokens = [t.lower() for t in tokens]
    return tokens


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return frozenset(load_stopwords_text(
        resources.files("papersum.data").joinpath("stopwords.txt").read_text("utf-8")
    ))


def load_stopwords_text(content: str) -> set[str]:
    """Parse a stopword list: one token per line, '#' starts a comment."""
    words = set()
    for line in content.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return words


def load_stopwords_file(path) -> set[str]:
    with open(path, encoding="utf-8") as fh:
        return load_stopwords_text(fh.read())


def join_fragments(fragments: list[str]) -> str:
    """Join text fragments with single spaces, de-hyphenating across breaks.

    De-hyphenation is conservative: only when a fragment ends with '-' and
    the next one starts with a lowercase letter (keeps hyphenated names).
    """
    out = ""
    for frag in fragments:
        frag = normalize(frag)
        if not frag:
            continue
        if not out:
            out = frag
        elif out.endswith("-") and frag[:1].islower():
            out = out[:-1] + frag
        else:
            out = out + " " + frag
    return out
