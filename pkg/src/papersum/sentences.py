"""Sentence segmentation over the reading-order text box stream."""

from __future__ import annotations

import re

from .ir import DocumentIR, Sentence, TextBox
from .text import normalize

# Trailing strings (case-insensitive) after which a '.' never ends a sentence.
ABBREVIATIONS = (
    "fig.", "figs.", "eq.", "eqs.", "tab.", "sec.", "et al.", "al.",
    "e.g.", "i.e.", "cf.", "vs.", "no.", "resp.", "approx.", "ref.",
    "dr.", "prof.", "mr.", "ms.",
)

_TERMINATORS = ".!?"
_NUM_BEFORE_DOT = re.compile(r"(?:^|[\s(])\d+$")


def _is_abbreviation(prefix: str) -> bool:
    low = prefix.lower()
    return any(low.endswith(abbr) for abbr in ABBREVIATIONS)


def _assemble(boxes: list[TextBox]) -> tuple[str, list[tuple[int, int, TextBox]]]:
    """Join box texts with de-hyphenation, tracking per-box character spans."""
    parts: list[str] = []
    spans: list[tuple[int, int, TextBox]] = []
    length = 0
    box_ends: set[int] = set()
    for box in boxes:
        frag = normalize(box.text)
        if not frag:
            continue
        if length and parts[-1].endswith("-") and frag[:1].islower():
            # de-hyphenate: drop the trailing '-' and join without a space
            parts[-1] = parts[-1][:-1]
            length -= 1
            prev_start, _, prev_box = spans[-1]
            spans[-1] = (prev_start, length, prev_box)
            box_ends.discard(length + 1)
        elif length:
            parts.append(" ")
            length += 1
        start = length
        parts.append(frag)
        length += len(frag)
        spans.append((start, length, box))
        box_ends.add(length)
    return "".join(parts), spans


def _split_points(text: str, box_ends: set[int]) -> list[int]:
    """Indices one past a sentence terminator where a new sentence starts."""
    points = []
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        end = i + 1
        if end >= len(text):
            continue
        prefix = text[:end]
        if ch == ".":
            if _is_abbreviation(prefix):
                continue
            # numbered headings / list markers: "1. Introduction"
            if _NUM_BEFORE_DOT.search(text[:i]):
                continue
        # boundary needs whitespace then an uppercase start, or a box edge
        j = end
        while j < len(text) and text[j] == " ":
            j += 1
        if j == end and end not in box_ends:
            continue  # terminator glued to following text ("90.5")
        if j < len(text) and (text[j].isupper() or end in box_ends):
            points.append(end)
    return points


def extract_sentences(ir: DocumentIR) -> list[Sentence]:
    """All sentences of the document in reading order.

    Box texts are concatenated page by page (boxes are already stored in
    reading order), de-hyphenated across fragment breaks, and split on
    sentence terminators guarded by an abbreviation list. A trailing
    fragment without a terminator still yields a sentence.
    """
    sentences: list[Sentence] = []
    order = 0

    all_boxes = [box for page in ir.pages for box in page.text_boxes]
    text, spans = _assemble(all_boxes)
    if not text:
        return []
    box_ends = {end for _, end, _ in spans}

    starts = [0] + _split_points(text, box_ends)
    bounds = list(zip(starts, starts[1:] + [len(text)]))
    for s, e in bounds:
        chunk = text[s:e].strip()
        if not chunk:
            continue
        sources = tuple(
            box for b_start, b_end, box in spans if b_start < e and b_end > s
        )
        page_index = sources[0].rect.page_index if sources else 0
        sentences.append(Sentence(chunk, page_index, order, sources))
        order += 1
    return sentences
