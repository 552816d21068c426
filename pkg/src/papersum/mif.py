"""Most informative figure selection: caption-abstract word overlap."""

from __future__ import annotations

from dataclasses import dataclass

from .detect import Detection
from .match import Caption
from .text import default_stopwords, tokenize

MIN_TOKEN_LEN = 2


@dataclass(frozen=True)
class CaptionedFigure:
    detection: Detection
    caption: Caption | None
    order: int


@dataclass(frozen=True)
class MifResult:
    chosen: CaptionedFigure | None
    scores: tuple[tuple[int, int], ...]  # (figure order, overlap score)


def content_words(text: str, stopwords: frozenset[str] | set[str] | None = None) -> set[str]:
    """Unique lowercase tokens, minus stopwords and tokens shorter than 2 chars."""
    if stopwords is None:
        stopwords = default_stopwords()
    return {
        tok for tok in tokenize(text, fold_case=True)
        if len(tok) >= MIN_TOKEN_LEN and tok not in stopwords
    }


def overlap_score(abstract_text: str, caption_text: str,
                  stopwords: frozenset[str] | set[str] | None = None) -> int:
    """Number of unique content words shared by abstract and caption.

    Set semantics (repetition does not count twice) and no stemming, so
    "figure" and "figures" stay distinct.
    """
    return len(content_words(abstract_text, stopwords)
               & content_words(caption_text, stopwords))


def select_mif(figures: list[CaptionedFigure], abstract_text: str,
               stopwords: frozenset[str] | set[str] | None = None) -> MifResult:
    """Pick the figure whose caption shares the most words with the abstract.

    Captionless figures score 0. Ties (including all-zero) go to the lowest
    document order, so overview figures near the front win by default.
    """
    scores = []
    for fig in figures:
        score = 0
        if fig.caption is not None:
            score = overlap_score(abstract_text, fig.caption.text, stopwords)
        scores.append((fig.order, score))
    scores.sort()
    if not figures:
        return MifResult(None, ())
    best_order = min(scores, key=lambda item: (-item[1], item[0]))[0]
    chosen = next(fig for fig in figures if fig.order == best_order)
    return MifResult(chosen, tuple(scores))
