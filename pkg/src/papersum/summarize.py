"""Frequency-based important-sentence extraction (Luhn-style significance factor).

A sentence's score is the best score over its significance clusters: maximal
token spans that start and end at a significant word, with at most `max_gap`
insignificant tokens between consecutive significant ones. A cluster with k
significant words over a span of length L scores k^2 / L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ir import Sentence
from .text import default_stopwords, tokenize

DEFAULT_MAX_GAP = 4
DEFAULT_NUM_SENTENCES = 3
MIN_TOKEN_LEN = 2

# min_freq default scales with corpus size but never drops below 2
MIN_FREQ_FLOOR = 2
MIN_FREQ_RATE = 0.001


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, int]
    total: int
    case_policy: str  # fold | preserve
    stopwords_applied: bool


@dataclass(frozen=True)
class ScoredSentence:
    sentence: Sentence
    score: float
    cluster_span: tuple[int, int] | None  # token index range [start, end)


@dataclass(frozen=True)
class SummarizerParams:
    min_freq: int | None = None  # None = corpus-scaled default
    max_gap: int = DEFAULT_MAX_GAP
    num_sentences: int = DEFAULT_NUM_SENTENCES
    stopwords: frozenset[str] = field(default_factory=default_stopwords)

    def resolved_min_freq(self, total_tokens: int) -> int:
        if self.min_freq is not None:
            return self.min_freq
        return max(MIN_FREQ_FLOOR, math.ceil(MIN_FREQ_RATE * total_tokens))


def word_frequencies(sentences: list[Sentence], case_policy: str = "fold",
                     apply_stopwords: bool = False,
                     stopwords: frozenset[str] | set[str] | None = None) -> FrequencyTable:
    """Corpus-wide token counts under the given normalization."""
    if case_policy not in ("fold", "preserve"):
        raise ValueError(f"case_policy must be fold|preserve, got {case_policy!r}")
    if stopwords is None:
        stopwords = default_stopwords()
    counts: dict[str, int] = {}
    total = 0
    for sentence in sentences:
        for tok in tokenize(sentence.text, fold_case=(case_policy == "fold")):
            if apply_stopwords and tok.lower() in stopwords:
                continue
            counts[tok] = counts.get(tok, 0) + 1
            total += 1
    return FrequencyTable(counts, total, case_policy, apply_stopwords)


def significant_words(freq: FrequencyTable, min_freq: int,
                      stopwords: frozenset[str] | set[str] | None = None) -> set[str]:
    """Tokens frequent enough to matter: count >= min_freq, not a stopword,
    at least 2 characters."""
    if min_freq < 1:
        raise ValueError(f"min_freq must be >= 1, got {min_freq}")
    if stopwords is None:
        stopwords = default_stopwords()
    return {
        tok for tok, count in freq.counts.items()
        if count >= min_freq and len(tok) >= MIN_TOKEN_LEN
        and tok.lower() not in stopwords
    }


def _clusters(flags: list[bool], max_gap: int):
    """Maximal significant-word clusters as (start, end, sig_count) spans."""
    sig_positions = [i for i, flag in enumerate(flags) if flag]
    runs: list[list[int]] = []
    for pos in sig_positions:
        if runs and pos - runs[-1][-1] - 1 <= max_gap:
            runs[-1].append(pos)
        else:
            runs.append([pos])
    return [(run[0], run[-1] + 1, len(run)) for run in runs]


def sentence_score(sentence: Sentence, sigwords: set[str],
                   max_gap: int = DEFAULT_MAX_GAP) -> ScoredSentence:
    """Best cluster significance factor for one sentence (0 if none)."""
    if max_gap < 0:
        raise ValueError(f"max_gap must be >= 0, got {max_gap}")
    tokens = tokenize(sentence.text, fold_case=True)
    flags = [tok in sigwords for tok in tokens]
    best_score = 0.0
    best_span: tuple[int, int] | None = None
    for start, end, sig_count in _clusters(flags, max_gap):
        score = sig_count * sig_count / (end - start)
        if score > best_score:
            best_score = score
            best_span = (start, end)
    return ScoredSentence(sentence, best_score, best_span)


def extract_summary(sentences: list[Sentence], n: int | None = None,
                    params: SummarizerParams | None = None) -> list[ScoredSentence]:
    """Top-n sentences by Luhn score, returned in document order.

    Ranking ties break toward the earlier sentence; fewer than n sentences
    means all of them come back.
    """
    params = params or SummarizerParams()
    if n is None:
        n = params.num_sentences
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    freq = word_frequencies(sentences, case_policy="fold", apply_stopwords=True,
                            stopwords=params.stopwords)
    min_freq = params.resolved_min_freq(freq.total)
    sigwords = significant_words(freq, min_freq, params.stopwords)
    scored = [sentence_score(s, sigwords, params.max_gap) for s in sentences]
    ranked = sorted(scored, key=lambda sc: (-sc.score, sc.sentence.order))
    top = ranked[:n]
    top.sort(key=lambda sc: sc.sentence.order)
    return top
