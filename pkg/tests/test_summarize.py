import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_sentence_score

from papersum.geometry import Rect
from papersum.ir import Sentence, TextBox
from papersum.summarize import (FrequencyTable, SummarizerParams,
                                extract_summary, sentence_score,
                                significant_words, word_frequencies)


def sent(text, order=0):
    box = TextBox(Rect(0, 0, 10, 10), text, 10.0, order)
    return Sentence(text, 0, order, (box,))


def sents(*texts):
    return [sent(t, i) for i, t in enumerate(texts)]


class TestWordFrequencies:
    def test_folded_counts(self):
        freq = word_frequencies(sents("cat sat", "cat ran"))
        assert freq.counts == {"cat": 2, "sat": 1, "ran": 1}
        assert freq.total == 4

    def test_preserved_case(self):
        freq = word_frequencies(sents("The cat", "the cat"), case_policy="preserve")
        assert freq.counts == {"The": 1, "the": 1, "cat": 2}

    def test_empty_corpus(self):
        freq = word_frequencies([])
        assert freq.counts == {} and freq.total == 0

    def test_stopword_filtering(self):
        freq = word_frequencies(sents("the cat and the hat"), apply_stopwords=True)
        assert "the" not in freq.counts and freq.counts["cat"] == 1

    def test_adding_sentence_never_decreases_counts(self):
        base = word_frequencies(sents("alpha beta", "beta gamma")).counts
        more = word_frequencies(sents("alpha beta", "beta gamma", "delta beta")).counts
        assert all(more[tok] >= count for tok, count in base.items())


class TestSignificantWords:
    def test_threshold(self):
        freq = FrequencyTable({"cat": 2, "sat": 1}, 3, "fold", False)
        assert significant_words(freq, 2, set()) == {"cat"}

    def test_all_singletons(self):
        freq = FrequencyTable({"a1": 1, "b2": 1}, 2, "fold", False)
        assert significant_words(freq, 2, set()) == set()

    def test_stopword_excluded(self):
        freq = FrequencyTable({"the": 9, "cat": 3}, 12, "fold", False)
        assert significant_words(freq, 2, {"the"}) == {"cat"}

    def test_short_tokens_excluded(self):
        freq = FrequencyTable({"x": 5, "ox": 5}, 10, "fold", False)
        assert significant_words(freq, 2, set()) == {"ox"}


def score_pattern(pattern, max_gap=4):
    """Score a sentence made of S (significant) / X (filler) marker words."""
    words = ["sig" if c == "S" else f"x{i}" for i, c in enumerate(pattern)]
    return sentence_score(sent(" ".join(words)), {"sig"}, max_gap)


class TestSentenceScore:
    def test_sxs_hand_trace(self):
        assert score_pattern("SXS").score == pytest.approx(4 / 3)

    def test_long_hand_trace(self):
        # gap of exactly 4 keeps the cluster open: one span of 9 with 4 sig
        assert score_pattern("SXSSXXXXS").score == pytest.approx(16 / 9)

    def test_no_significant_words(self):
        assert score_pattern("XXXX").score == 0.0

    def test_single_significant_token_scores_one(self):
        assert score_pattern("S").score == 1.0

    def test_gap_exceeded_splits_clusters(self):
        # 5 fillers > max_gap 4: two separate singleton clusters
        got = score_pattern("SXXXXXS")
        assert got.score == 1.0

    def test_cluster_span_recorded(self):
        got = score_pattern("XSXSX")
        assert got.cluster_span == (1, 4)

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.booleans(), min_size=0, max_size=12),
           st.integers(min_value=0, max_value=5))
    def test_matches_brute_force_oracle(self, flags, max_gap):
        pattern = "".join("S" if f else "X" for f in flags)
        got = score_pattern(pattern, max_gap) if pattern else None
        expected = brute_force_sentence_score(flags, max_gap)
        if pattern:
            assert got.score == expected


class TestExtractSummary:
    def test_repeated_word_sentence_wins(self):
        corpus = sents(
            "The robot walked around the garden slowly today.",
            "Sensors sensors everywhere and sensors again sensors.",
            "Nothing notable happened afterwards anywhere.",
        )
        top = extract_summary(corpus, n=1, params=SummarizerParams(min_freq=2))
        assert top[0].sentence.text.startswith("Sensors")

    def test_n_larger_than_corpus(self):
        corpus = sents("One two.", "Three four.")
        assert len(extract_summary(corpus, n=10)) == 2

    def test_tie_breaks_to_earlier_sentence(self):
        corpus = sents("alpha beta alpha beta.", "beta alpha beta alpha.")
        top = extract_summary(corpus, n=1, params=SummarizerParams(min_freq=2))
        assert top[0].sentence.order == 0

    def test_output_in_document_order(self):
        corpus = sents(
            "noise word salad here.",
            "token token token token.",
            "plain filler text again.",
            "token token again token.",
        )
        top = extract_summary(corpus, n=2, params=SummarizerParams(min_freq=2))
        orders = [sc.sentence.order for sc in top]
        assert orders == sorted(orders)

    def test_deterministic(self):
        corpus = sents("gamma delta gamma.", "delta gamma delta.", "epsilon zeta.")
        a = extract_summary(corpus, n=2)
        b = extract_summary(corpus, n=2)
        assert [(s.sentence.text, s.score) for s in a] == \
               [(s.sentence.text, s.score) for s in b]

    def test_corpus_scaled_min_freq_floor(self):
        assert SummarizerParams().resolved_min_freq(100) == 2
        assert SummarizerParams().resolved_min_freq(10_000) == 10
        assert SummarizerParams(min_freq=5).resolved_min_freq(10_000) == 5
