import pytest

from papersum.detect import Detection
from papersum.evaluate import (Annotation, corpus_word_frequency,
                               eval_report_text, eval_report_to_dict,
                               evaluate_detections, extraction_report_text,
                               load_annotations, tabulate_extraction)
from papersum.geometry import Rect
from papersum.render import SummaryPage


def pred(klass, x0, y0, x1, y1, conf=0.9, page=0):
    return Detection(klass, Rect(x0, y0, x1, y1, page), conf)


def gt(klass, x0, y0, x1, y1, page=0):
    return Annotation("doc", klass, Rect(x0, y0, x1, y1, page))


def summary(sentences):
    return SummaryPage("d", "t", "a", "abs", None, tuple(sentences), {})


class TestEvaluateDetections:
    def test_identity_gives_ones(self):
        preds = [pred("title", 0, 0, 10, 10), pred("figure", 0, 20, 10, 30)]
        gts = [gt("title", 0, 0, 10, 10), gt("figure", 0, 20, 10, 30)]
        report = evaluate_detections(preds, gts)
        assert report.per_class_iou["title"] == 1.0
        assert report.per_class_iou["figure"] == 1.0
        assert report.overall_iou == 1.0

    def test_no_preds_gives_zero(self):
        report = evaluate_detections([], [gt("title", 0, 0, 10, 10)])
        assert report.per_class_iou["title"] == 0.0
        assert report.counts["title"]["unmatched_gt"] == 1

    def test_third_iou_composition(self):
        # identical to the geometry half-shift case: IoU = 50/150
        report = evaluate_detections([pred("abstract", 0, 0, 10, 10)],
                                     [gt("abstract", 5, 0, 15, 10)])
        assert report.per_class_iou["abstract"] == pytest.approx(1 / 3)

    def test_permutation_invariant(self):
        preds = [pred("title", 0, 0, 10, 10), pred("title", 20, 0, 30, 10),
                 pred("figure", 0, 50, 20, 70)]
        gts = [gt("title", 1, 0, 11, 10), gt("title", 20, 0, 30, 10),
               gt("figure", 0, 50, 20, 70)]
        a = evaluate_detections(preds, gts)
        b = evaluate_detections(list(reversed(preds)), list(reversed(gts)))
        assert a == b

    def test_adding_matching_pred_never_decreases_iou(self):
        gts = [gt("title", 0, 0, 10, 10), gt("title", 30, 0, 40, 10)]
        preds = [pred("title", 0, 0, 10, 10)]
        before = evaluate_detections(preds, gts).per_class_iou["title"]
        after = evaluate_detections(
            preds + [pred("title", 30, 0, 40, 10)], gts).per_class_iou["title"]
        assert after >= before

    def test_greedy_prefers_best_pair(self):
        gts = [gt("figure", 0, 0, 10, 10)]
        preds = [pred("figure", 5, 0, 15, 10), pred("figure", 0, 0, 10, 10)]
        report = evaluate_detections(preds, gts)
        assert report.per_class_iou["figure"] == 1.0
        assert report.counts["figure"]["unmatched_pred"] == 1

    def test_cross_page_never_matches(self):
        report = evaluate_detections([pred("title", 0, 0, 10, 10, page=1)],
                                     [gt("title", 0, 0, 10, 10, page=0)])
        assert report.per_class_iou["title"] == 0.0


class TestTabulateExtraction:
    def test_all_complete(self):
        triples = [(f"d{i}", "title", "complete") for i in range(3)]
        report = tabulate_extraction(triples)
        assert report.per_field["title"] == {"complete": 3, "partial": 0, "fail": 0}

    def test_mixed_outcomes(self):
        triples = [("a", "abstract", "complete"), ("b", "abstract", "partial"),
                   ("c", "abstract", "fail")]
        report = tabulate_extraction(triples)
        assert report.per_field["abstract"] == {"complete": 1, "partial": 1,
                                                "fail": 1}

    def test_totals_match_input(self):
        triples = [("a", "author", "fail")] * 5
        report = tabulate_extraction(triples)
        assert sum(report.per_field["author"].values()) == 5

    def test_unknown_outcome_rejected(self):
        with pytest.raises(ValueError):
            tabulate_extraction([("a", "title", "almost")])


class TestCorpusWordFrequency:
    def test_direct_count(self):
        pages = [summary(["image and image", "image model"])]
        assert corpus_word_frequency(pages, 2) == [("image", 3), ("and", 1)]

    def test_tie_breaks_lexicographically(self):
        pages = [summary(["beta alpha"])]
        assert corpus_word_frequency(pages, 1) == [("alpha", 1)]

    def test_case_preserved(self):
        pages = [summary(["University of somewhere", "university again"])]
        counts = dict(corpus_word_frequency(pages, 10))
        assert counts["University"] == 1 and counts["university"] == 1

    def test_merge_equals_sum_of_parts(self):
        a, b = summary(["alpha beta alpha"]), summary(["beta gamma"])
        merged = dict(corpus_word_frequency([a, b], 100))
        partial = {}
        for s in (a, b):
            for tok, count in corpus_word_frequency([s], 100):
                partial[tok] = partial.get(tok, 0) + count
        assert merged == partial


class TestAnnotationsAndReports:
    def test_load_annotations_normalized(self):
        doc = {"pages": [{"items": [
            {"class": "title", "bbox": [0.0, 0.0, 0.5, 0.25]}]}]}
        (ann,) = load_annotations(doc, "d", [(612.0, 792.0)])
        assert ann.rect == Rect(0, 0, 306, 198, 0)

    def test_report_text_is_stable(self):
        report = evaluate_detections([pred("title", 0, 0, 10, 10)],
                                     [gt("title", 0, 0, 10, 10)])
        assert eval_report_text(report) == eval_report_text(report)
        assert "overall" in eval_report_text(report)

    def test_report_dict_has_all_classes(self):
        report = evaluate_detections([], [])
        doc = eval_report_to_dict(report)
        assert set(doc["per_class_iou"]) == {"abstract", "author", "figure",
                                             "table", "title"}

    def test_extraction_report_text(self):
        text = extraction_report_text(tabulate_extraction(
            [("a", "title", "complete")]))
        assert "title" in text and "complete" in text
