import json

import pytest

from papersum.detect import (Detection, DetectionError, detect_heuristic,
                             detections_to_dict, load_detections,
                             select_figures_tables, select_first_page_fields)
from papersum.geometry import Rect
from papersum.ir import DocumentIR, ImageRegion, Page, TextBox, load_ir


def unit_ir(n_pages=1, width=612.0, height=792.0):
    return DocumentIR("d", tuple(Page(width, height) for _ in range(n_pages)))


def det(klass, x0, y0, x1, y1, conf, page=0):
    return Detection(klass, Rect(x0, y0, x1, y1, page), conf)


class TestLoadDetections:
    def test_normalized_scaling(self):
        doc = {"pages": [{"coord_space": "normalized", "items": [
            {"class": "title", "bbox": [0.1, 0.1, 0.5, 0.2], "confidence": 0.9}]}]}
        (d,) = load_detections(json.dumps(doc), unit_ir())
        assert (d.rect.x0, d.rect.y0, d.rect.x1, d.rect.y1) == \
            pytest.approx((61.2, 79.2, 306.0, 158.4))

    def test_pixel_scaling(self):
        doc = {"pages": [{"coord_space": "pixel", "render_size": [1224, 1584],
                          "items": [{"class": "figure",
                                     "bbox": [122, 158, 612, 317],
                                     "confidence": 0.8}]}]}
        (d,) = load_detections(json.dumps(doc), unit_ir())
        assert (d.rect.x0, d.rect.y0, d.rect.x1, d.rect.y1) == \
            pytest.approx((61, 79, 306, 158.5))

    def test_unknown_class(self):
        doc = {"pages": [{"items": [{"class": "paragraph",
                                     "bbox": [0, 0, 1, 1]}]}]}
        with pytest.raises(DetectionError, match="unknown class"):
            load_detections(json.dumps(doc), unit_ir())

    def test_pixel_without_render_size(self):
        doc = {"pages": [{"coord_space": "pixel", "items": [
            {"class": "title", "bbox": [0, 0, 10, 10]}]}]}
        with pytest.raises(DetectionError, match="render_size"):
            load_detections(json.dumps(doc), unit_ir())

    def test_out_of_page_clamped(self):
        doc = {"pages": [{"items": [
            {"class": "title", "bbox": [-0.5, 0.0, 1.5, 0.5]}]}]}
        (d,) = load_detections(json.dumps(doc), unit_ir())
        assert d.rect.x0 == 0.0 and d.rect.x1 == 612.0

    def test_round_trip_normalized(self):
        doc = {"pages": [{"coord_space": "normalized", "items": [
            {"class": "abstract", "bbox": [0.125, 0.25, 0.5, 0.375],
             "confidence": 0.75}]}]}
        ir = unit_ir()
        dets = load_detections(json.dumps(doc), ir)
        again = load_detections(detections_to_dict(dets, ir), ir)
        for a, b in zip(dets, again):
            assert abs(a.rect.x0 - b.rect.x0) < 1e-6
            assert abs(a.rect.y1 - b.rect.y1) < 1e-6
            assert a.confidence == b.confidence


class TestDetectHeuristic:
    def test_title_from_max_font(self):
        boxes = (
            TextBox(Rect(100, 50, 400, 75), "A Title", 20.0, 0),
            TextBox(Rect(100, 200, 500, 280), "body text here", 9.0, 1),
        )
        ir = DocumentIR("d", (Page(612.0, 792.0, boxes, ()),))
        dets = detect_heuristic(ir)
        titles = [d for d in dets if d.klass == "title"]
        assert len(titles) == 1
        assert titles[0].rect == Rect(100, 50, 400, 75)

    def test_abstract_block_bounded_by_heading(self):
        boxes = (
            TextBox(Rect(100, 100, 200, 112), "Abstract", 10.0, 0),
            TextBox(Rect(100, 120, 500, 140), "First abstract line.", 9.0, 1),
            TextBox(Rect(100, 145, 500, 165), "Second abstract line.", 9.0, 2),
            TextBox(Rect(100, 180, 250, 192), "1. Introduction", 10.0, 3),
        )
        ir = DocumentIR("d", (Page(612.0, 792.0, boxes, ()),))
        (abstract,) = [d for d in detect_heuristic(ir) if d.klass == "abstract"]
        assert abstract.rect == Rect(100, 120, 500, 165)

    def test_no_image_regions_no_figures(self):
        ir = DocumentIR("d", (Page(612.0, 792.0),))
        assert [d for d in detect_heuristic(ir) if d.klass == "figure"] == []

    def test_figures_from_image_regions(self):
        regions = (ImageRegion(Rect(10, 10, 100, 100), "raster"),)
        ir = DocumentIR("d", (Page(612.0, 792.0, (), regions),))
        figs = [d for d in detect_heuristic(ir) if d.klass == "figure"]
        assert len(figs) == 1 and figs[0].source == "heuristic"

    def test_no_tables_produced(self, e2e_ir):
        assert all(d.klass != "table" for d in detect_heuristic(e2e_ir))

    def test_e2e_fixture_fields(self, e2e_ir):
        dets = detect_heuristic(e2e_ir)
        fields = select_first_page_fields(dets)
        assert fields.title is not None and fields.title.rect.y0 == 50.0
        assert fields.author is not None and fields.author.rect.y0 == 90.0
        assert fields.abstract is not None
        assert fields.abstract.rect == Rect(100.0, 140.0, 512.0, 200.0)


class TestSelectFirstPageFields:
    def test_highest_confidence_wins(self):
        dets = [det("title", 0, 0, 10, 10, 0.7), det("title", 0, 50, 10, 60, 0.9)]
        assert select_first_page_fields(dets).title.confidence == 0.9

    def test_absent_field(self):
        assert select_first_page_fields([det("title", 0, 0, 1, 1, 0.5)]).author is None

    def test_tie_breaks_top_left(self):
        dets = [det("title", 0, 90, 10, 100, 0.8), det("title", 0, 50, 10, 60, 0.8)]
        assert select_first_page_fields(dets).title.rect.y0 == 50

    def test_non_first_page_ignored(self):
        dets = [det("abstract", 0, 0, 10, 10, 0.9, page=1)]
        assert select_first_page_fields(dets).abstract is None

    def test_confidence_scaling_invariance(self):
        dets = [det("title", 0, 0, 10, 10, 0.8), det("title", 0, 50, 10, 60, 0.4),
                det("author", 0, 70, 10, 80, 0.6)]
        scaled = [Detection(d.klass, d.rect, d.confidence / 2, d.source)
                  for d in dets]
        a, b = select_first_page_fields(dets), select_first_page_fields(scaled)
        assert a.title.rect == b.title.rect and a.author.rect == b.author.rect


class TestSelectFiguresTables:
    def test_zero_threshold_keeps_all(self):
        dets = [det("figure", 0, 0, 1, 1, 0.1), det("table", 0, 2, 1, 3, 0.2),
                det("title", 0, 4, 1, 5, 0.9)]
        got = select_figures_tables(dets, 0.0)
        assert [d.klass for d in got] == ["figure", "table"]

    def test_threshold_above_all_empty(self):
        dets = [det("figure", 0, 0, 1, 1, 0.9)]
        assert select_figures_tables(dets, 1.0) == []

    def test_filter_by_confidence(self):
        dets = [det("figure", 0, 0, 1, 1, 0.9), det("figure", 0, 2, 1, 3, 0.4)]
        got = select_figures_tables(dets, 0.5)
        assert len(got) == 1 and got[0].confidence == 0.9

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            select_figures_tables([], 1.5)
