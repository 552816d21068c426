"""Evaluation protocol: per-class IoU, extraction outcomes, word-frequency tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .detect import CLASSES, Detection, DetectionError
from .geometry import Rect, iou
from .render import SummaryPage
from .text import tokenize

FIELDS = ("abstract", "author", "title")
OUTCOMES = ("complete", "partial", "fail")


@dataclass(frozen=True)
class Annotation:
    doc_id: str
    klass: str
    rect: Rect

    def __post_init__(self) -> None:
        if self.klass not in CLASSES:
            raise DetectionError(f"unknown class {self.klass!r}")


@dataclass(frozen=True)
class EvalReport:
    per_class_iou: dict[str, float]
    overall_iou: float
    counts: dict[str, dict[str, int]]  # class -> matched/unmatched_gt/unmatched_pred


@dataclass
class ExtractionReport:
    per_field: dict[str, dict[str, int]] = field(
        default_factory=lambda: {f: {o: 0 for o in OUTCOMES} for f in FIELDS}
    )


def _greedy_iou_values(preds: list[Rect], gts: list[Rect]) -> tuple[list[float], int]:
    """GT-anchored IoU values after greedy best-first matching.

    Returns (one value per GT, number of unmatched preds). Unmatched GT
    contributes 0.
    """
    pairs = sorted(
        ((iou(p, g), pi, gi)
         for pi, p in enumerate(preds)
         for gi, g in enumerate(gts)
         if p.page_index == g.page_index),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    used_p: set[int] = set()
    used_g: set[int] = set()
    values = {}
    for value, pi, gi in pairs:
        if pi in used_p or gi in used_g:
            continue
        used_p.add(pi)
        used_g.add(gi)
        values[gi] = value
    gt_values = [values.get(gi, 0.0) for gi in range(len(gts))]
    return gt_values, len(preds) - len(used_p)


def evaluate_detections(preds: list[Detection],
                        gts: list[Annotation]) -> EvalReport:
    """Greedy per-class matching; class IoU is the mean over GT-anchored values."""
    per_class_values: dict[str, list[float]] = {k: [] for k in CLASSES}
    counts = {k: {"matched": 0, "unmatched_gt": 0, "unmatched_pred": 0}
              for k in CLASSES}
    for klass in CLASSES:
        k_preds = [p.rect for p in preds if p.klass == klass]
        k_gts = [g.rect for g in gts if g.klass == klass]
        values, unmatched_pred = _greedy_iou_values(k_preds, k_gts)
        per_class_values[klass] = values
        matched = min(len(k_preds) - unmatched_pred, len(k_gts))
        counts[klass]["matched"] = matched
        counts[klass]["unmatched_gt"] = len(k_gts) - matched
        counts[klass]["unmatched_pred"] = unmatched_pred

    per_class_iou = {
        klass: (sum(vals) / len(vals)) if vals else 0.0
        for klass, vals in per_class_values.items()
    }
    pooled = [v for vals in per_class_values.values() for v in vals]
    overall = sum(pooled) / len(pooled) if pooled else 0.0
    return EvalReport(per_class_iou, overall, counts)


def tabulate_extraction(results: list[tuple[str, str, str]]) -> ExtractionReport:
    """Count (doc_id, field, outcome) triples into the per-field table."""
    report = ExtractionReport()
    for _doc_id, field_name, outcome in results:
        if field_name not in FIELDS:
            raise ValueError(f"unknown field {field_name!r}")
        if outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {outcome!r}")
        report.per_field[field_name][outcome] += 1
    return report


def corpus_word_frequency(summaries: list[SummaryPage],
                          k: int = 20) -> list[tuple[str, int]]:
    """Top-k word counts over all summary sentences.

    Case-preserving, no stopword removal (reporting fidelity beats quality
    here). Ties are ordered by token to keep reports byte-stable.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    counts: dict[str, int] = {}
    for summary in summaries:
        for sentence in summary.sentences:
            for tok in tokenize(sentence, fold_case=False):
                counts[tok] = counts.get(tok, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


# ---------------------------------------------------------------------------
# Annotation file format (detections schema minus confidence)
# ---------------------------------------------------------------------------

def load_annotations(data: bytes | str | dict, doc_id: str,
                     page_sizes: list[tuple[float, float]]) -> list[Annotation]:
    """Parse annotation JSON: normalized bboxes per page, no confidence."""
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DetectionError(f"invalid JSON: {exc}") from None
    else:
        doc = data
    if not isinstance(doc, dict) or not isinstance(doc.get("pages"), list):
        raise DetectionError("annotations: expected object with a 'pages' list")
    out = []
    for p_entry, raw_page in enumerate(doc["pages"]):
        page_index = raw_page.get("page_index", p_entry)
        if not isinstance(page_index, int) or not 0 <= page_index < len(page_sizes):
            raise DetectionError(f"pages[{p_entry}].page_index out of range")
        width, height = page_sizes[page_index]
        for i, item in enumerate(raw_page.get("items", [])):
            klass = item.get("class")
            if klass not in CLASSES:
                raise DetectionError(
                    f"pages[{p_entry}].items[{i}].class: unknown class {klass!r}"
                )
            bbox = item.get("bbox")
            if (not isinstance(bbox, (list, tuple))) or len(bbox) != 4:
                raise DetectionError(
                    f"pages[{p_entry}].items[{i}].bbox: expected [x0, y0, x1, y1]"
                )
            x0, y0, x1, y1 = (float(v) for v in bbox)
            out.append(Annotation(doc_id, klass,
                                  Rect(x0 * width, y0 * height,
                                       x1 * width, y1 * height, page_index)))
    return out


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

def eval_report_to_dict(report: EvalReport) -> dict:
    return {
        "per_class_iou": {k: report.per_class_iou[k] for k in CLASSES},
        "overall_iou": report.overall_iou,
        "counts": {k: dict(report.counts[k]) for k in CLASSES},
    }


def eval_report_text(report: EvalReport) -> str:
    lines = [f"{'class':<10} {'IoU':>8} {'matched':>8} {'miss_gt':>8} {'extra':>8}"]
    for klass in CLASSES:
        c = report.counts[klass]
        lines.append(
            f"{klass:<10} {report.per_class_iou[klass]:>8.4f} "
            f"{c['matched']:>8} {c['unmatched_gt']:>8} {c['unmatched_pred']:>8}"
        )
    lines.append(f"{'overall':<10} {report.overall_iou:>8.4f}")
    return "\n".join(lines) + "\n"


def extraction_report_to_dict(report: ExtractionReport) -> dict:
    return {f: dict(report.per_field[f]) for f in FIELDS}


def extraction_report_text(report: ExtractionReport) -> str:
    lines = [f"{'field':<10} {'complete':>9} {'partial':>9} {'fail':>6}"]
    for field_name in FIELDS:
        row = report.per_field[field_name]
        lines.append(f"{field_name:<10} {row['complete']:>9} "
                     f"{row['partial']:>9} {row['fail']:>6}")
    return "\n".join(lines) + "\n"
