"""Canonical intermediate representation (IR) of a document.

The IR is a first-class, versioned JSON format so that the whole pipeline
can be exercised on fixtures without any PDF in sight. Units are PDF points,
origin top-left, y-down (see geometry.py). Serialization is canonical:
sorted keys, floats rendered with exactly 3 decimal places, so golden-file
comparisons are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import GeometryError, Rect
from .text import normalize

IR_VERSION = 1

IMAGE_KINDS = ("raster", "vector-group")


class IRError(ValueError):
    """IR schema violation; message names the failing field."""


@dataclass(frozen=True)
class TextBox:
    """One positioned text fragment embedded in the page content."""

    rect: Rect
    text: str
    font_size: float = 0.0  # 0 = unknown
    order: int = 0

    @property
    def key(self) -> tuple[int, int]:
        """Stable identity of this box within its document."""
        return (self.rect.page_index, self.order)


@dataclass(frozen=True)
class ImageRegion:
    rect: Rect
    kind: str = "raster"


@dataclass(frozen=True)
class Page:
    width: float
    height: float
    text_boxes: tuple[TextBox, ...] = ()
    image_regions: tuple[ImageRegion, ...] = ()


@dataclass(frozen=True)
class DocumentIR:
    doc_id: str
    pages: tuple[Page, ...]
    warnings: tuple[str, ...] = ()

    def page_boxes(self, page_index: int) -> tuple[TextBox, ...]:
        return self.pages[page_index].text_boxes

    def all_boxes(self):
        for page in self.pages:
            yield from page.text_boxes


@dataclass(frozen=True)
class Sentence:
    """A reading-order sentence assembled from one or more text boxes."""

    text: str
    page_index: int
    order: int
    source_boxes: tuple[TextBox, ...]


# ---------------------------------------------------------------------------
# Canonical JSON
# ---------------------------------------------------------------------------


def _canon(value, out: list[str]) -> None:
    if isinstance(value, dict):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if i:
                out.append(",")
            _canon(key, out)
            out.append(":")
            _canon(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _canon(item, out)
        out.append("]")
    elif isinstance(value, str):
        out.append('"' + value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t") + '"')
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(f"{value:.3f}")
    elif value is None:
        out.append("null")
    else:
        raise TypeError(f"not canonically serializable: {type(value)!r}")


def canonical_json(value) -> bytes:
    """Deterministic JSON encoding: sorted keys, 3-decimal floats, UTF-8."""
    out: list[str] = []
    _canon(value, out)
    return "".join(out).encode("utf-8")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _rect_to_list(rect: Rect) -> list[float]:
    return [float(rect.x0), float(rect.y0), float(rect.x1), float(rect.y1)]


def ir_to_dict(ir: DocumentIR) -> dict:
    doc: dict = {
        "ir_version": IR_VERSION,
        "doc_id": ir.doc_id,
        "pages": [
            {
                "width": float(page.width),
                "height": float(page.height),
                "text_boxes": [
                    {
                        "rect": _rect_to_list(tb.rect),
                        "text": tb.text,
                        "font_size": float(tb.font_size),
                        "order": tb.order,
                    }
                    for tb in page.text_boxes
                ],
                "image_regions": [
                    {"rect": _rect_to_list(reg.rect), "kind": reg.kind}
                    for reg in page.image_regions
                ],
            }
            for page in ir.pages
        ],
    }
    if ir.warnings:
        doc["warnings"] = list(ir.warnings)
    return doc


def save_ir(ir: DocumentIR) -> bytes:
    return canonical_json(ir_to_dict(ir))


def _round3(v: float) -> float:
    return round(float(v), 3)


def _clamp_rect(where: str, raw, page_index: int, width: float, height: float) -> Rect:
    if (not isinstance(raw, (list, tuple))) or len(raw) != 4:
        raise IRError(f"{where}.rect: expected [x0, y0, x1, y1]")
    try:
        x0, y0, x1, y1 = (float(v) for v in raw)
    except (TypeError, ValueError):
        raise IRError(f"{where}.rect: coordinates must be numbers") from None
    if x1 < x0 or y1 < y0:
        raise IRError(f"{where}.rect: requires x0 <= x1 and y0 <= y1, got {raw}")
    x0 = min(max(x0, 0.0), width)
    x1 = min(max(x1, 0.0), width)
    y0 = min(max(y0, 0.0), height)
    y1 = min(max(y1, 0.0), height)
    return Rect(_round3(x0), _round3(y0), _round3(x1), _round3(y1), page_index)


def load_ir(data: bytes | str | dict) -> DocumentIR:
    """Parse and validate IR JSON. Rects are clamped to page bounds."""
    import json

    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise IRError(f"invalid JSON: {exc}") from None
    else:
        doc = data
    if not isinstance(doc, dict):
        raise IRError("document: expected a JSON object")
    if doc.get("ir_version") != IR_VERSION:
        raise IRError(f"ir_version: expected {IR_VERSION}, got {doc.get('ir_version')!r}")
    doc_id = doc.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise IRError("doc_id: required non-empty string")
    raw_pages = doc.get("pages")
    if not isinstance(raw_pages, list) or not raw_pages:
        raise IRError("pages: required non-empty list")

    pages = []
    for p_idx, raw_page in enumerate(raw_pages):
        where = f"pages[{p_idx}]"
        if not isinstance(raw_page, dict):
            raise IRError(f"{where}: expected object")
        try:
            width = float(raw_page["width"])
            height = float(raw_page["height"])
        except (KeyError, TypeError, ValueError):
            raise IRError(f"{where}.width/height: required positive numbers") from None
        if width <= 0 or height <= 0:
            raise IRError(f"{where}.width/height: must be positive")

        boxes = []
        seen_orders: set[int] = set()
        for b_idx, raw_box in enumerate(raw_page.get("text_boxes", [])):
            bw = f"{where}.text_boxes[{b_idx}]"
            if not isinstance(raw_box, dict):
                raise IRError(f"{bw}: expected object")
            rect = _clamp_rect(bw, raw_box.get("rect"), p_idx, width, height)
            text = raw_box.get("text")
            if not isinstance(text, str) or not text.strip():
                raise IRError(f"{bw}.text: required non-empty string")
            order = raw_box.get("order", b_idx)
            if not isinstance(order, int) or order in seen_orders:
                raise IRError(f"{bw}.order: must be an integer, unique per page")
            seen_orders.add(order)
            font_size = raw_box.get("font_size", 0.0)
            try:
                font_size = float(font_size)
            except (TypeError, ValueError):
                raise IRError(f"{bw}.font_size: must be a number") from None
            boxes.append(TextBox(rect, normalize(text), _round3(font_size), order))
        boxes.sort(key=lambda tb: tb.order)

        regions = []
        for r_idx, raw_reg in enumerate(raw_page.get("image_regions", [])):
            rw = f"{where}.image_regions[{r_idx}]"
            if not isinstance(raw_reg, dict):
                raise IRError(f"{rw}: expected object")
            rect = _clamp_rect(rw, raw_reg.get("rect"), p_idx, width, height)
            if rect.area <= 0:
                raise IRError(f"{rw}.rect: image region must have positive area")
            kind = raw_reg.get("kind", "raster")
            if kind not in IMAGE_KINDS:
                raise IRError(f"{rw}.kind: expected one of {IMAGE_KINDS}, got {kind!r}")
            regions.append(ImageRegion(rect, kind))

        pages.append(Page(_round3(width), _round3(height), tuple(boxes), tuple(regions)))

    warnings = doc.get("warnings", [])
    if not isinstance(warnings, list) or any(not isinstance(w, str) for w in warnings):
        raise IRError("warnings: expected list of strings")
    return DocumentIR(doc_id, tuple(pages), tuple(warnings))
