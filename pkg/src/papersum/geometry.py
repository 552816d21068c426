"""Axis-aligned rectangle primitives and the two overlap ratios used everywhere.

Coordinate convention (shared by every module): PDF points, origin at the
top-left of the page, y grows downward. Areas are continuous (points^2),
not pixel counts, so results are render-resolution independent.
"""

from __future__ import annotations

from dataclasses import dataclass


class GeometryError(ValueError):
    """Invalid rectangle or an operation on rects from different pages."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle on one page. Degenerate (zero-area) rects are legal."""

    x0: float
    y0: float
    x1: float
    y1: float
    page_index: int = 0

    def __post_init__(self) -> None:
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise GeometryError(
                f"rect: x0 <= x1 and y0 <= y1 required, got "
                f"({self.x0}, {self.y0}, {self.x1}, {self.y1})"
            )
        if self.page_index < 0:
            raise GeometryError(f"rect: page_index must be >= 0, got {self.page_index}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def union_bounds(self, other: "Rect") -> "Rect":
        """Smallest rect containing both (same page)."""
        _require_same_page(self, other)
        return Rect(
            min(self.x0, other.x0),
            min(self.y0, other.y0),
            max(self.x1, other.x1),
            max(self.y1, other.y1),
            self.page_index,
        )


def _require_same_page(a: Rect, b: Rect) -> None:
    if a.page_index != b.page_index:
        raise GeometryError(
            f"rects on different pages: {a.page_index} vs {b.page_index}"
        )


def intersection_area(a: Rect, b: Rect) -> float:
    """Area of the geometric intersection of two same-page rects (0 if disjoint)."""
    _require_same_page(a, b)
    w = min(a.x1, b.x1) - max(a.x0, b.x0)
    h = min(a.y1, b.y1) - max(a.y0, b.y0)
    if w <= 0 or h <= 0:
        return 0.0
    return w * h


def union_area(a: Rect, b: Rect) -> float:
    """|A ∪ B| by inclusion-exclusion."""
    return a.area + b.area - intersection_area(a, b)


def iou(a: Rect, b: Rect) -> float:
    """Intersection over union in [0, 1]. Both-degenerate pairs score 0."""
    inter = intersection_area(a, b)
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def recall_coverage(det: Rect, text: Rect) -> float:
    """Fraction of `text`'s area covered by `det`.

    This is the criterion used to claim embedded text boxes for a detected
    field: |det ∩ text| / |text|. `text` must have positive area.
    """
    if text.area <= 0:
        raise GeometryError("recall_coverage: text rect has zero area")
    return intersection_area(det, text) / text.area
