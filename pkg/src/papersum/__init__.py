"""papersum: single-page summary generation for academic paper PDFs."""

__version__ = "0.1.0"

from .geometry import Rect, intersection_area, iou, recall_coverage
from .ir import DocumentIR, ImageRegion, Page, Sentence, TextBox, load_ir, save_ir
from .pipeline import PipelineParams, run_batch, summarize_document
from .render import SummaryPage

__all__ = [
    "Rect", "intersection_area", "iou", "recall_coverage",
    "DocumentIR", "ImageRegion", "Page", "Sentence", "TextBox",
    "load_ir", "save_ir",
    "PipelineParams", "run_batch", "summarize_document",
    "SummaryPage",
]
