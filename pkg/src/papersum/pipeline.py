"""End-to-end per-document pipeline and the deterministic batch driver."""

from __future__ import annotations

import logging
import os
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import detect as detect_mod
from . import match as match_mod
from .ir import DocumentIR, load_ir
from .match import DEFAULT_MAX_GAP_PT, DEFAULT_TAU
from .mif import CaptionedFigure, select_mif
from .pdfread import ingest_pdf
from .render import MifInfo, SummaryPage, render_index, render_summary
from .sentences import extract_sentences
from .summarize import SummarizerParams, extract_summary

logger = logging.getLogger(__name__)

DEFAULT_CONF_THRESHOLD = 0.5


@dataclass(frozen=True)
class PipelineParams:
    tau: float = DEFAULT_TAU
    conf_threshold: float = DEFAULT_CONF_THRESHOLD
    caption_max_gap: float = DEFAULT_MAX_GAP_PT
    summarizer: SummarizerParams = field(default_factory=SummarizerParams)


def summarize_document(ir: DocumentIR,
                       detections: list[detect_mod.Detection] | None = None,
                       params: PipelineParams | None = None) -> SummaryPage:
    """Run detect -> match -> MIF -> summarize for one document.

    `detections` of None means the built-in heuristic detector.
    """
    params = params or PipelineParams()
    if detections is None:
        detections = detect_mod.detect_heuristic(ir)
        detector_source = "heuristic"
    else:
        detector_source = "external"

    fields = detect_mod.select_first_page_fields(detections)
    page0_boxes = list(ir.pages[0].text_boxes) if ir.pages else []

    def field_text(det: detect_mod.Detection | None, klass: str) -> str:
        if det is None:
            return ""
        return match_mod.build_field_text(klass, det, page0_boxes, params.tau).text

    title = field_text(fields.title, "title")
    authors = field_text(fields.author, "author")
    abstract = field_text(fields.abstract, "abstract")

    figures = []
    order = 0
    for det in detect_mod.select_figures_tables(detections, params.conf_threshold):
        if det.klass != "figure":
            continue
        boxes = list(ir.pages[det.rect.page_index].text_boxes)
        caption = match_mod.associate_caption(det, boxes, params.caption_max_gap)
        figures.append(CaptionedFigure(det, caption, order))
        order += 1

    mif_result = select_mif(figures, abstract, params.summarizer.stopwords)
    mif_info = None
    if mif_result.chosen is not None:
        chosen = mif_result.chosen
        mif_info = MifInfo(
            page_index=chosen.detection.rect.page_index,
            rect=chosen.detection.rect,
            caption_text=chosen.caption.text if chosen.caption else "",
        )

    sentences = extract_sentences(ir)
    scored = extract_summary(sentences, params=params.summarizer)

    provenance = {
        "tau": params.tau,
        "conf_threshold": params.conf_threshold,
        "min_freq": params.summarizer.min_freq,
        "max_gap": params.summarizer.max_gap,
        "num_sentences": params.summarizer.num_sentences,
        "detector": detector_source,
    }
    return SummaryPage(
        doc_id=ir.doc_id,
        title=title,
        authors=authors,
        abstract=abstract,
        mif=mif_info,
        sentences=tuple(sc.sentence.text for sc in scored),
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# Batch driver
# ---------------------------------------------------------------------------

@dataclass
class DocResult:
    path: str
    doc_id: str | None
    ok: bool
    error: str | None = None
    summary: SummaryPage | None = None


def load_document(path: str | Path) -> DocumentIR:
    """Load a document from either an IR JSON file or a PDF."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_ir(path.read_bytes())
    return ingest_pdf(str(path))


def _load_external_detections(ir: DocumentIR, detections_path: Path):
    candidate = detections_path
    if detections_path.is_dir():
        candidate = detections_path / f"{ir.doc_id}.json"
    if not candidate.exists():
        raise detect_mod.DetectionError(f"no detections file for {ir.doc_id}")
    return detect_mod.load_detections(candidate.read_bytes(), ir)


def process_one(path: str | Path, out_dir: str | Path,
                params: PipelineParams | None = None,
                detections_path: str | Path | None = None,
                image_provider=None) -> DocResult:
    """Run the full pipeline on one input and write its output directory.

    Output is written to a temp directory and atomically renamed into place,
    so a failure never leaves a partial <doc_id>/ behind.
    """
    path = str(path)
    try:
        ir = load_document(path)
        detections = None
        if detections_path is not None:
            detections = _load_external_detections(ir, Path(detections_path))
        summary = summarize_document(ir, detections, params)
        html_bytes, json_bytes = render_summary(summary, ir, image_provider)

        out_dir = Path(out_dir)
        final_dir = out_dir / ir.doc_id
        tmp_dir = Path(tempfile.mkdtemp(prefix=f".{ir.doc_id}.", dir=out_dir))
        try:
            (tmp_dir / "summary.html").write_bytes(html_bytes)
            (tmp_dir / "summary.json").write_bytes(json_bytes)
            if final_dir.exists():
                shutil.rmtree(final_dir)
            os.replace(tmp_dir, final_dir)
        finally:
            if tmp_dir.exists():
                shutil.rmtree(tmp_dir, ignore_errors=True)
        return DocResult(path, ir.doc_id, True, summary=summary)
    except Exception as exc:  # per-document isolation: one bad input, not the batch
        logger.warning("failed to process %s: %s", path, exc)
        return DocResult(path, None, False, error=str(exc))


def run_batch(paths: list[str | Path], out_dir: str | Path,
              params: PipelineParams | None = None,
              detections_path: str | Path | None = None,
              jobs: int = 1, image_provider=None) -> list[DocResult]:
    """Process many documents with a bounded worker pool.

    Results (and the rendered index) are ordered deterministically, so the
    output tree is byte-identical regardless of `jobs`.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [str(p) for p in paths]

    def work(path: str) -> DocResult:
        return process_one(path, out_dir, params, detections_path, image_provider)

    if jobs == 1:
        results = [work(p) for p in paths]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, paths))

    summaries = [r.summary for r in results if r.ok and r.summary is not None]
    (out_dir / "index.html").write_bytes(render_index(summaries))
    return results
