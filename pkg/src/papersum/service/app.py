"""FastAPI service exposing the summarization pipeline over HTTP.

Run with: uvicorn papersum.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..detect import DetectionError, load_detections
from ..evaluate import (eval_report_to_dict, evaluate_detections,
                        load_annotations)
from ..ir import IRError, load_ir
from ..pipeline import PipelineParams, summarize_document
from ..render import render_summary, summary_to_dict
from ..summarize import SummarizerParams
from .schemas import (EvaluateRequest, EvaluateResponse, HealthResponse,
                      SummarizeRequest, SummarizeResponse)

app = FastAPI(
    title="papersum",
    description="Single-page summary generation for academic papers.",
    version=__version__,
)


@app.get("/health", response_model=HealthResponse)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/summarize", response_model=SummarizeResponse)
def summarize(request: SummarizeRequest) -> dict:
    try:
        ir = load_ir(request.ir)
    except IRError as exc:
        raise HTTPException(status_code=422, detail=f"ir: {exc}")
    detections = None
    if request.detections is not None:
        try:
            detections = load_detections(request.detections, ir)
        except DetectionError as exc:
            raise HTTPException(status_code=422, detail=f"detections: {exc}")

    p = request.params
    params = PipelineParams(
        tau=p.tau,
        conf_threshold=p.conf_threshold,
        summarizer=SummarizerParams(min_freq=p.min_freq, max_gap=p.max_gap,
                                    num_sentences=p.num_sentences),
    )
    summary = summarize_document(ir, detections, params)
    html_bytes, _ = render_summary(summary, ir)
    return {"summary": summary_to_dict(summary), "html": html_bytes.decode("utf-8")}


@app.post("/evaluate", response_model=EvaluateResponse)
def evaluate(request: EvaluateRequest) -> dict:
    from ..ir import DocumentIR, Page

    n_pages = max(len(request.predictions.get("pages", [])),
                  len(request.annotations.get("pages", [])), 1)
    unit_ir = DocumentIR("eval", tuple(Page(1.0, 1.0) for _ in range(n_pages)))
    try:
        preds = load_detections(request.predictions, unit_ir)
        gts = load_annotations(request.annotations, "eval", [(1.0, 1.0)] * n_pages)
    except DetectionError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    report = evaluate_detections(preds, gts)
    return eval_report_to_dict(report)
