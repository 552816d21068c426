"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class SummarizeParams(BaseModel):
    tau: float = Field(0.5, gt=0.0, le=1.0)
    conf_threshold: float = Field(0.5, ge=0.0, le=1.0)
    min_freq: Optional[int] = Field(None, ge=1)
    max_gap: int = Field(4, ge=0)
    num_sentences: int = Field(3, ge=1)


class SummarizeRequest(BaseModel):
    ir: dict[str, Any] = Field(description="Document IR (ir_version 1 JSON)")
    detections: Optional[dict[str, Any]] = Field(
        None, description="External detections JSON; omit for the heuristic detector")
    params: SummarizeParams = Field(default_factory=SummarizeParams)


class MifModel(BaseModel):
    page_index: int
    rect: list[float]
    caption_text: str


class SummaryModel(BaseModel):
    doc_id: str
    title: str
    authors: str
    abstract: str
    mif: Optional[MifModel]
    sentences: list[str]
    provenance: dict[str, Any]


class SummarizeResponse(BaseModel):
    summary: SummaryModel
    html: str


class EvaluateRequest(BaseModel):
    predictions: dict[str, Any] = Field(description="Detections JSON")
    annotations: dict[str, Any] = Field(description="Annotation JSON (no confidence)")


class ClassCounts(BaseModel):
    matched: int
    unmatched_gt: int
    unmatched_pred: int


class EvaluateResponse(BaseModel):
    per_class_iou: dict[str, float]
    overall_iou: float
    counts: dict[str, ClassCounts]


class HealthResponse(BaseModel):
    status: str
    version: str
