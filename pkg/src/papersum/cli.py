"""Command-line entry point.

Exit codes: 0 on success, 1 when every document in a batch failed,
2 on configuration / schema errors.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import evaluate as eval_mod
from .detect import DetectionError, load_detections
from .ir import save_ir
from .match import DEFAULT_TAU
from .pdfread import IngestError, ingest_pdf
from .pipeline import DEFAULT_CONF_THRESHOLD, PipelineParams, run_batch
from .summarize import (DEFAULT_MAX_GAP, DEFAULT_NUM_SENTENCES,
                        SummarizerParams)
from .text import load_stopwords_file

logger = logging.getLogger("papersum")


def _setup_logging() -> None:
    level = os.environ.get("PAPERSUM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


@click.group()
def main() -> None:
    """Single-page summary generation for academic papers."""
    _setup_logging()


def _build_params(tau, conf_threshold, min_freq, max_gap, num_sentences,
                  stopwords_file) -> PipelineParams:
    stopwords = None
    if stopwords_file:
        stopwords = frozenset(load_stopwords_file(stopwords_file))
    summ_kwargs = dict(min_freq=min_freq, max_gap=max_gap,
                       num_sentences=num_sentences)
    if stopwords is not None:
        summ_kwargs["stopwords"] = stopwords
    return PipelineParams(tau=tau, conf_threshold=conf_threshold,
                          summarizer=SummarizerParams(**summ_kwargs))


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--detector", type=click.Choice(["heuristic", "external"]),
              default="heuristic", show_default=True)
@click.option("--detections", type=click.Path(exists=True), default=None,
              help="Detections JSON file, or a directory of <doc_id>.json.")
@click.option("--tau", type=float, default=DEFAULT_TAU, show_default=True,
              help="Recall threshold for claiming text boxes.")
@click.option("--conf-threshold", type=float, default=DEFAULT_CONF_THRESHOLD,
              show_default=True, help="Confidence gate for figures/tables.")
@click.option("--min-freq", type=int, default=None,
              help="Significant-word frequency threshold (default: corpus-scaled).")
@click.option("--max-gap", type=int, default=DEFAULT_MAX_GAP, show_default=True,
              help="Max insignificant tokens inside a significance cluster.")
@click.option("--num-sentences", "-n", type=int, default=DEFAULT_NUM_SENTENCES,
              show_default=True)
@click.option("--stopwords-file", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--jobs", type=int, default=1, show_default=True)
def summarize(inputs, detector, detections, tau, conf_threshold, min_freq,
              max_gap, num_sentences, stopwords_file, out_dir, jobs) -> None:
    """Summarize one or more papers (PDF or IR JSON) into OUT/<doc_id>/."""
    if detector == "external" and detections is None:
        raise click.UsageError("--detector external requires --detections")
    if not 0.0 < tau <= 1.0:
        raise click.UsageError(f"--tau must be in (0, 1], got {tau}")
    if not 0.0 <= conf_threshold <= 1.0:
        raise click.UsageError("--conf-threshold must be in [0, 1]")
    if jobs < 1:
        raise click.UsageError("--jobs must be >= 1")
    out_path = Path(out_dir)
    if not out_path.parent.exists():
        raise click.UsageError(f"output directory parent missing: {out_path.parent}")
    try:
        params = _build_params(tau, conf_threshold, min_freq, max_gap,
                               num_sentences, stopwords_file)
    except OSError as exc:
        raise click.UsageError(f"cannot read stopwords file: {exc}")

    detections_path = detections if detector == "external" else None
    results = run_batch(list(inputs), out_path, params, detections_path, jobs)
    ok = sum(1 for r in results if r.ok)
    for r in results:
        if not r.ok:
            click.echo(f"FAILED {r.path}: {r.error}", err=True)
    click.echo(f"{ok}/{len(results)} documents summarized -> {out_path}")
    if ok == 0:
        sys.exit(1)


@main.command("extract-ir")
@click.argument("pdf", type=click.Path(exists=True))
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="Write IR JSON here instead of stdout.")
def extract_ir(pdf, out_file) -> None:
    """Parse a PDF and emit its canonical IR JSON."""
    try:
        ir = ingest_pdf(pdf)
    except IngestError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    data = save_ir(ir)
    if out_file:
        Path(out_file).write_bytes(data)
    else:
        sys.stdout.buffer.write(data + b"\n")


@main.command()
@click.option("--preds", type=click.Path(exists=True), required=True,
              help="Detections JSON (normalized or pixel coordinates).")
@click.option("--annotations", type=click.Path(exists=True), required=True,
              help="Annotation JSON (same schema, no confidence).")
@click.option("--extraction-results", type=click.Path(exists=True), default=None,
              help="JSON list of [doc_id, field, outcome] triples to tabulate.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
def evaluate(preds, annotations, extraction_results, out_dir) -> None:
    """Compute detection IoU (and optionally extraction-outcome) reports."""
    out_path = Path(out_dir)
    try:
        out_path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise click.UsageError(f"cannot create output dir: {exc}")

    # Both files use normalized page coordinates against a unit page; IoU is
    # scale-invariant so absolute page size is irrelevant here.
    try:
        pred_doc = json.loads(Path(preds).read_text("utf-8"))
        ann_doc = json.loads(Path(annotations).read_text("utf-8"))
        n_pages = max(len(pred_doc.get("pages", [])),
                      len(ann_doc.get("pages", [])), 1)
        unit_ir = _unit_ir(n_pages)
        pred_dets = load_detections(pred_doc, unit_ir)
        gts = eval_mod.load_annotations(ann_doc, "eval", [(1.0, 1.0)] * n_pages)
    except (DetectionError, json.JSONDecodeError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    # full float precision, sorted keys: deterministic without the 3-decimal
    # rounding the IR format uses
    def dump(doc) -> bytes:
        return json.dumps(doc, sort_keys=True, indent=2).encode("utf-8") + b"\n"

    report = eval_mod.evaluate_detections(pred_dets, gts)
    (out_path / "eval_report.json").write_bytes(
        dump(eval_mod.eval_report_to_dict(report)))
    (out_path / "eval_report.txt").write_text(
        eval_mod.eval_report_text(report), "utf-8")

    if extraction_results:
        try:
            triples = json.loads(Path(extraction_results).read_text("utf-8"))
            ext = eval_mod.tabulate_extraction(
                [(d, f, o) for d, f, o in triples])
        except (ValueError, TypeError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        (out_path / "extraction_report.json").write_bytes(
            dump(eval_mod.extraction_report_to_dict(ext)))
        (out_path / "extraction_report.txt").write_text(
            eval_mod.extraction_report_text(ext), "utf-8")
    click.echo(f"reports written -> {out_path}")


def _unit_ir(n_pages: int):
    """A synthetic IR with unit-square pages, for geometry-only evaluation."""
    from .ir import DocumentIR, Page
    return DocumentIR("eval", tuple(Page(1.0, 1.0) for _ in range(n_pages)))


if __name__ == "__main__":
    main()
