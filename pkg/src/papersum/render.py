"""Assemble and render the single-page summary (HTML + canonical JSON)."""

from __future__ import annotations

import html
import json
from dataclasses import dataclass

from .geometry import Rect
from .ir import DocumentIR, canonical_json

NOT_DETECTED = "[not detected]"

_STYLE = """
body { font-family: Georgia, 'Times New Roman', serif; max-width: 46em;
       margin: 2em auto; padding: 0 1em; color: #222; }
h1 { font-size: 1.6em; margin-bottom: 0.2em; }
.authors { color: #555; margin-bottom: 1.5em; }
.figure { border: 1px solid #ccc; padding: 0.8em; margin: 1em 0;
          text-align: center; }
.figure .placeholder { background: #f2f2f2; color: #888; padding: 3em 1em; }
.figure img { max-width: 100%; }
.caption { font-size: 0.9em; color: #444; margin-top: 0.5em; }
.abstract { font-style: italic; }
.provenance { font-size: 0.75em; color: #999; margin-top: 3em;
              border-top: 1px solid #eee; padding-top: 0.5em; }
""".strip()


@dataclass(frozen=True)
class MifInfo:
    page_index: int
    rect: Rect
    caption_text: str


@dataclass(frozen=True)
class SummaryPage:
    doc_id: str
    title: str
    authors: str
    abstract: str
    mif: MifInfo | None
    sentences: tuple[str, ...]
    provenance: dict


class RenderError(ValueError):
    pass


def summary_to_dict(page: SummaryPage) -> dict:
    doc: dict = {
        "doc_id": page.doc_id,
        "title": page.title,
        "authors": page.authors,
        "abstract": page.abstract,
        "sentences": list(page.sentences),
        "provenance": page.provenance,
        "mif": None,
    }
    if page.mif is not None:
        doc["mif"] = {
            "page_index": page.mif.page_index,
            "rect": [page.mif.rect.x0, page.mif.rect.y0,
                     page.mif.rect.x1, page.mif.rect.y1],
            "caption_text": page.mif.caption_text,
        }
    return doc


def summary_from_dict(doc: dict) -> SummaryPage:
    mif = None
    if doc.get("mif") is not None:
        raw = doc["mif"]
        mif = MifInfo(raw["page_index"],
                      Rect(*raw["rect"], page_index=raw["page_index"]),
                      raw["caption_text"])
    return SummaryPage(
        doc_id=doc["doc_id"],
        title=doc["title"],
        authors=doc["authors"],
        abstract=doc.get("abstract", ""),
        mif=mif,
        sentences=tuple(doc["sentences"]),
        provenance=doc["provenance"],
    )


def _esc(text: str) -> str:
    return html.escape(text, quote=True)


def render_summary(page: SummaryPage, ir: DocumentIR,
                   image_provider=None) -> tuple[bytes, bytes]:
    """Render one summary as (html_bytes, json_bytes).

    `image_provider`, when given, is called as
    image_provider(ir, page_index, rect) and must return a data URI for the
    figure crop; without one a captioned placeholder box is rendered.
    Output is deterministic for identical input. Missing fields render as an
    explicit marker, never silently vanish.
    """
    title = page.title or NOT_DETECTED
    authors = page.authors or NOT_DETECTED

    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        f"<title>{_esc(title)}</title>",
        f"<style>{_STYLE}</style>",
        "</head><body>",
        f"<h1>{_esc(title)}</h1>",
        f'<p class="authors">{_esc(authors)}</p>',
    ]
    if page.abstract:
        parts.append(f'<p class="abstract">{_esc(page.abstract)}</p>')
    if page.mif is not None:
        parts.append('<div class="figure">')
        uri = None
        if image_provider is not None:
            uri = image_provider(ir, page.mif.page_index, page.mif.rect)
        if uri:
            parts.append(f'<img src="{_esc(uri)}" alt="most informative figure">')
        else:
            parts.append('<div class="placeholder">figure preview unavailable</div>')
        if page.mif.caption_text:
            parts.append(f'<p class="caption">{_esc(page.mif.caption_text)}</p>')
        parts.append("</div>")
    if page.sentences:
        parts.append("<ul>")
        for sentence in page.sentences:
            parts.append(f"<li>{_esc(sentence)}</li>")
        parts.append("</ul>")
    prov = json.dumps(page.provenance, sort_keys=True)
    parts.append(f'<p class="provenance">doc {_esc(page.doc_id)} · {_esc(prov)}</p>')
    parts.append("</body></html>")
    html_bytes = "\n".join(parts).encode("utf-8")
    json_bytes = canonical_json(summary_to_dict(page))
    return html_bytes, json_bytes


def render_index(pages: list[SummaryPage]) -> bytes:
    """Batch index page linking each summary, sorted by doc_id."""
    ids = [p.doc_id for p in pages]
    if len(set(ids)) != len(ids):
        raise RenderError("duplicate doc_id in index")
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        "<title>Paper summaries</title>",
        f"<style>{_STYLE}</style>",
        "</head><body>",
        "<h1>Paper summaries</h1>",
        "<ul>",
    ]
    for page in sorted(pages, key=lambda p: p.doc_id):
        href = f"{page.doc_id}/summary.html"
        label = page.title or page.doc_id
        parts.append(f'<li><a href="{_esc(href)}">{_esc(label)}</a></li>')
    parts += ["</ul>", "</body></html>"]
    return "\n".join(parts).encode("utf-8")
