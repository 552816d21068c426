"""Minimal PDF ingestion: embedded text runs and image placements -> DocumentIR.

This is a deliberately small content-extraction layer, not a full PDF
implementation: it handles unencrypted PDFs with classic object syntax,
Flate or plain content streams, simple fonts, and translation-only text
matrices. That covers programmatically produced papers and the project's
fixtures; exotic PDFs should be converted to IR JSON by an external tool
and fed in via `load_ir`.

Text run width is estimated (0.5 em per character) because no font metrics
are parsed; downstream geometry only needs rough extents.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

from .geometry import Rect
from .ir import DocumentIR, ImageRegion, Page, TextBox
from .text import normalize

CHAR_WIDTH_EM = 0.5
ASCENT_EM = 0.8
DESCENT_EM = 0.2

# two-column mode kicks in when this fraction of boxes sits entirely in one half
COLUMN_FRACTION = 0.6


class IngestError(ValueError):
    """Unreadable, encrypted, or structurally unsupported PDF."""


# ---------------------------------------------------------------------------
# Object-level parsing
# ---------------------------------------------------------------------------

_OBJ_RE = re.compile(rb"(\d+)\s+(\d+)\s+obj(.*?)endobj", re.DOTALL)
_STREAM_RE = re.compile(rb"stream\r?\n(.*?)\r?\n?endstream", re.DOTALL)
_REF_RE = re.compile(rb"(\d+)\s+\d+\s+R")


@dataclass
class PdfObject:
    raw: bytes          # dictionary / value portion, before any stream
    stream: bytes | None


def _parse_objects(data: bytes) -> dict[int, PdfObject]:
    objects: dict[int, PdfObject] = {}
    for m in _OBJ_RE.finditer(data):
        num = int(m.group(1))
        body = m.group(3)
        sm = _STREAM_RE.search(body)
        if sm:
            objects[num] = PdfObject(body[: sm.start()], sm.group(1))
        else:
            objects[num] = PdfObject(body, None)
    return objects


def _decode_stream(obj: PdfObject) -> bytes:
    if obj.stream is None:
        return b""
    data = obj.stream
    try:
        if b"/ASCII85Decode" in obj.raw:
            import base64
            data = base64.a85decode(data.strip(), adobe=True)
        if b"/FlateDecode" in obj.raw:
            data = zlib.decompress(data)
    except (ValueError, zlib.error) as exc:
        raise IngestError(f"cannot decode content stream: {exc}") from None
    return data


def _dict_value(raw: bytes, key: bytes) -> bytes | None:
    """Crude lookup of `/Key value` inside a PDF dictionary blob."""
    m = re.search(
        re.escape(key)
        + rb"\s*(\[[^\]]*\]|<<.*?>>|/[^\s<>\[\]()/]+|[^/>\s]+(?:\s+\d+\s+R)?)",
        raw, re.DOTALL)
    return m.group(1) if m else None


def _resolve_numbers(blob: bytes) -> list[float]:
    return [float(x) for x in re.findall(rb"[-+]?\d*\.?\d+", blob)]


# ---------------------------------------------------------------------------
# Content-stream tokenizer
# ---------------------------------------------------------------------------

def _tokenize(content: bytes):
    i, n = 0, len(content)
    while i < n:
        c = content[i : i + 1]
        if c in b" \t\r\n":
            i += 1
        elif c == b"%":
            while i < n and content[i : i + 1] not in b"\r\n":
                i += 1
        elif c == b"(":
            depth, i0 = 1, i + 1
            out = bytearray()
            i += 1
            while i < n and depth:
                ch = content[i : i + 1]
                if ch == b"\\" and i + 1 < n:
                    nxt = content[i + 1 : i + 2]
                    esc = {b"n": b"\n", b"r": b"\r", b"t": b"\t",
                           b"(": b"(", b")": b")", b"\\": b"\\"}.get(nxt, nxt)
                    out += esc
                    i += 2
                    continue
                if ch == b"(":
                    depth += 1
                elif ch == b")":
                    depth -= 1
                    if not depth:
                        i += 1
                        break
                out += ch
                i += 1
            yield ("str", bytes(out))
        elif c == b"<" and content[i : i + 2] != b"<<":
            j = content.find(b">", i)
            hexbody = re.sub(rb"\s", b"", content[i + 1 : j])
            yield ("str", bytes.fromhex(hexbody.decode("ascii", "ignore")))
            i = j + 1
        elif content[i : i + 2] in (b"<<", b">>"):
            yield ("delim", content[i : i + 2])
            i += 2
        elif c in b"[]":
            yield ("delim", c)
            i += 1
        elif c == b"/":
            m = re.match(rb"/[^\s()<>\[\]{}/%]*", content[i:])
            yield ("name", m.group(0))
            i += m.end()
        else:
            m = re.match(rb"[-+]?\d*\.?\d+", content[i:])
            if m and m.group(0):
                yield ("num", float(m.group(0)))
                i += m.end()
            else:
                m = re.match(rb"[A-Za-z'\"*]+", content[i:])
                if m:
                    yield ("op", m.group(0))
                    i += m.end()
                else:
                    i += 1  # skip unknown byte


@dataclass
class _RawRun:
    x: float
    y: float       # PDF-space baseline (bottom-left origin)
    size: float
    text: str


def _extract_page_content(content: bytes, xobjects: dict[bytes, bytes]):
    """Walk one content stream; return (text runs, image placements)."""
    runs: list[_RawRun] = []
    images: list[tuple[float, float, float, float, str]] = []

    font_size = 0.0
    tx = ty = 0.0          # current text position (translation only)
    lx = ly = 0.0          # line start
    leading = 0.0
    scale = 1.0
    ctm = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)
    ctm_stack: list[tuple] = []
    stack: list = []

    def show(text_bytes: bytes) -> None:
        nonlocal tx
        text = text_bytes.decode("latin-1")
        if text.strip():
            runs.append(_RawRun(tx, ty, font_size * scale, text))
        tx += len(text) * font_size * scale * CHAR_WIDTH_EM

    def newline() -> None:
        nonlocal tx, ty, lx, ly
        lx, ly = lx, ly - leading
        tx, ty = lx, ly

    for kind, value in _tokenize(content):
        if kind in ("num", "str", "name"):
            stack.append((kind, value))
            continue
        if kind == "delim":
            if value == b"]":
                # collapse TJ array: keep strings, drop kerning numbers
                items = []
                while stack and stack[-1] != ("delim", b"["):
                    items.append(stack.pop())
                if stack:
                    stack.pop()
                joined = b"".join(v for k, v in reversed(items) if k == "str")
                stack.append(("str", joined))
            elif value == b"[":
                stack.append(("delim", value))
            continue

        op = value
        nums = [v for k, v in stack if k == "num"]
        if op == b"Tf" and nums:
            font_size = nums[-1]
        elif op == b"Tm" and len(nums) >= 6:
            a, b, c, d, e, f = nums[-6:]
            scale = abs(d) or 1.0
            tx = ty = 0.0
            lx, ly = e, f
            tx, ty = e, f
        elif op in (b"Td", b"TD") and len(nums) >= 2:
            if op == b"TD":
                leading = -nums[-1]
            lx, ly = lx + nums[-2], ly + nums[-1]
            tx, ty = lx, ly
        elif op == b"TL" and nums:
            leading = nums[-1]
        elif op == b"T*":
            ly -= leading
            tx, ty = lx, ly
        elif op == b"BT":
            tx = ty = lx = ly = 0.0
            scale = 1.0
        elif op == b"Tj":
            if stack and stack[-1][0] == "str":
                show(stack[-1][1])
        elif op == b"'":
            ly -= leading
            tx, ty = lx, ly
            if stack and stack[-1][0] == "str":
                show(stack[-1][1])
        elif op == b"TJ":
            if stack and stack[-1][0] == "str":
                show(stack[-1][1])
        elif op == b"cm" and len(nums) >= 6:
            a, b, c, d, e, f = nums[-6:]
            pa, pb, pc, pd, pe, pf = ctm
            ctm = (a * pa + b * pc, a * pb + b * pd,
                   c * pa + d * pc, c * pb + d * pd,
                   e * pa + f * pc + pe, e * pb + f * pd + pf)
        elif op == b"q":
            ctm_stack.append(ctm)
        elif op == b"Q":
            if ctm_stack:
                ctm = ctm_stack.pop()
        elif op == b"Do":
            names = [v for k, v in stack if k == "name"]
            if names:
                subtype = xobjects.get(names[-1].lstrip(b"/"), b"")
                kind_str = "raster" if subtype == b"/Image" else "vector-group"
                a, _, _, d, e, f = ctm
                images.append((e, f, e + a, f + d, kind_str))
        stack.clear()
    return runs, images


# ---------------------------------------------------------------------------
# Reading order
# ---------------------------------------------------------------------------

def order_boxes(raw: list[tuple[Rect, str, float]], page_width: float):
    """Sort boxes in reading order.

    Two-column mode when >= 60% of boxes sit entirely in one half of the
    page (split at the vertical midline): left column top-down, then right.
    Otherwise plain top-to-bottom, left-to-right.
    """
    if not raw:
        return []
    mid = page_width / 2.0
    one_half = sum(1 for rect, _, _ in raw if rect.x1 <= mid or rect.x0 >= mid)
    if one_half / len(raw) >= COLUMN_FRACTION:
        def key(item):
            rect = item[0]
            column = 0 if (rect.x0 + rect.x1) / 2.0 < mid else 1
            return (column, rect.y0, rect.x0)
    else:
        def key(item):
            rect = item[0]
            return (rect.y0, rect.x0)
    return sorted(raw, key=key)


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------

def ingest_pdf(path: str, doc_id: str | None = None) -> DocumentIR:
    """Parse a PDF file into the canonical DocumentIR."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from None
    if not data.startswith(b"%PDF"):
        raise IngestError(f"{path}: not a PDF (missing %PDF header)")
    if re.search(rb"/Encrypt\s", data):
        raise IngestError(f"{path}: encrypted PDFs are not supported")

    objects = _parse_objects(data)
    if not objects:
        raise IngestError(f"{path}: no PDF objects found")

    # locate pages in document order via the page tree
    page_nums: list[int] = []
    roots = [num for num, obj in objects.items()
             if b"/Type" in obj.raw and b"/Pages" in obj.raw and b"/Kids" in obj.raw]

    def walk(num: int) -> None:
        obj = objects.get(num)
        if obj is None:
            return
        if b"/Kids" in obj.raw:
            kids = _dict_value(obj.raw, b"/Kids") or b""
            for ref in _REF_RE.finditer(kids):
                walk(int(ref.group(1)))
        elif b"/Page" in obj.raw:
            page_nums.append(num)

    for root in sorted(roots):
        walk(root)
    if not page_nums:
        page_nums = sorted(
            num for num, obj in objects.items()
            if re.search(rb"/Type\s*/Page\b", obj.raw)
        )
    if not page_nums:
        raise IngestError(f"{path}: no pages found")

    # map XObject names to subtypes (flattened across resource dicts)
    xobjects: dict[bytes, bytes] = {}
    for num, obj in objects.items():
        if b"/XObject" not in obj.raw and b"/Subtype" not in obj.raw:
            continue
        if obj.stream is not None and b"/Subtype" in obj.raw:
            subtype = _dict_value(obj.raw, b"/Subtype")
            for other in objects.values():
                for m in re.finditer(rb"/([^\s/<>\[\]()]+)\s+(\d+)\s+\d+\s+R",
                                     other.raw):
                    if int(m.group(2)) == num and subtype:
                        xobjects[m.group(1)] = subtype

    if doc_id is None:
        import os
        doc_id = os.path.splitext(os.path.basename(path))[0]

    pages: list[Page] = []
    any_text = False
    for p_idx, num in enumerate(page_nums):
        obj = objects[num]
        mb = _dict_value(obj.raw, b"/MediaBox")
        if mb is None:
            for root in roots:
                mb = _dict_value(objects[root].raw, b"/MediaBox")
                if mb is not None:
                    break
        coords = _resolve_numbers(mb) if mb else [0, 0, 612, 792]
        width, height = coords[2] - coords[0], coords[3] - coords[1]

        content = b""
        contents_ref = _dict_value(obj.raw, b"/Contents")
        if contents_ref is not None:
            for ref in _REF_RE.finditer(contents_ref):
                target = objects.get(int(ref.group(1)))
                if target is not None:
                    content += _decode_stream(target)
        runs, image_placements = _extract_page_content(content, xobjects)

        raw_boxes: list[tuple[Rect, str, float]] = []
        for run in runs:
            size = run.size or 10.0
            x0 = run.x
            x1 = min(run.x + len(run.text) * size * CHAR_WIDTH_EM, width)
            y_top = max(height - run.y - size * ASCENT_EM, 0.0)
            y_bot = min(height - run.y + size * DESCENT_EM, height)
            if x1 <= x0 or y_bot <= y_top:
                continue
            rect = Rect(round(x0, 3), round(y_top, 3), round(x1, 3),
                        round(y_bot, 3), p_idx)
            raw_boxes.append((rect, normalize(run.text), round(run.size, 3)))
        raw_boxes = [b for b in raw_boxes if b[1]]
        ordered = order_boxes(raw_boxes, width)
        boxes = tuple(
            TextBox(rect, text, size, order)
            for order, (rect, text, size) in enumerate(ordered)
        )
        any_text = any_text or bool(boxes)

        regions = []
        for x0, y0, x1, y1, kind in image_placements:
            rx0, rx1 = sorted((x0, x1))
            ry0, ry1 = sorted((height - y0, height - y1))
            rx0, rx1 = max(rx0, 0.0), min(rx1, width)
            ry0, ry1 = max(ry0, 0.0), min(ry1, height)
            if rx1 > rx0 and ry1 > ry0:
                regions.append(ImageRegion(
                    Rect(round(rx0, 3), round(ry0, 3), round(rx1, 3),
                         round(ry1, 3), p_idx),
                    kind,
                ))
        pages.append(Page(round(width, 3), round(height, 3), boxes, tuple(regions)))

    warnings = () if any_text else ("no_text",)
    return DocumentIR(doc_id, tuple(pages), warnings)
