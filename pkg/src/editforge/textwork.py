"""Text-editing workflow geometry: OCR block filtering, polygon masks, and
glyph overlays rendered with a bundled bitmap font.

Masks rasterize with pixel-center sampling (a pixel is white iff its center
lies inside the polygon), so an axis-aligned w x h rectangle covers exactly
w*h pixels. Glyphs use integer scaling only, no anti-aliasing, keeping the
overlay bytes platform-deterministic.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .errors import NoCandidateBlocks, ProviderError
from .records import OcrBlock

DEFAULT_OCR_MIN_CONF = 0.9
DEFAULT_MIN_AREA_PX = 400.0
MAX_AREA_FRACTION = 0.5

GLYPH_W = 5
GLYPH_H = 7
GLYPH_SPACING = 1

# 5x7 bitmap font, one 5-bit row value per glyph row, MSB = leftmost pixel.
# Lowercase folds to uppercase; unknown characters render as a filled frame.
_FONT: dict[str, tuple[int, ...]] = {
    "A": (0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11),
    "B": (0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E),
    "C": (0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E),
    "D": (0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E),
    "E": (0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F),
    "F": (0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10),
    "G": (0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F),
    "H": (0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11),
    "I": (0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E),
    "J": (0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C),
    "K": (0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11),
    "L": (0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F),
    "M": (0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11),
    "N": (0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11),
    "O": (0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E),
    "P": (0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10),
    "Q": (0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D),
    "R": (0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11),
    "S": (0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E),
    "T": (0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04),
    "U": (0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E),
    "V": (0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04),
    "W": (0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A),
    "X": (0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11),
    "Y": (0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04),
    "Z": (0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F),
    "0": (0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E),
    "1": (0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E),
    "2": (0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F),
    "3": (0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E),
    "4": (0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02),
    "5": (0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E),
    "6": (0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E),
    "7": (0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08),
    "8": (0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E),
    "9": (0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C),
    " ": (0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00),
    ".": (0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C),
    ",": (0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08),
    "!": (0x04, 0x04, 0x04, 0x04, 0x04, 0x00, 0x04),
    "?": (0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04),
    "-": (0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00),
    "'": (0x0C, 0x04, 0x08, 0x00, 0x00, 0x00, 0x00),
    '"': (0x0A, 0x0A, 0x0A, 0x00, 0x00, 0x00, 0x00),
    ":": (0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00),
    "&": (0x08, 0x14, 0x14, 0x08, 0x15, 0x12, 0x0D),
    "/": (0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10),
}
_UNKNOWN = (0x1F, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1F)


def _glyph(ch: str) -> tuple[int, ...]:
    return _FONT.get(ch.upper(), _UNKNOWN)


def polygon_area(polygon: Sequence[tuple[float, float]]) -> float:
    """Shoelace area of a simple polygon."""
    total = 0.0
    n = len(polygon)
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2.0


def filter_blocks(
    blocks: Sequence[OcrBlock],
    image_width: int,
    image_height: int,
    min_conf: float = DEFAULT_OCR_MIN_CONF,
    min_area_px: float = DEFAULT_MIN_AREA_PX,
) -> list[OcrBlock]:
    """Candidate OCR regions: confident, big enough to edit, not dominating
    the image. Raises NoCandidateBlocks when nothing survives."""
    image_area = image_width * image_height
    survivors = []
    for block in blocks:
        area = polygon_area(block.polygon)
        if block.confidence < min_conf:
            continue
        if area < min_area_px or area > MAX_AREA_FRACTION * image_area:
            continue
        survivors.append(block)
    if not survivors:
        raise NoCandidateBlocks(
            f"0 of {len(blocks)} OCR blocks usable at conf>={min_conf}, area>={min_area_px}px"
        )
    return survivors


def rasterize_polygon(width: int, height: int, polygon: Sequence[tuple[float, float]]) -> np.ndarray:
    """Even-odd scanline fill sampled at pixel centers; values are 0 or 255."""
    mask = np.zeros((height, width), dtype=np.uint8)
    pts = [(float(x), float(y)) for x, y in polygon]
    n = len(pts)
    for row in range(height):
        yc = row + 0.5
        xs: list[float] = []
        for i in range(n):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % n]
            if y1 == y2:
                continue
            if (y1 <= yc < y2) or (y2 <= yc < y1):
                t = (yc - y1) / (y2 - y1)
                xs.append(x1 + t * (x2 - x1))
        xs.sort()
        for j in range(0, len(xs) - 1, 2):
            start = max(math.ceil(xs[j] - 0.5), 0)
            stop = min(math.ceil(xs[j + 1] - 0.5), width)
            if stop > start:
                mask[row, start:stop] = 255
    return mask


def polygon_bbox(polygon: Sequence[tuple[float, float]], width: int, height: int) -> tuple[int, int, int, int]:
    """Integer pixel bounding box (x0, y0, x1, y1), clipped to the canvas."""
    xs = [p[0] for p in polygon]
    ys = [p[1] for p in polygon]
    x0 = max(int(math.floor(min(xs))), 0)
    y0 = max(int(math.floor(min(ys))), 0)
    x1 = min(int(math.ceil(max(xs))), width)
    y1 = min(int(math.ceil(max(ys))), height)
    return x0, y0, x1, y1


def render_glyphs(width: int, height: int, polygon: Sequence[tuple[float, float]], text: str) -> np.ndarray:
    """White replacement text on a black source-sized canvas, centered in the
    polygon's bounding box at the largest integer scale that fits."""
    canvas = np.zeros((height, width), dtype=np.uint8)
    if not text:
        return canvas
    x0, y0, x1, y1 = polygon_bbox(polygon, width, height)
    box_w, box_h = x1 - x0, y1 - y0
    if box_w <= 0 or box_h <= 0:
        return canvas

    n = len(text)
    unit_w = n * GLYPH_W + (n - 1) * GLYPH_SPACING
    scale = max(min(box_w // unit_w, box_h // GLYPH_H), 1)
    drawn_w, drawn_h = unit_w * scale, GLYPH_H * scale
    origin_x = x0 + (box_w - drawn_w) // 2
    origin_y = y0 + (box_h - drawn_h) // 2

    for col, ch in enumerate(text):
        rows = _glyph(ch)
        gx = origin_x + col * (GLYPH_W + GLYPH_SPACING) * scale
        for r, bits in enumerate(rows):
            for c in range(GLYPH_W):
                if not (bits >> (GLYPH_W - 1 - c)) & 1:
                    continue
                px = gx + c * scale
                py = origin_y + r * scale
                xa, xb = max(px, 0), min(px + scale, width)
                ya, yb = max(py, 0), min(py + scale, height)
                if xb > xa and yb > ya:
                    canvas[ya:yb, xa:xb] = 255
    return canvas


def encode_mask_png(mask: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(mask, "L").save(buf, format="PNG")
    return buf.getvalue()


def build_mask(width: int, height: int, block: OcrBlock) -> bytes:
    return encode_mask_png(rasterize_polygon(width, height, block.polygon))


def build_overlay(width: int, height: int, block: OcrBlock, replacement: str) -> bytes:
    return encode_mask_png(render_glyphs(width, height, block.polygon, replacement))


def select_block(blocks: Sequence[OcrBlock], old_text: str) -> Optional[OcrBlock]:
    """The block the agent edited: first candidate whose text contains the
    quoted old span."""
    for block in blocks:
        if old_text in block.text:
            return block
    return None


class FixtureOcrProvider:
    """Reads OCR blocks from sidecar JSON files: ``<dir>/<source id>.json``,
    falling back to ``<dir>/default.json``. Sidecars hold a JSON array of
    ``{text, confidence, polygon: [[x, y], ...]}``."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def blocks_for(self, source_id: str) -> list[OcrBlock]:
        for name in (f"{source_id}.json", "default.json"):
            path = self.root / name
            if path.is_file():
                try:
                    raw = json.loads(path.read_text(encoding="utf-8"))
                    return [OcrBlock.from_json(obj) for obj in raw]
                except (ValueError, KeyError, TypeError) as exc:
                    raise ProviderError(f"bad OCR sidecar {path}: {exc}") from exc
        return []


@dataclass(frozen=True)
class TextEditAssets:
    block: OcrBlock
    old_text: str
    new_text: str
    mask_png: bytes
    overlay_png: bytes


def prepare_text_edit(
    blocks: Sequence[OcrBlock],
    instruction_old: str,
    instruction_new: str,
    image_width: int,
    image_height: int,
) -> TextEditAssets:
    """Build the mask and glyph overlay for an extracted old/new text pair."""
    block = select_block(blocks, instruction_old)
    if block is None:
        from .errors import ParseError

        raise ParseError("quote-spans", f"old text {instruction_old!r} matches no candidate block")
    return TextEditAssets(
        block=block,
        old_text=instruction_old,
        new_text=instruction_new,
        mask_png=build_mask(image_width, image_height, block),
        overlay_png=build_overlay(image_width, image_height, block, instruction_new),
    )
