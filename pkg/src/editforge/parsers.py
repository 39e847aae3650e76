"""Parsers for model replies: scores, router verdicts, single-sentence instructions.

Production MLLMs drift from the requested output format, so the score parser
ships with a lenient fallback (on by default, strict mode available).
"""

from __future__ import annotations

import re

from .errors import ParseError
from .records import ASPECT_NAMES, DetailedCaption, Verdict
from .taxonomy import TaskKind

DEFAULT_MAX_INSTRUCTION_CHARS = 400

_INT_RUN = re.compile(r"\d+")
_FIRST_WORD = re.compile(r"[A-Za-z]+")
_TERMINAL = (".", "!", "?")


def parse_single_integer_score(text: str, strict: bool = False) -> int:
    """Parse a 1-3 judge score from a reply.

    Strict: the reply must be a lone integer token (whitespace tolerated).
    Lenient (default): accept when exactly one in-range integer appears
    anywhere in the reply. Never returns a value outside {1, 2, 3}.
    """
    stripped = text.strip()
    if stripped in ("1", "2", "3"):
        return int(stripped)
    if strict:
        if not _INT_RUN.search(stripped):
            raise ParseError("no-integer", stripped[:80])
        if stripped.isdigit():
            raise ParseError("out-of-range", stripped[:80])
        raise ParseError("not-bare-integer", stripped[:80])

    runs = _INT_RUN.findall(text)
    if not runs:
        raise ParseError("no-integer", text[:80])
    in_range = [int(r) for r in runs if 1 <= int(r) <= 3]
    if not in_range:
        raise ParseError("out-of-range", f"integers found: {runs[:5]}")
    if len(in_range) > 1:
        raise ParseError("multiple-integers", f"candidates: {in_range[:5]}")
    return in_range[0]


def _split_line(line: str) -> tuple[str, str]:
    """First alphabetic token of a line, plus the remainder with separators trimmed."""
    m = _FIRST_WORD.search(line)
    if m is None:
        return "", line.strip()
    remainder = line[m.end():].strip()
    remainder = remainder.lstrip("-–—:;,. ").strip()
    return m.group(0), remainder


def parse_router_verdicts(text: str, tasks: list[TaskKind]) -> dict[str, Verdict]:
    """Parse a router reply into per-task verdicts.

    The reply must contain exactly one non-empty line per task, in taxonomy
    order. A line is applicable iff its first alphabetic token is "yes"
    (case-insensitive); anything else rejects the task, with the remainder of
    the line kept as the rationale (fail-closed).
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != len(tasks):
        raise ParseError(
            "line-count-mismatch",
            f"expected {len(tasks)} verdict lines, got {len(lines)}",
        )
    verdicts: dict[str, Verdict] = {}
    for task, line in zip(tasks, lines):
        word, remainder = _split_line(line)
        verdicts[task.id] = Verdict(applicable=word.lower() == "yes", rationale=remainder)
    return verdicts


def render_router_verdicts(verdicts: dict[str, Verdict]) -> str:
    """Canonical rendering of a verdict vector; parse_router_verdicts inverts it."""
    lines = []
    for verdict in verdicts.values():
        word = "yes" if verdict.applicable else "no"
        lines.append(f"{word} - {verdict.rationale}" if verdict.rationale else word)
    return "\n".join(lines)


def parse_single_sentence(text: str, max_chars: int = DEFAULT_MAX_INSTRUCTION_CHARS) -> str:
    """Validate a one-sentence instruction reply.

    The trimmed reply must be non-empty, within the length budget, and end
    with its only terminal punctuation mark (., ! or ?).
    """
    sentence = text.strip()
    if not sentence:
        raise ParseError("empty")
    if len(sentence) > max_chars:
        raise ParseError("too-long", f"{len(sentence)} chars > {max_chars}")
    marks = sum(sentence.count(ch) for ch in _TERMINAL)
    if marks != 1 or sentence[-1] not in _TERMINAL:
        raise ParseError("multi-sentence", sentence[:80])
    return sentence


def parse_single_line(text: str) -> str:
    """Validate a reply that must be exactly one non-empty line."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty")
    if len(stripped.splitlines()) != 1:
        raise ParseError("multi-line", stripped[:80])
    return stripped


_NUMBERED_ITEM = re.compile(r"^\s*\d+\s*[.)]\s*(.+?)\s*$")


def _aspect_heading(line: str) -> str | None:
    cleaned = line.strip().lstrip("#*").strip()
    cleaned = cleaned.strip("*").strip()
    for aspect in ASPECT_NAMES:
        if cleaned.lower().rstrip(":").strip() == aspect.lower():
            return aspect
    return None


def parse_detailed_caption(text: str) -> DetailedCaption:
    """Parse the 7-aspect structured caption reply.

    Expects each aspect name on its own heading line followed by numbered
    elements; all 7 aspects must appear with at least one element each.
    """
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        heading = _aspect_heading(line)
        if heading is not None:
            current = heading
            sections.setdefault(current, [])
            continue
        if current is None:
            continue
        m = _NUMBERED_ITEM.match(line)
        if m:
            sections[current].append(m.group(1))
    for aspect in ASPECT_NAMES:
        if aspect not in sections or not sections[aspect]:
            raise ParseError(f"missing-aspect:{aspect}")
    return DetailedCaption({a: tuple(sections[a]) for a in ASPECT_NAMES})


_QUOTED = re.compile(r'"([^"]*)"')


def extract_text_replacement(instruction: str) -> tuple[str, str]:
    """Pull the old and new text out of a text-editing instruction.

    The instruction must contain exactly two double-quoted spans: the text to
    replace and its replacement, in that order.
    """
    spans = _QUOTED.findall(instruction)
    if len(spans) != 2:
        raise ParseError("quote-spans", f"found {len(spans)} quoted spans, need 2")
    old, new = spans
    if not old or not new:
        raise ParseError("quote-spans", "quoted spans must be non-empty")
    return old, new
