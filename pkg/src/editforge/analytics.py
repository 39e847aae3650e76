"""Dataset statistics: score marginals, joint and min-of-three distributions,
task mix, aspect ratios, and target-entity concentration.

Distributions keep raw integer counts as the primary representation, so all
cross-table identities (marginalization, min-score mass) hold exactly;
percentages are derived views, rendered at 2 decimals with half-up rounding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import EmptyInput
from .records import ScoreTriple
from .taxonomy import TASKS, Category, TaskKind

SCORE_LABELS = ("1", "2", "3")


def round_half_up(value: Fraction, decimals: int = 2) -> Fraction:
    scale = 10 ** decimals
    scaled = value * scale
    floor = scaled.numerator // scaled.denominator
    remainder = scaled - floor
    if remainder >= Fraction(1, 2):
        floor += 1
    return Fraction(floor, scale)


def format_pct(value: Fraction) -> str:
    rounded = round_half_up(value, 2)
    return f"{float(rounded):.2f}"


@dataclass(frozen=True)
class Distribution:
    """Labeled bins with exact counts; label order is canonical and preserved."""

    bins: dict[str, int]
    total: int

    def __post_init__(self):
        if self.total <= 0:
            raise EmptyInput("distribution over zero records")
        if any(c < 0 for c in self.bins.values()):
            raise ValueError("negative bin count")
        if sum(self.bins.values()) != self.total:
            raise ValueError("bin counts must sum to the total")

    def count(self, label: str) -> int:
        return self.bins.get(label, 0)

    def exact_percentage(self, label: str) -> Fraction:
        return Fraction(self.count(label) * 100, self.total)

    def percentage(self, label: str) -> float:
        return float(self.exact_percentage(label))

    def exact_percentages(self) -> dict[str, Fraction]:
        return {label: self.exact_percentage(label) for label in self.bins}

    def rendered(self) -> dict[str, str]:
        return {label: format_pct(pct) for label, pct in self.exact_percentages().items()}

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "counts": dict(self.bins),
            "percent": {label: round(self.percentage(label), 4) for label in self.bins},
            "rendered": self.rendered(),
        }


def _require(scores: Sequence) -> None:
    if not scores:
        raise EmptyInput("no records to aggregate")


def score_marginals(scores: Sequence[ScoreTriple]) -> dict[str, Distribution]:
    """Per-dimension relative frequencies over {1,2,3}; zero bins included."""
    _require(scores)
    out = {}
    for dim in ("f", "c", "q"):
        counts = {label: 0 for label in SCORE_LABELS}
        for s in scores:
            counts[str(getattr(s, dim))] += 1
        out[dim] = Distribution(counts, len(scores))
    return out


def joint_distribution(scores: Sequence[ScoreTriple]) -> Distribution:
    """Frequencies over observed (f,c,q) tuples, descending; zero-mass tuples
    are omitted."""
    _require(scores)
    counts: dict[tuple[int, int, int], int] = {}
    for s in scores:
        key = (s.f, s.c, s.q)
        counts[key] = counts.get(key, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Distribution({f"({f},{c},{q})": n for (f, c, q), n in ordered}, len(scores))


def min_score_distribution(scores: Sequence[ScoreTriple]) -> Distribution:
    """Distribution of min(f, c, q): the per-sample final score."""
    _require(scores)
    counts = {label: 0 for label in SCORE_LABELS}
    for s in scores:
        counts[str(min(s.f, s.c, s.q))] += 1
    return Distribution(counts, len(scores))


def category_distribution(tasks: Sequence[TaskKind]) -> tuple[Distribution, Distribution]:
    """Relative frequencies per task (23 bins, taxonomy order) and per category."""
    _require(tasks)
    task_counts = {t.id: 0 for t in TASKS}
    category_counts = {c.value: 0 for c in Category}
    for task in tasks:
        task_counts[task.id] += 1
        category_counts[task.category.value] += 1
    return (
        Distribution(task_counts, len(tasks)),
        Distribution(category_counts, len(tasks)),
    )


def aspect_ratio_label(width: int, height: int) -> str:
    """width/height rounded half-up at 2 decimals, e.g. 4032x3024 -> "1.33"."""
    ratio = round_half_up(Fraction(width, height), 2)
    scaled = ratio * 100
    units = scaled.numerator // scaled.denominator
    return f"{units // 100}.{units % 100:02d}"


def aspect_ratio_table(dimensions: Sequence[tuple[int, int]]) -> Distribution:
    """Distribution over rounded width/height ratio bins, ascending by ratio."""
    _require(dimensions)
    counts: dict[str, int] = {}
    for width, height in dimensions:
        label = aspect_ratio_label(width, height)
        counts[label] = counts.get(label, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: float(kv[0]))
    return Distribution(dict(ordered), len(dimensions))


Extractor = Callable[[str, str], list[str]]

_ARTICLES = re.compile(r"^(?:the|a|an|all the|all|both|every|each|some)\s+", re.IGNORECASE)
_TRAILING = re.compile(
    r"\s+(?:in|on|at|from|under|behind|beside|near|next to|to the left|to the right|"
    r"with|wearing|that|which|who)\b.*$",
    re.IGNORECASE,
)

# verb -> tasks it fronts; the captured object phrase is the target entity
_VERB_RULES: list[tuple[re.Pattern, tuple[str, ...]]] = [
    (re.compile(r"\b(?:remove|erase|delete)\s+(.+?)[.!?]?$", re.IGNORECASE),
     ("object_removal", "count_change")),
    (re.compile(r"\b(?:add|insert|draw)\s+(.+?)[.!?]?$", re.IGNORECASE),
     ("object_addition", "count_change", "compositional_editing")),
    (re.compile(r"\breplace\s+.+?\s+with\s+(.+?)[.!?]?$", re.IGNORECASE),
     ("object_replacement",)),
    (re.compile(r"\b(?:extract)\s+(.+?)[.!?]?$", re.IGNORECASE),
     ("part_extraction",)),
]

_COLOR_RULE = re.compile(r"\b(?:to|into)\s+([a-z][a-z -]*?)[.!?]?$", re.IGNORECASE)
_QUOTED_RULE = re.compile(r'"([^"]+)"')


def default_extractor(task_id: str, instruction: str) -> list[str]:
    """Rule-based target-entity extraction.

    A lightweight stand-in for linguistic parsing: per-task patterns pull the
    object of the editing verb (removal/addition/replacement), the target
    color or material after "to"/"into", or the replacement text in quotes.
    Unmatched instructions yield no entities.
    """
    text = instruction.strip()
    if task_id in ("color_change", "material_change"):
        m = _COLOR_RULE.search(text)
        return [_clean_entity(m.group(1))] if m else []
    if task_id.endswith("_text"):
        quoted = _QUOTED_RULE.findall(text)
        return [quoted[-1]] if quoted else []
    for pattern, tasks in _VERB_RULES:
        if task_id in tasks:
            m = pattern.search(text)
            if m:
                return [_clean_entity(m.group(1))]
            return []
    # fallback: last quoted span, else the trailing noun phrase after the verb
    quoted = _QUOTED_RULE.findall(text)
    if quoted:
        return [quoted[-1]]
    return []


def _clean_entity(phrase: str) -> str:
    phrase = phrase.strip().rstrip(".!?").strip()
    phrase = _ARTICLES.sub("", phrase)
    phrase = _TRAILING.sub("", phrase)
    return phrase.strip().lower()


@dataclass(frozen=True)
class ConcentrationRow:
    top1: float
    top5: float
    top10: float
    top20: float
    vocab: int
    total_entities: int

    def to_json(self) -> dict:
        return {
            "top1": round(self.top1, 4),
            "top5": round(self.top5, 4),
            "top10": round(self.top10, 4),
            "top20": round(self.top20, 4),
            "vocab": self.vocab,
            "total_entities": self.total_entities,
        }


@dataclass(frozen=True)
class ConcentrationReport:
    rows: dict[str, ConcentrationRow]

    def to_json(self) -> dict:
        return {task_id: row.to_json() for task_id, row in self.rows.items()}


def concentration_from_entities(entities: Sequence[str]) -> ConcentrationRow:
    if not entities:
        return ConcentrationRow(0.0, 0.0, 0.0, 0.0, 0, 0)
    counts: dict[str, int] = {}
    for e in entities:
        counts[e] = counts.get(e, 0) + 1
    ordered = sorted(counts.values(), reverse=True)
    total = len(entities)

    def top(k: int) -> float:
        return float(Fraction(sum(ordered[:k]) * 100, total))

    return ConcentrationRow(top(1), top(5), top(10), top(20), len(counts), total)


def entity_concentration(
    instructions_by_task: Mapping[str, Iterable[str]],
    extractor: Optional[Extractor] = None,
) -> ConcentrationReport:
    """Top-K cumulative entity share and vocabulary size per task."""
    if not instructions_by_task:
        raise EmptyInput("no instructions grouped by task")
    extract = extractor or default_extractor
    rows = {}
    for task_id, instructions in instructions_by_task.items():
        entities: list[str] = []
        for instruction in instructions:
            entities.extend(e for e in extract(task_id, instruction) if e)
        rows[task_id] = concentration_from_entities(entities)
    return ConcentrationReport(rows)
