"""Record types and the triplet lifecycle state machine.

All record types are frozen dataclasses: they are safe to share between
worker threads, and every lifecycle step returns a new record instead of
mutating in place. JSON field names are lower_snake_case and stable; the
manifests use these shapes verbatim.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .errors import IllegalTransition
from .taxonomy import TaskKind, task_by_id

ASPECT_NAMES = (
    "Foreground",
    "Midground",
    "Background",
    "Style",
    "Lighting and Atmosphere",
    "Composition and Relationships",
    "Visual Focus and Perspective",
)

ORIGIN_SEED = "seed"
ORIGIN_RETRIEVAL_IMAGE = "retrieval-image"
ORIGIN_RETRIEVAL_TEXT = "retrieval-text"
ORIGIN_SYNTHESIS = "synthesis"
ORIGINS = (ORIGIN_SEED, ORIGIN_RETRIEVAL_IMAGE, ORIGIN_RETRIEVAL_TEXT, ORIGIN_SYNTHESIS)


def content_id(data: bytes) -> str:
    """Content address of raw bytes: SHA-256 hex digest."""
    return hashlib.sha256(data).hexdigest()


def stub_id(source_id: str, task_id: str, index: int = 0) -> str:
    """Deterministic triplet id; re-running fan-out reproduces it exactly."""
    key = f"{source_id}\x1f{task_id}" if index == 0 else f"{source_id}\x1f{task_id}\x1f{index}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ScoreTriple:
    """Judge scores: instruction following, editing consistency, generation quality."""

    f: int
    c: int
    q: int

    def __post_init__(self):
        for dim, value in (("f", self.f), ("c", self.c), ("q", self.q)):
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 3:
                raise ValueError(f"score {dim} must be an integer in [1,3], got {value!r}")

    def to_json(self) -> dict[str, int]:
        return {"f": self.f, "c": self.c, "q": self.q}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ScoreTriple":
        return cls(int(obj["f"]), int(obj["c"]), int(obj["q"]))


@dataclass(frozen=True)
class DetailedCaption:
    """Structured caption: the 7 canonical aspects, each with numbered elements."""

    aspects: dict[str, tuple[str, ...]]

    def __post_init__(self):
        missing = [a for a in ASPECT_NAMES if a not in self.aspects]
        if missing:
            raise ValueError(f"detailed caption missing aspects: {missing}")
        extra = [a for a in self.aspects if a not in ASPECT_NAMES]
        if extra:
            raise ValueError(f"detailed caption has unknown aspects: {extra}")
        for name, elements in self.aspects.items():
            if len(elements) < 1:
                raise ValueError(f"aspect {name!r} has no elements")

    def with_element(self, aspect: str, index: int, new_element: str) -> "DetailedCaption":
        """Copy with one element swapped (attribute-swap semantics)."""
        elements = list(self.aspects[aspect])
        elements[index] = new_element  # IndexError / KeyError signal a caller bug
        updated = {a: (tuple(elements) if a == aspect else v) for a, v in self.aspects.items()}
        return DetailedCaption(updated)

    def to_json(self) -> dict[str, Any]:
        return {"aspects": {a: list(self.aspects[a]) for a in ASPECT_NAMES}}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "DetailedCaption":
        return cls({a: tuple(v) for a, v in obj["aspects"].items()})


@dataclass(frozen=True)
class SourceRecord:
    """A curated source image in the pool."""

    id: str
    width: int
    height: int
    origin: str
    phash: int
    parent_id: Optional[str] = None
    caption: Optional[str] = None
    detailed_caption: Optional[DetailedCaption] = None

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"dimensions must be positive, got {self.width}x{self.height}")
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown origin {self.origin!r}")
        if self.origin == ORIGIN_SYNTHESIS and not self.parent_id:
            raise ValueError("synthesis records must reference a parent record")

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "width": self.width,
            "height": self.height,
            "origin": self.origin,
            "phash": f"{self.phash:016x}",
        }
        if self.parent_id is not None:
            out["parent_id"] = self.parent_id
        if self.caption is not None:
            out["caption"] = self.caption
        if self.detailed_caption is not None:
            out["detailed_caption"] = self.detailed_caption.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "SourceRecord":
        dc = obj.get("detailed_caption")
        return cls(
            id=obj["id"],
            width=int(obj["width"]),
            height=int(obj["height"]),
            origin=obj["origin"],
            phash=int(obj["phash"], 16),
            parent_id=obj.get("parent_id"),
            caption=obj.get("caption"),
            detailed_caption=DetailedCaption.from_json(dc) if dc else None,
        )


@dataclass(frozen=True)
class OcrBlock:
    """One detected text region: content, confidence, bounding polygon."""

    text: str
    confidence: float
    polygon: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")
        if len(self.polygon) < 3:
            raise ValueError("polygon needs at least 3 vertices")

    def to_json(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "confidence": self.confidence,
            "polygon": [[float(x), float(y)] for x, y in self.polygon],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "OcrBlock":
        return cls(
            text=obj["text"],
            confidence=float(obj["confidence"]),
            polygon=tuple((float(x), float(y)) for x, y in obj["polygon"]),
        )


# Lifecycle statuses. The graph is routed -> instructed -> edited -> scored
# -> kept|dropped, with failed reachable from every non-terminal status.
STATUS_ROUTED = "routed"
STATUS_INSTRUCTED = "instructed"
STATUS_EDITED = "edited"
STATUS_SCORED = "scored"
STATUS_KEPT = "kept"
STATUS_DROPPED = "dropped"
STATUS_FAILED = "failed"

TERMINAL_STATUSES = (STATUS_KEPT, STATUS_DROPPED, STATUS_FAILED)


@dataclass(frozen=True)
class Instructed:
    instruction: str
    executable_command: Optional[str] = None
    ocr_target: Optional[OcrBlock] = None


@dataclass(frozen=True)
class Edited:
    edited_blob: str


@dataclass(frozen=True)
class Scored:
    scores: ScoreTriple


@dataclass(frozen=True)
class Filtered:
    """Apply the keep rule to the recorded scores."""


@dataclass(frozen=True)
class Failed:
    note: str


StageEvent = Any  # one of the event dataclasses above


def keep_scores(scores: ScoreTriple) -> bool:
    """The 3/2/2 keep rule: perfect instruction following, at least 2 elsewhere."""
    return scores.f == 3 and scores.c >= 2 and scores.q >= 2


@dataclass(frozen=True)
class TripletRecord:
    """One instruction-image-edit sample moving through the pipeline."""

    id: str
    source_id: str
    task: TaskKind
    status: str = STATUS_ROUTED
    instruction: Optional[str] = None
    executable_command: Optional[str] = None
    edited_blob: Optional[str] = None
    ocr_target: Optional[OcrBlock] = None
    scores: Optional[ScoreTriple] = None
    failure: Optional[str] = None

    def __post_init__(self):
        if self.status in (STATUS_SCORED, STATUS_KEPT, STATUS_DROPPED) and self.scores is None:
            raise ValueError(f"status {self.status} requires scores")
        if self.status == STATUS_KEPT and not keep_scores(self.scores):
            raise ValueError(f"kept record violates the 3/2/2 rule: {self.scores}")
        if self.instruction is not None:
            if self.task.is_reasoning and self.executable_command is None:
                raise ValueError("reasoning triplets must carry an executable command")
            if not self.task.is_reasoning and self.executable_command is not None:
                raise ValueError("only reasoning triplets carry an executable command")
            if self.task.is_text_aware and self.ocr_target is None:
                raise ValueError("text-aware triplets must carry an ocr target")

    @property
    def edit_command(self) -> Optional[str]:
        """The text actually sent to the edit model."""
        if self.task.is_reasoning:
            return self.executable_command
        return self.instruction

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "source_id": self.source_id,
            "task": self.task.id,
            "status": self.status,
        }
        if self.instruction is not None:
            out["instruction"] = self.instruction
        if self.executable_command is not None:
            out["executable_command"] = self.executable_command
        if self.edited_blob is not None:
            out["edited_blob"] = self.edited_blob
        if self.ocr_target is not None:
            out["ocr_target"] = self.ocr_target.to_json()
        if self.scores is not None:
            out["scores"] = self.scores.to_json()
        if self.failure is not None:
            out["failure"] = self.failure
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "TripletRecord":
        return cls(
            id=obj["id"],
            source_id=obj["source_id"],
            task=task_by_id(obj["task"]),
            status=obj["status"],
            instruction=obj.get("instruction"),
            executable_command=obj.get("executable_command"),
            edited_blob=obj.get("edited_blob"),
            ocr_target=OcrBlock.from_json(obj["ocr_target"]) if obj.get("ocr_target") else None,
            scores=ScoreTriple.from_json(obj["scores"]) if obj.get("scores") else None,
            failure=obj.get("failure"),
        )


_LEGAL = {
    (STATUS_ROUTED, Instructed),
    (STATUS_INSTRUCTED, Edited),
    (STATUS_EDITED, Scored),
    (STATUS_SCORED, Filtered),
}


def lifecycle_advance(record: TripletRecord, event: StageEvent) -> TripletRecord:
    """Apply a stage event, returning the updated record.

    Raises IllegalTransition when the event is not legal from the record's
    current status. Failed is a sink: nothing leaves it, but any live status
    may enter it.
    """
    if isinstance(event, Failed):
        if record.status == STATUS_FAILED:
            raise IllegalTransition(record.status, type(event).__name__)
        return replace(record, status=STATUS_FAILED, failure=event.note)

    if (record.status, type(event)) not in _LEGAL:
        raise IllegalTransition(record.status, type(event).__name__)

    if isinstance(event, Instructed):
        return replace(
            record,
            status=STATUS_INSTRUCTED,
            instruction=event.instruction,
            executable_command=event.executable_command,
            ocr_target=event.ocr_target,
        )
    if isinstance(event, Edited):
        return replace(record, status=STATUS_EDITED, edited_blob=event.edited_blob)
    if isinstance(event, Scored):
        return replace(record, status=STATUS_SCORED, scores=event.scores)
    if isinstance(event, Filtered):
        target = STATUS_KEPT if keep_scores(record.scores) else STATUS_DROPPED
        return replace(record, status=target)
    raise IllegalTransition(record.status, type(event).__name__)


@dataclass(frozen=True)
class Verdict:
    applicable: bool
    rationale: str = ""


@dataclass(frozen=True)
class RoutingDecision:
    """Per-source router output: one verdict for each of the 23 tasks."""

    source_id: str
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    def __post_init__(self):
        from .taxonomy import TASKS  # local import to avoid cycle at module load

        expected = [t.id for t in TASKS]
        if list(self.verdicts.keys()) != expected:
            raise ValueError("verdicts must cover all 23 tasks in taxonomy order")

    def applicable_tasks(self) -> list[TaskKind]:
        return [task_by_id(tid) for tid, v in self.verdicts.items() if v.applicable]

    def to_json(self) -> dict[str, Any]:
        return {
            "source_id": self.source_id,
            "verdicts": {
                tid: {"applicable": v.applicable, "rationale": v.rationale}
                for tid, v in self.verdicts.items()
            },
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "RoutingDecision":
        return cls(
            source_id=obj["source_id"],
            verdicts={
                tid: Verdict(bool(v["applicable"]), v.get("rationale", ""))
                for tid, v in obj["verdicts"].items()
            },
        )
