"""Task-aware judging, the 3/2/2 keep rule, and judge-consistency metrics."""

from __future__ import annotations

from dataclasses import dataclass

from .blobstore import BlobStore
from .errors import LengthMismatch, ParseError
from .gateway import ChatRequest, Gateway
from .judge_prompts import DIMENSIONS, JudgePromptBank
from .parsers import parse_single_integer_score
from .records import ScoreTriple, TripletRecord, keep_scores
from .router import derive_seed

DEFAULT_JUDGE_MAX_RETRIES = 2

KEEP = "keep"
DROP = "drop"

_CORRECTIVE = (
    "\n\nReminder (attempt {attempt}): your previous reply was rejected "
    "({reason}). Output only a single integer score in {{1,2,3}}."
)


def filter_rule(scores: ScoreTriple) -> str:
    """Keep iff instruction following is perfect and the other two are at least 2."""
    return KEEP if keep_scores(scores) else DROP


def judge(
    gateway: Gateway,
    endpoint: str,
    bank: JudgePromptBank,
    triplet: TripletRecord,
    blobs: BlobStore,
    max_retries: int = DEFAULT_JUDGE_MAX_RETRIES,
    temperature: float = 0.2,
    base_seed: int = 0,
    strict: bool = False,
) -> ScoreTriple:
    """Score one edited triplet on all three dimensions.

    Each dimension is an independent chat call carrying the before image, the
    after image and the instruction, judged with the task family's dimension
    prompt. An unparseable dimension after the retry budget fails the triplet.
    """
    if triplet.edited_blob is None:
        raise ValueError(f"triplet {triplet.id} has no edited image to judge")
    values: dict[str, int] = {}
    for dim in DIMENSIONS:
        system_prompt = bank.prompt(triplet.task, dim)
        last: ParseError | None = None
        for attempt in range(max_retries + 1):
            user_text = f"Editing instruction: {triplet.instruction}"
            if attempt > 0 and last is not None:
                user_text += _CORRECTIVE.format(attempt=attempt + 1, reason=last.reason)
            reply = gateway.chat(
                endpoint,
                ChatRequest(
                    system_prompt=system_prompt,
                    user_text=user_text,
                    images=(triplet.source_id, triplet.edited_blob),
                    temperature=temperature,
                    seed=derive_seed(base_seed, triplet.id, "judge", dim, attempt),
                ),
                agent_role=f"judge_{dim}",
                task=triplet.task.id,
            )
            try:
                values[dim] = parse_single_integer_score(reply, strict=strict)
                last = None
                break
            except ParseError as exc:
                last = exc
        if last is not None:
            raise last
    return ScoreTriple(values["f"], values["c"], values["q"])


@dataclass(frozen=True)
class ConsistencyReport:
    """Per-dimension exact agreement rate and mean absolute error."""

    accuracy: dict[str, float]
    mae: dict[str, float]
    samples: int

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "accuracy": {d: self.accuracy[d] for d in DIMENSIONS},
            "mae": {d: self.mae[d] for d in DIMENSIONS},
        }


def consistency(candidate: list[ScoreTriple], reference: list[ScoreTriple]) -> ConsistencyReport:
    """Agreement between a candidate judge and a reference, pairwise aligned."""
    if len(candidate) != len(reference):
        raise LengthMismatch(f"candidate has {len(candidate)} samples, reference {len(reference)}")
    if not candidate:
        raise LengthMismatch("need at least one aligned sample")
    n = len(candidate)
    accuracy = {}
    mae = {}
    for dim in DIMENSIONS:
        cand = [getattr(s, dim) for s in candidate]
        ref = [getattr(s, dim) for s in reference]
        accuracy[dim] = sum(1 for a, b in zip(cand, ref) if a == b) / n
        mae[dim] = sum(abs(a - b) for a, b in zip(cand, ref)) / n
    return ConsistencyReport(accuracy=accuracy, mae=mae, samples=n)
