"""Per-task instruction generation and edited-image production.

Three workflows: plain instruction agents, the text-aware OCR workflow (mask
plus glyph overlay for a text-specialist endpoint) and the reasoning workflow
(complex user query decoupled from the rewritten executable command).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .blobstore import BlobStore
from .errors import ConfigError, ParseError
from .gateway import ChatRequest, Gateway
from .parsers import parse_single_sentence, extract_text_replacement
from .prompts import SYSTEM_INSTRUCTION_AGENT, PromptBank
from .records import OcrBlock, SourceRecord
from .router import derive_seed
from .taxonomy import TaskKind
from .textwork import TextEditAssets, filter_blocks, prepare_text_edit

DEFAULT_GEN_MAX_RETRIES = 2

_CORRECTIVE = (
    "\n\nReminder (attempt {attempt}): your previous reply was rejected "
    "({reason}). Reply with exactly one sentence and nothing else."
)


@dataclass(frozen=True)
class EditJob:
    """One resolved edit request, ready for an image-edit endpoint."""

    triplet_id: str
    command: str
    endpoint_name: str
    source_blob: str
    task_id: str
    seed: int = 0
    mask_blob: Optional[str] = None
    overlay_blob: Optional[str] = None

    def __post_init__(self):
        has_mask = self.mask_blob is not None
        has_overlay = self.overlay_blob is not None
        if has_mask != has_overlay:
            raise ValueError("text jobs carry both auxiliary blobs or none")


@dataclass(frozen=True)
class EditEndpointMap:
    """Task to edit-endpoint resolution: text tasks go to the text specialist,
    everything else to the default, with optional per-task overrides."""

    default: Optional[str] = None
    text: Optional[str] = None
    overrides: dict[str, str] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.overrides is None:
            object.__setattr__(self, "overrides", {})

    def resolve(self, task: TaskKind) -> str:
        if task.id in self.overrides:
            return self.overrides[task.id]
        if task.is_text_aware:
            if self.text is None:
                raise ConfigError(f"task {task.id} needs a text edit endpoint, none configured")
            return self.text
        if self.default is None:
            raise ConfigError(f"task {task.id} has no mapped edit endpoint and no default")
        return self.default


def _one_sentence_chat(
    gateway: Gateway,
    endpoint: str,
    system_prompt: str,
    user_text: str,
    images: tuple[str, ...],
    agent_role: str,
    task_id: str,
    max_retries: int,
    temperature: float,
    seed_key: tuple,
    max_chars: int,
) -> str:
    """Chat call validated as a single sentence, retried with a corrective suffix."""
    last: ParseError | None = None
    for attempt in range(max_retries + 1):
        prompt = user_text
        if attempt > 0 and last is not None:
            prompt += _CORRECTIVE.format(attempt=attempt + 1, reason=last.reason)
        reply = gateway.chat(
            endpoint,
            ChatRequest(
                system_prompt=system_prompt,
                user_text=prompt,
                images=images,
                temperature=temperature,
                seed=derive_seed(*seed_key, attempt),
            ),
            agent_role=agent_role,
            task=task_id,
        )
        try:
            return parse_single_sentence(reply, max_chars=max_chars)
        except ParseError as exc:
            last = exc
    raise last


def gen_instruction(
    gateway: Gateway,
    endpoint: str,
    bank: PromptBank,
    task: TaskKind,
    source: SourceRecord,
    max_retries: int = DEFAULT_GEN_MAX_RETRIES,
    temperature: float = 0.2,
    base_seed: int = 0,
    max_chars: int = 400,
) -> str:
    """Single-sentence instruction for a standard (non-text, non-reasoning) task."""
    if task.is_text_aware or task.is_reasoning:
        raise ValueError(f"task {task.id} uses a dedicated workflow")
    return _one_sentence_chat(
        gateway, endpoint, SYSTEM_INSTRUCTION_AGENT,
        bank.instruction_prompt(task), (source.id,),
        "instruction", task.id, max_retries, temperature,
        (base_seed, source.id, task.id, "instruction"), max_chars,
    )


def text_workflow(
    gateway: Gateway,
    endpoint: str,
    bank: PromptBank,
    blobs: BlobStore,
    task: TaskKind,
    source: SourceRecord,
    ocr_blocks: Sequence[OcrBlock],
    edit_endpoints: EditEndpointMap,
    triplet_id: str,
    min_conf: float = 0.9,
    min_area_px: float = 400.0,
    max_retries: int = DEFAULT_GEN_MAX_RETRIES,
    temperature: float = 0.2,
    base_seed: int = 0,
    max_chars: int = 400,
) -> tuple[str, TextEditAssets, EditJob]:
    """OCR-driven text editing: pick a block, name old and new text, emit the
    mask and glyph overlay for the text-specialist endpoint."""
    if not task.is_text_aware:
        raise ValueError(f"task {task.id} is not text-aware")
    candidates = filter_blocks(ocr_blocks, source.width, source.height,
                               min_conf=min_conf, min_area_px=min_area_px)

    last: ParseError | None = None
    for attempt in range(max_retries + 1):
        prompt = bank.instruction_prompt(task, ocr_blocks=candidates)
        if attempt > 0 and last is not None:
            prompt += _CORRECTIVE.format(attempt=attempt + 1, reason=last.reason)
        reply = gateway.chat(
            endpoint,
            ChatRequest(
                system_prompt=SYSTEM_INSTRUCTION_AGENT,
                user_text=prompt,
                images=(source.id,),
                temperature=temperature,
                seed=derive_seed(base_seed, source.id, task.id, "text_instruction", attempt),
            ),
            agent_role="text_instruction",
            task=task.id,
        )
        try:
            instruction = parse_single_sentence(reply, max_chars=max_chars)
            old, new = extract_text_replacement(instruction)
            assets = prepare_text_edit(candidates, old, new, source.width, source.height)
        except ParseError as exc:
            last = exc
            continue
        mask_ref = blobs.put(assets.mask_png)
        overlay_ref = blobs.put(assets.overlay_png)
        job = EditJob(
            triplet_id=triplet_id,
            command=instruction,
            endpoint_name=edit_endpoints.resolve(task),
            source_blob=source.id,
            task_id=task.id,
            seed=derive_seed(base_seed, triplet_id, "edit"),
            mask_blob=mask_ref,
            overlay_blob=overlay_ref,
        )
        return instruction, assets, job
    raise last


def reasoning_workflow(
    gateway: Gateway,
    endpoint: str,
    bank: PromptBank,
    task: TaskKind,
    source: SourceRecord,
    max_retries: int = DEFAULT_GEN_MAX_RETRIES,
    temperature: float = 0.2,
    base_seed: int = 0,
    max_chars: int = 400,
) -> tuple[str, str]:
    """Instruction decoupling: the task agent writes the reasoning-rich user
    query, the rewriter distills the executable command. Edits always use the
    command; the query is what the dataset stores as the instruction."""
    if not task.is_reasoning:
        raise ValueError(f"task {task.id} is not a reasoning task")
    query = _one_sentence_chat(
        gateway, endpoint, SYSTEM_INSTRUCTION_AGENT,
        bank.instruction_prompt(task), (source.id,),
        "reasoning_query", task.id, max_retries, temperature,
        (base_seed, source.id, task.id, "query"), max_chars,
    )
    command = _one_sentence_chat(
        gateway, endpoint, SYSTEM_INSTRUCTION_AGENT,
        bank.rewriter_prompt(query), (source.id,),
        "rewriter", task.id, max_retries, temperature,
        (base_seed, source.id, task.id, "rewrite"), max_chars,
    )
    return query, command


def build_edit_job(
    triplet_id: str,
    task: TaskKind,
    source_blob: str,
    command: str,
    edit_endpoints: EditEndpointMap,
    base_seed: int = 0,
) -> EditJob:
    return EditJob(
        triplet_id=triplet_id,
        command=command,
        endpoint_name=edit_endpoints.resolve(task),
        source_blob=source_blob,
        task_id=task.id,
        seed=derive_seed(base_seed, triplet_id, "edit"),
    )


def dispatch_edit(gateway: Gateway, job: EditJob) -> str:
    """Send the job to its edit endpoint; returns the edited blob address.

    Content-addressed inputs and a fixed seed make repeat dispatches of the
    same job land on the same blob.
    """
    extras = None
    if job.mask_blob is not None:
        extras = {"mask": job.mask_blob, "overlay": job.overlay_blob}
    return gateway.edit_image(
        job.endpoint_name,
        job.source_blob,
        job.command,
        seed=job.seed,
        extras=extras,
        task=job.task_id,
    )
