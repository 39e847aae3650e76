"""Stage composition, checkpoint/resume, failure policy.

Every stage runs in two phases: model-bound work fans out across a worker
pool, then results commit sequentially in a deterministic order (sorted
pending order). Only the commit phase touches manifests, so interrupted runs
resume to the same terminal state an uninterrupted run reaches, and record
manifests are byte-stable across runs under the mock backend.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from .analytics import (
    aspect_ratio_table,
    category_distribution,
    entity_concentration,
    joint_distribution,
    min_score_distribution,
    score_marginals,
)
from .blobstore import BlobStore
from .config import STAGES, RunConfig
from .errors import ConfigError, EditForgeError, Unroutable
from .gateway import Gateway, MockBackend, MockScript
from .judge_prompts import JudgePromptBank
from .manifest import (
    STATUS_FAILED,
    STATUS_OK,
    JsonlWriter,
    Ledger,
    dump_line,
    read_jsonl,
)
from .phash import decode_image, phash64
from .prompts import PromptBank
from .records import (
    ORIGIN_RETRIEVAL_IMAGE,
    ORIGIN_RETRIEVAL_TEXT,
    ORIGIN_SEED,
    STATUS_DROPPED,
    STATUS_EDITED,
    STATUS_KEPT,
    STATUS_ROUTED,
    STATUS_SCORED,
    Edited,
    Failed,
    Filtered,
    Instructed,
    RoutingDecision,
    Scored,
    SourceRecord,
    TripletRecord,
    content_id,
    lifecycle_advance,
)
from .router import derive_seed, fan_out, route, unroutable_decision
from .sourcepool import (
    CaptionAgents,
    DedupIndex,
    FixtureRetrievalProvider,
    prefilter,
    synthesize_variant,
)
from .synthesis import build_edit_job, dispatch_edit, gen_instruction, reasoning_workflow, text_workflow
from .textwork import FixtureOcrProvider
from .verification import judge

logger = logging.getLogger(__name__)

STAGE_MARKER = "__stage__"


class SimulatedCrash(Exception):
    """Raised by the fault-injection hook; escapes the stage like a kill."""


@dataclass
class StageReport:
    stage: str
    processed: int = 0
    succeeded: int = 0
    failed: int = 0
    skipped: int = 0

    def to_json(self) -> dict[str, int | str]:
        return {
            "stage": self.stage,
            "processed": self.processed,
            "succeeded": self.succeeded,
            "failed": self.failed,
            "skipped": self.skipped,
        }


@dataclass
class PipelineReport:
    stages: list[StageReport] = field(default_factory=list)
    kept: int = 0
    dropped: int = 0

    @property
    def had_failures(self) -> bool:
        return any(r.failed > 0 for r in self.stages)

    def to_json(self) -> dict[str, Any]:
        return {
            "stages": [r.to_json() for r in self.stages],
            "kept": self.kept,
            "dropped": self.dropped,
        }


class PipelineContext:
    """Shared handles for one run: config, blob store, gateway, prompt banks."""

    def __init__(self, cfg: RunConfig):
        cfg.validate()
        self.cfg = cfg
        self.paths = cfg.paths
        self.paths.root.mkdir(parents=True, exist_ok=True)
        self.blobs = BlobStore(self.paths.blobs)
        mock_backend = None
        if cfg.mock_script is not None:
            mock_backend = MockBackend(MockScript.load(str(cfg.mock_script)))
        self.gateway = Gateway(cfg.endpoints, blobs=self.blobs, mock_backend=mock_backend)
        self.prompt_bank = PromptBank()
        self.judge_bank = JudgePromptBank()
        self.ledger = Ledger(self.paths.ledger)
        self.ocr_provider = FixtureOcrProvider(cfg.ocr_sidecar_dir) if cfg.ocr_sidecar_dir else None

    def close(self) -> None:
        self.ledger.close()


def load_pool(path: Path) -> dict[str, SourceRecord]:
    """Pool records in admission order, first line wins per id."""
    pool: dict[str, SourceRecord] = {}
    for obj in read_jsonl(path):
        record = SourceRecord.from_json(obj)
        if record.id not in pool:
            pool[record.id] = record
    return pool


def load_triplets(path: Path) -> dict[str, TripletRecord]:
    """Latest state per triplet id."""
    state: dict[str, TripletRecord] = {}
    for obj in read_jsonl(path):
        record = TripletRecord.from_json(obj)
        state[record.id] = record
    return state


def _require_upstream(ctx: PipelineContext, stage: str) -> None:
    upstream = {
        "expand": "ingest",
        "route": "ingest",
        "synthesize": "route",
        "verify": "synthesize",
        "filter": "verify",
        "stats": "filter",
    }.get(stage)
    if stage == "ingest":
        if ctx.cfg.source_dir is None or not Path(ctx.cfg.source_dir).is_dir():
            raise ConfigError(f"ingest needs an existing source directory, got {ctx.cfg.source_dir}")
        return
    if upstream and ctx.ledger.terminal(upstream, STAGE_MARKER) is None:
        raise ConfigError(f"missing-upstream: stage {upstream!r} has not completed before {stage!r}")


@dataclass
class _Job:
    record_id: str
    compute: Callable[[], Any]
    commit: Callable[[Any], tuple[str, Optional[str]]]
    """commit returns (status, error_note); status is ok|failed."""


def _run_jobs(ctx: PipelineContext, stage: str, jobs: list[_Job], report: StageReport) -> None:
    """Fan out compute across workers, then commit sequentially in job order."""
    if not jobs:
        return
    fault = ctx.cfg.fault_injection
    crash_after = fault.after_commits if fault and fault.stage == stage else None

    results: dict[str, Any] = {}
    errors: dict[str, str] = {}

    def _compute(job: _Job) -> None:
        try:
            results[job.record_id] = job.compute()
        except SimulatedCrash:
            raise
        except Exception as exc:  # per-record failure, never aborts the stage
            errors[job.record_id] = f"{type(exc).__name__}({exc})"

    width = max(1, min(ctx.cfg.workers, len(jobs)))
    if width == 1:
        for job in jobs:
            _compute(job)
    else:
        with ThreadPoolExecutor(max_workers=width, thread_name_prefix=f"editforge-{stage}") as pool:
            list(pool.map(_compute, jobs))

    commits = 0
    for job in jobs:
        if crash_after is not None and commits >= crash_after:
            raise SimulatedCrash(f"fault injection tripped in {stage} after {commits} commits")
        report.processed += 1
        if job.record_id in errors:
            note = errors[job.record_id]
            ctx.ledger.record(stage, job.record_id, STATUS_FAILED, error=note)
            report.failed += 1
        else:
            status, note = job.commit(results[job.record_id])
            ctx.ledger.record(stage, job.record_id, status, error=note)
            if status == STATUS_OK:
                report.succeeded += 1
            else:
                report.failed += 1
        commits += 1


def _finish_stage(ctx: PipelineContext, stage: str) -> None:
    ctx.ledger.record(stage, STAGE_MARKER, STATUS_OK)


# ---------------------------------------------------------------- ingest


def stage_ingest(ctx: PipelineContext) -> StageReport:
    report = StageReport("ingest")
    cfg = ctx.cfg
    src = Path(cfg.source_dir)
    files = sorted(p for p in src.iterdir() if p.is_file())

    index = DedupIndex(cfg.dedup_threshold)
    pool = load_pool(ctx.paths.pool)
    for record in pool.values():
        index.admit(record.phash, record.id)

    pool_writer = JsonlWriter(ctx.paths.pool)
    jobs: list[_Job] = []
    seen: set[str] = set()
    for path in files:
        data = path.read_bytes()
        record_id = content_id(data)
        if record_id in seen:
            continue
        seen.add(record_id)
        if ctx.ledger.terminal("ingest", record_id) is not None:
            report.skipped += 1
            continue
        jobs.append(_Job(
            record_id=record_id,
            compute=_make_ingest_compute(ctx, record_id, data),
            commit=_make_ingest_commit(index, pool, pool_writer),
        ))

    try:
        _run_jobs(ctx, "ingest", jobs, report)
        index.save(ctx.paths.dedup_index)
        _finish_stage(ctx, "ingest")
    finally:
        pool_writer.close()
    return report


def _make_ingest_compute(ctx: PipelineContext, record_id: str, data: bytes):
    def compute() -> SourceRecord:
        img = decode_image(data)
        verdict = prefilter(img.width, img.height)
        if not verdict.accepted:
            raise EditForgeError(f"prefilter({verdict.reason}): {img.width}x{img.height}")
        ctx.blobs.put(data)
        return SourceRecord(
            id=record_id,
            width=img.width,
            height=img.height,
            origin=ORIGIN_SEED,
            phash=phash64(img),
        )
    return compute


def _make_ingest_commit(index: DedupIndex, pool: dict, pool_writer: JsonlWriter):
    def commit(record: SourceRecord) -> tuple[str, Optional[str]]:
        if record.id in pool:
            return STATUS_OK, None
        if not index.admit(record.phash, record.id):
            near = index.nearest_within(record.phash)
            return STATUS_FAILED, f"dedup(near-duplicate of {near[1] if near else 'unknown'})"
        pool_writer.append(record.to_json())
        pool[record.id] = record
        return STATUS_OK, None
    return commit


# ---------------------------------------------------------------- expand


def stage_expand(ctx: PipelineContext) -> StageReport:
    report = StageReport("expand")
    cfg = ctx.cfg
    pool = load_pool(ctx.paths.pool)
    index = DedupIndex(cfg.dedup_threshold)
    for record in pool.values():
        index.admit(record.phash, record.id)

    parents = [r for r in pool.values() if r.origin == ORIGIN_SEED]
    captions = CaptionAgents(ctx.gateway, cfg.caption_endpoint, ctx.prompt_bank,
                             temperature=cfg.temperature)

    branches: list[tuple[str, str, Callable[[SourceRecord], list[SourceRecord]]]] = []
    if cfg.variants > 0:
        if cfg.generate_endpoint is None:
            raise ConfigError("expand with variants needs an image-generate endpoint")
        branches.append(("variants", "synthesis", _make_variant_branch(ctx, captions)))
    if cfg.retrieval_text_fixtures is not None:
        provider = FixtureRetrievalProvider(cfg.retrieval_text_fixtures)
        branches.append(("retrieval-text", ORIGIN_RETRIEVAL_TEXT,
                         _make_retrieval_branch(ctx, captions, provider, ORIGIN_RETRIEVAL_TEXT)))
    if cfg.retrieval_image_fixtures is not None:
        provider = FixtureRetrievalProvider(cfg.retrieval_image_fixtures)
        branches.append(("retrieval-image", ORIGIN_RETRIEVAL_IMAGE,
                         _make_retrieval_branch(ctx, captions, provider, ORIGIN_RETRIEVAL_IMAGE)))

    pool_writer = JsonlWriter(ctx.paths.pool)
    ledgered_candidates: set[str] = set()
    jobs: list[_Job] = []
    for parent in parents:
        for branch_name, _origin, branch_fn in branches:
            job_id = f"{parent.id}#{branch_name}"
            if ctx.ledger.terminal("expand", job_id) is not None:
                report.skipped += 1
                continue
            jobs.append(_Job(
                record_id=job_id,
                compute=_bind(branch_fn, parent),
                commit=_make_expand_commit(ctx, index, pool, pool_writer, ledgered_candidates),
            ))

    try:
        _run_jobs(ctx, "expand", jobs, report)
        index.save(ctx.paths.dedup_index)
        _finish_stage(ctx, "expand")
    finally:
        pool_writer.close()
    return report


def _bind(fn, arg):
    return lambda: fn(arg)


def _make_variant_branch(ctx: PipelineContext, captions: CaptionAgents):
    cfg = ctx.cfg

    def branch(parent: SourceRecord) -> list[SourceRecord]:
        import random

        dc = captions.detailed_caption(parent, seed=derive_seed(cfg.seed, parent.id, "dc"))
        out = []
        for k in range(cfg.variants):
            rng = random.Random(derive_seed(cfg.seed, parent.id, "variant", k))
            aspect = rng.choice(list(dc.aspects.keys()))
            element_index = rng.randrange(len(dc.aspects[aspect]))
            dc_variant = captions.variant_caption(
                dc, aspect, element_index, parent.id,
                seed=derive_seed(cfg.seed, parent.id, "variant-caption", k),
            )
            out.append(synthesize_variant(
                ctx.gateway, cfg.generate_endpoint, ctx.blobs, parent, dc_variant,
                seed=derive_seed(cfg.seed, parent.id, "generate", k),
            ))
        return out

    return branch


def _make_retrieval_branch(ctx: PipelineContext, captions: CaptionAgents,
                           provider: FixtureRetrievalProvider, origin: str):
    cfg = ctx.cfg

    def branch(parent: SourceRecord) -> list[SourceRecord]:
        if origin == ORIGIN_RETRIEVAL_TEXT:
            query = captions.caption(parent, seed=derive_seed(cfg.seed, parent.id, "caption"))
        else:
            query = parent.id
        out = []
        for data in provider.search(query):
            img = decode_image(data)
            ctx.blobs.put(data)
            out.append(SourceRecord(
                id=content_id(data),
                width=img.width,
                height=img.height,
                origin=origin,
                phash=phash64(img),
            ))
        return out

    return branch


def _make_expand_commit(ctx, index: DedupIndex, pool: dict, pool_writer: JsonlWriter,
                        ledgered: set[str]):
    def commit(candidates: list[SourceRecord]) -> tuple[str, Optional[str]]:
        for record in candidates:
            if record.id in pool:
                continue
            verdict = prefilter(record.width, record.height)
            if not verdict.accepted:
                _ledger_candidate(ctx, ledgered, record.id, f"prefilter({verdict.reason})")
                continue
            if not index.admit(record.phash, record.id):
                near = index.nearest_within(record.phash)
                _ledger_candidate(ctx, ledgered, record.id,
                                  f"dedup(near-duplicate of {near[1] if near else 'unknown'})")
                continue
            pool_writer.append(record.to_json())
            pool[record.id] = record
        return STATUS_OK, None
    return commit


def _ledger_candidate(ctx: PipelineContext, ledgered: set[str], record_id: str, note: str) -> None:
    if record_id in ledgered or ctx.ledger.terminal("expand", record_id) is not None:
        return
    ledgered.add(record_id)
    ctx.ledger.record("expand", record_id, STATUS_FAILED, error=note)


# ---------------------------------------------------------------- route


def stage_route(ctx: PipelineContext) -> StageReport:
    report = StageReport("route")
    pool = load_pool(ctx.paths.pool)

    routing_writer = JsonlWriter(ctx.paths.routing)
    triplet_writer = JsonlWriter(ctx.paths.triplets)
    jobs: list[_Job] = []
    for source in pool.values():
        if ctx.ledger.terminal("route", source.id) is not None:
            report.skipped += 1
            continue
        jobs.append(_Job(
            record_id=source.id,
            compute=_make_route_compute(ctx, source),
            commit=_make_route_commit(ctx, routing_writer, triplet_writer, source.id),
        ))

    try:
        _run_jobs(ctx, "route", jobs, report)
        _finish_stage(ctx, "route")
    finally:
        routing_writer.close()
        triplet_writer.close()
    return report


def _make_route_compute(ctx: PipelineContext, source: SourceRecord):
    cfg = ctx.cfg

    def compute() -> RoutingDecision:
        try:
            return route(
                ctx.gateway, cfg.chat_endpoint, ctx.prompt_bank, source,
                max_reparse=cfg.router_max_reparse,
                temperature=cfg.temperature,
                base_seed=cfg.seed,
            )
        except Unroutable:
            return unroutable_decision(source.id)
    return compute


def _make_route_commit(ctx: PipelineContext, routing_writer: JsonlWriter,
                       triplet_writer: JsonlWriter, source_id: str):
    def commit(decision: RoutingDecision) -> tuple[str, Optional[str]]:
        routing_writer.append(decision.to_json())
        stubs = fan_out(decision, quota=ctx.cfg.quota)
        for stub in stubs:
            triplet_writer.append(stub.to_json())
        if not stubs and not any(v.applicable for v in decision.verdicts.values()):
            return STATUS_FAILED, f"Unroutable({source_id})"
        return STATUS_OK, None
    return commit


# ------------------------------------------------------------ synthesize


def stage_synthesize(ctx: PipelineContext) -> StageReport:
    report = StageReport("synthesize")
    cfg = ctx.cfg
    pool = load_pool(ctx.paths.pool)
    state = load_triplets(ctx.paths.triplets)

    pending = sorted(
        (t for t in state.values() if t.status == STATUS_ROUTED),
        key=lambda t: t.id,
    )
    # Resolve every pending task's edit endpoint up front: bad mappings are a
    # configuration problem, not a per-record failure.
    for task in {t.task.id: t.task for t in pending}.values():
        cfg.edit_endpoints.resolve(task)

    triplet_writer = JsonlWriter(ctx.paths.triplets)
    jobs: list[_Job] = []
    for stub in pending:
        if ctx.ledger.terminal("synthesize", stub.id) is not None:
            report.skipped += 1
            continue
        source = pool.get(stub.source_id)
        jobs.append(_Job(
            record_id=stub.id,
            compute=_make_synth_compute(ctx, stub, source),
            commit=_make_record_commit(triplet_writer),
        ))

    try:
        _run_jobs(ctx, "synthesize", jobs, report)
        _finish_stage(ctx, "synthesize")
    finally:
        triplet_writer.close()
    return report


def _make_synth_compute(ctx: PipelineContext, stub: TripletRecord, source: Optional[SourceRecord]):
    cfg = ctx.cfg

    def compute() -> TripletRecord:
        if source is None:
            return lifecycle_advance(stub, Failed(f"MissingSource({stub.source_id})"))
        task = stub.task
        try:
            if task.is_text_aware:
                blocks = ctx.ocr_provider.blocks_for(source.id) if ctx.ocr_provider else []
                instruction, assets, job = text_workflow(
                    ctx.gateway, cfg.chat_endpoint, ctx.prompt_bank, ctx.blobs,
                    task, source, blocks, cfg.edit_endpoints, stub.id,
                    min_conf=cfg.ocr_min_conf, min_area_px=cfg.min_area_px,
                    max_retries=cfg.gen_max_retries, temperature=cfg.temperature,
                    base_seed=cfg.seed, max_chars=cfg.max_instruction_chars,
                )
                record = lifecycle_advance(stub, Instructed(instruction, ocr_target=assets.block))
            elif task.is_reasoning:
                query, command = reasoning_workflow(
                    ctx.gateway, cfg.chat_endpoint, ctx.prompt_bank, task, source,
                    max_retries=cfg.gen_max_retries, temperature=cfg.temperature,
                    base_seed=cfg.seed, max_chars=cfg.max_instruction_chars,
                )
                record = lifecycle_advance(stub, Instructed(query, executable_command=command))
                job = build_edit_job(stub.id, task, source.id, command,
                                     cfg.edit_endpoints, base_seed=cfg.seed)
            else:
                instruction = gen_instruction(
                    ctx.gateway, cfg.chat_endpoint, ctx.prompt_bank, task, source,
                    max_retries=cfg.gen_max_retries, temperature=cfg.temperature,
                    base_seed=cfg.seed, max_chars=cfg.max_instruction_chars,
                )
                record = lifecycle_advance(stub, Instructed(instruction))
                job = build_edit_job(stub.id, task, source.id, instruction,
                                     cfg.edit_endpoints, base_seed=cfg.seed)
            edited_blob = dispatch_edit(ctx.gateway, job)
            return lifecycle_advance(record, Edited(edited_blob))
        except EditForgeError as exc:
            return lifecycle_advance(stub, Failed(f"{type(exc).__name__}({exc})"))

    return compute


def _make_record_commit(writer: JsonlWriter):
    def commit(record: TripletRecord) -> tuple[str, Optional[str]]:
        writer.append(record.to_json())
        if record.status == "failed":
            return STATUS_FAILED, record.failure
        return STATUS_OK, None
    return commit


# ---------------------------------------------------------------- verify


def stage_verify(ctx: PipelineContext) -> StageReport:
    report = StageReport("verify")
    cfg = ctx.cfg
    state = load_triplets(ctx.paths.triplets)
    pending = sorted(
        (t for t in state.values() if t.status == STATUS_EDITED),
        key=lambda t: t.id,
    )

    triplet_writer = JsonlWriter(ctx.paths.triplets)
    score_writer = JsonlWriter(ctx.paths.scores)
    jobs: list[_Job] = []
    for triplet in pending:
        if ctx.ledger.terminal("verify", triplet.id) is not None:
            report.skipped += 1
            continue
        jobs.append(_Job(
            record_id=triplet.id,
            compute=_make_verify_compute(ctx, triplet),
            commit=_make_verify_commit(ctx, triplet_writer, score_writer),
        ))

    try:
        _run_jobs(ctx, "verify", jobs, report)
        _finish_stage(ctx, "verify")
    finally:
        triplet_writer.close()
        score_writer.close()
    return report


def _make_verify_compute(ctx: PipelineContext, triplet: TripletRecord):
    cfg = ctx.cfg

    def compute() -> TripletRecord:
        try:
            scores = judge(
                ctx.gateway, cfg.judge_endpoint, ctx.judge_bank, triplet, ctx.blobs,
                max_retries=cfg.judge_max_retries, temperature=cfg.temperature,
                base_seed=cfg.seed, strict=cfg.strict_score_parse,
            )
            return lifecycle_advance(triplet, Scored(scores))
        except EditForgeError as exc:
            return lifecycle_advance(triplet, Failed(f"{type(exc).__name__}({exc})"))

    return compute


def _make_verify_commit(ctx: PipelineContext, triplet_writer: JsonlWriter, score_writer: JsonlWriter):
    from .prompts import PROMPT_BANK_VERSION

    def commit(record: TripletRecord) -> tuple[str, Optional[str]]:
        triplet_writer.append(record.to_json())
        if record.status == STATUS_SCORED:
            score_writer.append({
                "triplet_id": record.id,
                "f": record.scores.f,
                "c": record.scores.c,
                "q": record.scores.q,
                "judge_endpoint": ctx.cfg.judge_endpoint,
                "prompt_bank_version": ctx.judge_bank.version,
            })
            return STATUS_OK, None
        return STATUS_FAILED, record.failure
    return commit


# ---------------------------------------------------------------- filter


def stage_filter(ctx: PipelineContext) -> StageReport:
    report = StageReport("filter")
    state = load_triplets(ctx.paths.triplets)
    pending = sorted(
        (t for t in state.values() if t.status == STATUS_SCORED),
        key=lambda t: t.id,
    )

    triplet_writer = JsonlWriter(ctx.paths.triplets)
    jobs: list[_Job] = []
    for triplet in pending:
        if ctx.ledger.terminal("filter", triplet.id) is not None:
            report.skipped += 1
            continue
        jobs.append(_Job(
            record_id=triplet.id,
            compute=_bind(lambda t: lifecycle_advance(t, Filtered()), triplet),
            commit=_make_record_commit(triplet_writer),
        ))

    try:
        _run_jobs(ctx, "filter", jobs, report)
    finally:
        triplet_writer.close()

    # Rewrite the partitions from full state: sorted by id, byte-deterministic.
    final = load_triplets(ctx.paths.triplets)
    kept = sorted((t for t in final.values() if t.status == STATUS_KEPT), key=lambda t: t.id)
    dropped = sorted((t for t in final.values() if t.status == STATUS_DROPPED), key=lambda t: t.id)
    _write_partition(ctx.paths.kept, kept)
    _write_partition(ctx.paths.dropped, dropped)
    _finish_stage(ctx, "filter")
    return report


def _write_partition(path: Path, records: list[TripletRecord]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(dump_line(record.to_json()) + "\n")
    tmp.replace(path)


# ----------------------------------------------------------------- stats


def build_stats_document(ctx: PipelineContext) -> dict[str, Any]:
    final = load_triplets(ctx.paths.triplets)
    pool = load_pool(ctx.paths.pool)
    kept = sorted((t for t in final.values() if t.status == STATUS_KEPT), key=lambda t: t.id)
    dropped = sorted((t for t in final.values() if t.status == STATUS_DROPPED), key=lambda t: t.id)
    scored = kept + dropped

    doc: dict[str, Any] = {
        "counts": {
            "sources": len(pool),
            "triplets": len(final),
            "kept": len(kept),
            "dropped": len(dropped),
            "failed": sum(1 for t in final.values() if t.status == "failed"),
        },
    }

    def _score_section(records: list[TripletRecord]) -> Optional[dict[str, Any]]:
        if not records:
            return None
        scores = [t.scores for t in records]
        marginals = score_marginals(scores)
        return {
            "marginals": {dim: marginals[dim].to_json() for dim in ("f", "c", "q")},
            "joint": joint_distribution(scores).to_json(),
            "min_score": min_score_distribution(scores).to_json(),
        }

    doc["scores_pre_filter"] = _score_section(scored)
    doc["scores_kept"] = _score_section(kept)

    if kept:
        task_dist, cat_dist = category_distribution([t.task for t in kept])
        doc["task_distribution"] = task_dist.to_json()
        doc["category_distribution"] = cat_dist.to_json()
        by_task: dict[str, list[str]] = {}
        for t in kept:
            by_task.setdefault(t.task.id, []).append(t.instruction or "")
        doc["entity_concentration"] = entity_concentration(by_task).to_json()
    else:
        doc["task_distribution"] = None
        doc["category_distribution"] = None
        doc["entity_concentration"] = None

    if pool:
        doc["aspect_ratio"] = aspect_ratio_table(
            [(r.width, r.height) for r in pool.values()]
        ).to_json()
    else:
        doc["aspect_ratio"] = None
    return doc


def render_stats_text(doc: dict[str, Any]) -> str:
    """Aligned-column text rendering of the stats document."""
    lines: list[str] = []

    def table(title: str, rows: list[tuple[str, str]]) -> None:
        lines.append(title)
        if rows:
            width = max(len(label) for label, _ in rows)
            for label, value in rows:
                lines.append(f"  {label.ljust(width)}  {value}")
        else:
            lines.append("  (empty)")
        lines.append("")

    counts = doc["counts"]
    table("Counts", [(k, str(v)) for k, v in counts.items()])

    for key, title in (("scores_pre_filter", "Scores (pre-filter)"),
                       ("scores_kept", "Scores (kept)")):
        section = doc.get(key)
        if not section:
            continue
        for dim, dim_name in (("f", "instruction following"),
                              ("c", "editing consistency"),
                              ("q", "generation quality")):
            dist = section["marginals"][dim]
            table(f"{title}: {dim_name}",
                  [(label, f"{pct}%") for label, pct in dist["rendered"].items()])
        table(f"{title}: joint (f,c,q)",
              [(label, f"{pct}%") for label, pct in section["joint"]["rendered"].items()])
        table(f"{title}: min of three",
              [(label, f"{pct}%") for label, pct in section["min_score"]["rendered"].items()])

    if doc.get("task_distribution"):
        table("Task distribution",
              [(label, f"{pct}%") for label, pct in doc["task_distribution"]["rendered"].items()])
        table("Category distribution",
              [(label, f"{pct}%") for label, pct in doc["category_distribution"]["rendered"].items()])
    if doc.get("aspect_ratio"):
        table("Aspect ratio",
              [(label, f"{pct}%") for label, pct in doc["aspect_ratio"]["rendered"].items()])
    if doc.get("entity_concentration"):
        rows = []
        for task_id, row in doc["entity_concentration"].items():
            rows.append((task_id,
                         f"top1 {row['top1']:.2f}%  top5 {row['top5']:.2f}%  "
                         f"top10 {row['top10']:.2f}%  top20 {row['top20']:.2f}%  "
                         f"vocab {row['vocab']}"))
        table("Entity concentration", rows)
    return "\n".join(lines)


def stage_stats(ctx: PipelineContext) -> StageReport:
    report = StageReport("stats")
    if ctx.ledger.terminal("stats", "report") is not None:
        report.skipped = 1
        return report
    report.processed = 1
    doc = build_stats_document(ctx)
    ctx.paths.stats_json.write_text(
        json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    ctx.paths.stats_txt.write_text(render_stats_text(doc) + "\n", encoding="utf-8")
    if ctx.cfg.render_figures:
        from .figures import render_all_figures

        render_all_figures(doc, ctx.paths.figures_dir)
    ctx.ledger.record("stats", "report", STATUS_OK)
    report.succeeded = 1
    _finish_stage(ctx, "stats")
    return report


# ------------------------------------------------------------------ glue


_STAGE_FNS = {
    "ingest": stage_ingest,
    "expand": stage_expand,
    "route": stage_route,
    "synthesize": stage_synthesize,
    "verify": stage_verify,
    "filter": stage_filter,
    "stats": stage_stats,
}


def run_stage(ctx: PipelineContext, stage: str, retry_failed: bool = False) -> StageReport:
    if stage not in _STAGE_FNS:
        raise ConfigError(f"unknown stage {stage!r}")
    _require_upstream(ctx, stage)
    if retry_failed:
        _clear_failed(ctx, stage)
    return _STAGE_FNS[stage](ctx)


def _clear_failed(ctx: PipelineContext, stage: str) -> None:
    """Forget failed terminals so --retry-failed reprocesses them."""
    for entry in ctx.ledger.entries_for_stage(stage):
        if entry.status == STATUS_FAILED:
            ctx.ledger._entries.pop((stage, entry.record_id), None)


def run_all(ctx: PipelineContext, retry_failed: bool = False) -> PipelineReport:
    report = PipelineReport()
    for stage in STAGES:
        report.stages.append(run_stage(ctx, stage, retry_failed=retry_failed))
    final = load_triplets(ctx.paths.triplets)
    report.kept = sum(1 for t in final.values() if t.status == STATUS_KEPT)
    report.dropped = sum(1 for t in final.values() if t.status == STATUS_DROPPED)
    return report
