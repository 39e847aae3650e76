"""Rejection-based task routing: each source is assigned the subset of the 23
editing tasks the router does not reject."""

from __future__ import annotations

import hashlib

from .errors import ParseError, Unroutable
from .gateway import ChatRequest, Gateway
from .parsers import parse_router_verdicts
from .prompts import SYSTEM_ROUTER, PromptBank
from .records import RoutingDecision, SourceRecord, TripletRecord, Verdict, stub_id
from .taxonomy import TASKS

DEFAULT_MAX_REPARSE = 2

_CORRECTIVE = (
    "\n\nReminder (attempt {attempt}): your previous reply was malformed. "
    "Output exactly {n} lines, one per candidate task in the order listed, "
    "and start each line with 'yes' or 'no'."
)


def derive_seed(*parts: object) -> int:
    """Stable 32-bit seed from arbitrary key parts."""
    key = "\x1f".join(str(p) for p in parts)
    return int(hashlib.sha256(key.encode("utf-8")).hexdigest()[:8], 16)


def route(
    gateway: Gateway,
    endpoint: str,
    bank: PromptBank,
    source: SourceRecord,
    max_reparse: int = DEFAULT_MAX_REPARSE,
    temperature: float = 0.2,
    base_seed: int = 0,
) -> RoutingDecision:
    """Ask the router which tasks apply to the source image.

    Malformed replies are retried up to max_reparse times with a corrective
    suffix; when every attempt stays malformed the caller receives Unroutable
    and the source keeps an all-rejected decision for audit.
    """
    tasks = list(TASKS)
    last_reason = ""
    for attempt in range(max_reparse + 1):
        prompt = bank.router_prompt()
        if attempt > 0:
            prompt += _CORRECTIVE.format(attempt=attempt + 1, n=len(tasks))
        reply = gateway.chat(
            endpoint,
            ChatRequest(
                system_prompt=SYSTEM_ROUTER,
                user_text=prompt,
                images=(source.id,),
                temperature=temperature,
                seed=derive_seed(base_seed, source.id, "route", attempt),
            ),
            agent_role="router",
        )
        try:
            verdicts = parse_router_verdicts(reply, tasks)
        except ParseError as exc:
            last_reason = exc.reason
            continue
        return RoutingDecision(source_id=source.id, verdicts=verdicts)
    raise Unroutable(source.id, f"last parse failure: {last_reason}")


def unroutable_decision(source_id: str, note: str = "unroutable") -> RoutingDecision:
    """All-rejected decision recorded for sources the router could not parse."""
    return RoutingDecision(
        source_id=source_id,
        verdicts={t.id: Verdict(applicable=False, rationale=note) for t in TASKS},
    )


def fan_out(decision: RoutingDecision, quota: int = 1) -> list[TripletRecord]:
    """One routed stub per applicable task, up to quota per task.

    Stub ids are digests of (source id, task id, slot), so re-running fan-out
    is idempotent.
    """
    if quota < 1:
        raise ValueError(f"quota must be >= 1, got {quota}")
    stubs = []
    for task in decision.applicable_tasks():
        for k in range(quota):
            stubs.append(TripletRecord(
                id=stub_id(decision.source_id, task.id, k),
                source_id=decision.source_id,
                task=task,
            ))
    return stubs
