"""Run configuration: endpoints, agent bindings, stage parameters, paths."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError
from .gateway import ROLE_CHAT, ROLE_IMAGE_EDIT, ROLE_IMAGE_GENERATE, EndpointConfig
from .synthesis import EditEndpointMap
from .taxonomy import TASKS

OFFLINE_ENV = "EDITFORGE_OFFLINE"

STAGES = ("ingest", "expand", "route", "synthesize", "verify", "filter", "stats")


@dataclass(frozen=True)
class FaultInjection:
    """Test hook: crash a stage after N record commits."""

    stage: str
    after_commits: int


@dataclass(frozen=True)
class WorkspacePaths:
    root: Path

    @property
    def blobs(self) -> Path:
        return self.root / "blobs"

    @property
    def pool(self) -> Path:
        return self.root / "pool.jsonl"

    @property
    def dedup_index(self) -> Path:
        return self.root / "dedup.idx"

    @property
    def routing(self) -> Path:
        return self.root / "routing.jsonl"

    @property
    def triplets(self) -> Path:
        return self.root / "triplets.jsonl"

    @property
    def scores(self) -> Path:
        return self.root / "scores.jsonl"

    @property
    def kept(self) -> Path:
        return self.root / "kept.jsonl"

    @property
    def dropped(self) -> Path:
        return self.root / "dropped.jsonl"

    @property
    def ledger(self) -> Path:
        return self.root / "ledger.jsonl"

    @property
    def stats_json(self) -> Path:
        return self.root / "stats.json"

    @property
    def stats_txt(self) -> Path:
        return self.root / "stats.txt"

    @property
    def figures_dir(self) -> Path:
        return self.root / "figures"


@dataclass(frozen=True)
class RunConfig:
    workspace: Path
    endpoints: dict[str, EndpointConfig] = field(default_factory=dict)
    chat_endpoint: Optional[str] = None
    judge_endpoint: Optional[str] = None
    caption_endpoint: Optional[str] = None
    generate_endpoint: Optional[str] = None
    edit_endpoints: EditEndpointMap = field(default_factory=EditEndpointMap)
    source_dir: Optional[Path] = None
    mock_script: Optional[Path] = None
    retrieval_text_fixtures: Optional[Path] = None
    retrieval_image_fixtures: Optional[Path] = None
    ocr_sidecar_dir: Optional[Path] = None
    seed: int = 0
    workers: int = 4
    offline: bool = False
    dedup_threshold: int = 4
    quota: int = 1
    variants: int = 0
    router_max_reparse: int = 2
    gen_max_retries: int = 2
    judge_max_retries: int = 2
    ocr_min_conf: float = 0.9
    min_area_px: float = 400.0
    max_instruction_chars: int = 400
    strict_score_parse: bool = False
    temperature: float = 0.2
    render_figures: bool = True
    fault_injection: Optional[FaultInjection] = None

    @property
    def paths(self) -> WorkspacePaths:
        return WorkspacePaths(self.workspace)

    def endpoint_role(self, name: Optional[str], role: str, purpose: str) -> EndpointConfig:
        if name is None:
            raise ConfigError(f"no endpoint configured for {purpose}")
        if name not in self.endpoints:
            raise ConfigError(f"{purpose} references unknown endpoint {name!r}")
        ep = self.endpoints[name]
        if ep.role != role:
            raise ConfigError(f"{purpose} endpoint {name!r} has role {ep.role}, needs {role}")
        return ep

    def validate(self) -> None:
        self.endpoint_role(self.chat_endpoint, ROLE_CHAT, "chat agents")
        self.endpoint_role(self.judge_endpoint, ROLE_CHAT, "judge")
        if self.caption_endpoint is not None:
            self.endpoint_role(self.caption_endpoint, ROLE_CHAT, "captioning")
        if self.generate_endpoint is not None:
            self.endpoint_role(self.generate_endpoint, ROLE_IMAGE_GENERATE, "image generation")
        edit_names = set(filter(None, [self.edit_endpoints.default, self.edit_endpoints.text]))
        edit_names.update(self.edit_endpoints.overrides.values())
        for name in edit_names:
            self.endpoint_role(name, ROLE_IMAGE_EDIT, "edit dispatch")
        for task_id in self.edit_endpoints.overrides:
            if task_id not in {t.id for t in TASKS}:
                raise ConfigError(f"edit endpoint override for unknown task {task_id!r}")
        if self.offline:
            non_mock = [ep.name for ep in self.endpoints.values() if not ep.is_mock]
            if non_mock:
                raise ConfigError(f"offline mode with non-mock endpoints: {non_mock}")
            if self.mock_script is None:
                raise ConfigError("offline mode requires a mock script")
        if any(ep.is_mock for ep in self.endpoints.values()) and self.mock_script is None:
            raise ConfigError("mock:// endpoints configured but no mock script given")
        if not 0 <= self.dedup_threshold <= 16:
            raise ConfigError(f"dedup threshold must be in [0,16], got {self.dedup_threshold}")
        if self.quota < 1:
            raise ConfigError("quota must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.variants < 0:
            raise ConfigError("variants must be >= 0")
        if self.fault_injection is not None and self.fault_injection.stage not in STAGES:
            raise ConfigError(f"fault injection names unknown stage {self.fault_injection.stage!r}")


def _path_or_none(base: Path, value: Optional[str]) -> Optional[Path]:
    if value is None:
        return None
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def load_config(path: str | Path, overrides: Optional[dict[str, Any]] = None) -> RunConfig:
    """Load a JSON run config; CLI flags arrive as overrides."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(doc, base_dir=path.parent, overrides=overrides)


def config_from_dict(
    doc: dict[str, Any],
    base_dir: Path = Path("."),
    overrides: Optional[dict[str, Any]] = None,
) -> RunConfig:
    merged = dict(doc)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    endpoints = {}
    for raw in merged.get("endpoints", []):
        ep = EndpointConfig(
            name=raw["name"],
            base_url=raw["base_url"],
            role=raw["role"],
            timeout=float(raw.get("timeout", 60.0)),
            max_retries=int(raw.get("max_retries", 2)),
            backoff_base=float(raw.get("backoff_base", 0.5)),
            max_in_flight=int(raw.get("max_in_flight", 4)),
        )
        if ep.name in endpoints:
            raise ConfigError(f"duplicate endpoint name {ep.name!r}")
        endpoints[ep.name] = ep

    edit_raw = merged.get("edit_endpoints", {})
    edit_map = EditEndpointMap(
        default=edit_raw.get("default"),
        text=edit_raw.get("text"),
        overrides=dict(edit_raw.get("overrides", {})),
    )

    agents = merged.get("agents", {})
    fault_raw = merged.get("fault_injection")
    fault = None
    if fault_raw:
        fault = FaultInjection(stage=fault_raw["stage"], after_commits=int(fault_raw["after_commits"]))

    offline = bool(merged.get("offline", False)) or os.environ.get(OFFLINE_ENV) == "1"

    workspace = _path_or_none(base_dir, merged.get("workspace", "editforge-run"))
    cfg = RunConfig(
        workspace=workspace,
        endpoints=endpoints,
        chat_endpoint=agents.get("chat"),
        judge_endpoint=agents.get("judge"),
        caption_endpoint=agents.get("caption", agents.get("chat")),
        generate_endpoint=agents.get("generate"),
        edit_endpoints=edit_map,
        source_dir=_path_or_none(base_dir, merged.get("source_dir")),
        mock_script=_path_or_none(base_dir, merged.get("mock_script")),
        retrieval_text_fixtures=_path_or_none(base_dir, merged.get("retrieval_text_fixtures")),
        retrieval_image_fixtures=_path_or_none(base_dir, merged.get("retrieval_image_fixtures")),
        ocr_sidecar_dir=_path_or_none(base_dir, merged.get("ocr_sidecar_dir")),
        seed=int(merged.get("seed", 0)),
        workers=int(merged.get("workers", 4)),
        offline=offline,
        dedup_threshold=int(merged.get("dedup_threshold", 4)),
        quota=int(merged.get("quota", 1)),
        variants=int(merged.get("variants", 0)),
        router_max_reparse=int(merged.get("router_max_reparse", 2)),
        gen_max_retries=int(merged.get("gen_max_retries", 2)),
        judge_max_retries=int(merged.get("judge_max_retries", 2)),
        ocr_min_conf=float(merged.get("ocr_min_conf", 0.9)),
        min_area_px=float(merged.get("min_area_px", 400.0)),
        max_instruction_chars=int(merged.get("max_instruction_chars", 400)),
        strict_score_parse=bool(merged.get("strict_score_parse", False)),
        temperature=float(merged.get("temperature", 0.2)),
        render_figures=bool(merged.get("render_figures", True)),
        fault_injection=fault,
    )
    cfg.validate()
    return cfg
