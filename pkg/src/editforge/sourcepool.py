"""Source-image pool curation: pre-filter, perceptual dedup, captioning,
retrieval/synthesis expansion."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Protocol

from PIL import Image

from .blobstore import BlobStore
from .errors import DecodeError, ParseError, ProviderError
from .gateway import ChatRequest, EndpointConfig, Gateway
from .parsers import parse_detailed_caption, parse_single_line
from .phash import decode_image, hamming, phash64
from .prompts import PromptBank
from .records import (
    ORIGIN_SYNTHESIS,
    ASPECT_NAMES,
    DetailedCaption,
    SourceRecord,
    content_id,
)

logger = logging.getLogger(__name__)

MIN_SHORT_SIDE = 512  # strictly exceeded
MIN_ASPECT = 0.5  # inclusive
MAX_ASPECT = 2.0  # inclusive

REJECT_SHORT_SIDE = "short-side"
REJECT_ASPECT_RATIO = "aspect-ratio"

DEFAULT_DEDUP_THRESHOLD = 4


@dataclass(frozen=True)
class PrefilterResult:
    accepted: bool
    reason: Optional[str] = None


def prefilter(width: int, height: int) -> PrefilterResult:
    """Rule-based curation gate: short side must exceed 512 px and the aspect
    ratio must fall in [0.5, 2], both bounds inclusive."""
    if width <= 0 or height <= 0:
        raise ValueError(f"dimensions must be positive, got {width}x{height}")
    if min(width, height) <= MIN_SHORT_SIDE:
        return PrefilterResult(False, REJECT_SHORT_SIDE)
    ratio = width / height
    if not MIN_ASPECT <= ratio <= MAX_ASPECT:
        return PrefilterResult(False, REJECT_ASPECT_RATIO)
    return PrefilterResult(True)


@dataclass(frozen=True)
class ImageBlob:
    data: bytes
    width: int
    height: int
    format: str

    @classmethod
    def decode(cls, data: bytes) -> "ImageBlob":
        img = decode_image(data)
        return cls(data=data, width=img.width, height=img.height, format=img.format or "unknown")


class DedupIndex:
    """Near-duplicate index over 64-bit perceptual hashes.

    Retained hashes are split into ``threshold + 1`` disjoint bit bands; any
    two hashes within the Hamming threshold must agree exactly on at least one
    band, so candidate lookups only verify entries sharing a band value.
    Single-writer by design: admission mutates the band tables.
    """

    def __init__(self, threshold: int = DEFAULT_DEDUP_THRESHOLD):
        if not 0 <= threshold <= 16:
            raise ValueError(f"dedup threshold must be in [0, 16], got {threshold}")
        self.threshold = threshold
        self._entries: list[tuple[int, str]] = []
        self._bands = self._band_spec(threshold)
        self._tables: list[dict[int, list[int]]] = [{} for _ in self._bands]

    @staticmethod
    def _band_spec(threshold: int) -> list[tuple[int, int]]:
        """(shift, mask) per band; bands partition the 64 bits evenly."""
        n = threshold + 1
        base, extra = divmod(64, n)
        spec = []
        shift = 0
        for i in range(n):
            width = base + (1 if i < extra else 0)
            spec.append((shift, (1 << width) - 1))
            shift += width
        return spec

    def _band_values(self, phash: int) -> list[int]:
        return [(phash >> shift) & mask for shift, mask in self._bands]

    @property
    def entries(self) -> list[tuple[int, str]]:
        return list(self._entries)

    def nearest_within(self, phash: int) -> Optional[tuple[int, str]]:
        """A retained entry within the threshold, or None."""
        seen: set[int] = set()
        for table, value in zip(self._tables, self._band_values(phash)):
            for idx in table.get(value, ()):
                if idx in seen:
                    continue
                seen.add(idx)
                candidate_hash, candidate_id = self._entries[idx]
                if hamming(candidate_hash, phash) <= self.threshold:
                    return candidate_hash, candidate_id
        return None

    def admit(self, phash: int, record_id: str) -> bool:
        """Retain the hash unless a prior retained hash is within threshold."""
        if self.nearest_within(phash) is not None:
            return False
        idx = len(self._entries)
        self._entries.append((phash, record_id))
        for table, value in zip(self._tables, self._band_values(phash)):
            table.setdefault(value, []).append(idx)
        return True

    def save(self, path: str | Path) -> None:
        doc = {
            "threshold": self.threshold,
            "entries": [[f"{h:016x}", rid] for h, rid in self._entries],
        }
        Path(path).write_text(json.dumps(doc, indent=None, separators=(",", ":")), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DedupIndex":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        index = cls(threshold=doc["threshold"])
        for hex_hash, rid in doc["entries"]:
            index.admit(int(hex_hash, 16), rid)
        return index


def dedup(records: Iterable[SourceRecord], index: DedupIndex) -> tuple[list[SourceRecord], int]:
    """Greedy first-wins streaming dedup; order-dependent by design."""
    retained: list[SourceRecord] = []
    dropped = 0
    for record in records:
        if index.admit(record.phash, record.id):
            retained.append(record)
        else:
            dropped += 1
    return retained, dropped


class CaptionAgents:
    """Chat-backed captioning operations used by the expansion workflows."""

    def __init__(self, gateway: Gateway, endpoint: str | EndpointConfig, bank: PromptBank,
                 temperature: float = 0.2):
        self.gateway = gateway
        self.endpoint = endpoint
        self.bank = bank
        self.temperature = temperature

    def _chat(self, system_prompt: str, user_text: str, image_ref: str, role: str, seed: int) -> str:
        req = ChatRequest(
            system_prompt=system_prompt,
            user_text=user_text,
            images=(image_ref,),
            temperature=self.temperature,
            seed=seed,
        )
        return self.gateway.chat(self.endpoint, req, agent_role=role)

    def caption(self, record: SourceRecord, seed: int = 0) -> str:
        reply = self._chat(
            "You are an AI assistant that writes concise image captions.",
            self.bank.caption_prompt(), record.id, "caption", seed,
        )
        caption = reply.strip()
        if not caption:
            raise ParseError("empty", "caption reply was blank")
        return caption

    def detailed_caption(self, record: SourceRecord, seed: int = 0) -> DetailedCaption:
        reply = self._chat(
            "You are an AI assistant that writes structured image descriptions.",
            self.bank.detailed_caption_prompt(), record.id, "detailed_caption", seed,
        )
        return parse_detailed_caption(reply)

    def variant_caption(
        self,
        dc: DetailedCaption,
        aspect: str,
        element_index: int,
        image_ref: str,
        seed: int = 0,
    ) -> DetailedCaption:
        """Swap one element for a model-proposed variant; returns the new caption."""
        element = dc.aspects[aspect][element_index]
        prompt = self.bank.variant_caption_prompt(element, render_detailed_caption(dc))
        reply = self._chat(
            "You are an AI assistant that rewrites single caption elements.",
            prompt, image_ref, "variant_caption", seed,
        )
        variant = parse_single_line(reply)
        return dc.with_element(aspect, element_index, variant)


def render_detailed_caption(dc: DetailedCaption) -> str:
    lines = []
    for aspect in ASPECT_NAMES:
        lines.append(f"{aspect}:")
        for i, element in enumerate(dc.aspects[aspect], start=1):
            lines.append(f"{i}. {element}")
    return "\n".join(lines)


def generation_prompt(dc: DetailedCaption) -> str:
    """Flatten a detailed caption into a single text-to-image prompt."""
    paragraphs = []
    for aspect in ASPECT_NAMES:
        elements = "; ".join(dc.aspects[aspect])
        paragraphs.append(f"{aspect}: {elements}.")
    return " ".join(paragraphs)


def synthesize_variant(
    gateway: Gateway,
    endpoint: str | EndpointConfig,
    blobs: BlobStore,
    parent: SourceRecord,
    dc_variant: DetailedCaption,
    seed: int = 0,
) -> SourceRecord:
    """Generate a variant image from a modified caption; the new record still
    flows through prefilter and dedup downstream."""
    prompt = generation_prompt(dc_variant)
    blob_ref = gateway.generate_image(endpoint, prompt, seed=seed)
    img = decode_image(blobs.get(blob_ref))
    return SourceRecord(
        id=blob_ref,
        width=img.width,
        height=img.height,
        origin=ORIGIN_SYNTHESIS,
        phash=phash64(img),
        parent_id=parent.id,
        detailed_caption=dc_variant,
    )


class RetrievalProvider(Protocol):
    """Pluggable search interface; real engines live behind this boundary."""

    def search(self, query: str) -> list[bytes]:
        ...


class FixtureRetrievalProvider:
    """Reference provider: serves decodable images from a fixture folder,
    ignoring the query. Corrupt files are excluded and logged."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def search(self, query: str) -> list[bytes]:
        if not self.root.is_dir():
            raise ProviderError(f"fixture folder not found: {self.root}")
        results = []
        for path in sorted(self.root.iterdir()):
            if not path.is_file():
                continue
            data = path.read_bytes()
            try:
                decode_image(data)
            except DecodeError:
                logger.warning("excluding undecodable fixture %s", path.name)
                continue
            results.append(data)
        return results


def retrieve(query: str, provider: RetrievalProvider, origin: str) -> Iterator[tuple[str, ImageBlob]]:
    """Run one retrieval query, yielding (content id, decoded blob) candidates."""
    for data in provider.search(query):
        blob = ImageBlob.decode(data)  # provider contract: already validated
        yield content_id(data), blob
