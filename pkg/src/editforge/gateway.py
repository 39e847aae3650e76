"""Uniform client for all model endpoints, plus the deterministic mock backend.

Chat endpoints speak an OpenAI-compatible chat-completions schema; image
endpoints accept ``{image: base64, prompt, seed}`` (edit) or
``{prompt, seed}`` (generate) and return ``{image: base64}``. Real servers
and the mock backend are swapped by configuration only: an endpoint whose
base_url uses the ``mock://`` scheme is served in-process from a MockScript.
"""

from __future__ import annotations

import base64
import hashlib
import io
import json
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np
import requests
from PIL import Image

from .blobstore import BlobStore
from .errors import BadRequest, ConfigError, DecodeError, Exhausted, GatewayError, Timeout

ROLE_CHAT = "chat"
ROLE_IMAGE_EDIT = "image-edit"
ROLE_IMAGE_GENERATE = "image-generate"
ENDPOINT_ROLES = (ROLE_CHAT, ROLE_IMAGE_EDIT, ROLE_IMAGE_GENERATE)

_PATHS = {
    ROLE_CHAT: "/chat/completions",
    ROLE_IMAGE_EDIT: "/edit",
    ROLE_IMAGE_GENERATE: "/generate",
}


@dataclass(frozen=True)
class EndpointConfig:
    name: str
    base_url: str
    role: str
    timeout: float = 60.0
    max_retries: int = 2
    backoff_base: float = 0.5
    max_in_flight: int = 4

    def __post_init__(self):
        if self.role not in ENDPOINT_ROLES:
            raise ConfigError(f"endpoint {self.name}: unknown role {self.role!r}")
        if self.timeout <= 0:
            raise ConfigError(f"endpoint {self.name}: timeout must be positive")
        if self.max_retries < 0:
            raise ConfigError(f"endpoint {self.name}: max_retries must be >= 0")
        if self.max_in_flight < 1:
            raise ConfigError(f"endpoint {self.name}: max_in_flight must be >= 1")

    @property
    def is_mock(self) -> bool:
        return self.base_url.startswith("mock://")

    def url(self) -> str:
        return self.base_url.rstrip("/") + _PATHS[self.role]


@dataclass(frozen=True)
class ChatRequest:
    system_prompt: str
    user_text: str
    images: tuple[str, ...] = ()  # blob refs, at most 2
    temperature: float = 0.2
    seed: int = 0
    max_tokens: int = 1024

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if len(self.images) > 2:
            raise ValueError("at most 2 images per chat request")


@dataclass(frozen=True)
class MockRule:
    response: str
    role: Optional[str] = None
    task: Optional[str] = None
    input_digest_prefix: Optional[str] = None

    def matches(self, role: str, task: Optional[str], digest: str) -> bool:
        if self.role is not None and self.role != role:
            return False
        if self.task is not None and self.task != task:
            return False
        if self.input_digest_prefix is not None and not digest.startswith(self.input_digest_prefix):
            return False
        return True


@dataclass(frozen=True)
class MockScript:
    """Ordered canned responses; first matching rule wins."""

    rules: tuple[MockRule, ...] = ()
    default: Optional[str] = None

    @classmethod
    def from_json(cls, obj: Any) -> "MockScript":
        if isinstance(obj, list):
            rules_raw, default = obj, None
        elif isinstance(obj, dict):
            rules_raw, default = obj.get("rules", []), obj.get("default")
        else:
            raise ConfigError("mock script must be a JSON list or object")
        rules = []
        for raw in rules_raw:
            match = raw.get("match", {})
            rules.append(MockRule(
                response=raw["response"],
                role=match.get("role"),
                task=match.get("task"),
                input_digest_prefix=match.get("input_digest_prefix"),
            ))
        return cls(rules=tuple(rules), default=default)

    @classmethod
    def load(cls, path: str) -> "MockScript":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def find(self, role: str, task: Optional[str], digest: str) -> Optional[MockRule]:
        for rule in self.rules:
            if rule.matches(role, task, digest):
                return rule
        return None


def request_digest(body: dict[str, Any]) -> str:
    """Digest of a request body, ignoring routing metadata."""
    scrubbed = {k: v for k, v in body.items() if k != "metadata"}
    blob = json.dumps(scrubbed, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def derived_image_bytes(key: str, width: int, height: int) -> bytes:
    """Deterministic PNG derived from a key; stands in for a model's output."""
    seed = int(hashlib.sha256(key.encode("utf-8")).hexdigest()[:16], 16)
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, "RGB").save(buf, format="PNG")
    return buf.getvalue()


class MockBackend:
    """In-process implementation of the wire protocol, driven by a MockScript."""

    EDIT_SIZE = (96, 64)
    GENERATE_SIZE = (1024, 768)

    def __init__(self, script: MockScript):
        self.script = script

    def post(self, path: str, body: dict[str, Any]) -> tuple[int, dict[str, Any]]:
        meta = body.get("metadata") or {}
        role = meta.get("agent_role", "")
        task = meta.get("task")
        digest = request_digest(body)
        rule = self.script.find(role, task, digest)

        if path.endswith("/chat/completions"):
            if rule is not None:
                text = rule.response
            elif self.script.default is not None:
                text = self.script.default
            else:
                return 404, {"error": {"message": "no matching mock rule"}}
            return 200, {"choices": [{"message": {"role": "assistant", "content": text}}]}

        if path.endswith("/edit"):
            if rule is not None:
                data = base64.b64decode(rule.response)
            else:
                key = "edit:" + request_digest({"image": body.get("image"), "prompt": body.get("prompt")})
                w, h = self.EDIT_SIZE
                data = derived_image_bytes(key, w, h)
            return 200, {"image": base64.b64encode(data).decode("ascii")}

        if path.endswith("/generate"):
            if rule is not None:
                data = base64.b64decode(rule.response)
            else:
                key = f"generate:{body.get('prompt')}:{body.get('seed')}"
                w, h = self.GENERATE_SIZE
                data = derived_image_bytes(key, w, h)
            return 200, {"image": base64.b64encode(data).decode("ascii")}

        return 404, {"error": {"message": f"unknown path {path}"}}


class HttpTransport:
    """Thin requests-based transport; raises gateway errors for transport faults."""

    def post(self, url: str, body: dict[str, Any], timeout: float) -> tuple[int, dict[str, Any]]:
        try:
            resp = requests.post(url, json=body, timeout=timeout)
        except requests.Timeout as exc:
            raise Timeout(f"{url}: {exc}") from exc
        except requests.RequestException as exc:
            raise GatewayError(f"{url}: {exc}") from exc
        try:
            data = resp.json()
        except ValueError:
            data = {"raw": resp.text}
        return resp.status_code, data


class Gateway:
    """Shared client for every configured endpoint.

    Retries transport errors and HTTP 5xx/429 with exponential backoff
    (backoff_base * 2^attempt) up to max_retries; other 4xx fail immediately.
    Each endpoint enforces its own in-flight cap via an admission semaphore.
    """

    def __init__(
        self,
        endpoints: dict[str, EndpointConfig],
        blobs: Optional[BlobStore] = None,
        mock_backend: Optional[MockBackend] = None,
        transport: Optional[HttpTransport] = None,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self.endpoints = dict(endpoints)
        self.blobs = blobs
        self.mock_backend = mock_backend
        self.transport = transport or HttpTransport()
        self.sleeper = sleeper
        self._gates = {
            name: threading.BoundedSemaphore(ep.max_in_flight)
            for name, ep in self.endpoints.items()
        }

    def endpoint(self, name: str) -> EndpointConfig:
        try:
            return self.endpoints[name]
        except KeyError:
            raise ConfigError(f"no endpoint named {name!r}") from None

    def _post_once(self, ep: EndpointConfig, body: dict[str, Any]) -> tuple[int, dict[str, Any]]:
        if ep.is_mock:
            if self.mock_backend is None:
                raise ConfigError(f"endpoint {ep.name} is mock:// but no mock script is loaded")
            return self.mock_backend.post(_PATHS[ep.role], body)
        return self.transport.post(ep.url(), body, ep.timeout)

    def _request(self, ep: EndpointConfig, body: dict[str, Any]) -> dict[str, Any]:
        last_error: Exception = GatewayError("no attempts made")
        attempts = ep.max_retries + 1
        for attempt in range(attempts):
            gate = self._gates[ep.name]
            with gate:
                try:
                    status, data = self._post_once(ep, body)
                except GatewayError as exc:  # includes Timeout
                    last_error = exc
                    status = None
                    data = {}
            if status is not None:
                if status == 200:
                    return data
                if status == 429 or status >= 500:
                    last_error = GatewayError(f"HTTP {status} from {ep.name}")
                else:
                    raise BadRequest(status, json.dumps(data))
            if attempt < attempts - 1:
                self.sleeper(ep.backoff_base * (2 ** attempt))
        raise Exhausted(last_error, attempts)

    def _image_part(self, blob_ref: str) -> dict[str, Any]:
        data = self.blobs.get(blob_ref)
        b64 = base64.b64encode(data).decode("ascii")
        return {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{b64}"}}

    def chat(
        self,
        endpoint: str | EndpointConfig,
        req: ChatRequest,
        agent_role: str = "",
        task: Optional[str] = None,
    ) -> str:
        ep = endpoint if isinstance(endpoint, EndpointConfig) else self.endpoint(endpoint)
        if ep.role != ROLE_CHAT:
            raise ConfigError(f"endpoint {ep.name} has role {ep.role}, chat required")
        content: list[dict[str, Any]] = [{"type": "text", "text": req.user_text}]
        content.extend(self._image_part(ref) for ref in req.images)
        body = {
            "model": ep.name,
            "messages": [
                {"role": "system", "content": req.system_prompt},
                {"role": "user", "content": content},
            ],
            "temperature": req.temperature,
            "seed": req.seed,
            "max_tokens": req.max_tokens,
            "metadata": {"agent_role": agent_role, "task": task},
        }
        data = self._request(ep, body)
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed chat response from {ep.name}: {data}") from exc

    def _image_request(
        self,
        ep: EndpointConfig,
        body: dict[str, Any],
    ) -> str:
        data = self._request(ep, body)
        b64 = data.get("image")
        if not isinstance(b64, str):
            raise DecodeError(f"response from {ep.name} carries no image field")
        try:
            raw = base64.b64decode(b64, validate=True)
        except Exception as exc:
            raise DecodeError(f"invalid base64 image from {ep.name}") from exc
        from .phash import decode_image  # validates the payload is an image

        decode_image(raw)
        return self.blobs.put(raw)

    def edit_image(
        self,
        endpoint: str | EndpointConfig,
        source_blob: str,
        command: str,
        seed: int = 0,
        extras: Optional[dict[str, str]] = None,
        task: Optional[str] = None,
    ) -> str:
        """Run one edit; returns the content address of the edited image."""
        ep = endpoint if isinstance(endpoint, EndpointConfig) else self.endpoint(endpoint)
        if ep.role != ROLE_IMAGE_EDIT:
            raise ConfigError(f"endpoint {ep.name} has role {ep.role}, image-edit required")
        source = self.blobs.get(source_blob)
        body: dict[str, Any] = {
            "image": base64.b64encode(source).decode("ascii"),
            "prompt": command,
            "seed": seed,
            "metadata": {"agent_role": "edit", "task": task},
        }
        for key, ref in (extras or {}).items():
            body[key] = base64.b64encode(self.blobs.get(ref)).decode("ascii")
        return self._image_request(ep, body)

    def generate_image(
        self,
        endpoint: str | EndpointConfig,
        prompt: str,
        seed: int = 0,
    ) -> str:
        """Text-to-image generation; returns the content address of the result."""
        ep = endpoint if isinstance(endpoint, EndpointConfig) else self.endpoint(endpoint)
        if ep.role != ROLE_IMAGE_GENERATE:
            raise ConfigError(f"endpoint {ep.name} has role {ep.role}, image-generate required")
        body = {
            "prompt": prompt,
            "seed": seed,
            "metadata": {"agent_role": "generate", "task": None},
        }
        return self._image_request(ep, body)
