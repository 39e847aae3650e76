"""Exception types shared across the pipeline."""

from __future__ import annotations


class EditForgeError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(EditForgeError):
    """Invalid or inconsistent run configuration."""


class ParseError(EditForgeError):
    """A model reply did not match the expected shape.

    ``reason`` is a stable machine-readable code, e.g. ``no-integer``,
    ``multiple-integers``, ``out-of-range``, ``line-count-mismatch``,
    ``empty``, ``too-long``, ``multi-sentence``, ``multi-line``,
    ``missing-aspect:<name>``, ``quote-spans``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        msg = reason if not detail else f"{reason}: {detail}"
        super().__init__(msg)


class IllegalTransition(EditForgeError):
    """A lifecycle event was applied in a status that does not allow it."""

    def __init__(self, status: str, event: str):
        self.status = status
        self.event = event
        super().__init__(f"cannot apply {event} in status {status}")


class GatewayError(EditForgeError):
    """Base class for model-endpoint failures."""


class Timeout(GatewayError):
    """A single request exceeded the endpoint timeout."""


class BadRequest(GatewayError):
    """Endpoint rejected the request with a non-retryable 4xx."""

    def __init__(self, status_code: int, body: str = ""):
        self.status_code = status_code
        super().__init__(f"HTTP {status_code}: {body[:200]}")


class Exhausted(GatewayError):
    """All retry attempts failed; carries the last underlying error."""

    def __init__(self, last_error: Exception, attempts: int):
        self.last_error = last_error
        self.attempts = attempts
        super().__init__(f"gave up after {attempts} attempts: {last_error}")


class DecodeError(EditForgeError):
    """Bytes could not be decoded as an image."""


class BindError(EditForgeError):
    """Mock server could not bind its address."""


class ProviderError(EditForgeError):
    """A retrieval or OCR provider failed."""


class NoCandidateBlocks(EditForgeError):
    """No OCR block survived the text-workflow filters."""


class Unroutable(EditForgeError):
    """Router replies stayed malformed after all reparse attempts."""

    def __init__(self, source_id: str, detail: str = ""):
        self.source_id = source_id
        super().__init__(f"source {source_id} unroutable" + (f": {detail}" if detail else ""))


class ManifestCorrupt(EditForgeError):
    """A manifest file contains an undecodable non-trailing line."""

    def __init__(self, path: str, line_no: int, detail: str = ""):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {detail or 'corrupt manifest line'}")


class LengthMismatch(EditForgeError):
    """Two score lists that must align have different lengths or ids."""


class EmptyInput(EditForgeError):
    """A statistic was requested over an empty record stream."""


class ExtractorError(EditForgeError):
    """Entity extraction failed for an instruction."""
