"""Content-addressed blob store: files live at blobs/<first2>/<sha256-hex>."""

from __future__ import annotations

import os
import threading
from pathlib import Path

from .records import content_id


class BlobStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        return self.root / digest[:2] / digest

    def put(self, data: bytes) -> str:
        """Store bytes, returning their content address. Idempotent and safe
        under concurrent writers: each writer stages a unique temp file."""
        digest = content_id(data)
        path = self._path(digest)
        if not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(f".{digest}.{os.getpid()}.{threading.get_ident()}.tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        return digest

    def get(self, digest: str) -> bytes:
        path = self._path(digest)
        if not path.is_file():
            raise KeyError(f"blob not found: {digest}")
        return path.read_bytes()

    def exists(self, digest: str) -> bool:
        return self._path(digest).is_file()
