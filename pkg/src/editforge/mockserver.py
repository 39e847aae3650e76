"""HTTP front-end for the mock backend, so real-endpoint configs can be
pointed at a local deterministic server."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .errors import BindError
from .gateway import MockBackend, MockScript


class MockServerHandle:
    def __init__(self, server: ThreadingHTTPServer, thread: threading.Thread):
        self._server = server
        self._thread = thread
        self.host, self.port = server.server_address[:2]

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def shutdown(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)


def _make_handler(backend: MockBackend):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):  # noqa: N802 (http.server API)
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length) if length else b"{}"
            try:
                body = json.loads(raw.decode("utf-8"))
            except ValueError:
                self._reply(400, {"error": {"message": "invalid JSON body"}})
                return
            status, data = backend.post(self.path, body)
            self._reply(status, data)

        def _reply(self, status: int, data: dict) -> None:
            payload = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, fmt, *args):  # silence per-request stderr noise
            pass

    return Handler


def mock_serve(script: MockScript, host: str = "127.0.0.1", port: int = 0) -> MockServerHandle:
    """Serve a mock script over HTTP; port 0 picks a free port."""
    backend = MockBackend(script)
    try:
        server = ThreadingHTTPServer((host, port), _make_handler(backend))
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
    thread = threading.Thread(target=server.serve_forever, name="editforge-mock", daemon=True)
    thread.start()
    return MockServerHandle(server, thread)
