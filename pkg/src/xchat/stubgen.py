"""Tiny HTTP generator for exercising external-generator mode.

Answers POST /generate with a canned or echoed reply. Runs in-process
for tests (StubGenerator) or standalone via `python -m xchat.stubgen`.
"""

from __future__ import annotations

import argparse
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path


class _Handler(BaseHTTPRequestHandler):
    replies: list[str] = []
    lock = threading.Lock()

    def do_POST(self) -> None:  # noqa: N802 (http.server API)
        if self.path != "/generate":
            self.send_error(404)
            return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            payload = json.loads(self.rfile.read(length) or b"{}")
        except json.JSONDecodeError:
            self.send_error(400)
            return
        message = payload.get("message", "")
        with self.lock:
            reply = self.replies.pop(0) if self.replies else f"ok: {message}"
        body = json.dumps({"text": reply}).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args) -> None:
        pass


class StubGenerator:
    """In-process stub server; bind port 0 to pick a free one."""

    def __init__(self, port: int = 0, host: str = "127.0.0.1",
                 replies: list[str] | None = None) -> None:
        handler = type("Handler", (_Handler,), {
            "replies": list(replies or []), "lock": threading.Lock()})
        self.server = ThreadingHTTPServer((host, port), handler)
        self.port = self.server.server_address[1]
        self.url = f"http://{host}:{self.port}"
        self._thread = threading.Thread(target=self.server.serve_forever,
                                        daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "StubGenerator":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="stub reply generator for external-generator mode")
    parser.add_argument("--port", type=int, default=8099)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--script", type=Path, default=None,
                        help="file with one canned reply per line")
    args = parser.parse_args(argv)
    replies = []
    if args.script is not None:
        replies = [line for line in args.script.read_text("utf-8").splitlines()
                   if line.strip()]
    stub = StubGenerator(port=args.port, host=args.host, replies=replies)
    print(f"stub generator listening on {stub.url}")
    try:
        stub._thread.join()
    except KeyboardInterrupt:
        stub.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
