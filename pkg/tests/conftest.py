from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from discourse_sim.config import NetworkConfig, SimConfig
from discourse_sim.generation import SCORING_PROMPT


@dataclass
class MockOllama:
    """Ollama-compatible ``/api/generate`` double that records every request body."""

    url: str = ""
    requests: list[dict] = field(default_factory=list)
    mode: str = "ok"  # "ok" | "error" | "garbage"
    fail_first: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def reply(self, body: dict) -> tuple[int, dict | str]:
        with self.lock:
            self.requests.append(body)
            if self.fail_first > 0:
                self.fail_first -= 1
                return 503, "busy"
        if self.mode == "error":
            return 500, "boom"
        if self.mode == "garbage":
            return 200, "not json"
        if body["prompt"].startswith(SCORING_PROMPT.splitlines()[0]):
            return 200, {"response": "Score: -0.25 (mildly supportive)"}
        return 200, {"response": "Housing is the real story here, not the slogans. " * 6}

    def generation_requests(self) -> list[dict]:
        return [r for r in self.requests if not r["prompt"].startswith(SCORING_PROMPT.splitlines()[0])]

    def scoring_requests(self) -> list[dict]:
        return [r for r in self.requests if r["prompt"].startswith(SCORING_PROMPT.splitlines()[0])]


@pytest.fixture
def mock_ollama():
    state = MockOllama()

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length) or b"{}")
            if self.path != "/api/generate":
                status, payload = 404, "not found"
            else:
                status, payload = state.reply(body)
            data = payload.encode() if isinstance(payload, str) else json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    state.url = f"http://127.0.0.1:{server.server_address[1]}"
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield state
    server.shutdown()
    server.server_close()


@pytest.fixture
def stub_config():
    return SimConfig(backend="stub", offline=True)


@pytest.fixture
def small_config():
    return SimConfig(n_agents=12, n_days=4, backend="stub", offline=True, network=NetworkConfig(k=4, p=0.3))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
