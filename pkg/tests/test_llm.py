"""Chat client tests against a local mock server, plus offline proposers."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from ansatz_forge.errors import (
    ConfigurationError,
    ExhaustedError,
    ProtocolError,
    ResourceError,
    TransportError,
)
from ansatz_forge.llm import (
    ChatMessage,
    ExhaustiveProposer,
    LlmConfig,
    LlmProposer,
    RandomProposer,
    chat,
)
from ansatz_forge.search import PromptBundle, SearchConfig, parse_proposal


class MockChatServer:
    """Scripted chat-completions endpoint; records request bodies/headers."""

    def __init__(self, script):
        self.script = list(script)  # (status, body) pairs
        self.requests = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers["Content-Length"])
                outer.requests.append({
                    "headers": dict(self.headers),
                    "body": json.loads(self.rfile.read(length)),
                })
                status, body = (outer.script.pop(0) if outer.script
                                else (500, b"script exhausted"))
                payload = body if isinstance(body, bytes) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

            def log_message(self, *args):
                pass

        self.server = HTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self):
        return f"http://127.0.0.1:{self.server.server_port}/v1/chat/completions"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


def reply(text):
    return {"choices": [{"message": {"role": "assistant", "content": text}}]}


@pytest.fixture
def api_key(monkeypatch):
    monkeypatch.setenv("ANSATZ_FORGE_API_KEY", "test-key-123")


MESSAGES = [ChatMessage("system", "sys"), ChatMessage("user", "hello")]


def test_chat_round_trip(api_key):
    server = MockChatServer([(200, reply("HELLO BACK"))])
    try:
        cfg = LlmConfig(endpoint_url=server.url, model_name="test-model",
                        temperature=0.3)
        assert chat(cfg, MESSAGES) == "HELLO BACK"
        req = server.requests[0]
        assert req["headers"]["Authorization"] == "Bearer test-key-123"
        assert req["body"]["model"] == "test-model"
        assert req["body"]["temperature"] == 0.3
        assert req["body"]["messages"] == [
            {"role": "system", "content": "sys"},
            {"role": "user", "content": "hello"},
        ]
    finally:
        server.close()


def test_chat_retries_on_429_with_backoff(api_key):
    server = MockChatServer([(429, {}), (503, {}), (200, reply("ok"))])
    sleeps = []
    try:
        cfg = LlmConfig(endpoint_url=server.url)
        assert chat(cfg, MESSAGES, _sleep=sleeps.append) == "ok"
        assert sleeps == [1.0, 2.0]  # exponential backoff, 1 s base
        assert len(server.requests) == 3
    finally:
        server.close()


def test_chat_exhausts_retries(api_key):
    server = MockChatServer([(500, {})] * 10)
    try:
        cfg = LlmConfig(endpoint_url=server.url, max_retries=2)
        with pytest.raises(TransportError):
            chat(cfg, MESSAGES, _sleep=lambda s: None)
        assert len(server.requests) == 3  # initial try + 2 retries
    finally:
        server.close()


def test_chat_malformed_body_is_protocol_error(api_key):
    for body in [b"not json", {"choices": []}, {"nope": 1}]:
        server = MockChatServer([(200, body)])
        try:
            with pytest.raises(ProtocolError):
                chat(LlmConfig(endpoint_url=server.url), MESSAGES)
        finally:
            server.close()


def test_chat_client_error_is_not_retried(api_key):
    server = MockChatServer([(400, {"error": "bad request"})])
    try:
        with pytest.raises(TransportError):
            chat(LlmConfig(endpoint_url=server.url), MESSAGES,
                 _sleep=lambda s: None)
        assert len(server.requests) == 1
    finally:
        server.close()


def test_chat_requires_api_key(monkeypatch):
    monkeypatch.delenv("ANSATZ_FORGE_API_KEY", raising=False)
    with pytest.raises(ConfigurationError):
        chat(LlmConfig(endpoint_url="http://127.0.0.1:1/x"), MESSAGES)


def test_api_key_never_appears_in_errors(api_key):
    """Failures must not leak the credential into exception text."""
    server = MockChatServer([(500, {})] * 10)
    try:
        cfg = LlmConfig(endpoint_url=server.url, max_retries=1)
        with pytest.raises(TransportError) as err:
            chat(cfg, MESSAGES, _sleep=lambda s: None)
        assert "test-key-123" not in str(err.value)
    finally:
        server.close()


def test_llm_proposer_sends_prompt_bundle(api_key):
    server = MockChatServer([(200, reply("[0, (0,1)]"))])
    try:
        proposer = LlmProposer(LlmConfig(endpoint_url=server.url))
        out = proposer.propose(PromptBundle(system="S", user="U"))
        assert out == "[0, (0,1)]"
        assert server.requests[0]["body"]["messages"][0] == {
            "role": "system", "content": "S"}
    finally:
        server.close()


def test_random_proposer_is_seeded_and_valid():
    cfg = SearchConfig(n_qubits=4, n_blocks=6)
    a = RandomProposer(seed=7, cfg=cfg)
    b = RandomProposer(seed=7, cfg=cfg)
    bundle = PromptBundle(system="s", user="u")
    for _ in range(10):
        text = a.propose(bundle)
        assert text == b.propose(bundle)
        parse_proposal(text, cfg)  # always well-formed and valid


def test_exhaustive_proposer_enumerates_whole_space():
    cfg = SearchConfig(n_qubits=2, n_blocks=2)
    proposer = ExhaustiveProposer(cfg, allowed_ids=[0, 1])
    assert proposer.space_size == 16  # (2 ids * 2 ordered pairs)^2
    bundle = PromptBundle(system="s", user="u")
    seen = [proposer.propose(bundle) for _ in range(16)]
    assert len(set(seen)) == 16
    assert seen == sorted(seen)  # lexicographic order
    with pytest.raises(ExhaustedError):
        proposer.propose(bundle)


def test_exhaustive_proposer_space_cap():
    cfg = SearchConfig(n_qubits=6, n_blocks=6)
    with pytest.raises(ResourceError):
        ExhaustiveProposer(cfg)
