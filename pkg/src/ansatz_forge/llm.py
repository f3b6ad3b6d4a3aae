"""Proposers: an OpenAI-compatible chat-completions client plus deterministic
random and exhaustive proposers for offline runs and oracles."""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass

import numpy as np
import requests

from .circuit import AnsatzGenome, N_BLOCK_TEMPLATES, format_genome
from .errors import (ConfigurationError, ExhaustedError, ProtocolError,
                     ResourceError, TransportError, ValidationError)
from .search import PromptBundle, SearchConfig

DEFAULT_API_KEY_ENV = "ANSATZ_FORGE_API_KEY"


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValidationError(f"unknown role {self.role!r}")
        if self.role in ("system", "user") and not self.content:
            raise ValidationError(f"{self.role} message must be non-empty")


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str
    model_name: str = "gpt-4"
    temperature: float = 0.7
    max_retries: int = 3
    timeout: float = 60.0
    api_key_source: str = DEFAULT_API_KEY_ENV

    def __post_init__(self):
        if not self.endpoint_url:
            raise ValidationError("endpoint_url must be non-empty")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")


def chat(cfg: LlmConfig, messages, *, _sleep=time.sleep) -> str:
    """POST a chat-completions request and return the first choice's content.

    Retries transport errors, 429, and 5xx with exponential backoff
    (1 s base, doubling, cfg.max_retries attempts after the first).
    """
    api_key = os.environ.get(cfg.api_key_source)
    if not api_key:
        raise ConfigurationError(
            f"API key not found in environment variable {cfg.api_key_source}")
    body = {
        "model": cfg.model_name,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "temperature": cfg.temperature,
    }
    headers = {"Authorization": f"Bearer {api_key}"}
    last_error = None
    for attempt in range(cfg.max_retries + 1):
        if attempt > 0:
            _sleep(1.0 * 2 ** (attempt - 1))
        try:
            resp = requests.post(
                cfg.endpoint_url, json=body, headers=headers, timeout=cfg.timeout)
        except requests.RequestException as exc:
            last_error = f"transport failure: {exc}"
            continue
        if resp.status_code == 429 or resp.status_code >= 500:
            last_error = f"HTTP {resp.status_code}"
            continue
        if resp.status_code != 200:
            raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            doc = resp.json()
            return doc["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(
                f"malformed chat-completions response: {exc}") from None
    raise TransportError(f"retries exhausted ({last_error})")


class LlmProposer:
    """Proposer backed by a chat-completions endpoint."""

    def __init__(self, cfg: LlmConfig):
        self.cfg = cfg

    def propose(self, prompt: PromptBundle) -> str:
        return chat(self.cfg, [
            ChatMessage("system", prompt.system),
            ChatMessage("user", prompt.user),
        ])


class RandomProposer:
    """Ignores the prompt; emits uniform random valid genomes in bracket syntax."""

    def __init__(self, seed: int, cfg: SearchConfig):
        self.rng = np.random.default_rng(seed)
        self.cfg = cfg

    def propose(self, prompt: PromptBundle) -> str:
        blocks = []
        for _ in range(self.cfg.n_blocks):
            bid = int(self.rng.integers(N_BLOCK_TEMPLATES))
            a = int(self.rng.integers(self.cfg.n_qubits))
            b = int(self.rng.integers(self.cfg.n_qubits - 1))
            if b >= a:
                b += 1
            blocks.append((bid, (a, b)))
        return format_genome(AnsatzGenome.of(blocks))


MAX_EXHAUSTIVE_SPACE = 10_000


class ExhaustiveProposer:
    """Enumerates every valid genome in lexicographic order, one per call."""

    def __init__(self, cfg: SearchConfig, allowed_ids=None):
        ids = sorted(allowed_ids) if allowed_ids is not None else list(
            range(N_BLOCK_TEMPLATES))
        for bid in ids:
            if not 0 <= bid < N_BLOCK_TEMPLATES:
                raise ValidationError(f"block id {bid} out of range")
        pairs = [(a, b) for a in range(cfg.n_qubits)
                 for b in range(cfg.n_qubits) if a != b]
        per_block = len(ids) * len(pairs)
        if per_block ** cfg.n_blocks > MAX_EXHAUSTIVE_SPACE:
            raise ResourceError(
                f"exhaustive space {per_block ** cfg.n_blocks} exceeds "
                f"{MAX_EXHAUSTIVE_SPACE}")
        choices = [(bid, pair) for bid in ids for pair in pairs]
        self._iter = itertools.product(choices, repeat=cfg.n_blocks)
        self.space_size = per_block ** cfg.n_blocks

    def propose(self, prompt: PromptBundle) -> str:
        try:
            blocks = next(self._iter)
        except StopIteration:
            raise ExhaustedError("design space exhausted") from None
        return format_genome(AnsatzGenome.of(blocks))
