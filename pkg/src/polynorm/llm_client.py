"""Provider-abstracted chat-completion client with retries and record/replay cassettes."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import httpx

from .core import ValidationError
from .prompting import PromptBundle

log = logging.getLogger(__name__)

RETRYABLE_STATUSES = {429}  # plus all 5xx


class TransportError(RuntimeError):
    def __init__(self, message: str, status: Optional[int] = None, attempts: int = 0):
        super().__init__(message)
        self.status = status
        self.attempts = attempts


class CassetteMissError(KeyError):
    pass


class EmptyHypothesisError(RuntimeError):
    pass


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model_id: str = "gpt-4o"
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 60.0
    max_retries: int = 3
    temperature: float = 0.0
    max_tokens: int = 1024

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValidationError("timeout must be > 0")
        if self.max_retries < 0:
            raise ValidationError("max_retries must be >= 0")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")


@dataclass
class ModelOutput:
    sample_id: str
    hypothesis: str
    raw: dict
    model_id: str
    latency_ms: int = 0
    attempt_count: int = 1
    error: Optional[str] = None  # set on embedded per-item batch failures


def extract_hypothesis(text: str) -> str:
    """Strip surrounding whitespace, markdown fences, and one pair of wrapping quotes.

    Idempotent: extracting an already-extracted hypothesis is a no-op.
    """
    out = text.strip()
    if out.startswith("```") and out.endswith("```") and len(out) >= 6:
        inner = out[3:-3]
        # drop a language hint on the opening fence line
        first_nl = inner.find("\n")
        if first_nl != -1 and " " not in inner[:first_nl].strip():
            inner = inner[first_nl + 1 :]
        out = inner.strip()
    for q in ('"', "'", "“”", "‘’"):
        opening, closing = (q, q) if len(q) == 1 else (q[0], q[1])
        if len(out) >= 2 and out.startswith(opening) and out.endswith(closing):
            out = out[1:-1].strip()
            break
    return out


def request_digest(model_id: str, prompt_bytes: bytes, temperature: float, max_tokens: int) -> str:
    h = hashlib.sha256()
    h.update(model_id.encode("utf-8"))
    h.update(b"\x00")
    h.update(prompt_bytes)
    h.update(b"\x00")
    h.update(f"{temperature!r}|{max_tokens}".encode("ascii"))
    return h.hexdigest()


class Cassette:
    """JSONL map of request digest -> raw provider payload."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, dict] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self._entries[rec["digest"]] = rec["payload"]

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, digest: str) -> dict:
        try:
            return self._entries[digest]
        except KeyError:
            raise CassetteMissError(f"cassette miss for digest {digest[:12]}...") from None

    def put(self, digest: str, payload: dict) -> None:
        with self._lock:
            if digest in self._entries:
                return
            self._entries[digest] = payload
            with self.path.open("a", encoding="utf-8") as f:
                f.write(json.dumps({"digest": digest, "payload": payload}, ensure_ascii=False) + "\n")


class LlmClient:
    """Chat-completion client. Modes: live, record (live + cassette append), replay."""

    def __init__(
        self,
        cfg: ProviderConfig,
        mode: str = "live",
        cassette_path: Optional[str | Path] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if mode not in ("live", "record", "replay"):
            raise ValidationError(f"unknown client mode {mode!r}")
        if mode in ("record", "replay") and cassette_path is None:
            raise ValidationError(f"{mode} mode requires a cassette path")
        if mode == "replay" and not Path(cassette_path).exists():
            raise ValidationError(f"replay cassette not found: {cassette_path}")
        self.cfg = cfg
        self.mode = mode
        self.cassette = Cassette(cassette_path) if cassette_path is not None else None
        self._sleep = sleep

    # -- transport ---------------------------------------------------------

    def _post_once(self, body: dict) -> dict:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.cfg.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        resp = httpx.post(self.cfg.endpoint, json=body, headers=headers, timeout=self.cfg.timeout)
        if resp.status_code in RETRYABLE_STATUSES or resp.status_code >= 500:
            raise TransportError(f"HTTP {resp.status_code}", status=resp.status_code)
        resp.raise_for_status()
        return resp.json()

    def _post_with_retries(self, body: dict) -> tuple[dict, int]:
        attempts = 0
        last: Optional[TransportError] = None
        while attempts <= self.cfg.max_retries:
            attempts += 1
            try:
                return self._post_once(body), attempts
            except (TransportError, httpx.TransportError) as e:
                status = e.status if isinstance(e, TransportError) else None
                last = TransportError(str(e), status=status, attempts=attempts)
                if attempts <= self.cfg.max_retries:
                    delay = 1.0 * (2 ** (attempts - 1)) * (0.5 + random.random())
                    log.warning("request failed (%s), retrying in %.1fs", e, delay)
                    self._sleep(delay)
        assert last is not None
        raise last

    # -- completion --------------------------------------------------------

    def complete_messages(self, messages: list[dict], sample_id: str = "") -> ModelOutput:
        prompt_bytes = json.dumps(messages, ensure_ascii=False, sort_keys=True).encode("utf-8")
        digest = request_digest(
            self.cfg.model_id, prompt_bytes, self.cfg.temperature, self.cfg.max_tokens
        )
        start = time.monotonic()
        attempts = 1
        if self.mode == "replay":
            payload = self.cassette.get(digest)
        else:
            body = {
                "model": self.cfg.model_id,
                "messages": messages,
                "temperature": self.cfg.temperature,
                "max_tokens": self.cfg.max_tokens,
            }
            payload, attempts = self._post_with_retries(body)
            if self.mode == "record":
                self.cassette.put(digest, payload)
        latency_ms = int((time.monotonic() - start) * 1000)
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise TransportError(f"malformed provider payload: {e}") from e
        hypothesis = extract_hypothesis(content)
        if not hypothesis:
            raise EmptyHypothesisError(f"empty hypothesis for sample {sample_id!r}")
        return ModelOutput(
            sample_id=sample_id,
            hypothesis=hypothesis,
            raw=payload,
            model_id=self.cfg.model_id,
            latency_ms=latency_ms,
            attempt_count=attempts,
        )

    def complete(self, prompt: PromptBundle, sample_id: str = "") -> ModelOutput:
        return self.complete_messages(prompt.messages(), sample_id=sample_id)

    def complete_batch(
        self, prompts: list[tuple[str, PromptBundle]], parallelism: int = 4
    ) -> list[ModelOutput]:
        """Complete (sample_id, prompt) pairs; results in input order.

        Per-item failures are embedded as ModelOutput records with `error`
        set rather than aborting the batch.
        """
        if parallelism < 1:
            raise ValidationError("parallelism must be >= 1")
        if not prompts:
            return []

        def run_one(item: tuple[str, PromptBundle]) -> ModelOutput:
            sid, bundle = item
            try:
                return self.complete(bundle, sample_id=sid)
            except Exception as e:  # embedded, not raised
                return ModelOutput(
                    sample_id=sid,
                    hypothesis="",
                    raw={},
                    model_id=self.cfg.model_id,
                    error=f"{type(e).__name__}: {e}",
                )

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(run_one, prompts))


def make_payload(content: str, model_id: str = "stub") -> dict:
    """Build a minimal chat-completions payload; used by fixtures and tests."""
    return {
        "model": model_id,
        "choices": [{"index": 0, "message": {"role": "assistant", "content": content}}],
    }
