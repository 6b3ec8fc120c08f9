"""Chat model clients: a scripted stand-in and an OpenAI-compatible HTTP client."""

from __future__ import annotations

import json
import logging
import os
import time
from pathlib import Path
from typing import Protocol, Sequence

import requests

from ..errors import IoFailure, ModelUnreachable

log = logging.getLogger(__name__)

ENV_BASE_URL = "ROADNET_MODEL_BASE_URL"
ENV_MODEL = "ROADNET_MODEL_NAME"
ENV_API_KEY = "ROADNET_MODEL_API_KEY"


class ModelClient(Protocol):
    def complete(self, messages: list[dict]) -> str: ...


class ScriptedModel:
    """Returns canned replies in order, repeating the last one once exhausted."""

    def __init__(self, replies: Sequence[str]):
        if not replies:
            raise ValueError("scripted model needs at least one reply")
        self.replies = list(replies)
        self.calls: list[list[dict]] = []

    def complete(self, messages: list[dict]) -> str:
        idx = min(len(self.calls), len(self.replies) - 1)
        self.calls.append([dict(m) for m in messages])
        return self.replies[idx]

    @classmethod
    def from_file(cls, path) -> "ScriptedModel":
        """Load replies from a JSON list of strings or from one reply per line."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read mock script {path}: {exc}") from exc
        stripped = text.strip()
        if stripped.startswith("["):
            replies = json.loads(stripped)
            if not all(isinstance(r, str) for r in replies):
                raise ValueError(f"{path}: expected a JSON list of strings")
        else:
            replies = [line for line in text.splitlines() if line.strip()]
        return cls(replies)


class HttpChatModel:
    """POSTs to ``{base_url}/chat/completions``; retries once, then gives up."""

    def __init__(self, base_url: str, model: str, api_key: str | None = None,
                 timeout: float = 60.0, session=None, retry_backoff: float = 1.0):
        if not base_url:
            raise ValueError("model base URL is not configured")
        self.url = base_url.rstrip("/") + "/chat/completions"
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.session = session or requests.Session()
        self.retry_backoff = retry_backoff

    @classmethod
    def from_env(cls, env=None, **kw) -> "HttpChatModel":
        env = os.environ if env is None else env
        return cls(env.get(ENV_BASE_URL, ""), env.get(ENV_MODEL, "gpt-4o-mini"), env.get(ENV_API_KEY), **kw)

    def complete(self, messages: list[dict]) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {"model": self.model, "messages": messages, "temperature": 0}
        last = None
        for attempt in (1, 2):
            try:
                resp = self.session.post(self.url, json=body, headers=headers, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise requests.HTTPError(f"HTTP {resp.status_code}")
                if resp.status_code != 200:
                    raise ModelUnreachable(f"{self.url} answered HTTP {resp.status_code}: {resp.text[:200]}")
                return resp.json()["choices"][0]["message"]["content"] or ""
            except (requests.RequestException, ValueError, KeyError, IndexError, TypeError) as exc:
                last = exc
                if attempt == 1:
                    log.warning("model call failed (%s), retrying once", exc)
                    time.sleep(self.retry_backoff)
        raise ModelUnreachable(f"{self.url}: {last}") from last
