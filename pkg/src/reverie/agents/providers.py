"""Provider handles: the live chat-completion HTTP client and the offline
scripted double the whole engine can run against with zero network access."""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from typing import Optional

import httpx

RETRY_BASE_DELAY_S = 0.5
RETRY_FACTOR = 2.0
# Additive jitter capped at a quarter of the step keeps delays non-decreasing.
RETRY_JITTER_FRACTION = 0.25

RETRYABLE_STATUS = frozenset({429})


class ProviderError(RuntimeError):
    pass


class ScriptExhausted(ProviderError):
    pass


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-5.2"
    api_key_env: str = "REVERIE_API_KEY"
    timeout_s: float = 30.0
    max_retries: int = 2
    temperature: float = 0.7
    image_model: str = "gpt-image-1"
    images_url: str = ""

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    def to_dict(self) -> dict:
        # api_key_env names the variable only; the key itself never leaves
        # the authorization header.
        return {
            "base_url": self.base_url,
            "model_name": self.model_name,
            "api_key_env": self.api_key_env,
            "timeout_s": self.timeout_s,
            "max_retries": self.max_retries,
            "temperature": self.temperature,
            "image_model": self.image_model,
            "images_url": self.images_url,
        }


def backoff_delays(max_retries: int, rng: Optional[random.Random] = None):
    """Exponential backoff schedule: base 0.5 s, factor 2, additive jitter."""
    rng = rng or random.Random()
    delay = RETRY_BASE_DELAY_S
    for _ in range(max_retries):
        yield delay + rng.uniform(0, RETRY_JITTER_FRACTION * delay)
        delay *= RETRY_FACTOR


class HttpProvider:
    """Chat-completion client with retries on transport faults, 429, and 5xx.

    Wire format: request {model, messages, temperature}; the first choice's
    message content is the raw turn text returned to the caller.
    """

    def __init__(self, config: ProviderConfig, client=None, sleep=time.sleep, rng=None):
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout_s)
        self._sleep = sleep
        self._rng = rng or random.Random()

    def _headers(self) -> dict:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise ProviderError(
                f"no API key found in environment variable {self.config.api_key_env}"
            )
        return {"Authorization": f"Bearer {key}"}

    def _post_with_retries(self, url: str, payload: dict) -> httpx.Response:
        delays = backoff_delays(self.config.max_retries, self._rng)
        attempts = self.config.max_retries + 1
        last_error = None
        for attempt in range(attempts):
            try:
                response = self._client.post(url, json=payload, headers=self._headers())
            except httpx.HTTPError as exc:
                last_error = ProviderError(f"transport failure: {exc}")
            else:
                if response.status_code == 200:
                    return response
                retryable = (
                    response.status_code in RETRYABLE_STATUS
                    or response.status_code >= 500
                )
                last_error = ProviderError(
                    f"provider returned status {response.status_code}"
                )
                if not retryable:
                    raise last_error
            if attempt < attempts - 1:
                self._sleep(next(delays))
        raise last_error

    def complete(self, messages, temperature: Optional[float] = None, kind: str = "chat") -> str:
        payload = {
            "model": self.config.model_name,
            "messages": list(messages),
            "temperature": self.config.temperature if temperature is None else temperature,
        }
        response = self._post_with_retries(self.config.base_url, payload)
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed provider payload: {exc}") from exc
        if not isinstance(content, str):
            raise ProviderError("provider message content is not text")
        return content

    def image(self, prompt: str) -> str:
        if not self.config.images_url:
            raise ProviderError("no image endpoint configured (provider.images_url)")
        payload = {"model": self.config.image_model, "prompt": prompt}
        response = self._post_with_retries(self.config.images_url, payload)
        try:
            entry = response.json()["data"][0]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed image payload: {exc}") from exc
        if "url" in entry:
            return entry["url"]
        if "b64_json" in entry:
            digest = hashlib.sha1(entry["b64_json"].encode("ascii")).hexdigest()
            return f"b64:{digest[:12]}"
        raise ProviderError("image payload carries neither url nor b64_json")


_SCENE_NAMES = (
    "Driftwood Shore",
    "Lantern Garden",
    "Quiet Pine Overlook",
    "Cloudrest Meadow",
    "Riverstone Courtyard",
    "Starlit Greenhouse",
)

_SCENE_SETTINGS = (
    "Pale waves comb the sand while driftwood benches hold the last warmth of the day.",
    "Paper lanterns sway over beds of night-blooming flowers and a slow gravel path.",
    "A still ridge of pines looks down on a valley folded in soft evening mist.",
    "Tall grass leans in a warm wind under clouds that drift without hurry.",
    "Smooth river stones pave a small courtyard where a fountain murmurs to itself.",
    "Glass panes hold the night sky above rows of quiet green seedlings.",
)


def _stressor_snippet(user_content: str) -> str:
    marker = "Recent stressful events:"
    if marker in user_content:
        snippet = user_content.split(marker, 1)[1].strip()
    else:
        snippet = user_content.strip()
    snippet = " ".join(snippet.split())
    return snippet[:60].rstrip(".,; ")


class ScriptedProvider:
    """Deterministic offline provider.

    NPC-turn requests replay the fixture list in order and fail with
    ScriptExhausted past its end; scene requests synthesize a fixture keyed
    by a hash of the profile message, so equal profiles always receive the
    same scene. Every request is recorded for assertions.
    """

    def __init__(self, script=()):
        self.script = list(script)
        self.requests: list = []
        self._cursor = 0
        self.image_requests: list = []

    def complete(self, messages, temperature: Optional[float] = None, kind: str = "chat") -> str:
        self.requests.append(
            {
                "kind": kind,
                "messages": [dict(m) for m in messages],
                "temperature": temperature,
            }
        )
        if kind == "scene":
            user_content = messages[-1]["content"]
            digest = hashlib.sha256(user_content.encode("utf-8")).digest()
            index = digest[0] % len(_SCENE_NAMES)
            snippet = _stressor_snippet(user_content)
            description = (
                f"{_SCENE_SETTINGS[index]} There is room here to sit with "
                f"what has been happening: {snippet}."
            )
            return json.dumps({"name": _SCENE_NAMES[index], "description": description})
        if self._cursor >= len(self.script):
            raise ScriptExhausted(
                f"scripted provider exhausted after {len(self.script)} fixtures"
            )
        raw = self.script[self._cursor]
        self._cursor += 1
        return raw

    def image(self, prompt: str) -> str:
        self.image_requests.append(prompt)
        digest = hashlib.sha1(prompt.encode("utf-8")).hexdigest()
        return f"placeholder:{digest[:12]}"
