"""The three agent roles: scene design, scene image, and the main NPC turn.

Each operation builds its messages from the prompt templates, calls the
provider, and validates what comes back. The NPC path gets exactly one
repair attempt on a malformed response before the contract error surfaces.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..contract import ContractError, NpcTurn, parse_npc_turn
from ..session import PlayerProfile, SceneSpec
from .prompts import PromptBundle, scene_image_prompt, scene_request_messages
from .providers import ProviderError

REPAIR_REMINDER = (
    "Your previous message violated the output contract. Emit only the "
    "structured JSON record with exactly the required fields and no "
    "surrounding text."
)


@dataclass(frozen=True)
class TurnRequestResult:
    turn: NpcTurn
    raw_text: str
    repaired: bool


def _extract_json_object(raw: str) -> dict:
    text = raw.strip()
    fenced = re.match(r"^```[a-zA-Z0-9_-]*\s*\n(.*?)\n?```\s*$", text, re.DOTALL)
    if fenced:
        text = fenced.group(1)
    start, end = text.find("{"), text.rfind("}")
    if start == -1 or end <= start:
        raise ValueError("no JSON object in response")
    return json.loads(text[start : end + 1])


def generate_scene(provider, profile: PlayerProfile) -> SceneSpec:
    """Ask the scene-design agent for a scene tailored to the profile."""
    raw = provider.complete(scene_request_messages(profile), kind="scene")
    if not raw or not raw.strip():
        raise ProviderError("EmptyScene: scene agent returned no content")
    try:
        record = _extract_json_object(raw)
        name = record["name"]
        description = record["description"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ProviderError(f"scene response malformed: {exc}") from exc
    if not str(name).strip() or not str(description).strip():
        raise ProviderError("EmptyScene: scene agent returned blank fields")
    return SceneSpec(name=str(name), description=str(description))


def request_scene_image(provider, description: str) -> str:
    """Ask the image agent for an illustration of the scene description."""
    if not description.strip():
        raise ValueError("scene description must be non-empty")
    return provider.image(scene_image_prompt(description))


def request_npc_turn(provider, bundle: PromptBundle, player_input: str = "") -> TurnRequestResult:
    """One NPC round trip: request, parse, and at most one repair retry.

    ``player_input`` overrides the bundle's user text when given, so callers
    can reuse a bundle skeleton. Transport faults surface as ProviderError
    after the provider's own retries; a second malformed response surfaces
    the ContractError unchanged.
    """
    messages = bundle.to_messages()
    if player_input:
        messages[-1] = {"role": "user", "content": bundle.user_text or player_input}
    raw = provider.complete(messages, kind="npc_turn")
    try:
        return TurnRequestResult(turn=parse_npc_turn(raw), raw_text=raw, repaired=False)
    except ContractError:
        messages = messages + [
            {"role": "assistant", "content": raw},
            {"role": "user", "content": REPAIR_REMINDER},
        ]
        raw = provider.complete(messages, kind="npc_turn")
        return TurnRequestResult(turn=parse_npc_turn(raw), raw_text=raw, repaired=True)
