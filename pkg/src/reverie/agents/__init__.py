"""Agent gateway: prompt assembly plus pluggable chat/image providers."""

from .gateway import (
    REPAIR_REMINDER,
    TurnRequestResult,
    generate_scene,
    request_npc_turn,
    request_scene_image,
)
from .prompts import (
    PLAYER_EXPRESSION_TAG,
    PromptBundle,
    build_npc_system_prompt,
    grounding_image_prompt,
    scene_image_prompt,
)
from .providers import (
    HttpProvider,
    ProviderConfig,
    ProviderError,
    ScriptedProvider,
    ScriptExhausted,
    backoff_delays,
)

__all__ = [
    "REPAIR_REMINDER",
    "TurnRequestResult",
    "generate_scene",
    "request_npc_turn",
    "request_scene_image",
    "PLAYER_EXPRESSION_TAG",
    "PromptBundle",
    "build_npc_system_prompt",
    "grounding_image_prompt",
    "scene_image_prompt",
    "HttpProvider",
    "ProviderConfig",
    "ProviderError",
    "ScriptedProvider",
    "ScriptExhausted",
    "backoff_delays",
]
