"""Reverie: an LLM-driven stress-relief dialogue game engine.

The package bundles the NPC turn contract, the session state machine,
three micro-intervention mini-games, a provider gateway with an offline
scripted double, an HTTP service with append-only session logs, and a
trial-statistics toolkit (scale scoring, ANCOVA, random-intercept LMM).
"""

__version__ = "0.1.0"
