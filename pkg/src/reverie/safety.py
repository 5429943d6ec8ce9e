"""Local risk screen applied to player text before any provider verdict.

Defense in depth: the provider's safety gate and this lexicon are
independent triggers, and either one ends the session. The lexicon is a
plain phrase list so deployments can review and extend it without code
changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

_DEFAULT_LEXICON_RESOURCE = "risk_lexicon.txt"


@dataclass(frozen=True)
class RiskLexicon:
    phrases: tuple[str, ...]

    def match(self, text: str) -> str | None:
        """Return the first matching phrase, or None. Case-insensitive."""
        lowered = text.lower()
        for phrase in self.phrases:
            if phrase in lowered:
                return phrase
        return None

    @classmethod
    def from_lines(cls, lines) -> "RiskLexicon":
        phrases = []
        for line in lines:
            phrase = line.strip().lower()
            if phrase and not phrase.startswith("#"):
                phrases.append(phrase)
        return cls(phrases=tuple(phrases))

    @classmethod
    def from_file(cls, path: str | Path) -> "RiskLexicon":
        return cls.from_lines(Path(path).read_text(encoding="utf-8").splitlines())

    @classmethod
    def bundled(cls) -> "RiskLexicon":
        text = (
            resources.files("reverie")
            .joinpath("data", _DEFAULT_LEXICON_RESOURCE)
            .read_text(encoding="utf-8")
        )
        return cls.from_lines(text.splitlines())
