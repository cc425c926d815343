"""Sensor-term detection over canonical keywords."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

_EDGE_PUNCT = ".,;:()[]{}\"'"


@dataclass(frozen=True)
class SensorRules:
    patterns: tuple[str, ...]

    def __post_init__(self):
        if not self.patterns:
            raise ValueError("sensor rules need at least one pattern")


def _words(label: str) -> list[str]:
    # Word granularity: split on whitespace, shed punctuation stuck to
    # the edges so "(e-nose)" still reads as "e-nose".
    out = []
    for token in label.casefold().split():
        token = token.strip(_EDGE_PUNCT)
        if token:
            out.append(token)
    return out


def is_sensor_term(label: str, rules: SensorRules | None = None) -> bool:
    """True when the keyword names a sensor: one of its words matches a
    pattern ("aptamer" does not match, "gas sensor array" does)."""
    rules = rules or default_sensor_rules()
    words = _words(label)
    for pattern in rules.patterns:
        parts = pattern.split()
        if len(parts) == 1:
            if parts[0] in words:
                return True
        else:
            for i in range(len(words) - len(parts) + 1):
                if words[i : i + len(parts)] == parts:
                    return True
    return False


def load_sensor_rules(text: str) -> SensorRules:
    patterns = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            patterns.append(" ".join(line.casefold().split()))
    return SensorRules(patterns=tuple(patterns))


def load_sensor_rules_file(path: str | Path) -> SensorRules:
    return load_sensor_rules(Path(path).read_text(encoding="utf-8"))


_DEFAULT: SensorRules | None = None


def default_sensor_rules() -> SensorRules:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("coword_atlas").joinpath("data/sensor_rules.txt").read_text(
            encoding="utf-8"
        )
        _DEFAULT = load_sensor_rules(text)
    return _DEFAULT
