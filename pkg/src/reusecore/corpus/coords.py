"""Artifact coordinates: GAV triples and version-agnostic GA pairs."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Ga:
    """Version-agnostic group:artifact pair; grouping key for LIB/CLIENT
    aggregation across versions."""

    group: str
    artifact: str

    def __post_init__(self):
        if not self.group or not self.artifact:
            raise ValueError("group and artifact must be non-empty")

    def __str__(self) -> str:
        return f"{self.group}:{self.artifact}"

    @staticmethod
    def parse(text: str) -> "Ga":
        parts = text.split(":")
        if len(parts) != 2:
            raise ValueError(f"not a group:artifact pair: {text!r}")
        return Ga(parts[0], parts[1])


@dataclass(frozen=True, order=True)
class Gav:
    """group:artifact:version coordinates of one artifact."""

    group: str
    artifact: str
    version: str

    def __post_init__(self):
        if not self.group or not self.artifact or not self.version:
            raise ValueError("group, artifact, and version must be non-empty")

    def __str__(self) -> str:
        return f"{self.group}:{self.artifact}:{self.version}"

    @property
    def ga(self) -> Ga:
        return Ga(self.group, self.artifact)

    @staticmethod
    def parse(text: str) -> "Gav":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"not a group:artifact:version triple: {text!r}")
        return Gav(parts[0], parts[1], parts[2])


def version_key(version: str) -> tuple:
    """Ordering key for version strings: numeric runs compare numerically,
    remaining runs lexicographically ("1.10" sorts above "1.9")."""
    parts: list[tuple[int, int, str]] = []
    for chunk in version.replace("-", ".").replace("_", ".").split("."):
        if chunk.isdigit():
            parts.append((1, int(chunk), ""))
        else:
            parts.append((0, 0, chunk))
    return tuple(parts)
