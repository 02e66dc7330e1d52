"""Standard local repository layout."""

from __future__ import annotations

from pathlib import Path

from .coords import Ga, Gav


def locate(gav: Gav, repo_root: Path | str) -> tuple[Path, Path]:
    """Paths of the jar and pom for ``gav`` under a standard repository
    layout. Existence is not checked; the caller decides what missing
    files mean."""
    base = Path(repo_root) / gav.group.replace(".", "/") / gav.artifact / gav.version
    stem = f"{gav.artifact}-{gav.version}"
    return base / f"{stem}.jar", base / f"{stem}.pom"


def versions_in_repo(ga: Ga, repo_root: Path | str) -> list[str]:
    """Versions of ``ga`` present in the repository (directories holding a
    jar file), sorted lexicographically."""
    base = Path(repo_root) / ga.group.replace(".", "/") / ga.artifact
    if not base.is_dir():
        return []
    found = []
    for child in sorted(base.iterdir()):
        if child.is_dir() and (child / f"{ga.artifact}-{child.name}.jar").is_file():
            found.append(child.name)
    return found


def all_poms(repo_root: Path | str) -> list[tuple[Gav, Path]]:
    """Every pom in the repository whose path matches the standard layout,
    with coordinates derived from the path. Sorted by coordinates."""
    root = Path(repo_root)
    out: list[tuple[Gav, Path]] = []
    for pom_path in root.rglob("*.pom"):
        version_dir = pom_path.parent
        artifact_dir = version_dir.parent
        expected = f"{artifact_dir.name}-{version_dir.name}.pom"
        if pom_path.name != expected:
            continue
        group = ".".join(artifact_dir.parent.relative_to(root).parts)
        if not group:
            continue
        out.append((Gav(group, artifact_dir.name, version_dir.name), pom_path))
    out.sort(key=lambda item: item[0])
    return out
