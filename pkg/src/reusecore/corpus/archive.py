"""Read-only access to jar archives from a local repository layout."""

from __future__ import annotations

import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from .coords import Gav


class NotAZip(Exception):
    """The file is not a zip archive."""


class CorruptArchive(Exception):
    """The zip central directory or an entry is inconsistent."""


@dataclass
class ArtifactArchive:
    """One artifact's jar: coordinates plus the archive entry table.

    Duplicate entry paths (which shaded jars occasionally contain) are
    deduplicated keeping the first occurrence, so entry paths are unique.
    module-info and META-INF (including multi-release overlays) never
    appear among class entries: base classes only.
    """

    coordinates: Gav
    path: Path
    entries: tuple[tuple[str, int], ...]
    class_entries: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        self.class_entries = tuple(
            name
            for name, _ in self.entries
            if name.endswith(".class")
            and not name.startswith("META-INF/")
            and name != "module-info.class"
        )

    def read_entry(self, name: str) -> bytes:
        try:
            with zipfile.ZipFile(self.path) as zf:
                return zf.read(name)
        except (zipfile.BadZipFile, KeyError, OSError, NotImplementedError) as e:
            raise CorruptArchive(f"{self.path}: cannot read entry {name!r}: {e}") from None

    def class_names(self) -> frozenset[str]:
        """Internal type names derived from class entry paths."""
        return frozenset(name[: -len(".class")] for name in self.class_entries)


def open_archive(path: Path | str, coordinates: Gav | None = None) -> ArtifactArchive:
    """Open a jar and enumerate its central directory.

    Entry bytes are read lazily via :meth:`ArtifactArchive.read_entry`;
    nested jars are not expanded.
    """
    path = Path(path)
    if coordinates is None:
        coordinates = Gav("unknown", path.stem or "artifact", "0")
    try:
        with zipfile.ZipFile(path) as zf:
            infos = zf.infolist()
    except zipfile.BadZipFile as e:
        raise NotAZip(f"{path}: {e}") from None
    except OSError:
        raise
    except Exception as e:  # zipfile raises various errors on mangled directories
        raise CorruptArchive(f"{path}: {e}") from None

    entries: list[tuple[str, int]] = []
    seen: set[str] = set()
    for info in infos:
        if info.is_dir():
            continue
        if info.filename in seen:
            continue
        seen.add(info.filename)
        entries.append((info.filename, info.file_size))
    return ArtifactArchive(coordinates=coordinates, path=path, entries=tuple(entries))
