"""API surfaces and counted client usages.

A library's surface is its public types (plus protected nested types)
with their public and protected members. Usage extraction unions the
reference scans of every client class, keeps references landing on some
surface, and re-attributes member references that the surface type does
not declare to the type itself (possible inherited member). A client
archive's own types never count against any surface.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

from .classfile.errors import ClassFileError
from .classfile.model import ClassFile, MemberDecl, MemberRef, Visibility
from .classfile.parser import parse_class
from .classfile.scan import scan_references
from .corpus.archive import ArtifactArchive
from .corpus.coords import Gav

logger = logging.getLogger(__name__)


class TypeKind(str, Enum):
    CLASS = "class"
    INTERFACE = "interface"
    ANNOTATION = "annotation"


@dataclass(frozen=True)
class ApiType:
    """One externally visible type of a library."""

    name: str
    kind: TypeKind
    package: str
    members: tuple[MemberDecl, ...]

    def member_keys(self) -> frozenset[tuple[str, str]]:
        return frozenset(m.key for m in self.members)


@dataclass(frozen=True)
class ApiSurface:
    """The externally visible types and members of one library version.

    ``errors`` lists class entries that failed to decode; a malformed
    entry never aborts the archive.
    """

    library: Gav
    types: tuple[ApiType, ...]
    errors: tuple[str, ...] = ()

    def type_names(self) -> frozenset[str]:
        return frozenset(t.name for t in self.types)

    def kind_counts(self) -> dict[str, int]:
        counts = {"class": 0, "interface": 0, "annotation": 0}
        for t in self.types:
            counts[t.kind.value] += 1
        return counts


@dataclass(frozen=True)
class UsageRecord:
    """One client's counted references to one API target."""

    client: Gav
    library: Gav
    target_type: str
    member: MemberRef | None
    count: int

    def sort_key(self) -> tuple:
        member_key = self.member.render() if self.member else ""
        return (self.client, self.library, self.target_type, member_key)


@dataclass(frozen=True)
class InternalUsageReport:
    """Per public type: referenced from another package of the same
    archive, and referenced by any external client."""

    library: Gav
    entries: tuple[tuple[str, bool, bool], ...]  # (type, cross_package, externally_used)

    def cross_package_types(self) -> frozenset[str]:
        return frozenset(name for name, cross, _ in self.entries if cross)

    def crosstab(self) -> dict[tuple[bool, bool], int]:
        table: dict[tuple[bool, bool], int] = {}
        for _, cross, external in self.entries:
            table[(cross, external)] = table.get((cross, external), 0) + 1
        return table


def _is_surface_type(cf: ClassFile) -> bool:
    if cf.is_synthetic:
        return False
    if cf.is_public:
        return True
    # protected nested types are public at the member level
    inner = cf.inner_access or frozenset()
    return "protected" in inner or "public" in inner


def _parse_all(archive: ArtifactArchive) -> tuple[list[ClassFile], list[str]]:
    parsed: list[ClassFile] = []
    errors: list[str] = []
    for entry in sorted(archive.class_entries):
        try:
            parsed.append(parse_class(archive.read_entry(entry)))
        except ClassFileError as e:
            logger.warning("%s: skipping %s: %s", archive.coordinates, entry, e)
            errors.append(f"{entry}: {e}")
    return parsed, errors


def extract_api_surface(archive: ArtifactArchive) -> ApiSurface:
    """Decode every class entry of ``archive`` and collect its API surface."""
    parsed, errors = _parse_all(archive)
    types: dict[str, ApiType] = {}
    for cf in parsed:
        if not _is_surface_type(cf) or cf.binary_name in types:
            continue
        members = tuple(
            decl
            for decl in (*cf.fields, *cf.methods)
            if decl.visibility in (Visibility.PUBLIC, Visibility.PROTECTED)
            and not decl.is_synthetic
            and decl.name != "<clinit>"
        )
        types[cf.binary_name] = ApiType(
            name=cf.binary_name,
            kind=TypeKind(cf.kind),
            package=cf.package,
            members=members,
        )
    ordered = tuple(types[name] for name in sorted(types))
    return ApiSurface(library=archive.coordinates, types=ordered, errors=tuple(errors))


def extract_usages(
    client: ArtifactArchive, surfaces: Iterable[ApiSurface]
) -> list[UsageRecord]:
    """Counted references from ``client`` into the given surfaces.

    When the same type name occurs in several surfaces it is attributed to
    the lexicographically smallest library coordinates, so results do not
    depend on the iteration order of ``surfaces``.
    """
    surface_list = sorted(surfaces, key=lambda s: s.library)
    targets: dict[str, tuple[Gav, frozenset[tuple[str, str]]]] = {}
    for surface in surface_list:
        if surface.library == client.coordinates:
            continue  # a library never uses its own surface
        for api_type in surface.types:
            if api_type.name not in targets:
                targets[api_type.name] = (surface.library, api_type.member_keys())

    parsed, _errors = _parse_all(client)
    own_types = {cf.binary_name for cf in parsed}

    counts: Counter[tuple[Gav, str, MemberRef | None]] = Counter()
    for cf in parsed:
        for ref in scan_references(cf):
            if ref.target_type in own_types:
                continue
            hit = targets.get(ref.target_type)
            if hit is None:
                continue
            library, member_keys = hit
            member = ref.member
            if member is not None and member.key not in member_keys:
                member = None  # not declared on the referenced type: fold to type level
            counts[(library, ref.target_type, member)] += ref.count

    records = [
        UsageRecord(
            client=client.coordinates,
            library=library,
            target_type=target,
            member=member,
            count=count,
        )
        for (library, target, member), count in counts.items()
    ]
    records.sort(key=UsageRecord.sort_key)
    return records


def internal_usage(
    archive: ArtifactArchive, surface: ApiSurface, external: "object | None" = None
) -> InternalUsageReport:
    """Cross-package internal references to the archive's own public types,
    cross-tabulated against external usage. ``external`` is any object with
    a ``type_nodes`` attribute (a usage graph), or None."""
    surface_packages = {t.name: t.package for t in surface.types}
    externally_used: frozenset[str] = getattr(external, "type_nodes", frozenset()) or frozenset()

    cross: set[str] = set()
    parsed, _errors = _parse_all(archive)
    for cf in parsed:
        for ref in scan_references(cf):
            package = surface_packages.get(ref.target_type)
            if package is not None and package != cf.package:
                cross.add(ref.target_type)

    entries = tuple(
        (name, name in cross, name in externally_used) for name in sorted(surface_packages)
    )
    return InternalUsageReport(library=surface.library, entries=entries)


# Line-delimited wire format:
# client_gav<TAB>library_gav<TAB>type<TAB>member_or_-<TAB>count

def render_record(record: UsageRecord) -> str:
    member = record.member.render() if record.member else "-"
    return "\t".join(
        (str(record.client), str(record.library), record.target_type, member, str(record.count))
    )


def parse_record(line: str) -> UsageRecord:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 5:
        raise ValueError(f"not a usage record: {line!r}")
    client, library, target, member_text, count = parts
    member = None if member_text == "-" else MemberRef.parse(member_text)
    return UsageRecord(
        client=Gav.parse(client),
        library=Gav.parse(library),
        target_type=target,
        member=member,
        count=int(count),
    )


def write_records(records: Sequence[UsageRecord], fp: IO[str]) -> None:
    for record in sorted(records, key=UsageRecord.sort_key):
        fp.write(render_record(record) + "\n")


def read_records(fp: IO[str]) -> list[UsageRecord]:
    return [parse_record(line) for line in fp if line.strip()]
