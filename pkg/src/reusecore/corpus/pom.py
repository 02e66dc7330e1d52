"""Parsing and serialization of the dependency subset of pom.xml files.

Only ``project/dependencies/dependency`` elements are read; everything
else in the pom (parents, properties, dependencyManagement, build
sections) is ignored. Property placeholders and version ranges are
preserved verbatim and flagged unresolved.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .coords import Ga, Gav

SCOPES = ("compile", "provided", "runtime", "test", "system", "import")
DEFAULT_SCOPE = "compile"


class MalformedXml(Exception):
    def __init__(self, message: str, position: tuple[int, int] | None = None):
        self.position = position
        at = f" at line {position[0]}, column {position[1]}" if position else ""
        super().__init__(f"{message}{at}")


@dataclass(frozen=True)
class DeclaredDependency:
    """One direct dependency declaration from a pom.

    ``version`` may be None when managed externally. Placeholder and range
    versions are kept verbatim; such declarations have no resolvable Gav.
    """

    group: str
    artifact: str
    version: str | None
    scope: str = DEFAULT_SCOPE
    optional: bool = False

    @property
    def ga(self) -> Ga:
        return Ga(self.group, self.artifact)

    @property
    def version_unresolved(self) -> bool:
        if self.version is None:
            return True
        return "${" in self.version or self.version[:1] in "[("

    @property
    def coordinates(self) -> Gav | None:
        """Exact coordinates, when the version is resolvable."""
        if self.version_unresolved:
            return None
        return Gav(self.group, self.artifact, self.version)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _child_text(element: ET.Element, name: str) -> str | None:
    for child in element:
        if _local(child.tag) == name:
            return (child.text or "").strip()
    return None


def parse_pom(data: bytes) -> list[DeclaredDependency]:
    """Extract direct dependency declarations from pom bytes."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        raise MalformedXml(str(e), getattr(e, "position", None)) from None

    out: list[DeclaredDependency] = []
    for section in root:
        if _local(section.tag) != "dependencies":
            continue
        for dep in section:
            if _local(dep.tag) != "dependency":
                continue
            group = _child_text(dep, "groupId")
            artifact = _child_text(dep, "artifactId")
            if not group or not artifact:
                raise MalformedXml("dependency without groupId/artifactId")
            version = _child_text(dep, "version") or None
            scope = _child_text(dep, "scope") or DEFAULT_SCOPE
            optional = (_child_text(dep, "optional") or "").lower() == "true"
            out.append(
                DeclaredDependency(
                    group=group, artifact=artifact, version=version, scope=scope, optional=optional
                )
            )
    return out


def serialize_pom(dependencies: list[DeclaredDependency], project: Gav | None = None) -> bytes:
    """Minimal pom document holding the given declarations;
    ``parse_pom(serialize_pom(deps)) == deps`` on the supported subset."""
    root = ET.Element("project")
    if project is not None:
        ET.SubElement(root, "groupId").text = project.group
        ET.SubElement(root, "artifactId").text = project.artifact
        ET.SubElement(root, "version").text = project.version
    container = ET.SubElement(root, "dependencies")
    for dep in dependencies:
        element = ET.SubElement(container, "dependency")
        ET.SubElement(element, "groupId").text = dep.group
        ET.SubElement(element, "artifactId").text = dep.artifact
        if dep.version is not None:
            ET.SubElement(element, "version").text = dep.version
        ET.SubElement(element, "scope").text = dep.scope
        ET.SubElement(element, "optional").text = "true" if dep.optional else "false"
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"
