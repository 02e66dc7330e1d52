"""Plain-text dump of a decoded class file, for debugging."""

from __future__ import annotations

from .model import ClassFile
from .scan import scan_references


def dump_class(cf: ClassFile) -> str:
    lines = [
        f"class {cf.binary_name}",
        f"  version: {cf.major_version}.{cf.minor_version}",
        f"  flags: {', '.join(sorted(cf.access_flags)) or '-'}",
        f"  super: {cf.super_name or '-'}",
        f"  interfaces: {', '.join(cf.interfaces) or '-'}",
        f"  annotations: {', '.join(cf.class_annotations) or '-'}",
        f"  constant pool size: {cf.constant_pool_size}",
    ]
    if cf.inner_access is not None:
        lines.append(f"  inner access: {', '.join(sorted(cf.inner_access)) or '-'}")
    for decl in cf.fields:
        extra = " synthetic" if decl.is_synthetic else ""
        lines.append(f"  field {decl.name}:{decl.descriptor} [{decl.visibility.value}{extra}]")
        for annotation in decl.annotations:
            lines.append(f"    @{annotation}")
    for decl in cf.methods:
        extra = " synthetic" if decl.is_synthetic else ""
        lines.append(
            f"  {decl.kind.value} {decl.name}{decl.descriptor} [{decl.visibility.value}{extra}]"
        )
        for annotation in decl.annotations:
            lines.append(f"    @{annotation}")
    lines.append("  references:")
    for ref in scan_references(cf):
        member = ref.member.render() if ref.member else "-"
        lines.append(f"    {ref.site.value:<16} {ref.target_type} {member} x{ref.count}")
    return "\n".join(lines) + "\n"
