"""Decoder for the JVM class-file binary format (big-endian, magic 0xCAFEBABE).

``parse_class`` either returns a fully decoded :class:`ClassFile` or raises
one of BadMagic, UnsupportedVersion, Truncated, MalformedPool — no other
outcome, whatever the input bytes.
"""

from __future__ import annotations

import struct

from . import mutf8
from .descriptors import is_internal_name, parse_descriptor
from .errors import BadMagic, MalformedDescriptor, MalformedPool, Truncated, UnsupportedVersion
from .model import (
    ACC_BRIDGE,
    ACC_SYNTHETIC,
    BootstrapEntry,
    ClassFile,
    MemberDecl,
    MemberHandle,
    MemberKind,
    class_flag_set,
    member_kind_of,
    member_visibility,
)
from .pool import (
    TAG_CLASS,
    TAG_DOUBLE,
    TAG_DYNAMIC,
    TAG_FIELDREF,
    TAG_INTEGER,
    TAG_FLOAT,
    TAG_INTERFACE_METHODREF,
    TAG_INVOKE_DYNAMIC,
    TAG_LONG,
    TAG_METHOD_HANDLE,
    TAG_METHOD_TYPE,
    TAG_METHODREF,
    TAG_MODULE,
    TAG_NAME_AND_TYPE,
    TAG_PACKAGE,
    TAG_STRING,
    TAG_UTF8,
    ConstantPool,
)

MAGIC = 0xCAFEBABE
MIN_MAJOR = 45  # Java 1.1
MAX_MAJOR = 65  # Java 21

# Nested-class access flags surfaced from the InnerClasses attribute.
_INNER_FLAG_NAMES = {
    0x0001: "public",
    0x0002: "private",
    0x0004: "protected",
    0x0008: "static",
    0x0010: "final",
    0x0200: "interface",
    0x0400: "abstract",
    0x1000: "synthetic",
    0x2000: "annotation",
    0x4000: "enum",
}

_MAX_ELEMENT_VALUE_DEPTH = 64


class _Reader:
    __slots__ = ("data", "pos")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _need(self, n: int, what: str) -> None:
        if self.pos + n > len(self.data):
            raise Truncated(self.pos, what)

    def u1(self, what: str = "u1") -> int:
        self._need(1, what)
        value = self.data[self.pos]
        self.pos += 1
        return value

    def u2(self, what: str = "u2") -> int:
        self._need(2, what)
        value = struct.unpack_from(">H", self.data, self.pos)[0]
        self.pos += 2
        return value

    def u4(self, what: str = "u4") -> int:
        self._need(4, what)
        value = struct.unpack_from(">I", self.data, self.pos)[0]
        self.pos += 4
        return value

    def raw(self, n: int, what: str = "bytes") -> bytes:
        self._need(n, what)
        value = self.data[self.pos : self.pos + n]
        self.pos += n
        return value

    def skip(self, n: int, what: str = "bytes") -> None:
        self._need(n, what)
        self.pos += n


def _read_pool(r: _Reader) -> ConstantPool:
    count = r.u2("constant pool count")
    if count == 0:
        raise MalformedPool("constant pool count is zero")
    entries: list[tuple | None] = [None]
    index = 1
    while index < count:
        tag = r.u1("constant tag")
        if tag == TAG_UTF8:
            length = r.u2("Utf8 length")
            raw = r.raw(length, "Utf8 bytes")
            try:
                text = mutf8.decode(raw)
            except ValueError as e:
                raise MalformedPool(f"undecodable Utf8 data: {e}", index) from None
            entries.append((tag, text))
        elif tag in (TAG_INTEGER, TAG_FLOAT):
            r.skip(4, "numeric constant")
            entries.append((tag,))
        elif tag in (TAG_LONG, TAG_DOUBLE):
            r.skip(8, "numeric constant")
            entries.append((tag,))
            entries.append(None)  # 8-byte constants take two slots
            index += 1
        elif tag in (TAG_CLASS, TAG_STRING, TAG_METHOD_TYPE, TAG_MODULE, TAG_PACKAGE):
            entries.append((tag, r.u2("pool index")))
        elif tag in (TAG_FIELDREF, TAG_METHODREF, TAG_INTERFACE_METHODREF, TAG_NAME_AND_TYPE):
            entries.append((tag, r.u2("pool index"), r.u2("pool index")))
        elif tag == TAG_METHOD_HANDLE:
            entries.append((tag, r.u1("handle kind"), r.u2("pool index")))
        elif tag in (TAG_DYNAMIC, TAG_INVOKE_DYNAMIC):
            entries.append((tag, r.u2("bootstrap index"), r.u2("pool index")))
        else:
            raise MalformedPool(f"unknown constant tag {tag}", index)
        index += 1
    return ConstantPool(entries, count)


def _checked_class_name(pool: ConstantPool, index: int, what: str) -> str:
    name = pool.class_name(index)
    if not is_internal_name(name):
        raise MalformedPool(f"invalid {what} name {name!r}", index)
    return name


def _valid_member_name(name: str, allow_specials: bool) -> bool:
    if not name:
        return False
    if name in ("<init>", "<clinit>"):
        return allow_specials
    return not any(c in ".;[/<>" for c in name)


def _skip_element_value(r: _Reader, end: int, depth: int) -> None:
    if depth > _MAX_ELEMENT_VALUE_DEPTH:
        raise MalformedPool("element value nesting too deep")
    tag = r.u1("element value tag")
    tag_char = chr(tag)
    if tag_char in "BCDFIJSZsc":
        r.u2("element value index")
    elif tag_char == "e":
        r.u2("enum type index")
        r.u2("enum const index")
    elif tag_char == "@":
        _skip_annotation(r, end, depth + 1)
    elif tag_char == "[":
        count = r.u2("array value count")
        for _ in range(count):
            _skip_element_value(r, end, depth + 1)
    else:
        raise MalformedPool(f"invalid element value tag 0x{tag:02X}")
    if r.pos > end:
        raise Truncated(end, "annotation element value")


def _skip_annotation(r: _Reader, end: int, depth: int) -> int:
    """Skip one annotation structure, returning its type Utf8 index."""
    type_index = r.u2("annotation type index")
    pair_count = r.u2("annotation pair count")
    for _ in range(pair_count):
        r.u2("element name index")
        _skip_element_value(r, end, depth)
    return type_index


def _annotation_type_name(pool: ConstantPool, type_index: int) -> str:
    text = pool.utf8(type_index)
    try:
        parsed = parse_descriptor(text)
    except MalformedDescriptor:
        raise MalformedPool(f"invalid annotation type descriptor {text!r}", type_index) from None
    if parsed.is_method or parsed.ret.object_name is None or parsed.ret.array_dims:
        raise MalformedPool(f"annotation type is not an object type: {text!r}", type_index)
    return parsed.ret.object_name


def _read_annotations_attr(r: _Reader, pool: ConstantPool, end: int) -> list[str]:
    names = []
    count = r.u2("annotation count")
    for _ in range(count):
        type_index = _skip_annotation(r, end, 0)
        names.append(_annotation_type_name(pool, type_index))
    return names


def _read_attributes(r: _Reader, pool: ConstantPool) -> list[tuple[str, int, int]]:
    """Read an attribute table, returning (name, start, end) triples and
    leaving the reader positioned after the table."""
    out = []
    count = r.u2("attribute count")
    for _ in range(count):
        name = pool.utf8(r.u2("attribute name index"))
        length = r.u4("attribute length")
        start = r.pos
        r.skip(length, f"attribute {name}")
        out.append((name, start, start + length))
    return out


def _read_member(
    r: _Reader, pool: ConstantPool, owner: str, is_field: bool
) -> tuple[MemberDecl, bytes | None]:
    flags = r.u2("member access flags")
    name_index = r.u2("member name index")
    desc_index = r.u2("member descriptor index")
    name = pool.utf8(name_index)
    descriptor = pool.utf8(desc_index)
    if not _valid_member_name(name, allow_specials=not is_field):
        raise MalformedPool(f"invalid member name {name!r}", name_index)
    try:
        parsed = parse_descriptor(descriptor)
    except MalformedDescriptor:
        raise MalformedPool(f"invalid member descriptor {descriptor!r}", desc_index) from None
    if parsed.is_method == is_field:
        raise MalformedPool(
            f"descriptor kind mismatch for {name!r}: {descriptor!r}", desc_index
        )

    annotations: list[str] = []
    synthetic_attr = False
    code: bytes | None = None
    attrs = _read_attributes(r, pool)
    for attr_name, start, end in attrs:
        sub = _Reader(r.data)
        sub.pos = start
        if attr_name in ("RuntimeVisibleAnnotations", "RuntimeInvisibleAnnotations"):
            annotations.extend(_read_annotations_attr(sub, pool, end))
        elif attr_name == "Synthetic":
            synthetic_attr = True
        elif attr_name == "Code" and not is_field:
            sub.u2("max_stack")
            sub.u2("max_locals")
            code_length = sub.u4("code length")
            if sub.pos + code_length > end:
                raise Truncated(sub.pos, "Code body")
            code = sub.raw(code_length, "Code body")
            # Exception table and nested attributes are not needed for
            # reference scanning; bounds were already checked via the
            # enclosing attribute length.

    if is_field:
        kind = MemberKind.FIELD
    else:
        kind = member_kind_of(name, descriptor)
    is_synthetic = bool(flags & (ACC_SYNTHETIC | ACC_BRIDGE)) or synthetic_attr
    decl = MemberDecl(
        owner=owner,
        name=name,
        descriptor=descriptor,
        kind=kind,
        visibility=member_visibility(flags),
        is_synthetic=is_synthetic,
        annotations=tuple(annotations),
    )
    return decl, code


def _read_bootstrap_methods(r: _Reader, pool: ConstantPool, end: int) -> list[BootstrapEntry]:
    entries = []
    count = r.u2("bootstrap method count")
    for _ in range(count):
        handle_index = r.u2("bootstrap handle index")
        handles = []
        owner, member = pool.method_handle_target(handle_index)
        handles.append(MemberHandle(owner, member))
        arg_count = r.u2("bootstrap argument count")
        for _ in range(arg_count):
            arg_index = r.u2("bootstrap argument index")
            if pool.tag(arg_index) == TAG_METHOD_HANDLE:
                arg_owner, arg_member = pool.method_handle_target(arg_index)
                handles.append(MemberHandle(arg_owner, arg_member))
        if r.pos > end:
            raise Truncated(end, "BootstrapMethods")
        entries.append(BootstrapEntry(handles=tuple(handles)))
    return entries


def parse_class(data: bytes) -> ClassFile:
    """Decode one class file from raw bytes."""
    r = _Reader(data)
    magic = r.u4("magic")
    if magic != MAGIC:
        raise BadMagic(magic)
    minor = r.u2("minor version")
    major = r.u2("major version")
    if not MIN_MAJOR <= major <= MAX_MAJOR:
        raise UnsupportedVersion(major)

    pool = _read_pool(r)
    pool.validate()

    access = r.u2("access flags")
    this_index = r.u2("this class index")
    super_index = r.u2("super class index")
    binary_name = _checked_class_name(pool, this_index, "class")
    super_name = None
    if super_index != 0:
        super_name = _checked_class_name(pool, super_index, "superclass")

    interface_count = r.u2("interface count")
    interfaces = tuple(
        _checked_class_name(pool, r.u2("interface index"), "interface")
        for _ in range(interface_count)
    )

    fields = []
    for _ in range(r.u2("field count")):
        decl, _ = _read_member(r, pool, binary_name, is_field=True)
        fields.append(decl)

    methods = []
    method_codes = []
    for _ in range(r.u2("method count")):
        decl, code = _read_member(r, pool, binary_name, is_field=False)
        methods.append(decl)
        method_codes.append(code)

    class_annotations: list[str] = []
    bootstrap_methods: list[BootstrapEntry] = []
    inner_access: frozenset[str] | None = None
    for attr_name, start, end in _read_attributes(r, pool):
        sub = _Reader(r.data)
        sub.pos = start
        if attr_name in ("RuntimeVisibleAnnotations", "RuntimeInvisibleAnnotations"):
            class_annotations.extend(_read_annotations_attr(sub, pool, end))
        elif attr_name == "BootstrapMethods":
            bootstrap_methods = _read_bootstrap_methods(sub, pool, end)
        elif attr_name == "InnerClasses":
            for _ in range(sub.u2("inner class count")):
                inner_info = sub.u2("inner class info index")
                sub.u2("outer class info index")
                sub.u2("inner name index")
                inner_flags = sub.u2("inner class access flags")
                if inner_info and pool.class_name(inner_info) == binary_name:
                    inner_access = frozenset(
                        name for mask, name in _INNER_FLAG_NAMES.items() if inner_flags & mask
                    )

    return ClassFile(
        binary_name=binary_name,
        major_version=major,
        minor_version=minor,
        access_flags=class_flag_set(access),
        super_name=super_name,
        interfaces=interfaces,
        fields=tuple(fields),
        methods=tuple(methods),
        class_annotations=tuple(class_annotations),
        constant_pool_size=pool.declared_count,
        inner_access=inner_access,
        pool=pool,
        method_codes=tuple(method_codes),
        bootstrap_methods=tuple(bootstrap_methods),
    )
