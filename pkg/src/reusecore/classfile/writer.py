"""Assembly of synthetic class files.

Produces structurally valid class files for fixture corpora and tests.
Bodies are not meant to pass bytecode verification (a non-goal); they are
meant to decode and scan exactly as written.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from . import mutf8
from .model import (
    ACC_ABSTRACT,
    ACC_ANNOTATION,
    ACC_INTERFACE,
    ACC_PUBLIC,
    ACC_STATIC,
    ACC_SUPER,
)

HANDLE_KINDS = {
    "getfield": 1,
    "getstatic": 2,
    "putfield": 3,
    "putstatic": 4,
    "invokevirtual": 5,
    "invokestatic": 6,
    "invokespecial": 7,
    "newinvokespecial": 8,
    "invokeinterface": 9,
}

DEFAULT_MAJOR = 52  # Java 8


class _PoolBuilder:
    def __init__(self):
        self._items: list[bytes] = []
        self._index: dict[tuple, int] = {}

    def _intern(self, key: tuple, payload: bytes) -> int:
        existing = self._index.get(key)
        if existing is not None:
            return existing
        self._items.append(payload)
        index = len(self._items)  # pool indexes are 1-based
        self._index[key] = index
        return index

    def utf8(self, text: str) -> int:
        raw = mutf8.encode(text)
        return self._intern(("utf8", text), struct.pack(">BH", 1, len(raw)) + raw)

    def class_(self, name: str) -> int:
        return self._intern(("class", name), struct.pack(">BH", 7, self.utf8(name)))

    def string(self, text: str) -> int:
        return self._intern(("string", text), struct.pack(">BH", 8, self.utf8(text)))

    def integer(self, value: int) -> int:
        return self._intern(("int", value), struct.pack(">Bi", 3, value))

    def name_and_type(self, name: str, descriptor: str) -> int:
        return self._intern(
            ("nat", name, descriptor),
            struct.pack(">BHH", 12, self.utf8(name), self.utf8(descriptor)),
        )

    def member_ref(self, tag: int, owner: str, name: str, descriptor: str) -> int:
        return self._intern(
            ("ref", tag, owner, name, descriptor),
            struct.pack(">BHH", tag, self.class_(owner), self.name_and_type(name, descriptor)),
        )

    def fieldref(self, owner: str, name: str, descriptor: str) -> int:
        return self.member_ref(9, owner, name, descriptor)

    def methodref(self, owner: str, name: str, descriptor: str) -> int:
        return self.member_ref(10, owner, name, descriptor)

    def interface_methodref(self, owner: str, name: str, descriptor: str) -> int:
        return self.member_ref(11, owner, name, descriptor)

    def method_handle(self, kind: str, owner: str, name: str, descriptor: str,
                      owner_is_interface: bool = False) -> int:
        kind_value = HANDLE_KINDS[kind]
        if kind_value == 9 or (owner_is_interface and kind_value in (6, 7)):
            ref = self.interface_methodref(owner, name, descriptor)
        elif kind_value <= 4:
            ref = self.fieldref(owner, name, descriptor)
        else:
            ref = self.methodref(owner, name, descriptor)
        return self._intern(("handle", kind_value, ref), struct.pack(">BBH", 15, kind_value, ref))

    def method_type(self, descriptor: str) -> int:
        return self._intern(("mtype", descriptor), struct.pack(">BH", 16, self.utf8(descriptor)))

    def invoke_dynamic(self, bsm_index: int, name: str, descriptor: str) -> int:
        return self._intern(
            ("indy", bsm_index, name, descriptor),
            struct.pack(">BHH", 18, bsm_index, self.name_and_type(name, descriptor)),
        )

    def serialize(self) -> bytes:
        return struct.pack(">H", len(self._items) + 1) + b"".join(self._items)


@dataclass(frozen=True)
class Handle:
    """A method-handle constant: kind name, owner, member name, descriptor."""

    kind: str
    owner: str
    name: str
    descriptor: str
    owner_is_interface: bool = False


@dataclass(frozen=True)
class Bootstrap:
    """A bootstrap-methods entry: the bootstrap handle plus static args,
    each arg being a Handle, a class name (str prefixed 'class:'), a
    method-type descriptor ('mtype:...'), or an int."""

    method: Handle
    args: tuple = ()


class CodeBuilder:
    """Sequence of instructions assembled into a Code attribute body."""

    def __init__(self):
        self._ops: list = []

    def _append(self, fn) -> "CodeBuilder":
        self._ops.append(fn)
        return self

    def invokevirtual(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB6, p.methodref(owner, name, descriptor)))

    def invokespecial(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB7, p.methodref(owner, name, descriptor)))

    def invokestatic(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB8, p.methodref(owner, name, descriptor)))

    def invokeinterface(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(
            lambda p, b: struct.pack(">BHBB", 0xB9, p.interface_methodref(owner, name, descriptor), 1, 0)
        )

    def getstatic(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB2, p.fieldref(owner, name, descriptor)))

    def putstatic(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB3, p.fieldref(owner, name, descriptor)))

    def getfield(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB4, p.fieldref(owner, name, descriptor)))

    def putfield(self, owner: str, name: str, descriptor: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xB5, p.fieldref(owner, name, descriptor)))

    def new(self, name: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xBB, p.class_(name)))

    def checkcast(self, name: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xC0, p.class_(name)))

    def instanceof(self, name: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xC1, p.class_(name)))

    def anewarray(self, name: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0xBD, p.class_(name)))

    def ldc_class(self, name: str) -> "CodeBuilder":
        return self._append(lambda p, b: struct.pack(">BH", 0x13, p.class_(name)))

    def ldc_handle(self, handle: Handle) -> "CodeBuilder":
        return self._append(
            lambda p, b: struct.pack(
                ">BH",
                0x13,
                p.method_handle(handle.kind, handle.owner, handle.name,
                                handle.descriptor, handle.owner_is_interface),
            )
        )

    def invokedynamic(self, name: str, descriptor: str, bootstrap: Bootstrap) -> "CodeBuilder":
        def emit(p: _PoolBuilder, builder: "ClassFileBuilder") -> bytes:
            bsm_index = builder._bootstrap_index(bootstrap, p)
            return struct.pack(">BHBB", 0xBA, p.invoke_dynamic(bsm_index, name, descriptor), 0, 0)

        return self._append(emit)

    def aconst_null(self) -> "CodeBuilder":
        return self._append(lambda p, b: b"\x01")

    def return_(self) -> "CodeBuilder":
        return self._append(lambda p, b: b"\xb1")

    def assemble(self, pool: _PoolBuilder, builder: "ClassFileBuilder") -> bytes:
        return b"".join(op(pool, builder) for op in self._ops)


@dataclass
class _Member:
    name: str
    descriptor: str
    flags: int
    code: CodeBuilder | None
    annotations: tuple[str, ...]
    invisible_annotations: tuple[str, ...]


@dataclass
class _InnerClassEntry:
    inner: str
    outer: str | None
    simple_name: str | None
    flags: int


def _attribute(pool: _PoolBuilder, name: str, payload: bytes) -> bytes:
    return struct.pack(">HI", pool.utf8(name), len(payload)) + payload


def _annotations_payload(pool: _PoolBuilder, names: tuple[str, ...]) -> bytes:
    out = struct.pack(">H", len(names))
    for name in names:
        out += struct.pack(">HH", pool.utf8(f"L{name};"), 0)
    return out


class ClassFileBuilder:
    """Builder for one synthetic class file."""

    def __init__(
        self,
        name: str,
        *,
        kind: str = "class",
        super_name: str | None = "java/lang/Object",
        interfaces: tuple[str, ...] = (),
        access: int | None = None,
        major: int = DEFAULT_MAJOR,
    ):
        self.name = name
        self.super_name = super_name
        self.interfaces = list(interfaces)
        self.major = major
        if access is not None:
            self.access = access
        elif kind == "interface":
            self.access = ACC_PUBLIC | ACC_INTERFACE | ACC_ABSTRACT
        elif kind == "annotation":
            self.access = ACC_PUBLIC | ACC_INTERFACE | ACC_ABSTRACT | ACC_ANNOTATION
            self.interfaces.append("java/lang/annotation/Annotation")
        else:
            self.access = ACC_PUBLIC | ACC_SUPER
        self._fields: list[_Member] = []
        self._methods: list[_Member] = []
        self._class_annotations: list[str] = []
        self._class_invisible_annotations: list[str] = []
        self._bootstraps: list[Bootstrap] = []
        self._inner_classes: list[_InnerClassEntry] = []

    def add_class_annotation(self, name: str, visible: bool = True) -> "ClassFileBuilder":
        (self._class_annotations if visible else self._class_invisible_annotations).append(name)
        return self

    def add_field(
        self,
        name: str,
        descriptor: str,
        *,
        flags: int = ACC_PUBLIC,
        annotations: tuple[str, ...] = (),
        invisible_annotations: tuple[str, ...] = (),
    ) -> "ClassFileBuilder":
        self._fields.append(_Member(name, descriptor, flags, None, tuple(annotations),
                                    tuple(invisible_annotations)))
        return self

    def add_method(
        self,
        name: str,
        descriptor: str,
        *,
        flags: int = ACC_PUBLIC,
        code: CodeBuilder | None = None,
        annotations: tuple[str, ...] = (),
        invisible_annotations: tuple[str, ...] = (),
    ) -> "ClassFileBuilder":
        if code is None and not flags & ACC_ABSTRACT:
            code = CodeBuilder().return_()
        self._methods.append(_Member(name, descriptor, flags, code, tuple(annotations),
                                     tuple(invisible_annotations)))
        return self

    def add_inner_class(self, inner: str, outer: str | None, simple_name: str | None,
                        flags: int) -> "ClassFileBuilder":
        self._inner_classes.append(_InnerClassEntry(inner, outer, simple_name, flags))
        return self

    def _bootstrap_index(self, bootstrap: Bootstrap, pool: _PoolBuilder) -> int:
        for i, existing in enumerate(self._bootstraps):
            if existing == bootstrap:
                return i
        self._bootstraps.append(bootstrap)
        return len(self._bootstraps) - 1

    def _bootstrap_arg_index(self, arg, pool: _PoolBuilder) -> int:
        if isinstance(arg, Handle):
            return pool.method_handle(arg.kind, arg.owner, arg.name, arg.descriptor,
                                      arg.owner_is_interface)
        if isinstance(arg, int):
            return pool.integer(arg)
        if isinstance(arg, str):
            if arg.startswith("class:"):
                return pool.class_(arg[len("class:"):])
            if arg.startswith("mtype:"):
                return pool.method_type(arg[len("mtype:"):])
            return pool.string(arg)
        raise TypeError(f"unsupported bootstrap argument {arg!r}")

    def _member_bytes(self, pool: _PoolBuilder, member: _Member) -> bytes:
        attrs: list[bytes] = []
        if member.code is not None:
            body = member.code.assemble(pool, self)
            payload = struct.pack(">HHI", 8, 8, len(body)) + body + struct.pack(">HH", 0, 0)
            attrs.append(_attribute(pool, "Code", payload))
        if member.annotations:
            attrs.append(_attribute(pool, "RuntimeVisibleAnnotations",
                                    _annotations_payload(pool, member.annotations)))
        if member.invisible_annotations:
            attrs.append(_attribute(pool, "RuntimeInvisibleAnnotations",
                                    _annotations_payload(pool, member.invisible_annotations)))
        header = struct.pack(
            ">HHHH", member.flags, pool.utf8(member.name), pool.utf8(member.descriptor), len(attrs)
        )
        return header + b"".join(attrs)

    def build(self) -> bytes:
        pool = _PoolBuilder()

        this_index = pool.class_(self.name)
        super_index = pool.class_(self.super_name) if self.super_name else 0
        interface_indexes = [pool.class_(i) for i in self.interfaces]
        field_bytes = [self._member_bytes(pool, f) for f in self._fields]
        method_bytes = [self._member_bytes(pool, m) for m in self._methods]

        class_attrs: list[bytes] = []
        if self._class_annotations:
            class_attrs.append(_attribute(pool, "RuntimeVisibleAnnotations",
                                          _annotations_payload(pool, tuple(self._class_annotations))))
        if self._class_invisible_annotations:
            class_attrs.append(
                _attribute(pool, "RuntimeInvisibleAnnotations",
                           _annotations_payload(pool, tuple(self._class_invisible_annotations)))
            )
        if self._inner_classes:
            payload = struct.pack(">H", len(self._inner_classes))
            for entry in self._inner_classes:
                payload += struct.pack(
                    ">HHHH",
                    pool.class_(entry.inner),
                    pool.class_(entry.outer) if entry.outer else 0,
                    pool.utf8(entry.simple_name) if entry.simple_name else 0,
                    entry.flags,
                )
            class_attrs.append(_attribute(pool, "InnerClasses", payload))
        if self._bootstraps:
            payload = struct.pack(">H", len(self._bootstraps))
            for bootstrap in self._bootstraps:
                handle_index = pool.method_handle(
                    bootstrap.method.kind,
                    bootstrap.method.owner,
                    bootstrap.method.name,
                    bootstrap.method.descriptor,
                    bootstrap.method.owner_is_interface,
                )
                arg_indexes = [self._bootstrap_arg_index(a, pool) for a in bootstrap.args]
                payload += struct.pack(">HH", handle_index, len(arg_indexes))
                payload += b"".join(struct.pack(">H", a) for a in arg_indexes)
            class_attrs.append(_attribute(pool, "BootstrapMethods", payload))

        body = struct.pack(">HHH", self.access, this_index, super_index)
        body += struct.pack(">H", len(interface_indexes))
        body += b"".join(struct.pack(">H", i) for i in interface_indexes)
        body += struct.pack(">H", len(field_bytes)) + b"".join(field_bytes)
        body += struct.pack(">H", len(method_bytes)) + b"".join(method_bytes)
        body += struct.pack(">H", len(class_attrs)) + b"".join(class_attrs)

        header = struct.pack(">IHH", 0xCAFEBABE, 0, self.major)
        return header + pool.serialize() + body


def static_flags(base: int = ACC_PUBLIC) -> int:
    return base | ACC_STATIC
