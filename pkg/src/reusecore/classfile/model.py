"""Structured model of a decoded JVM class file and its outgoing references."""

from __future__ import annotations

import typing
from dataclasses import dataclass, field
from enum import Enum

if typing.TYPE_CHECKING:
    from .pool import ConstantPool


class Site(str, Enum):
    """Where a symbolic reference occurs."""

    INSTRUCTION = "instruction"
    FIELD_DECL = "field_decl"
    METHOD_SIGNATURE = "method_signature"
    SUPERTYPE = "supertype"
    INTERFACE = "interface"
    ANNOTATION = "annotation"
    BOOTSTRAP = "bootstrap"


class MemberKind(str, Enum):
    FIELD = "field"
    METHOD = "method"
    CONSTRUCTOR = "constructor"


class Visibility(str, Enum):
    PUBLIC = "public"
    PROTECTED = "protected"
    PACKAGE = "package"
    PRIVATE = "private"


# Class-level access flags exposed on the model. ACC_SUPER is historical
# noise and intentionally absent.
CLASS_FLAG_NAMES = {
    0x0001: "public",
    0x0010: "final",
    0x0200: "interface",
    0x0400: "abstract",
    0x1000: "synthetic",
    0x2000: "annotation",
    0x4000: "enum",
}

ACC_PUBLIC = 0x0001
ACC_PRIVATE = 0x0002
ACC_PROTECTED = 0x0004
ACC_STATIC = 0x0008
ACC_FINAL = 0x0010
ACC_SUPER = 0x0020
ACC_BRIDGE = 0x0040
ACC_VARARGS = 0x0080
ACC_INTERFACE = 0x0200
ACC_ABSTRACT = 0x0400
ACC_SYNTHETIC = 0x1000
ACC_ANNOTATION = 0x2000
ACC_ENUM = 0x4000


def class_flag_set(flags: int) -> frozenset[str]:
    return frozenset(name for mask, name in CLASS_FLAG_NAMES.items() if flags & mask)


def member_visibility(flags: int) -> Visibility:
    if flags & ACC_PUBLIC:
        return Visibility.PUBLIC
    if flags & ACC_PROTECTED:
        return Visibility.PROTECTED
    if flags & ACC_PRIVATE:
        return Visibility.PRIVATE
    return Visibility.PACKAGE


def member_kind_of(name: str, descriptor: str) -> MemberKind:
    if not descriptor.startswith("("):
        return MemberKind.FIELD
    if name == "<init>":
        return MemberKind.CONSTRUCTOR
    return MemberKind.METHOD


@dataclass(frozen=True, order=True)
class MemberRef:
    """Identity of a referenced field, method, or constructor."""

    name: str
    descriptor: str
    kind: MemberKind

    @property
    def key(self) -> tuple[str, str]:
        return (self.name, self.descriptor)

    def render(self) -> str:
        # Method descriptors begin with '(' so name+descriptor is unambiguous;
        # fields use a ':' separator.
        if self.kind is MemberKind.FIELD:
            return f"{self.name}:{self.descriptor}"
        return f"{self.name}{self.descriptor}"

    @staticmethod
    def parse(text: str) -> "MemberRef":
        paren = text.find("(")
        colon = text.find(":")
        if paren >= 0 and (colon < 0 or paren < colon):
            name, descriptor = text[:paren], text[paren:]
        elif colon >= 0:
            name, descriptor = text[:colon], text[colon + 1 :]
        else:
            raise ValueError(f"not a rendered member: {text!r}")
        return MemberRef(name, descriptor, member_kind_of(name, descriptor))


@dataclass(frozen=True)
class SymbolRef:
    """One distinct (target, member, site) with its occurrence count."""

    target_type: str
    member: MemberRef | None
    site: Site
    count: int

    def sort_key(self) -> tuple[str, str, str]:
        member_key = self.member.render() if self.member else ""
        return (self.target_type, member_key, self.site.value)


@dataclass(frozen=True)
class MemberDecl:
    """A field or method declared by a class."""

    owner: str
    name: str
    descriptor: str
    kind: MemberKind
    visibility: Visibility
    is_synthetic: bool
    annotations: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.name, self.descriptor)


@dataclass(frozen=True)
class MemberHandle:
    """Resolved target of a method-handle constant."""

    target_type: str
    member: MemberRef


@dataclass(frozen=True)
class BootstrapEntry:
    """One BootstrapMethods entry with its resolvable method-handle targets
    (the bootstrap method itself plus any method-handle static arguments)."""

    handles: tuple[MemberHandle, ...]


@dataclass(frozen=True)
class ClassFile:
    """Decoded class file.

    Code attributes and the constant pool are retained privately so that
    reference scanning can run without re-reading the input bytes.
    """

    binary_name: str
    major_version: int
    minor_version: int
    access_flags: frozenset[str]
    super_name: str | None
    interfaces: tuple[str, ...]
    fields: tuple[MemberDecl, ...]
    methods: tuple[MemberDecl, ...]
    class_annotations: tuple[str, ...]
    constant_pool_size: int
    inner_access: frozenset[str] | None = None
    pool: "ConstantPool" = field(repr=False, compare=False, default=None)  # type: ignore[assignment]
    method_codes: tuple[bytes | None, ...] = field(repr=False, compare=False, default=())
    bootstrap_methods: tuple[BootstrapEntry, ...] = field(repr=False, compare=False, default=())

    @property
    def is_public(self) -> bool:
        return "public" in self.access_flags

    @property
    def is_interface(self) -> bool:
        return "interface" in self.access_flags

    @property
    def is_annotation(self) -> bool:
        return "annotation" in self.access_flags

    @property
    def is_synthetic(self) -> bool:
        return "synthetic" in self.access_flags

    @property
    def kind(self) -> str:
        if self.is_annotation:
            return "annotation"
        if self.is_interface:
            return "interface"
        return "class"

    @property
    def package(self) -> str:
        head, _, _ = self.binary_name.rpartition("/")
        return head
