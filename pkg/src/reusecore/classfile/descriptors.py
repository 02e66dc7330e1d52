"""Parsing and unparsing of JVM field and method descriptors.

Field descriptor:  B|C|D|F|I|J|S|Z | L<internal name>; | [<field descriptor>
Method descriptor: ( <field descriptor>* ) ( <field descriptor> | V )
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedDescriptor

PRIMITIVE_NAMES = {
    "B": "byte",
    "C": "char",
    "D": "double",
    "F": "float",
    "I": "int",
    "J": "long",
    "S": "short",
    "Z": "boolean",
    "V": "void",
}

_BAD_NAME_CHARS = set(".;[")


def is_internal_name(name: str) -> bool:
    """True if ``name`` matches the internal-name grammar segment('/'segment)*."""
    if not name:
        return False
    for segment in name.split("/"):
        if not segment or any(c in _BAD_NAME_CHARS for c in segment):
            return False
    return True


@dataclass(frozen=True)
class JvmType:
    """One semantic type position in a descriptor.

    Exactly one of ``primitive`` (a single descriptor letter, with 'V' for
    void) and ``object_name`` (an internal type name) is set.
    """

    primitive: str | None = None
    object_name: str | None = None
    array_dims: int = 0

    @property
    def is_void(self) -> bool:
        return self.primitive == "V"

    def unparse(self) -> str:
        base = self.primitive if self.primitive else f"L{self.object_name};"
        return "[" * self.array_dims + base

    def display(self) -> str:
        base = PRIMITIVE_NAMES[self.primitive] if self.primitive else self.object_name
        return base + "[]" * self.array_dims


VOID = JvmType(primitive="V")


@dataclass(frozen=True)
class Descriptor:
    """A parsed field or method descriptor."""

    params: tuple[JvmType, ...]
    ret: JvmType
    is_method: bool

    @property
    def referenced_types(self) -> tuple[str, ...]:
        """Object type names in first-occurrence order, arrays unwrapped,
        primitives excluded, duplicates removed."""
        seen: list[str] = []
        for t in (*self.params, self.ret):
            if t.object_name is not None and t.object_name not in seen:
                seen.append(t.object_name)
        return tuple(seen)

    def type_occurrences(self) -> tuple[str, ...]:
        """Object type names with one entry per textual occurrence."""
        return tuple(
            t.object_name for t in (*self.params, self.ret) if t.object_name is not None
        )

    def unparse(self) -> str:
        if not self.is_method:
            return self.ret.unparse()
        return "(" + "".join(p.unparse() for p in self.params) + ")" + self.ret.unparse()


def _parse_type(text: str, i: int, allow_void: bool) -> tuple[JvmType, int]:
    dims = 0
    start = i
    n = len(text)
    while i < n and text[i] == "[":
        dims += 1
        i += 1
    if dims > 255:
        raise MalformedDescriptor(text, start)
    if i >= n:
        raise MalformedDescriptor(text, i)
    c = text[i]
    if c in "BCDFIJSZ":
        return JvmType(primitive=c, array_dims=dims), i + 1
    if c == "V":
        if allow_void and dims == 0:
            return VOID, i + 1
        raise MalformedDescriptor(text, i)
    if c == "L":
        end = text.find(";", i + 1)
        if end < 0:
            raise MalformedDescriptor(text, i)
        name = text[i + 1 : end]
        if not is_internal_name(name):
            raise MalformedDescriptor(text, i + 1)
        return JvmType(object_name=name, array_dims=dims), end + 1
    raise MalformedDescriptor(text, i)


def parse_descriptor(text: str) -> Descriptor:
    """Parse a field or method descriptor, reporting the offending offset
    on failure."""
    if not text:
        raise MalformedDescriptor(text, 0)
    if text[0] == "(":
        params: list[JvmType] = []
        i = 1
        while True:
            if i >= len(text):
                raise MalformedDescriptor(text, i)
            if text[i] == ")":
                i += 1
                break
            t, i = _parse_type(text, i, allow_void=False)
            params.append(t)
        ret, i = _parse_type(text, i, allow_void=True)
        if i != len(text):
            raise MalformedDescriptor(text, i)
        return Descriptor(params=tuple(params), ret=ret, is_method=True)
    t, i = _parse_type(text, 0, allow_void=False)
    if i != len(text):
        raise MalformedDescriptor(text, i)
    return Descriptor(params=(), ret=t, is_method=False)


def unparse(descriptor: Descriptor) -> str:
    return descriptor.unparse()
