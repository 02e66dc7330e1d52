"""Constant-pool storage and resolution.

Entries are stored as small tagged tuples. Strict accessors raise
MalformedPool; ``try_*`` accessors return None and are used when scanning
instruction operands, which may dangle in damaged inputs.
"""

from __future__ import annotations

from .errors import MalformedPool
from .model import MemberKind, MemberRef, member_kind_of

TAG_UTF8 = 1
TAG_INTEGER = 3
TAG_FLOAT = 4
TAG_LONG = 5
TAG_DOUBLE = 6
TAG_CLASS = 7
TAG_STRING = 8
TAG_FIELDREF = 9
TAG_METHODREF = 10
TAG_INTERFACE_METHODREF = 11
TAG_NAME_AND_TYPE = 12
TAG_METHOD_HANDLE = 15
TAG_METHOD_TYPE = 16
TAG_DYNAMIC = 17
TAG_INVOKE_DYNAMIC = 18
TAG_MODULE = 19
TAG_PACKAGE = 20

REF_TAGS = (TAG_FIELDREF, TAG_METHODREF, TAG_INTERFACE_METHODREF)

# Fixed payload sizes in bytes, excluding the tag byte; Utf8 is variable.
ENTRY_SIZES = {
    TAG_INTEGER: 4,
    TAG_FLOAT: 4,
    TAG_LONG: 8,
    TAG_DOUBLE: 8,
    TAG_CLASS: 2,
    TAG_STRING: 2,
    TAG_FIELDREF: 4,
    TAG_METHODREF: 4,
    TAG_INTERFACE_METHODREF: 4,
    TAG_NAME_AND_TYPE: 4,
    TAG_METHOD_HANDLE: 3,
    TAG_METHOD_TYPE: 2,
    TAG_DYNAMIC: 4,
    TAG_INVOKE_DYNAMIC: 4,
    TAG_MODULE: 2,
    TAG_PACKAGE: 2,
}


class ConstantPool:
    """Indexable constant pool. Slot 0 and the trailing slot of 8-byte
    constants hold None."""

    def __init__(self, entries: list[tuple | None], declared_count: int):
        self.entries = entries
        self.declared_count = declared_count

    def _entry(self, index: int, tag: int, what: str) -> tuple:
        if index <= 0 or index >= len(self.entries):
            raise MalformedPool(f"dangling {what} index", index)
        entry = self.entries[index]
        if entry is None or entry[0] != tag:
            raise MalformedPool(f"index does not hold a {what}", index)
        return entry

    def tag(self, index: int) -> int | None:
        if index <= 0 or index >= len(self.entries):
            return None
        entry = self.entries[index]
        return None if entry is None else entry[0]

    def utf8(self, index: int) -> str:
        return self._entry(index, TAG_UTF8, "Utf8 entry")[1]

    def class_name(self, index: int) -> str:
        name_index = self._entry(index, TAG_CLASS, "Class entry")[1]
        return self.utf8(name_index)

    def name_and_type(self, index: int) -> tuple[str, str]:
        _, name_index, desc_index = self._entry(index, TAG_NAME_AND_TYPE, "NameAndType entry")
        return self.utf8(name_index), self.utf8(desc_index)

    def member_ref(self, index: int) -> tuple[str, MemberRef]:
        """Resolve a Fieldref/Methodref/InterfaceMethodref to (owner, member)."""
        if index <= 0 or index >= len(self.entries):
            raise MalformedPool("dangling member reference index", index)
        entry = self.entries[index]
        if entry is None or entry[0] not in REF_TAGS:
            raise MalformedPool("index does not hold a member reference", index)
        tag, class_index, nat_index = entry
        owner = self.class_name(class_index)
        name, descriptor = self.name_and_type(nat_index)
        if tag == TAG_FIELDREF:
            kind = MemberKind.FIELD
        else:
            kind = member_kind_of(name, descriptor)
        return owner, MemberRef(name, descriptor, kind)

    def method_handle_target(self, index: int) -> tuple[str, MemberRef]:
        _, _kind, ref_index = self._entry(index, TAG_METHOD_HANDLE, "MethodHandle entry")
        return self.member_ref(ref_index)

    # Lenient accessors for instruction operands.

    def try_utf8(self, index: int) -> str | None:
        try:
            return self.utf8(index)
        except MalformedPool:
            return None

    def try_class_name(self, index: int) -> str | None:
        try:
            return self.class_name(index)
        except MalformedPool:
            return None

    def try_member_ref(self, index: int) -> tuple[str, MemberRef] | None:
        try:
            return self.member_ref(index)
        except MalformedPool:
            return None

    def try_invoke_dynamic(self, index: int) -> int | None:
        """Bootstrap-method table index of an InvokeDynamic entry, if valid."""
        if index <= 0 or index >= len(self.entries):
            return None
        entry = self.entries[index]
        if entry is None or entry[0] != TAG_INVOKE_DYNAMIC:
            return None
        return entry[1]

    def validate(self) -> None:
        """Check that every entry's internal references resolve with the
        expected tags. Raises MalformedPool on the first violation."""
        for index, entry in enumerate(self.entries):
            if entry is None:
                continue
            tag = entry[0]
            if tag == TAG_CLASS or tag == TAG_STRING or tag == TAG_METHOD_TYPE:
                self.utf8(entry[1])
            elif tag == TAG_MODULE or tag == TAG_PACKAGE:
                self.utf8(entry[1])
            elif tag == TAG_NAME_AND_TYPE:
                self.utf8(entry[1])
                self.utf8(entry[2])
            elif tag in REF_TAGS:
                self.class_name(entry[1])
                self.name_and_type(entry[2])
            elif tag == TAG_METHOD_HANDLE:
                kind = entry[1]
                if not 1 <= kind <= 9:
                    raise MalformedPool(f"invalid method handle kind {kind}", index)
                self.member_ref(entry[2])
            elif tag in (TAG_DYNAMIC, TAG_INVOKE_DYNAMIC):
                self.name_and_type(entry[2])
