"""JVM class-file decoding, reference scanning, and synthesis."""

from .descriptors import Descriptor, JvmType, VOID, parse_descriptor, unparse
from .dump import dump_class
from .errors import (
    BadMagic,
    ClassFileError,
    MalformedDescriptor,
    MalformedPool,
    Truncated,
    UnsupportedVersion,
)
from .model import (
    ClassFile,
    MemberDecl,
    MemberKind,
    MemberRef,
    Site,
    SymbolRef,
    Visibility,
)
from .parser import MAX_MAJOR, MIN_MAJOR, parse_class
from .scan import scan_references
from .writer import Bootstrap, ClassFileBuilder, CodeBuilder, Handle

__all__ = [
    "BadMagic",
    "Bootstrap",
    "ClassFile",
    "ClassFileBuilder",
    "ClassFileError",
    "CodeBuilder",
    "Descriptor",
    "Handle",
    "JvmType",
    "MAX_MAJOR",
    "MIN_MAJOR",
    "MalformedDescriptor",
    "MalformedPool",
    "MemberDecl",
    "MemberKind",
    "MemberRef",
    "Site",
    "SymbolRef",
    "Truncated",
    "UnsupportedVersion",
    "VOID",
    "Visibility",
    "dump_class",
    "parse_class",
    "scan_references",
    "unparse",
]
