"""Error types raised while decoding class files and descriptors."""


class ClassFileError(Exception):
    """Base class for all class-file decoding failures."""


class BadMagic(ClassFileError):
    """The input does not start with the 0xCAFEBABE magic."""

    def __init__(self, found: int):
        self.found = found
        super().__init__(f"bad magic 0x{found:08X}, expected 0xCAFEBABE")


class UnsupportedVersion(ClassFileError):
    """The class-file major version is outside the accepted range."""

    def __init__(self, major: int):
        self.major = major
        super().__init__(f"unsupported class file major version {major}")


class Truncated(ClassFileError):
    """The input ends (or a structure overruns its bounds) mid-structure."""

    def __init__(self, offset: int, what: str = ""):
        self.offset = offset
        detail = f" while reading {what}" if what else ""
        super().__init__(f"input truncated at byte offset {offset}{detail}")


class MalformedPool(ClassFileError):
    """Constant-pool integrity violation.

    Covers dangling or wrong-tag pool indexes, undecodable string data,
    and invalid names or descriptors reached from a declaration.
    """

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        at = f" (pool index {index})" if index is not None else ""
        super().__init__(f"{message}{at}")


class MalformedDescriptor(ClassFileError):
    """A field or method descriptor violates the descriptor grammar."""

    def __init__(self, text: str, offset: int):
        self.text = text
        self.offset = offset
        super().__init__(f"malformed descriptor {text!r} at offset {offset}")
