"""Minimal standalone class-file reader used to cross-check the library.

Deliberately shares no code with the package under test: its own pool
walk, its own attribute skipping, its own instruction decoding of the
handful of opcodes the checks need.
"""

from __future__ import annotations

import struct
from collections import Counter

_FIXED_SIZES = {3: 4, 4: 4, 7: 2, 8: 2, 9: 4, 10: 4, 11: 4, 12: 4, 15: 3, 16: 2, 17: 4, 18: 4, 19: 2, 20: 2}


def _read_pool(data: bytes, pos: int):
    (count,) = struct.unpack_from(">H", data, pos)
    pos += 2
    entries: dict[int, tuple] = {}
    index = 1
    while index < count:
        tag = data[pos]
        pos += 1
        if tag == 1:
            (length,) = struct.unpack_from(">H", data, pos)
            entries[index] = ("utf8", data[pos + 2 : pos + 2 + length].decode("utf-8"))
            pos += 2 + length
        elif tag in (5, 6):
            pos += 8
            index += 1
        else:
            size = _FIXED_SIZES[tag]
            values = struct.unpack_from(f">{'H' * (size // 2)}", data, pos)
            entries[index] = (tag, *values)
            pos += size
        index += 1
    return entries, pos


def _utf8(entries, index):
    return entries[index][1]


def _member(entries, index):
    _, class_index, nat_index = entries[index]
    owner = _utf8(entries, entries[class_index][1])
    _, name_index, desc_index = entries[nat_index]
    return owner, _utf8(entries, name_index), _utf8(entries, desc_index)


def raw_counts(data: bytes) -> tuple[Counter, Counter]:
    """(annotation type counts, invoke/field instruction counts keyed by
    (owner, name, descriptor))."""
    entries, pos = _read_pool(data, 8)
    pos += 6  # access, this, super
    (interface_count,) = struct.unpack_from(">H", data, pos)
    pos += 2 + 2 * interface_count

    annotations: Counter = Counter()
    instructions: Counter = Counter()

    def read_attributes(pos: int) -> int:
        (attr_count,) = struct.unpack_from(">H", data, pos)
        pos += 2
        for _ in range(attr_count):
            name_index, length = struct.unpack_from(">HI", data, pos)
            name = _utf8(entries, name_index)
            body = data[pos + 6 : pos + 6 + length]
            if name in ("RuntimeVisibleAnnotations", "RuntimeInvisibleAnnotations"):
                (n_annotations,) = struct.unpack_from(">H", body, 0)
                offset = 2
                for _ in range(n_annotations):
                    type_index, n_pairs = struct.unpack_from(">HH", body, offset)
                    assert n_pairs == 0, "oracle only reads pair-free annotations"
                    annotations[_utf8(entries, type_index)[1:-1]] += 1
                    offset += 4
            elif name == "Code":
                (code_length,) = struct.unpack_from(">I", body, 4)
                code = body[8 : 8 + code_length]
                i = 0
                while i < len(code):
                    op = code[i]
                    if op in (0xB2, 0xB3, 0xB4, 0xB5, 0xB6, 0xB7, 0xB8):
                        (ref,) = struct.unpack_from(">H", code, i + 1)
                        instructions[_member(entries, ref)] += 1
                        i += 3
                    elif op == 0xB9:
                        (ref,) = struct.unpack_from(">H", code, i + 1)
                        instructions[_member(entries, ref)] += 1
                        i += 5
                    elif op in (0xBB, 0xBD, 0xC0, 0xC1):
                        i += 3
                    elif op == 0x13:
                        i += 3
                    elif op == 0xB1:
                        i += 1
                    else:
                        raise AssertionError(f"oracle met unexpected opcode 0x{op:02X}")
            pos += 6 + length
        return pos

    for _section in ("fields", "methods"):
        (member_count,) = struct.unpack_from(">H", data, pos)
        pos += 2
        for _ in range(member_count):
            pos += 6
            pos = read_attributes(pos)
    read_attributes(pos)
    return annotations, instructions
