"""Java modified UTF-8 codec used by constant-pool string entries.

Differences from standard UTF-8: U+0000 is encoded as the two-byte
sequence C0 80, no byte may be zero or in [F0, FF], and supplementary
characters are encoded as two 3-byte surrogate code units.
"""

from __future__ import annotations


def decode(raw: bytes) -> str:
    out: list[str] = []
    i = 0
    n = len(raw)
    pending_high: int | None = None

    def emit(cp: int) -> None:
        nonlocal pending_high
        if pending_high is not None:
            if 0xDC00 <= cp <= 0xDFFF:
                combined = 0x10000 + ((pending_high - 0xD800) << 10) + (cp - 0xDC00)
                out.append(chr(combined))
                pending_high = None
                return
            out.append(chr(pending_high))
            pending_high = None
        if 0xD800 <= cp <= 0xDBFF:
            pending_high = cp
            return
        out.append(chr(cp))

    while i < n:
        b0 = raw[i]
        if b0 == 0 or b0 >= 0xF0:
            raise ValueError(f"invalid modified-UTF-8 byte 0x{b0:02X} at {i}")
        if b0 < 0x80:
            emit(b0)
            i += 1
        elif b0 >> 5 == 0b110:
            if i + 1 >= n or raw[i + 1] >> 6 != 0b10:
                raise ValueError(f"bad 2-byte sequence at {i}")
            emit(((b0 & 0x1F) << 6) | (raw[i + 1] & 0x3F))
            i += 2
        elif b0 >> 4 == 0b1110:
            if i + 2 >= n or raw[i + 1] >> 6 != 0b10 or raw[i + 2] >> 6 != 0b10:
                raise ValueError(f"bad 3-byte sequence at {i}")
            emit(((b0 & 0x0F) << 12) | ((raw[i + 1] & 0x3F) << 6) | (raw[i + 2] & 0x3F))
            i += 3
        else:
            raise ValueError(f"invalid modified-UTF-8 lead byte 0x{b0:02X} at {i}")
    if pending_high is not None:
        out.append(chr(pending_high))
    return "".join(out)


def _encode_unit(cp: int, out: bytearray) -> None:
    if 1 <= cp <= 0x7F:
        out.append(cp)
    elif cp <= 0x7FF:  # includes U+0000, encoded as C0 80
        out.append(0xC0 | (cp >> 6))
        out.append(0x80 | (cp & 0x3F))
    else:
        out.append(0xE0 | (cp >> 12))
        out.append(0x80 | ((cp >> 6) & 0x3F))
        out.append(0x80 | (cp & 0x3F))


def encode(text: str) -> bytes:
    out = bytearray()
    for ch in text:
        cp = ord(ch)
        if cp > 0xFFFF:
            cp -= 0x10000
            _encode_unit(0xD800 + (cp >> 10), out)
            _encode_unit(0xDC00 + (cp & 0x3FF), out)
        else:
            _encode_unit(cp, out)
    return bytes(out)
