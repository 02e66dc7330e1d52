"""Extraction of outgoing symbolic references from a decoded class file.

Counting semantics: instruction sites count one per bytecode instruction
occurrence; declaration sites (field types, signature positions,
supertypes, interfaces, annotations) count one per textual occurrence.
Constant-pool entries not reached from any instruction or declaration are
ignored.
"""

from __future__ import annotations

import struct
from collections import Counter

from .descriptors import is_internal_name, parse_descriptor
from .errors import MalformedDescriptor
from .model import ClassFile, MemberRef, Site, SymbolRef
from .pool import TAG_CLASS, TAG_METHOD_HANDLE

# Instruction length (opcode byte included) for every fixed-width opcode.
# 0 marks opcodes with variable width or special handling below.
_LENGTHS = [0] * 256
for _op in range(0x00, 0x10):  # nop .. dconst_1
    _LENGTHS[_op] = 1
_LENGTHS[0x10] = 2  # bipush
_LENGTHS[0x11] = 3  # sipush
_LENGTHS[0x12] = 2  # ldc
_LENGTHS[0x13] = 3  # ldc_w
_LENGTHS[0x14] = 3  # ldc2_w
for _op in range(0x15, 0x1A):  # iload .. aload
    _LENGTHS[_op] = 2
for _op in range(0x1A, 0x36):  # iload_0 .. saload
    _LENGTHS[_op] = 1
for _op in range(0x36, 0x3B):  # istore .. astore
    _LENGTHS[_op] = 2
for _op in range(0x3B, 0x84):  # istore_0 .. lxor
    _LENGTHS[_op] = 1
_LENGTHS[0x84] = 3  # iinc
for _op in range(0x85, 0x99):  # i2l .. dcmpg
    _LENGTHS[_op] = 1
for _op in range(0x99, 0xA9):  # ifeq .. jsr
    _LENGTHS[_op] = 3
_LENGTHS[0xA9] = 2  # ret
# 0xAA tableswitch, 0xAB lookupswitch: variable
for _op in range(0xAC, 0xB2):  # ireturn .. return
    _LENGTHS[_op] = 1
for _op in range(0xB2, 0xB9):  # getstatic .. invokestatic
    _LENGTHS[_op] = 3
_LENGTHS[0xB9] = 5  # invokeinterface
_LENGTHS[0xBA] = 5  # invokedynamic
_LENGTHS[0xBB] = 3  # new
_LENGTHS[0xBC] = 2  # newarray
_LENGTHS[0xBD] = 3  # anewarray
_LENGTHS[0xBE] = 1  # arraylength
_LENGTHS[0xBF] = 1  # athrow
_LENGTHS[0xC0] = 3  # checkcast
_LENGTHS[0xC1] = 3  # instanceof
_LENGTHS[0xC2] = 1  # monitorenter
_LENGTHS[0xC3] = 1  # monitorexit
# 0xC4 wide: variable
_LENGTHS[0xC5] = 4  # multianewarray
_LENGTHS[0xC6] = 3  # ifnull
_LENGTHS[0xC7] = 3  # ifnonnull
_LENGTHS[0xC8] = 5  # goto_w
_LENGTHS[0xC9] = 5  # jsr_w

_FIELD_OPS = frozenset((0xB2, 0xB3, 0xB4, 0xB5))
_INVOKE_OPS = frozenset((0xB6, 0xB7, 0xB8, 0xB9))
_TYPE_OPS = frozenset((0xBB, 0xBD, 0xC0, 0xC1, 0xC5))

_Key = tuple[str, MemberRef | None, Site]


def _element_type(name: str) -> str | None:
    """Unwrap an internal name or array descriptor to its object element
    type; None for primitives or unusable names."""
    if not name:
        return None
    if name[0] != "[":
        return name if is_internal_name(name) else None
    try:
        parsed = parse_descriptor(name)
    except MalformedDescriptor:
        return None
    return parsed.ret.object_name


def _count_type(counts: Counter, name: str | None, site: Site) -> None:
    if name is None:
        return
    element = _element_type(name)
    if element is not None:
        counts[(element, None, site)] += 1


def _count_member(counts: Counter, owner: str, member: MemberRef, site: Site) -> None:
    element = _element_type(owner)
    if element is not None:
        counts[(element, member, site)] += 1


def _scan_code(cf: ClassFile, code: bytes, counts: Counter) -> None:
    pool = cf.pool
    data = code
    n = len(data)
    i = 0
    while i < n:
        op = data[i]
        if op in _FIELD_OPS or op in _INVOKE_OPS:
            if i + 3 > n:
                return
            index = struct.unpack_from(">H", data, i + 1)[0]
            ref = pool.try_member_ref(index)
            if ref is not None:
                _count_member(counts, ref[0], ref[1], Site.INSTRUCTION)
        elif op in _TYPE_OPS:
            if i + 3 > n:
                return
            index = struct.unpack_from(">H", data, i + 1)[0]
            _count_type(counts, pool.try_class_name(index), Site.INSTRUCTION)
        elif op == 0xBA:  # invokedynamic: count its bootstrap handle targets
            if i + 3 > n:
                return
            index = struct.unpack_from(">H", data, i + 1)[0]
            bsm_index = pool.try_invoke_dynamic(index)
            if bsm_index is not None and bsm_index < len(cf.bootstrap_methods):
                for handle in cf.bootstrap_methods[bsm_index].handles:
                    _count_member(counts, handle.target_type, handle.member, Site.BOOTSTRAP)
        elif op in (0x12, 0x13):  # ldc / ldc_w of Class or MethodHandle constants
            if op == 0x12:
                if i + 2 > n:
                    return
                index = data[i + 1]
            else:
                if i + 3 > n:
                    return
                index = struct.unpack_from(">H", data, i + 1)[0]
            tag = pool.tag(index)
            if tag == TAG_CLASS:
                _count_type(counts, pool.try_class_name(index), Site.INSTRUCTION)
            elif tag == TAG_METHOD_HANDLE:
                # pool.validate() already guaranteed handle entries resolve
                owner, member = pool.method_handle_target(index)
                _count_member(counts, owner, member, Site.INSTRUCTION)
        elif op == 0xAA:  # tableswitch
            base = i + 1 + ((4 - (i + 1) % 4) % 4)
            if base + 12 > n:
                return
            low, high = struct.unpack_from(">ii", data, base + 4)
            if high < low:
                return
            i = base + 12 + 4 * (high - low + 1)
            continue
        elif op == 0xAB:  # lookupswitch
            base = i + 1 + ((4 - (i + 1) % 4) % 4)
            if base + 8 > n:
                return
            npairs = struct.unpack_from(">i", data, base + 4)[0]
            if npairs < 0:
                return
            i = base + 8 + 8 * npairs
            continue
        elif op == 0xC4:  # wide
            if i + 2 > n:
                return
            i += 6 if data[i + 1] == 0x84 else 4
            continue

        length = _LENGTHS[op]
        if length == 0:
            return  # unknown opcode: stop scanning this code array
        i += length


def _descriptor_occurrences(descriptor: str) -> tuple[str, ...]:
    try:
        return parse_descriptor(descriptor).type_occurrences()
    except MalformedDescriptor:
        return ()


def scan_references(cf: ClassFile) -> list[SymbolRef]:
    """All outgoing symbolic references of ``cf`` with occurrence counts,
    in a stable order (target, then member, then site)."""
    counts: Counter[_Key] = Counter()

    if cf.super_name is not None:
        counts[(cf.super_name, None, Site.SUPERTYPE)] += 1
    for interface in cf.interfaces:
        counts[(interface, None, Site.INTERFACE)] += 1
    for annotation in cf.class_annotations:
        counts[(annotation, None, Site.ANNOTATION)] += 1

    for decl in cf.fields:
        for annotation in decl.annotations:
            counts[(annotation, None, Site.ANNOTATION)] += 1
        for name in _descriptor_occurrences(decl.descriptor):
            counts[(name, None, Site.FIELD_DECL)] += 1

    for decl, code in zip(cf.methods, cf.method_codes):
        for annotation in decl.annotations:
            counts[(annotation, None, Site.ANNOTATION)] += 1
        for name in _descriptor_occurrences(decl.descriptor):
            counts[(name, None, Site.METHOD_SIGNATURE)] += 1
        if code is not None:
            _scan_code(cf, code, counts)

    refs = [
        SymbolRef(target_type=target, member=member, site=site, count=count)
        for (target, member, site), count in counts.items()
    ]
    refs.sort(key=SymbolRef.sort_key)
    return refs
