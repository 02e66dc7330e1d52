import pytest
from hypothesis import given, strategies as st

from reusecore.classfile import MalformedDescriptor, parse_descriptor, unparse
from reusecore.classfile.descriptors import VOID, JvmType


def test_method_descriptor_with_objects():
    d = parse_descriptor("(Ljava/lang/Class;)Lorg/slf4j/Logger;")
    assert d.is_method
    assert d.params == (JvmType(object_name="java/lang/Class"),)
    assert d.ret == JvmType(object_name="org/slf4j/Logger")
    assert set(d.referenced_types) == {"java/lang/Class", "org/slf4j/Logger"}


def test_empty_params_void_return():
    d = parse_descriptor("()V")
    assert d.params == ()
    assert d.ret is VOID
    assert d.ret.is_void
    assert d.referenced_types == ()


def test_primitive_arrays_are_not_referenced_types():
    d = parse_descriptor("([[I)J")
    assert d.params == (JvmType(primitive="I", array_dims=2),)
    assert d.params[0].display() == "int[][]"
    assert d.ret == JvmType(primitive="J")
    assert d.ret.display() == "long"
    assert d.referenced_types == ()


def test_field_descriptor():
    d = parse_descriptor("Lorg/slf4j/Logger;")
    assert not d.is_method
    assert d.params == ()
    assert d.ret.object_name == "org/slf4j/Logger"


def test_object_array_unwraps():
    d = parse_descriptor("[Ljava/util/List;")
    assert d.ret.array_dims == 1
    assert d.referenced_types == ("java/util/List",)


def test_repeated_type_counts_each_occurrence():
    d = parse_descriptor("(Lorg/X;Lorg/X;)V")
    assert d.type_occurrences() == ("org/X", "org/X")
    assert d.referenced_types == ("org/X",)


@pytest.mark.parametrize(
    "text,offset",
    [
        ("", 0),
        ("X", 0),
        ("()", 2),
        ("(V)V", 1),
        ("(I", 2),
        ("Lorg/X", 0),
        ("L;", 1),
        ("La//b;", 1),
        ("()VV", 3),
        ("II", 1),
        ("[", 1),
        ("[V", 1),
    ],
)
def test_malformed_descriptors_report_offset(text, offset):
    with pytest.raises(MalformedDescriptor) as excinfo:
        parse_descriptor(text)
    assert excinfo.value.offset == offset


# Grammar-driven random descriptors for the round-trip property.

_names = st.lists(
    st.text(alphabet="abcxyzAZ09$_", min_size=1, max_size=8), min_size=1, max_size=4
).map("/".join)

_field_types = st.recursive(
    st.sampled_from(list("BCDFIJSZ")) | _names.map(lambda n: f"L{n};"),
    lambda inner: st.tuples(st.integers(1, 4), inner).map(lambda t: "[" * t[0] + t[1]),
    max_leaves=6,
)

_descriptors = st.one_of(
    _field_types,
    st.tuples(st.lists(_field_types, max_size=6), _field_types | st.just("V")).map(
        lambda t: "(" + "".join(t[0]) + ")" + t[1]
    ),
)


@given(_descriptors)
def test_round_trip(text):
    assert unparse(parse_descriptor(text)) == text


@given(_descriptors)
def test_parse_is_deterministic(text):
    assert parse_descriptor(text) == parse_descriptor(text)
