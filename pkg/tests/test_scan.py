"""Reference scanning: sites, counts, ordering, and cross-checks against
the standalone byte-level reader."""



from byteoracle import raw_counts
from reusecore.classfile import (
    Bootstrap,
    ClassFileBuilder,
    CodeBuilder,
    Handle,
    MemberRef,
    Site,
    parse_class,
    scan_references,
)
from reusecore.classfile.model import ACC_PRIVATE, ACC_PROTECTED, ACC_STATIC, ACC_FINAL


def _refs(data: bytes):
    return scan_references(parse_class(data))


def _by_key(refs):
    return {(r.target_type, r.member.render() if r.member else None, r.site): r.count for r in refs}


def _logging_client() -> bytes:
    clinit = (
        CodeBuilder()
        .ldc_class("com/example/cluster/Entry")
        .invokestatic("org/slf4j/LoggerFactory", "getLogger", "(Ljava/lang/Class;)Lorg/slf4j/Logger;")
        .putstatic("com/example/cluster/Entry", "LOG", "Lorg/slf4j/Logger;")
        .return_()
    )
    body = CodeBuilder().getstatic("com/example/cluster/Entry", "LOG", "Lorg/slf4j/Logger;")
    for _ in range(6):
        body.invokeinterface("org/slf4j/Logger", "info", "(Ljava/lang/String;)V")
    for _ in range(2):
        body.invokeinterface("org/slf4j/Logger", "error", "(Ljava/lang/String;Ljava/lang/Throwable;)V")
    body.return_()
    return (
        ClassFileBuilder(
            "com/example/cluster/Entry",
            interfaces=("org/apache/flink/util/AutoCloseableAsync",
                        "org/apache/flink/runtime/rpc/FatalErrorHandler"),
        )
        .add_field("LOG", "Lorg/slf4j/Logger;", flags=ACC_PROTECTED | ACC_STATIC | ACC_FINAL)
        .add_method("<clinit>", "()V", flags=ACC_STATIC, code=clinit)
        .add_method("startCluster", "()V", code=body)
        .add_method("generateConfig", "()V", flags=ACC_PRIVATE,
                    invisible_annotations=("javax/annotation/Nonnull",))
        .build()
    )


def test_logging_client_counts():
    counts = _by_key(_refs(_logging_client()))
    assert counts[("org/slf4j/Logger", "info(Ljava/lang/String;)V", Site.INSTRUCTION)] == 6
    assert counts[("org/slf4j/Logger", "error(Ljava/lang/String;Ljava/lang/Throwable;)V", Site.INSTRUCTION)] == 2
    assert counts[("org/slf4j/LoggerFactory",
                   "getLogger(Ljava/lang/Class;)Lorg/slf4j/Logger;", Site.INSTRUCTION)] == 1
    # field declaration contributes the type-level Logger reference
    assert counts[("org/slf4j/Logger", None, Site.FIELD_DECL)] == 1
    assert counts[("org/apache/flink/util/AutoCloseableAsync", None, Site.INTERFACE)] == 1
    assert counts[("org/apache/flink/runtime/rpc/FatalErrorHandler", None, Site.INTERFACE)] == 1
    assert counts[("javax/annotation/Nonnull", None, Site.ANNOTATION)] == 1


def test_logging_client_matches_byte_oracle():
    data = _logging_client()
    annotations, instructions = raw_counts(data)
    counts = _by_key(_refs(data))
    for (owner, name, descriptor), n in instructions.items():
        member = MemberRef.parse(name + descriptor if descriptor.startswith("(") else f"{name}:{descriptor}")
        assert counts[(owner, member.render(), Site.INSTRUCTION)] == n
    for annotation, n in annotations.items():
        assert counts[(annotation, None, Site.ANNOTATION)] == n


def test_bare_class_has_exactly_one_ref():
    refs = _refs(ClassFileBuilder("a/Empty").build())
    assert len(refs) == 1
    only = refs[0]
    assert (only.target_type, only.member, only.site, only.count) == (
        "java/lang/Object", None, Site.SUPERTYPE, 1)


def test_annotation_counted_per_occurrence():
    data = (
        ClassFileBuilder("a/B")
        .add_method("m1", "()V", invisible_annotations=("javax/annotation/Nonnull",))
        .add_method("m2", "()V", invisible_annotations=("javax/annotation/Nonnull",))
        .build()
    )
    counts = _by_key(_refs(data))
    assert counts[("javax/annotation/Nonnull", None, Site.ANNOTATION)] == 2
    annotations, _ = raw_counts(data)
    assert annotations["javax/annotation/Nonnull"] == 2


def test_signature_occurrences_each_count():
    data = (
        ClassFileBuilder("a/B")
        .add_method("m", "(Lorg/X;Lorg/X;)Lorg/X;", flags=ACC_STATIC)
        .add_field("f", "[Lorg/X;")
        .build()
    )
    counts = _by_key(_refs(data))
    assert counts[("org/X", None, Site.METHOD_SIGNATURE)] == 3
    assert counts[("org/X", None, Site.FIELD_DECL)] == 1


def test_instruction_type_sites():
    code = (
        CodeBuilder()
        .new("org/X")
        .checkcast("org/X")
        .instanceof("org/X")
        .anewarray("org/X")
        .checkcast("[Lorg/X;")   # array class constant unwraps to element
        .checkcast("[[I")        # primitive array adds nothing
        .ldc_class("org/X")
        .return_()
    )
    counts = _by_key(_refs(ClassFileBuilder("a/B").add_method("m", "()V", code=code).build()))
    assert counts[("org/X", None, Site.INSTRUCTION)] == 6


def test_invokedynamic_bootstrap_handles():
    lambda_body = Handle("invokestatic", "a/B", "lambda$run$0", "()V")
    metafactory = Handle(
        "invokestatic",
        "java/lang/invoke/LambdaMetafactory",
        "metafactory",
        "(Ljava/lang/invoke/MethodHandles$Lookup;Ljava/lang/String;"
        "Ljava/lang/invoke/MethodType;Ljava/lang/invoke/MethodType;"
        "Ljava/lang/invoke/MethodHandle;Ljava/lang/invoke/MethodType;)"
        "Ljava/lang/invoke/CallSite;",
    )
    indy = Bootstrap(method=metafactory, args=("mtype:()V", lambda_body, "mtype:()V"))
    inner = CodeBuilder().invokeinterface("org/slf4j/Logger", "info", "(Ljava/lang/String;)V").return_()
    code = CodeBuilder().invokedynamic("run", "()Ljava/lang/Runnable;", indy)
    code.invokedynamic("run", "()Ljava/lang/Runnable;", indy).return_()
    data = (
        ClassFileBuilder("a/B")
        .add_method("run", "()V", code=code)
        .add_method("lambda$run$0", "()V", flags=ACC_PRIVATE | ACC_STATIC, code=inner)
        .build()
    )
    counts = _by_key(_refs(data))
    # two invokedynamic occurrences, each counting both handle targets
    assert counts[("java/lang/invoke/LambdaMetafactory",
                   metafactory.name + metafactory.descriptor, Site.BOOTSTRAP)] == 2
    assert counts[("a/B", "lambda$run$0()V", Site.BOOTSTRAP)] == 2
    # the lambda body's API call surfaces as a plain instruction ref
    assert counts[("org/slf4j/Logger", "info(Ljava/lang/String;)V", Site.INSTRUCTION)] == 1


def test_ldc_method_handle_counts_member():
    handle = Handle("invokevirtual", "org/X", "m", "()V")
    code = CodeBuilder().ldc_handle(handle).ldc_handle(handle).return_()
    counts = _by_key(_refs(ClassFileBuilder("a/B").add_method("r", "()V", code=code).build()))
    assert counts[("org/X", "m()V", Site.INSTRUCTION)] == 2


def test_deterministic_and_sorted():
    data = _logging_client()
    first = _refs(data)
    second = _refs(data)
    assert first == second
    assert [r.sort_key() for r in first] == sorted(r.sort_key() for r in first)


def test_count_additivity_when_merging_methods():
    def method_a():
        return CodeBuilder().checkcast("org/X").invokevirtual("org/Y", "m", "()V").return_()

    def method_b():
        return CodeBuilder().checkcast("org/X").checkcast("org/Z").return_()

    only_a = _by_key(_refs(ClassFileBuilder("a/B").add_method("ma", "()V", code=method_a()).build()))
    only_b = _by_key(_refs(ClassFileBuilder("a/B").add_method("mb", "()V", code=method_b()).build()))
    both = _by_key(_refs(
        ClassFileBuilder("a/B")
        .add_method("ma", "()V", code=method_a())
        .add_method("mb", "()V", code=method_b())
        .build()
    ))
    for source in (only_a, only_b):
        for key, count in source.items():
            assert both.get(key, 0) >= count
    # instruction counts are exactly additive
    assert both[("org/X", None, Site.INSTRUCTION)] == 2


def test_unknown_opcode_stops_that_code_quietly():
    data = bytearray(
        ClassFileBuilder("a/B")
        .add_method("m", "()V", code=CodeBuilder().checkcast("org/X").return_())
        .build()
    )
    # 0xC0 (checkcast) lives in the Code body; find and replace with 0xFE
    index = bytes(data).find(b"\xc0")
    data[index] = 0xFE
    refs = scan_references(parse_class(bytes(data)))
    assert all(r.target_type != "org/X" for r in refs)
