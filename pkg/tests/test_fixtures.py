"""Fixture corpus generation: soundness (extraction reproduces the spec),
determinism, validation, and the JSON spec format."""

import pytest

from conftest import (
    ANNOTATIONS_LIB,
    GET_LOGGER,
    GUARDED_BY,
    INFO,
    LOGGER,
    LOGGER_FACTORY,
    LOGGING_LIB,
    NONNULL,
    NULLABLE,
    declare,
    worked_example_spec,
)
from reusecore.corpus import (
    ClientSpec,
    CorpusSpec,
    Gav,
    LibrarySpec,
    SpecInvalid,
    TypeSpec,
    UseSpec,
    generate_fixture_corpus,
    locate,
    open_archive,
    random_corpus_spec,
    spec_from_json,
    spec_to_json,
)
from reusecore.usage import extract_api_surface, extract_usages


def _extract_all(spec: CorpusSpec, repo):
    corpus = generate_fixture_corpus(spec, repo)
    surfaces = []
    for gav in corpus.libraries:
        jar, _ = locate(gav, repo)
        surfaces.append(extract_api_surface(open_archive(jar, gav)))
    records = {}
    for gav in corpus.clients:
        jar, _ = locate(gav, repo)
        records[gav] = extract_usages(open_archive(jar, gav), surfaces)
    return corpus, surfaces, records


def _expected_uses(client: ClientSpec) -> dict:
    return {
        (use.library, use.type_name, use.member): use.count for use in client.uses
    }


def _observed_uses(records) -> dict:
    return {
        (r.library, r.target_type, (r.member.name, r.member.descriptor) if r.member else None): r.count
        for r in records
    }


def test_worked_example_counts_reproduced(tmp_repo):
    spec = worked_example_spec()
    _, _, records = _extract_all(spec, tmp_repo)
    (client,) = spec.clients
    observed = _observed_uses(records[client.gav])
    assert observed == _expected_uses(client)
    assert observed[(LOGGING_LIB, LOGGER_FACTORY, GET_LOGGER)] == 1
    assert observed[(LOGGING_LIB, LOGGER, None)] == 1
    assert observed[(LOGGING_LIB, LOGGER, INFO)] == 6
    assert observed[(ANNOTATIONS_LIB, NONNULL, None)] == 1
    assert observed[(ANNOTATIONS_LIB, NULLABLE, None)] == 2
    assert observed[(ANNOTATIONS_LIB, GUARDED_BY, None)] == 9


def test_random_matrix_reproduced_exactly(tmp_repo):
    spec = random_corpus_spec(seed=7, n_types=6, n_clients=20)
    _, _, records = _extract_all(spec, tmp_repo)
    for client in spec.clients:
        assert _observed_uses(records[client.gav]) == _expected_uses(client)


def test_unused_declaration_corpus(tmp_repo):
    lib_used = LibrarySpec(Gav("u.lib", "used", "1"), (TypeSpec("u/lib/A"),))
    lib_unused = LibrarySpec(Gav("u.lib", "unused", "1"), (TypeSpec("u/lib/B"),))
    client = ClientSpec(
        gav=Gav("u.cli", "app", "1"),
        declares=(declare(lib_used.gav), declare(lib_unused.gav)),
        uses=(UseSpec(lib_used.gav, "u/lib/A", None, 1),),
    )
    spec = CorpusSpec(libraries=(lib_used, lib_unused), clients=(client,))
    _, _, records = _extract_all(spec, tmp_repo)
    libraries_seen = {r.library for r in records[client.gav]}
    assert libraries_seen == {lib_used.gav}


def test_generation_is_deterministic(tmp_path):
    spec = worked_example_spec()
    first = tmp_path / "one"
    second = tmp_path / "two"
    generate_fixture_corpus(spec, first)
    generate_fixture_corpus(spec, second)
    first_files = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    second_files = sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    assert first_files == second_files
    for rel in first_files:
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel


def test_manifest_lists_generated_gavs(tmp_repo):
    spec = worked_example_spec()
    corpus = generate_fixture_corpus(spec, tmp_repo)
    assert corpus.libraries == (ANNOTATIONS_LIB, LOGGING_LIB)
    assert corpus.clients == (Gav("com.example", "logclient", "1.0"),)
    for gav in (*corpus.libraries, *corpus.clients):
        jar, pom = locate(gav, tmp_repo)
        assert jar.is_file() and pom.is_file()


def test_undeclared_member_rejected(tmp_repo):
    lib = LibrarySpec(Gav("g", "a", "1"), (TypeSpec("g/A"),))
    client = ClientSpec(
        gav=Gav("g", "c", "1"),
        uses=(UseSpec(lib.gav, "g/A", ("nope", "()V"), 1),),
    )
    with pytest.raises(SpecInvalid):
        generate_fixture_corpus(CorpusSpec((lib,), (client,)), tmp_repo)


def test_undeclared_type_and_library_rejected(tmp_repo):
    lib = LibrarySpec(Gav("g", "a", "1"), (TypeSpec("g/A"),))
    bad_type = ClientSpec(gav=Gav("g", "c", "1"), uses=(UseSpec(lib.gav, "g/B", None, 1),))
    with pytest.raises(SpecInvalid):
        generate_fixture_corpus(CorpusSpec((lib,), (bad_type,)), tmp_repo)
    bad_lib = ClientSpec(
        gav=Gav("g", "c", "1"), uses=(UseSpec(Gav("g", "zz", "1"), "g/A", None, 1),)
    )
    with pytest.raises(SpecInvalid):
        generate_fixture_corpus(CorpusSpec((lib,), (bad_lib,)), tmp_repo)


def test_spec_json_round_trip():
    spec = worked_example_spec()
    assert spec_from_json(spec_to_json(spec)) == spec


def test_spec_json_rejects_garbage():
    with pytest.raises(SpecInvalid):
        spec_from_json("not json at all {")
    with pytest.raises(SpecInvalid):
        spec_from_json('{"libraries": [{"gav": "only-two:parts"}]}')
