"""Local repository access: archives, manifests, layout, fixture corpora."""

from .archive import ArtifactArchive, CorruptArchive, NotAZip, open_archive
from .coords import Ga, Gav, version_key
from .fixtures import (
    ClientSpec,
    CorpusSpec,
    GeneratedCorpus,
    InternalRefSpec,
    LibrarySpec,
    MemberSpec,
    SpecInvalid,
    TypeSpec,
    UseSpec,
    focused_shape_spec,
    generate_fixture_corpus,
    random_corpus_spec,
    spec_from_json,
    spec_to_json,
)
from .layout import all_poms, locate, versions_in_repo
from .pom import DEFAULT_SCOPE, DeclaredDependency, MalformedXml, parse_pom, serialize_pom

__all__ = [
    "ArtifactArchive",
    "ClientSpec",
    "CorpusSpec",
    "CorruptArchive",
    "DEFAULT_SCOPE",
    "DeclaredDependency",
    "Ga",
    "Gav",
    "GeneratedCorpus",
    "InternalRefSpec",
    "LibrarySpec",
    "MalformedXml",
    "MemberSpec",
    "NotAZip",
    "SpecInvalid",
    "TypeSpec",
    "UseSpec",
    "all_poms",
    "focused_shape_spec",
    "generate_fixture_corpus",
    "locate",
    "open_archive",
    "parse_pom",
    "random_corpus_spec",
    "serialize_pom",
    "spec_from_json",
    "spec_to_json",
    "version_key",
    "versions_in_repo",
]
