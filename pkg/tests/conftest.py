"""Shared corpus specs and archive helpers."""

from __future__ import annotations

import zipfile
from pathlib import Path

import pytest

from reusecore.corpus import (
    ClientSpec,
    CorpusSpec,
    Gav,
    LibrarySpec,
    MemberSpec,
    TypeSpec,
    UseSpec,
)
from reusecore.corpus.pom import DeclaredDependency

LOGGING_LIB = Gav("org.slf4j", "slf4j-api", "1.7.21")
ANNOTATIONS_LIB = Gav("com.google.code.findbugs", "jsr305", "1.3.9")
DI_LIB = Gav("javax.inject", "javax.inject", "1")

LOGGER = "org/slf4j/Logger"
LOGGER_FACTORY = "org/slf4j/LoggerFactory"
INFO = ("info", "(Ljava/lang/String;)V")
ERROR = ("error", "(Ljava/lang/String;Ljava/lang/Throwable;)V")
GET_LOGGER = ("getLogger", "(Ljava/lang/Class;)Lorg/slf4j/Logger;")

NONNULL = "javax/annotation/Nonnull"
NULLABLE = "javax/annotation/Nullable"
GUARDED_BY = "javax/annotation/concurrent/GuardedBy"


def logging_api_spec() -> LibrarySpec:
    """A 38-public-type logging facade plus one non-public helper."""
    types = [
        TypeSpec(
            LOGGER,
            kind="interface",
            members=(
                MemberSpec(*INFO),
                MemberSpec(*ERROR),
                MemberSpec("debug", "(Ljava/lang/String;)V"),
            ),
        ),
        TypeSpec(
            LOGGER_FACTORY,
            members=(MemberSpec(*GET_LOGGER, static=True),),
        ),
        TypeSpec("org/slf4j/Marker", kind="interface"),
        TypeSpec("org/slf4j/MDC"),
    ]
    types += [TypeSpec(f"org/slf4j/helpers/Helper{i:02d}") for i in range(34)]
    types.append(TypeSpec("org/slf4j/impl/StaticBinder", public=False))
    return LibrarySpec(LOGGING_LIB, tuple(types))


def annotations_api_spec() -> LibrarySpec:
    return LibrarySpec(
        ANNOTATIONS_LIB,
        (
            TypeSpec(NONNULL, kind="annotation"),
            TypeSpec(NULLABLE, kind="annotation"),
            TypeSpec(GUARDED_BY, kind="annotation"),
        ),
    )


def di_api_spec() -> LibrarySpec:
    """One interface plus five annotations, six types total."""
    return LibrarySpec(
        DI_LIB,
        (
            TypeSpec(
                "javax/inject/Provider",
                kind="interface",
                members=(MemberSpec("get", "()Ljava/lang/Object;"),),
            ),
            TypeSpec("javax/inject/Inject", kind="annotation"),
            TypeSpec("javax/inject/Named", kind="annotation"),
            TypeSpec("javax/inject/Qualifier", kind="annotation"),
            TypeSpec("javax/inject/Scope", kind="annotation"),
            TypeSpec("javax/inject/Singleton", kind="annotation"),
        ),
    )


def declare(gav: Gav, scope: str = "compile") -> DeclaredDependency:
    return DeclaredDependency(gav.group, gav.artifact, gav.version, scope=scope)


def worked_example_spec() -> CorpusSpec:
    """One client whose extracted usages match the canonical counts:
    getLogger=1, Logger TYPE=1, info=6, error=2, and annotation counts
    1/2/9."""
    client = ClientSpec(
        gav=Gav("com.example", "logclient", "1.0"),
        declares=(declare(LOGGING_LIB), declare(ANNOTATIONS_LIB)),
        uses=(
            UseSpec(LOGGING_LIB, LOGGER_FACTORY, GET_LOGGER, 1),
            UseSpec(LOGGING_LIB, LOGGER, None, 1),
            UseSpec(LOGGING_LIB, LOGGER, INFO, 6),
            UseSpec(LOGGING_LIB, LOGGER, ERROR, 2),
            UseSpec(ANNOTATIONS_LIB, NONNULL, None, 1),
            UseSpec(ANNOTATIONS_LIB, NULLABLE, None, 2),
            UseSpec(ANNOTATIONS_LIB, GUARDED_BY, None, 9),
        ),
    )
    return CorpusSpec(libraries=(logging_api_spec(), annotations_api_spec()), clients=(client,))


def write_jar(path: Path, entries: dict[str, bytes]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, "w") as zf:
        for name, data in entries.items():
            zf.writestr(name, data)
    return path


@pytest.fixture
def tmp_repo(tmp_path: Path) -> Path:
    repo = tmp_path / "repo"
    repo.mkdir()
    return repo
