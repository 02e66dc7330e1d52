"""Coordinates, archives, pom parsing, repository layout."""

from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import write_jar
from reusecore.classfile import ClassFileBuilder
from reusecore.corpus import (
    Ga,
    Gav,
    NotAZip,
    locate,
    open_archive,
    parse_pom,
    serialize_pom,
    version_key,
    versions_in_repo,
)
from reusecore.corpus.layout import all_poms
from reusecore.corpus.pom import DeclaredDependency, MalformedXml


# Coordinates -----------------------------------------------------------------

def test_gav_canonical_form_and_parse():
    gav = Gav("org.slf4j", "slf4j-api", "1.7.21")
    assert str(gav) == "org.slf4j:slf4j-api:1.7.21"
    assert Gav.parse(str(gav)) == gav
    assert gav.ga == Ga("org.slf4j", "slf4j-api")
    assert str(gav.ga) == "org.slf4j:slf4j-api"


@pytest.mark.parametrize("text", ["", "a:b", "a:b:c:d", ":b:c", "a::c", "a:b:"])
def test_gav_rejects_bad_forms(text):
    with pytest.raises(ValueError):
        Gav.parse(text)


def test_version_key_orders_numerically():
    ordered = sorted(["1.9", "1.10", "1.2"], key=version_key)
    assert ordered == ["1.2", "1.9", "1.10"]
    assert max(["1.9", "1.10"], key=version_key) == "1.10"


# Layout ----------------------------------------------------------------------

def test_locate_examples():
    jar, pom = locate(Gav("org.slf4j", "slf4j-api", "1.7.21"), "/repo")
    assert jar == Path("/repo/org/slf4j/slf4j-api/1.7.21/slf4j-api-1.7.21.jar")
    assert pom == Path("/repo/org/slf4j/slf4j-api/1.7.21/slf4j-api-1.7.21.pom")

    jar, _ = locate(Gav("javax.inject", "javax.inject", "1"), "/repo")
    assert jar == Path("/repo/javax/inject/javax.inject/1/javax.inject-1.jar")

    jar, _ = locate(Gav("junit", "junit", "4.12"), "/repo")
    assert jar == Path("/repo/junit/junit/4.12/junit-4.12.jar")


def test_locate_is_injective_on_distinct_gavs():
    gavs = [
        Gav("a.b", "c", "1"),
        Gav("a", "b.c", "1"),
        Gav("a.b", "c", "2"),
        Gav("a.b", "d", "1"),
    ]
    paths = {locate(g, "/r")[0] for g in gavs}
    assert len(paths) == len(gavs)


def test_versions_in_repo_and_all_poms(tmp_repo):
    lib = Gav("org.demo", "thing", "1.0")
    jar, pom = locate(lib, tmp_repo)
    write_jar(jar, {"org/demo/T.class": ClassFileBuilder("org/demo/T").build()})
    pom.parent.mkdir(parents=True, exist_ok=True)
    pom.write_bytes(serialize_pom([], project=lib))
    assert versions_in_repo(Ga("org.demo", "thing"), tmp_repo) == ["1.0"]
    assert [g for g, _ in all_poms(tmp_repo)] == [lib]


# Archives ----------------------------------------------------------------------

def test_archive_counts_class_entries(tmp_repo):
    jar = write_jar(
        tmp_repo / "x.jar",
        {
            "a/A.class": ClassFileBuilder("a/A").build(),
            "a/B.class": ClassFileBuilder("a/B").build(),
            "a/C.class": ClassFileBuilder("a/C").build(),
            "META-INF/MANIFEST.MF": b"Manifest-Version: 1.0\n",
        },
    )
    archive = open_archive(jar)
    assert len(archive.class_entries) == 3
    assert len(archive.entries) == 4
    assert archive.class_names() == frozenset({"a/A", "a/B", "a/C"})


def test_empty_zip(tmp_repo):
    jar = write_jar(tmp_repo / "empty.jar", {})
    archive = open_archive(jar)
    assert archive.entries == ()
    assert archive.class_entries == ()


def test_text_file_is_not_a_zip(tmp_repo):
    path = tmp_repo / "fake.jar"
    path.write_text("just text, definitely not a jar")
    with pytest.raises(NotAZip):
        open_archive(path)


def test_module_info_and_multirelease_skipped(tmp_repo):
    jar = write_jar(
        tmp_repo / "mr.jar",
        {
            "module-info.class": b"\xca\xfe\xba\xbe",
            "META-INF/versions/11/a/A.class": ClassFileBuilder("a/A").build(),
            "a/A.class": ClassFileBuilder("a/A").build(),
        },
    )
    archive = open_archive(jar)
    assert archive.class_entries == ("a/A.class",)


# Pom parsing -------------------------------------------------------------------

FLINK_STYLE_POM = b"""<?xml version="1.0" encoding="UTF-8"?>
<project xmlns="http://maven.apache.org/POM/4.0.0">
  <groupId>org.apache.flink</groupId>
  <artifactId>flink-runtime</artifactId>
  <version>1.5.0</version>
  <dependencies>
    <dependency>
        <groupId>com.google.code.findbugs</groupId>
        <artifactId>jsr305</artifactId>
        <version>1.3.9</version>
        <scope>compile</scope>
    </dependency>
  </dependencies>
</project>
"""


def test_parse_pom_single_dependency():
    deps = parse_pom(FLINK_STYLE_POM)
    assert deps == [
        DeclaredDependency("com.google.code.findbugs", "jsr305", "1.3.9", "compile", False)
    ]
    assert deps[0].coordinates == Gav("com.google.code.findbugs", "jsr305", "1.3.9")


def test_parse_pom_empty_dependencies():
    assert parse_pom(b"<project><dependencies/></project>") == []
    assert parse_pom(b"<project/>") == []


def test_scope_defaults_to_compile():
    pom = (b"<project><dependencies><dependency>"
           b"<groupId>g</groupId><artifactId>a</artifactId><version>1</version>"
           b"</dependency></dependencies></project>")
    (dep,) = parse_pom(pom)
    assert dep.scope == "compile"


def test_placeholder_and_range_versions_flagged_unresolved():
    pom = (b"<project><dependencies>"
           b"<dependency><groupId>g</groupId><artifactId>a</artifactId>"
           b"<version>${project.version}</version></dependency>"
           b"<dependency><groupId>g</groupId><artifactId>b</artifactId>"
           b"<version>[1.0,2.0)</version></dependency>"
           b"<dependency><groupId>g</groupId><artifactId>c</artifactId></dependency>"
           b"</dependencies></project>")
    deps = parse_pom(pom)
    assert [d.version for d in deps] == ["${project.version}", "[1.0,2.0)", None]
    assert all(d.version_unresolved for d in deps)
    assert all(d.coordinates is None for d in deps)


def test_dependency_management_ignored():
    pom = (b"<project><dependencyManagement><dependencies><dependency>"
           b"<groupId>g</groupId><artifactId>managed</artifactId><version>1</version>"
           b"</dependency></dependencies></dependencyManagement></project>")
    assert parse_pom(pom) == []


def test_malformed_xml_reports_position():
    with pytest.raises(MalformedXml) as excinfo:
        parse_pom(b"<project><dependencies>")
    assert excinfo.value.position is not None


_dep_strategy = st.builds(
    DeclaredDependency,
    group=st.text(alphabet="abc.", min_size=1, max_size=10).filter(
        lambda s: s.strip(".") == s and ".." not in s and s
    ),
    artifact=st.text(alphabet="xyz-", min_size=1, max_size=10).filter(lambda s: s.strip("-") == s),
    version=st.one_of(st.none(), st.text(alphabet="0123456789.", min_size=1, max_size=8)),
    scope=st.sampled_from(["compile", "provided", "runtime", "test", "system", "import"]),
    optional=st.booleans(),
)


@given(st.lists(_dep_strategy, max_size=8))
def test_serialize_parse_round_trip(deps):
    assert parse_pom(serialize_pom(deps)) == deps
