"""Synthetic fixture corpora.

A corpus spec declares libraries (typed members) and clients (per-member
reference counts). Generation writes a standard repository layout whose
extracted usages equal the spec exactly: method and field references
become invoke/field-access instructions, type-level references become
checkcast instructions, and references to annotation types become
annotation occurrences. Output bytes are deterministic.

The JSON form of a spec is documented in the README.
"""

from __future__ import annotations

import json
import random
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from ..classfile.model import (
    ACC_ABSTRACT,
    ACC_FINAL,
    ACC_PRIVATE,
    ACC_PROTECTED,
    ACC_PUBLIC,
    ACC_STATIC,
)
from ..classfile.writer import ClassFileBuilder, CodeBuilder
from .coords import Gav
from .layout import locate
from .pom import DEFAULT_SCOPE, DeclaredDependency, serialize_pom

_ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)

_VISIBILITY_FLAGS = {
    "public": ACC_PUBLIC,
    "protected": ACC_PROTECTED,
    "package": 0,
    "private": ACC_PRIVATE,
}


class SpecInvalid(Exception):
    """The corpus spec references an undeclared library, type, or member."""


@dataclass(frozen=True)
class MemberSpec:
    name: str
    descriptor: str
    static: bool = False
    visibility: str = "public"

    @property
    def key(self) -> tuple[str, str]:
        return (self.name, self.descriptor)

    @property
    def is_method(self) -> bool:
        return self.descriptor.startswith("(")


@dataclass(frozen=True)
class TypeSpec:
    name: str
    kind: str = "class"  # class | interface | annotation
    public: bool = True
    members: tuple[MemberSpec, ...] = ()


@dataclass(frozen=True)
class InternalRefSpec:
    from_type: str
    to_type: str
    count: int = 1


@dataclass(frozen=True)
class LibrarySpec:
    gav: Gav
    types: tuple[TypeSpec, ...] = ()
    internal_refs: tuple[InternalRefSpec, ...] = ()

    def type_map(self) -> dict[str, TypeSpec]:
        return {t.name: t for t in self.types}


@dataclass(frozen=True)
class UseSpec:
    library: Gav
    type_name: str
    member: tuple[str, str] | None  # (name, descriptor) or None for type-level
    count: int = 1


@dataclass(frozen=True)
class ClientSpec:
    gav: Gav
    declares: tuple[DeclaredDependency, ...] = ()
    uses: tuple[UseSpec, ...] = ()


@dataclass(frozen=True)
class CorpusSpec:
    libraries: tuple[LibrarySpec, ...] = ()
    clients: tuple[ClientSpec, ...] = ()
    seed: int = 0


@dataclass(frozen=True)
class GeneratedCorpus:
    """Manifest of a generated corpus."""

    repo_root: Path
    libraries: tuple[Gav, ...]
    clients: tuple[Gav, ...]


def _validate(spec: CorpusSpec) -> None:
    libraries = {lib.gav: lib.type_map() for lib in spec.libraries}
    for client in spec.clients:
        for use in client.uses:
            types = libraries.get(use.library)
            if types is None:
                raise SpecInvalid(f"{client.gav}: use of undeclared library {use.library}")
            type_spec = types.get(use.type_name)
            if type_spec is None:
                raise SpecInvalid(
                    f"{client.gav}: use of undeclared type {use.library} {use.type_name}"
                )
            if use.count < 1:
                raise SpecInvalid(f"{client.gav}: non-positive count for {use.type_name}")
            if use.member is not None:
                if use.member not in {m.key for m in type_spec.members}:
                    raise SpecInvalid(
                        f"{client.gav}: use of undeclared member "
                        f"{use.type_name}.{use.member[0]}{use.member[1]}"
                    )
    for lib in spec.libraries:
        types = lib.type_map()
        for ref in lib.internal_refs:
            if ref.from_type not in types or ref.to_type not in types:
                raise SpecInvalid(f"{lib.gav}: internal ref on undeclared type")


def _write_jar(path: Path, entries: dict[str, bytes]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name in sorted(entries):
            info = zipfile.ZipInfo(name, date_time=_ZIP_EPOCH)
            info.external_attr = 0o644 << 16
            zf.writestr(info, entries[name])


def _member_flags(member: MemberSpec) -> int:
    flags = _VISIBILITY_FLAGS[member.visibility]
    if member.static:
        flags |= ACC_STATIC
    return flags


def _library_classes(lib: LibrarySpec) -> dict[str, bytes]:
    internal_by_source: dict[str, list[InternalRefSpec]] = {}
    for ref in lib.internal_refs:
        internal_by_source.setdefault(ref.from_type, []).append(ref)

    entries: dict[str, bytes] = {}
    for type_spec in lib.types:
        is_itf = type_spec.kind in ("interface", "annotation")
        access = _VISIBILITY_FLAGS["public" if type_spec.public else "package"]
        builder = ClassFileBuilder(type_spec.name, kind=type_spec.kind)
        builder.access = (builder.access & ~ACC_PUBLIC) | access
        for member in type_spec.members:
            flags = _member_flags(member)
            if member.is_method:
                if is_itf and not member.static:
                    builder.add_method(member.name, member.descriptor, flags=flags | ACC_ABSTRACT)
                else:
                    builder.add_method(member.name, member.descriptor, flags=flags)
            else:
                field_flags = flags | (ACC_STATIC | ACC_FINAL if is_itf else 0)
                builder.add_field(member.name, member.descriptor, flags=field_flags)
        refs = internal_by_source.get(type_spec.name)
        if refs:
            code = CodeBuilder()
            for ref in sorted(refs, key=lambda r: r.to_type):
                for _ in range(ref.count):
                    code.checkcast(ref.to_type)
            code.return_()
            # package visibility keeps the helper out of the API surface
            builder.add_method("internalUse", "()V", flags=ACC_STATIC, code=code)
        entries[f"{type_spec.name}.class"] = builder.build()
    return entries


def _sanitize(text: str) -> str:
    return "".join(c if c.isalnum() or c == "_" else "_" for c in text)


def client_class_name(gav: Gav) -> str:
    package = gav.group.replace(".", "/")
    return f"{package}/{_sanitize(gav.artifact)}/Main"


def _client_class(
    client: ClientSpec, type_specs: dict[Gav, dict[str, TypeSpec]]
) -> bytes:
    builder = ClassFileBuilder(client_class_name(client.gav))
    code = CodeBuilder()
    annotation_columns: list[list[str]] = []

    for use in sorted(client.uses, key=lambda u: (u.library, u.type_name, u.member or ("", ""))):
        type_spec = type_specs[use.library][use.type_name]
        if use.member is None:
            if type_spec.kind == "annotation":
                # occurrence i of every annotation use lands on method ann<i>
                while len(annotation_columns) < use.count:
                    annotation_columns.append([])
                for i in range(use.count):
                    annotation_columns[i].append(use.type_name)
            else:
                for _ in range(use.count):
                    code.checkcast(use.type_name)
            continue
        name, descriptor = use.member
        member = next(m for m in type_spec.members if m.key == use.member)
        for _ in range(use.count):
            if not member.is_method:
                if member.static:
                    code.getstatic(use.type_name, name, descriptor)
                else:
                    code.getfield(use.type_name, name, descriptor)
            elif name == "<init>":
                code.invokespecial(use.type_name, name, descriptor)
            elif member.static:
                code.invokestatic(use.type_name, name, descriptor)
            elif type_spec.kind in ("interface", "annotation"):
                code.invokeinterface(use.type_name, name, descriptor)
            else:
                code.invokevirtual(use.type_name, name, descriptor)
    code.return_()
    builder.add_method("run", "()V", code=code)
    for i, names in enumerate(annotation_columns):
        builder.add_method(f"ann{i}", "()V", annotations=tuple(names))
    return builder.build()


def generate_fixture_corpus(spec: CorpusSpec, out: Path | str) -> GeneratedCorpus:
    """Write the corpus described by ``spec`` as a repository layout under
    ``out``. Deterministic: identical specs produce identical bytes."""
    _validate(spec)
    out = Path(out)
    type_specs = {lib.gav: lib.type_map() for lib in spec.libraries}

    for lib in sorted(spec.libraries, key=lambda l: l.gav):
        jar_path, pom_path = locate(lib.gav, out)
        _write_jar(jar_path, _library_classes(lib))
        pom_path.parent.mkdir(parents=True, exist_ok=True)
        pom_path.write_bytes(serialize_pom([], project=lib.gav))

    for client in sorted(spec.clients, key=lambda c: c.gav):
        jar_path, pom_path = locate(client.gav, out)
        _write_jar(jar_path, {f"{client_class_name(client.gav)}.class": _client_class(client, type_specs)})
        pom_path.parent.mkdir(parents=True, exist_ok=True)
        pom_path.write_bytes(serialize_pom(list(client.declares), project=client.gav))

    return GeneratedCorpus(
        repo_root=out,
        libraries=tuple(sorted(lib.gav for lib in spec.libraries)),
        clients=tuple(sorted(client.gav for client in spec.clients)),
    )


def random_corpus_spec(
    seed: int, n_types: int = 6, n_clients: int = 20, max_count: int = 5
) -> CorpusSpec:
    """One library of ``n_types`` plain classes and ``n_clients`` clients
    using random non-empty type subsets with random counts."""
    rng = random.Random(seed)
    library = Gav("fx.random", f"lib{seed}", "1.0")
    types = tuple(TypeSpec(name=f"fx/random/T{i:02d}") for i in range(n_types))
    clients = []
    for i in range(n_clients):
        picked = rng.sample(range(n_types), rng.randint(1, n_types))
        uses = tuple(
            UseSpec(library, types[t].name, None, rng.randint(1, max_count))
            for t in sorted(picked)
        )
        clients.append(
            ClientSpec(
                gav=Gav("fx.random", f"client{i:03d}", "1.0"),
                declares=(DeclaredDependency(library.group, library.artifact, library.version),),
                uses=uses,
            )
        )
    return CorpusSpec(libraries=(LibrarySpec(library, types),), clients=tuple(clients), seed=seed)


def focused_shape_spec(
    library: Gav,
    core_types: tuple[str, ...],
    ext_types: tuple[str, ...],
    core_only: int,
    mixed: int,
    noncore_only: int,
    client_group: str,
) -> CorpusSpec:
    """A corpus whose usage graph has a focused reuse core.

    ``core_only`` clients use every core type, ``mixed`` clients use every
    type, and ``noncore_only`` clients use every non-core type. With
    core_only > mixed + noncore_only, the core types are hidden last and
    the served-client fraction stays at core_only/total until every
    non-core type is hidden.
    """
    types = tuple(TypeSpec(name=n) for n in (*core_types, *ext_types))
    declares = (DeclaredDependency(library.group, library.artifact, library.version),)

    def client(i: int, used: tuple[str, ...]) -> ClientSpec:
        return ClientSpec(
            gav=Gav(client_group, f"client{i:04d}", "1.0"),
            declares=declares,
            uses=tuple(UseSpec(library, n, None, 1) for n in sorted(used)),
        )

    clients = []
    index = 0
    for _ in range(core_only):
        clients.append(client(index, core_types))
        index += 1
    for _ in range(mixed):
        clients.append(client(index, (*core_types, *ext_types)))
        index += 1
    for _ in range(noncore_only):
        clients.append(client(index, ext_types))
        index += 1
    return CorpusSpec(libraries=(LibrarySpec(library, types),), clients=tuple(clients))


# JSON serialization of corpus specs (the CLI `fixtures generate` format).

def spec_to_json(spec: CorpusSpec) -> str:
    def member(m: MemberSpec) -> dict:
        return {
            "name": m.name,
            "descriptor": m.descriptor,
            "static": m.static,
            "visibility": m.visibility,
        }

    payload = {
        "seed": spec.seed,
        "libraries": [
            {
                "gav": str(lib.gav),
                "types": [
                    {
                        "name": t.name,
                        "kind": t.kind,
                        "public": t.public,
                        "members": [member(m) for m in t.members],
                    }
                    for t in lib.types
                ],
                "internal_refs": [
                    {"from": r.from_type, "to": r.to_type, "count": r.count}
                    for r in lib.internal_refs
                ],
            }
            for lib in spec.libraries
        ],
        "clients": [
            {
                "gav": str(c.gav),
                "declares": [
                    {
                        "group": d.group,
                        "artifact": d.artifact,
                        "version": d.version,
                        "scope": d.scope,
                        "optional": d.optional,
                    }
                    for d in c.declares
                ],
                "uses": [
                    {
                        "library": str(u.library),
                        "type": u.type_name,
                        "member": None
                        if u.member is None
                        else {"name": u.member[0], "descriptor": u.member[1]},
                        "count": u.count,
                    }
                    for u in c.uses
                ],
            }
            for c in spec.clients
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def spec_from_json(text: str) -> CorpusSpec:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecInvalid(f"not valid JSON: {e}") from None
    try:
        libraries = tuple(
            LibrarySpec(
                gav=Gav.parse(lib["gav"]),
                types=tuple(
                    TypeSpec(
                        name=t["name"],
                        kind=t.get("kind", "class"),
                        public=t.get("public", True),
                        members=tuple(
                            MemberSpec(
                                name=m["name"],
                                descriptor=m["descriptor"],
                                static=m.get("static", False),
                                visibility=m.get("visibility", "public"),
                            )
                            for m in t.get("members", ())
                        ),
                    )
                    for t in lib.get("types", ())
                ),
                internal_refs=tuple(
                    InternalRefSpec(r["from"], r["to"], r.get("count", 1))
                    for r in lib.get("internal_refs", ())
                ),
            )
            for lib in payload.get("libraries", ())
        )
        clients = tuple(
            ClientSpec(
                gav=Gav.parse(c["gav"]),
                declares=tuple(
                    DeclaredDependency(
                        group=d["group"],
                        artifact=d["artifact"],
                        version=d.get("version"),
                        scope=d.get("scope", DEFAULT_SCOPE),
                        optional=d.get("optional", False),
                    )
                    for d in c.get("declares", ())
                ),
                uses=tuple(
                    UseSpec(
                        library=Gav.parse(u["library"]),
                        type_name=u["type"],
                        member=None
                        if u.get("member") is None
                        else (u["member"]["name"], u["member"]["descriptor"]),
                        count=u.get("count", 1),
                    )
                    for u in c.get("uses", ())
                ),
            )
            for c in payload.get("clients", ())
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SpecInvalid(f"bad corpus spec structure: {e}") from None
    return CorpusSpec(libraries=libraries, clients=clients, seed=payload.get("seed", 0))
