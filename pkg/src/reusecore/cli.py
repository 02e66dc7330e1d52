"""Command-line interface.

Exit status: 0 on success, 1 on partial failure (some jobs failed but the
run completed), 2 on configuration or usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .classfile.dump import dump_class
from .classfile.errors import ClassFileError
from .classfile.parser import parse_class
from .corpus.archive import CorruptArchive, NotAZip, open_archive
from .corpus.coords import Ga, Gav
from .corpus.fixtures import SpecInvalid, generate_fixture_corpus, spec_from_json
from .corpus.layout import locate, versions_in_repo
from .corpus.pom import MalformedXml, parse_pom
from .metrics import detect_unused
from .pipeline import ConfigError, emit_reports, load_config, run
from .usage import extract_api_surface, extract_usages, render_record


def _configure_logging() -> None:
    level = logging.DEBUG if os.environ.get("REUSECORE_VERBOSE") else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _resolve_lib_gavs(text: str, repo_root: Path) -> list[Gav]:
    parts = text.split(":")
    if len(parts) == 3:
        return [Gav.parse(text)]
    if len(parts) == 2:
        ga = Ga.parse(text)
        return [Gav(ga.group, ga.artifact, v) for v in versions_in_repo(ga, repo_root)]
    raise ValueError(f"not a ga or gav: {text!r}")


def _open(gav: Gav, repo_root: Path):
    jar_path, _ = locate(gav, repo_root)
    return open_archive(jar_path, gav)


def _cmd_surface(args: argparse.Namespace) -> int:
    gav = Gav.parse(args.gav)
    surface = extract_api_surface(_open(gav, args.repo))
    counts = surface.kind_counts()
    print(f"{gav}: {len(surface.types)} types "
          f"({counts['class']} classes, {counts['interface']} interfaces, "
          f"{counts['annotation']} annotations)")
    for api_type in surface.types:
        print(f"  {api_type.kind.value:<10} {api_type.name} ({len(api_type.members)} members)")
    for error in surface.errors:
        print(f"  error: {error}", file=sys.stderr)
    return 0


def _cmd_usages(args: argparse.Namespace) -> int:
    client = Gav.parse(args.client)
    surfaces = []
    for text in args.against:
        for gav in _resolve_lib_gavs(text, args.repo):
            surfaces.append(extract_api_surface(_open(gav, args.repo)))
    records = extract_usages(_open(client, args.repo), surfaces)
    for record in records:
        print(render_record(record))
    return 0


def _cmd_unused(args: argparse.Namespace) -> int:
    client = Gav.parse(args.client)
    _, pom_path = locate(client, args.repo)
    declarations = parse_pom(pom_path.read_bytes())
    surfaces = []
    for dep in declarations:
        if dep.scope == "test" and not args.include_test_scope:
            continue
        if dep.coordinates is None:
            print(f"{client}\t{dep.ga}\t{dep.version or '-'}\t{dep.scope}\tunresolved")
            continue
        jar_path, _ = locate(dep.coordinates, args.repo)
        if jar_path.is_file():
            surfaces.append(extract_api_surface(open_archive(jar_path, dep.coordinates)))
    records = extract_usages(_open(client, args.repo), surfaces)
    for dep, status in detect_unused(declarations, records, args.include_test_scope):
        version = dep.version if dep.version is not None else "-"
        print(f"{client}\t{dep.ga}\t{version}\t{dep.scope}\t{status}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    bundle = run(config)
    manifest = emit_reports(bundle, config.output_dir)
    for name in manifest:
        print(Path(config.output_dir) / "reports" / name)
    if bundle.failures:
        print(f"{len(bundle.failures)} job(s) failed; see failures.json", file=sys.stderr)
        return 1
    return 0


def _cmd_fixtures_generate(args: argparse.Namespace) -> int:
    spec = spec_from_json(Path(args.spec).read_text(encoding="utf-8"))
    corpus = generate_fixture_corpus(spec, args.out)
    print(
        json.dumps(
            {
                "repo_root": str(corpus.repo_root),
                "libraries": [str(g) for g in corpus.libraries],
                "clients": [str(g) for g in corpus.clients],
            },
            indent=2,
        )
    )
    return 0


def _cmd_dump(args: argparse.Namespace) -> int:
    data = Path(args.classfile).read_bytes()
    print(dump_class(parse_class(data)), end="")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reusecore",
        description="Bytecode-level API usage mining and reuse-core metrics "
                    "over a local repository layout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_surface = sub.add_parser("surface", help="print a library version's API surface")
    p_surface.add_argument("gav", help="library coordinates group:artifact:version")
    p_surface.add_argument("--repo", type=Path, required=True, help="repository root")
    p_surface.set_defaults(func=_cmd_surface)

    p_usages = sub.add_parser("usages", help="print a client's counted API usages")
    p_usages.add_argument("client", help="client coordinates group:artifact:version")
    p_usages.add_argument(
        "--against", nargs="+", required=True, metavar="LIB",
        help="library ga or gav to match against (ga selects all versions in the repo)",
    )
    p_usages.add_argument("--repo", type=Path, required=True)
    p_usages.set_defaults(func=_cmd_usages)

    p_unused = sub.add_parser("unused", help="classify a client's declared dependencies")
    p_unused.add_argument("client")
    p_unused.add_argument("--repo", type=Path, required=True)
    p_unused.add_argument("--include-test-scope", action="store_true")
    p_unused.set_defaults(func=_cmd_unused)

    p_analyze = sub.add_parser("analyze", help="run the full corpus analysis")
    p_analyze.add_argument("--config", type=Path, required=True, help="JSON run configuration")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_fixtures = sub.add_parser("fixtures", help="fixture corpus tooling")
    fixtures_sub = p_fixtures.add_subparsers(dest="fixtures_command", required=True)
    p_generate = fixtures_sub.add_parser("generate", help="generate a corpus from a JSON spec")
    p_generate.add_argument("spec", help="corpus spec JSON file")
    p_generate.add_argument("--out", type=Path, required=True, help="repository output directory")
    p_generate.set_defaults(func=_cmd_fixtures_generate)

    p_dump = sub.add_parser("dump", help="text dump of one decoded class file")
    p_dump.add_argument("classfile", help="path to a .class file")
    p_dump.set_defaults(func=_cmd_dump)

    return parser


def cli(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ConfigError, SpecInvalid, MalformedXml, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NotAZip, CorruptArchive, ClassFileError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli(sys.argv[1:]))
