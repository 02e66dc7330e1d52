"""Corpus-scale orchestration: a bounded work queue with N workers, per-job
idempotent persistence, and a deterministic single-threaded merge.

Phase 1 extracts library surfaces, phase 2 analyzes client jars, phase 3
folds persisted records into graphs and metrics. Failed jobs are requeued
up to ``max_retries`` and then recorded in a failures report; the run
completes with partial coverage rather than aborting. All persisted and
emitted bytes are a pure function of (corpus, config minus workers), so
re-running after an interruption converges to the same reports.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import queue
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

from .classfile.model import MemberDecl, MemberKind, Visibility
from .corpus.archive import open_archive
from .corpus.coords import Ga, Gav, version_key
from .corpus.layout import all_poms, locate, versions_in_repo
from .corpus.pom import DeclaredDependency, parse_pom
from .graph import BipartiteUsageGraph, build_graph, group_by_lib, render_graph_records
from .metrics import (
    ChordGrouping,
    CoreIndex,
    CoreResult,
    DurResult,
    ExtinctionCurve,
    Order,
    chord_grouping,
    core_index,
    core_n,
    detect_unused,
    dur,
    extinction,
)
from .usage import (
    ApiSurface,
    ApiType,
    TypeKind,
    UsageRecord,
    extract_api_surface,
    extract_usages,
    read_records,
    render_record,
)

logger = logging.getLogger(__name__)

CORE_GRID = (50, 60, 70, 80, 90, 95, 99, 100)


class ConfigError(Exception):
    """The run configuration is unusable."""


class JobKind(str, Enum):
    SURFACE_EXTRACTION = "surface_extraction"
    CLIENT_ANALYSIS = "client_analysis"


@dataclass(frozen=True)
class Job:
    kind: JobKind
    subject: Gav
    attempts: int = 0


@dataclass(frozen=True)
class JobFailure:
    kind: JobKind
    subject: Gav
    attempts: int
    error: str


@dataclass(frozen=True)
class RunConfig:
    repo_root: Path
    libraries: tuple[str, ...]
    workers: int = 1
    max_retries: int = 2
    include_test_scope: bool = False
    output_dir: Path = Path("reusecore-out")

    def validate(self) -> None:
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if not self.libraries:
            raise ConfigError("library list is empty")
        if not Path(self.repo_root).is_dir():
            raise ConfigError(f"repo_root does not exist: {self.repo_root}")


def load_config(path: Path | str) -> RunConfig:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    if not isinstance(payload, dict):
        raise ConfigError("config must be a JSON object")
    try:
        config = RunConfig(
            repo_root=Path(payload["repo_root"]),
            libraries=tuple(payload["libraries"]),
            workers=int(payload.get("workers", 1)),
            max_retries=int(payload.get("max_retries", 2)),
            include_test_scope=bool(payload.get("include_test_scope", False)),
            output_dir=Path(payload.get("output_dir", "reusecore-out")),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad config structure: {e}") from None
    config.validate()
    return config


@dataclass
class LibraryReport:
    """Per-library-GA report over its most popular analyzed version."""

    ga: Ga
    dur: DurResult
    chosen: Gav | None = None
    tie_break_applied: bool = False
    no_observed_clients: bool = True
    surface_type_count: int = 0
    graph: BipartiteUsageGraph | None = None
    tur_table: tuple[tuple[str, int, float], ...] = ()
    curve_least: ExtinctionCurve | None = None
    curve_most: ExtinctionCurve | None = None
    core: CoreIndex | None = None
    core_grid: dict[int, CoreResult] = field(default_factory=dict)
    chord: ChordGrouping | None = None


@dataclass
class ReportBundle:
    records: list[UsageRecord]
    dur_table: list[DurResult]
    libraries: list[LibraryReport]
    unused: list[tuple[Gav, DeclaredDependency, str]]
    failures: list[JobFailure]


# Job execution ---------------------------------------------------------------

def _run_jobs(
    jobs: Iterable[Job],
    handler: Callable[[Job], None],
    workers: int,
    max_retries: int,
) -> list[JobFailure]:
    work: queue.Queue[Job] = queue.Queue()
    for job in jobs:
        work.put(job)
    failures: list[JobFailure] = []
    lock = threading.Lock()

    def loop() -> None:
        while True:
            try:
                job = work.get_nowait()
            except queue.Empty:
                return
            try:
                handler(job)
            except Exception as e:  # noqa: BLE001 - every job error is retried then reported
                if job.attempts < max_retries:
                    work.put(replace(job, attempts=job.attempts + 1))
                else:
                    failure = JobFailure(
                        kind=job.kind,
                        subject=job.subject,
                        attempts=job.attempts + 1,
                        error=f"{type(e).__name__}: {e}",
                    )
                    with lock:
                        failures.append(failure)
                    logger.warning("job failed permanently: %s %s", job.kind.value, job.subject)

    threads = [threading.Thread(target=loop, name=f"reusecore-worker-{i}") for i in range(workers)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    failures.sort(key=lambda f: (f.kind.value, f.subject))
    return failures


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _sanitize_component(text: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in text)


def _gav_slug(gav: Gav) -> str:
    group = _sanitize_component(gav.group)
    artifact = _sanitize_component(gav.artifact)
    version = _sanitize_component(gav.version)
    return f"{group}_{artifact}__{version}"


# Persisted intermediate state -------------------------------------------------

def _surface_to_json(surface: ApiSurface) -> str:
    payload = {
        "library": str(surface.library),
        "errors": list(surface.errors),
        "types": [
            {
                "name": t.name,
                "kind": t.kind.value,
                "package": t.package,
                "members": [
                    {
                        "name": m.name,
                        "descriptor": m.descriptor,
                        "kind": m.kind.value,
                        "visibility": m.visibility.value,
                        "synthetic": m.is_synthetic,
                    }
                    for m in t.members
                ],
            }
            for t in surface.types
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _surface_from_json(text: str) -> ApiSurface:
    payload = json.loads(text)
    library = Gav.parse(payload["library"])
    types = tuple(
        ApiType(
            name=t["name"],
            kind=TypeKind(t["kind"]),
            package=t["package"],
            members=tuple(
                MemberDecl(
                    owner=t["name"],
                    name=m["name"],
                    descriptor=m["descriptor"],
                    kind=MemberKind(m["kind"]),
                    visibility=Visibility(m["visibility"]),
                    is_synthetic=m["synthetic"],
                )
                for m in t["members"]
            ),
        )
        for t in payload["types"]
    )
    return ApiSurface(library=library, types=types, errors=tuple(payload["errors"]))


def _declarations_to_lines(client: Gav, declarations: Iterable[DeclaredDependency]) -> str:
    lines = []
    for dep in declarations:
        version = dep.version if dep.version is not None else "-"
        optional = "true" if dep.optional else "false"
        lines.append(f"{client}\t{dep.group}\t{dep.artifact}\t{version}\t{dep.scope}\t{optional}")
    return "".join(line + "\n" for line in lines)


def _declarations_from_lines(text: str) -> list[tuple[Gav, DeclaredDependency]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        client, group, artifact, version, scope, optional = line.split("\t")
        out.append(
            (
                Gav.parse(client),
                DeclaredDependency(
                    group=group,
                    artifact=artifact,
                    version=None if version == "-" else version,
                    scope=scope,
                    optional=optional == "true",
                ),
            )
        )
    return out


# Corpus discovery --------------------------------------------------------------

def resolve_libraries(config: RunConfig) -> list[Gav]:
    """Expand the configured library list (GA or GAV strings) against the
    repository; GA entries select every version present."""
    out: set[Gav] = set()
    for text in config.libraries:
        parts = text.split(":")
        if len(parts) == 3:
            out.add(Gav.parse(text))
        elif len(parts) == 2:
            ga = Ga.parse(text)
            for version in versions_in_repo(ga, config.repo_root):
                out.add(Gav(ga.group, ga.artifact, version))
        else:
            raise ConfigError(f"not a ga or gav: {text!r}")
    if not out:
        raise ConfigError("no library artifacts found in the repository")
    return sorted(out)


def _scope_ok(dep: DeclaredDependency, include_test_scope: bool) -> bool:
    return include_test_scope or dep.scope != "test"


def discover_clients(
    config: RunConfig, libraries: list[Gav]
) -> list[tuple[Gav, list[DeclaredDependency]]]:
    """Artifacts in the repository declaring at least one configured
    library under the scope filter, with all their declarations."""
    library_gas = {gav.ga for gav in libraries}
    library_set = set(libraries)
    clients = []
    for gav, pom_path in all_poms(config.repo_root):
        if gav in library_set:
            continue
        try:
            declarations = parse_pom(pom_path.read_bytes())
        except Exception as e:  # noqa: BLE001 - a broken pom only skips that artifact
            logger.warning("skipping pom %s: %s", pom_path, e)
            continue
        relevant = [
            d for d in declarations if d.ga in library_gas and _scope_ok(d, config.include_test_scope)
        ]
        if relevant:
            clients.append((gav, declarations))
    return clients


# Phases -------------------------------------------------------------------------

def _state_dir(config: RunConfig) -> Path:
    return Path(config.output_dir) / "state"


def _extract_surfaces_phase(config: RunConfig, libraries: list[Gav]) -> list[JobFailure]:
    surface_dir = _state_dir(config) / "surfaces"

    def handler(job: Job) -> None:
        jar_path, _ = locate(job.subject, config.repo_root)
        archive = open_archive(jar_path, job.subject)
        surface = extract_api_surface(archive)
        _atomic_write(surface_dir / f"{_gav_slug(job.subject)}.json", _surface_to_json(surface))

    jobs = [Job(JobKind.SURFACE_EXTRACTION, gav) for gav in libraries]
    return _run_jobs(jobs, handler, config.workers, config.max_retries)


def _load_surfaces(config: RunConfig) -> dict[Gav, ApiSurface]:
    surface_dir = _state_dir(config) / "surfaces"
    surfaces: dict[Gav, ApiSurface] = {}
    if surface_dir.is_dir():
        for path in sorted(surface_dir.glob("*.json")):
            surface = _surface_from_json(path.read_text(encoding="utf-8"))
            surfaces[surface.library] = surface
    return surfaces


def _analyze_clients_phase(
    config: RunConfig,
    clients: list[tuple[Gav, list[DeclaredDependency]]],
    surfaces: dict[Gav, ApiSurface],
) -> list[JobFailure]:
    state = _state_dir(config)
    declarations_by_client = dict(clients)
    surfaces_by_ga: dict[Ga, list[ApiSurface]] = {}
    for surface in surfaces.values():
        surfaces_by_ga.setdefault(surface.library.ga, []).append(surface)

    def handler(job: Job) -> None:
        declarations = declarations_by_client[job.subject]
        declared_gas = {d.ga for d in declarations if _scope_ok(d, config.include_test_scope)}
        relevant = [s for ga in sorted(declared_gas) for s in surfaces_by_ga.get(ga, ())]
        jar_path, _ = locate(job.subject, config.repo_root)
        archive = open_archive(jar_path, job.subject)
        records = extract_usages(archive, relevant)
        slug = _gav_slug(job.subject)
        _atomic_write(
            state / "usages" / f"{slug}.tsv",
            "".join(render_record(r) + "\n" for r in records),
        )
        _atomic_write(
            state / "declarations" / f"{slug}.tsv",
            _declarations_to_lines(job.subject, declarations),
        )

    jobs = [Job(JobKind.CLIENT_ANALYSIS, gav) for gav, _ in clients]
    return _run_jobs(jobs, handler, config.workers, config.max_retries)


def _load_state(
    config: RunConfig,
) -> tuple[list[UsageRecord], list[tuple[Gav, DeclaredDependency]]]:
    state = _state_dir(config)
    records: list[UsageRecord] = []
    usages_dir = state / "usages"
    if usages_dir.is_dir():
        for path in sorted(usages_dir.glob("*.tsv")):
            with path.open(encoding="utf-8") as fp:
                records.extend(read_records(fp))
    declarations: list[tuple[Gav, DeclaredDependency]] = []
    declarations_dir = state / "declarations"
    if declarations_dir.is_dir():
        for path in sorted(declarations_dir.glob("*.tsv")):
            declarations.extend(_declarations_from_lines(path.read_text(encoding="utf-8")))
    records.sort(key=UsageRecord.sort_key)
    declarations.sort(key=lambda item: (item[0], item[1].ga, item[1].version or "", item[1].scope))
    return records, declarations


def _choose_version(
    versions: list[Gav], records_by_library: dict[Gav, list[UsageRecord]]
) -> tuple[Gav, bool]:
    """The most popular analyzed version: most distinct observed client
    GAs, ties broken by highest version. Returns (version, tie_applied)."""

    def popularity(gav: Gav) -> int:
        return len({r.client.ga for r in records_by_library.get(gav, ())})

    best = max(versions, key=lambda gav: (popularity(gav), version_key(gav.version)))
    ties = [v for v in versions if popularity(v) == popularity(best)]
    return best, len(ties) > 1 and popularity(best) > 0


def _merge_phase(
    config: RunConfig,
    libraries: list[Gav],
    surfaces: dict[Gav, ApiSurface],
    failures: list[JobFailure],
) -> ReportBundle:
    records, declarations = _load_state(config)
    library_gas = sorted({gav.ga for gav in libraries})

    metric_declarations = [
        (client, dep)
        for client, dep in declarations
        if dep.ga in set(library_gas) and _scope_ok(dep, config.include_test_scope)
    ]
    groups = {g.ga: g for g in group_by_lib(metric_declarations, records)}

    records_by_library: dict[Gav, list[UsageRecord]] = {}
    for record in records:
        records_by_library.setdefault(record.library, []).append(record)

    reports: list[LibraryReport] = []
    dur_table: list[DurResult] = []
    for ga in library_gas:
        group = groups.get(ga)
        if group is None:
            continue  # no declaring clients: DUR undefined, library not reported
        dur_result = dur(group)
        dur_table.append(dur_result)
        report = LibraryReport(ga=ga, dur=dur_result)

        analyzed_versions = sorted(
            gav for gav in surfaces if gav.ga == ga
        )
        if analyzed_versions:
            chosen, tie = _choose_version(analyzed_versions, records_by_library)
            surface = surfaces[chosen]
            report.chosen = chosen
            report.tie_break_applied = tie
            report.surface_type_count = len(surface.types)
            chosen_records = records_by_library.get(chosen, [])
            if chosen_records:
                graph = build_graph(surface, chosen_records)
                report.no_observed_clients = False
                report.graph = graph
                observed = len(graph.client_nodes)
                user_counts = graph.type_user_counts()
                report.tur_table = tuple(
                    (t.name, user_counts.get(t.name, 0), user_counts.get(t.name, 0) / observed)
                    for t in surface.types
                )
                report.curve_least = extinction(graph, Order.LEAST_USED_FIRST)
                report.curve_most = extinction(graph, Order.MOST_USED_FIRST)
                report.core = core_index(graph)
                report.core_grid = {n: core_n(graph, n) for n in CORE_GRID}
                core_h = core_n(graph, report.core.h) if report.core.h >= 1 else None
                report.chord = chord_grouping(
                    graph, core_h.core_types if core_h else frozenset()
                )
        reports.append(report)

    unused: list[tuple[Gav, DeclaredDependency, str]] = []
    declarations_by_client: dict[Gav, list[DeclaredDependency]] = {}
    for client, dep in declarations:
        declarations_by_client.setdefault(client, []).append(dep)
    records_by_client: dict[Gav, list[UsageRecord]] = {}
    for record in records:
        records_by_client.setdefault(record.client, []).append(record)
    library_ga_set = set(library_gas)
    for client in sorted(declarations_by_client):
        relevant = [d for d in declarations_by_client[client] if d.ga in library_ga_set]
        for dep, status in detect_unused(
            relevant, records_by_client.get(client, ()), config.include_test_scope
        ):
            unused.append((client, dep, status))

    return ReportBundle(
        records=records,
        dur_table=dur_table,
        libraries=reports,
        unused=unused,
        failures=sorted(failures, key=lambda f: (f.kind.value, f.subject)),
    )


def run(config: RunConfig) -> ReportBundle:
    """Execute the full analysis over the configured corpus."""
    config.validate()
    libraries = resolve_libraries(config)
    failures = _extract_surfaces_phase(config, libraries)
    surfaces = _load_surfaces(config)
    clients = discover_clients(config, libraries)
    failures += _analyze_clients_phase(config, clients, surfaces)
    return _merge_phase(config, libraries, surfaces, failures)


# Report emission ------------------------------------------------------------------

def _csv_text(header: list[str], rows: Iterable[Iterable]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _curve_csv(curve: ExtinctionCurve) -> str:
    return _csv_text(
        ["hidden_count", "hidden_fraction", "served_fraction"],
        ((s.hidden_count, repr(s.hidden_fraction), repr(s.served_fraction)) for s in curve.steps),
    )


def _core_json(report: LibraryReport) -> str:
    payload: dict = {
        "library": str(report.chosen) if report.chosen else None,
        "ga": str(report.ga),
        "tie_break_applied": report.tie_break_applied,
        "no_observed_clients": report.no_observed_clients,
        "surface_types": report.surface_type_count,
    }
    if not report.no_observed_clients and report.core is not None:
        h = report.core.h
        payload.update(
            {
                "h": h,
                "types_obs": len(report.graph.type_nodes),
                "observed_clients": len(report.graph.client_nodes),
                "core_h_size": len(core_n(report.graph, h).core_types) if h >= 1 else None,
                "cr": {str(n): report.core_grid[n].cr_n for n in CORE_GRID},
            }
        )
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _chord_json(report: LibraryReport) -> str:
    payload: dict = {
        "library": str(report.chosen) if report.chosen else None,
        "ga": str(report.ga),
        "no_observed_clients": report.no_observed_clients,
    }
    if report.chord is not None:
        payload.update(
            {
                "h": report.core.h if report.core else None,
                "core_size": len(report.chord.core_types),
                "groups": {
                    name: {
                        "clients": report.chord.counts[name],
                        "fraction": report.chord.fractions[name],
                        "usage_share": report.chord.usage_share[name],
                    }
                    for name in ("core_only", "mixed", "non_core_only")
                },
            }
        )
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit_reports(bundle: ReportBundle, output_dir: Path | str) -> list[str]:
    """Write the report files and return the manifest of relative paths."""
    reports_dir = Path(output_dir) / "reports"
    manifest: list[str] = []

    def emit(name: str, data: str) -> None:
        _atomic_write(reports_dir / name, data)
        manifest.append(name)

    emit(
        "usage_records.tsv",
        "".join(render_record(r) + "\n" for r in sorted(bundle.records, key=UsageRecord.sort_key)),
    )
    emit(
        "dur.csv",
        _csv_text(
            ["ga", "declared_clients", "observed_clients", "dur"],
            (
                (str(d.ga), d.declared, d.observed, repr(d.dur))
                for d in sorted(bundle.dur_table, key=lambda d: d.ga)
            ),
        ),
    )
    emit(
        "unused_dependencies.tsv",
        "".join(
            f"{client}\t{dep.ga}\t{dep.version if dep.version is not None else '-'}"
            f"\t{dep.scope}\t{status}\n"
            for client, dep, status in bundle.unused
        ),
    )
    emit(
        "failures.json",
        json.dumps(
            [
                {
                    "kind": f.kind.value,
                    "subject": str(f.subject),
                    "attempts": f.attempts,
                    "error": f.error,
                }
                for f in bundle.failures
            ],
            indent=2,
            sort_keys=True,
        )
        + "\n",
    )

    for report in bundle.libraries:
        if report.chosen is None:
            continue
        slug = _gav_slug(report.chosen)
        emit(f"{slug}.core.json", _core_json(report))
        emit(f"{slug}.chord.json", _chord_json(report))
        if report.no_observed_clients:
            emit(f"{slug}.extinction_least.csv", _csv_text(
                ["hidden_count", "hidden_fraction", "served_fraction"], ()))
            emit(f"{slug}.extinction_most.csv", _csv_text(
                ["hidden_count", "hidden_fraction", "served_fraction"], ()))
            emit(f"{slug}.tur.csv", _csv_text(["type", "users_obs", "tur"], ()))
            emit(f"{slug}.graph.tsv", "")
            continue
        emit(f"{slug}.extinction_least.csv", _curve_csv(report.curve_least))
        emit(f"{slug}.extinction_most.csv", _curve_csv(report.curve_most))
        emit(
            f"{slug}.tur.csv",
            _csv_text(
                ["type", "users_obs", "tur"],
                ((t, users, repr(rate)) for t, users, rate in report.tur_table),
            ),
        )
        emit(f"{slug}.graph.tsv", "".join(line + "\n" for line in render_graph_records(report.graph)))

    manifest.sort()
    _atomic_write(reports_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    manifest.append("manifest.json")
    return manifest
