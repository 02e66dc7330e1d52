"""Per-library bipartite usage graphs and LIB/CLIENT aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .corpus.coords import Ga, Gav
from .corpus.pom import DeclaredDependency
from .usage import ApiSurface, UsageRecord


class ForeignRecord(Exception):
    """A usage record does not belong to the library's surface."""


@dataclass(frozen=True)
class BipartiteUsageGraph:
    """Clients x used API types of one library version.

    Every node has degree >= 1: client nodes are the observed clients,
    type nodes are the observed types. Edge weights carry reference counts
    for reporting; the reuse metrics use membership only.
    """

    library: Gav
    client_nodes: frozenset[Gav]
    type_nodes: frozenset[str]
    edges: dict[tuple[Gav, str], int]

    def clients_of(self, type_name: str) -> frozenset[Gav]:
        return frozenset(c for (c, t) in self.edges if t == type_name)

    def types_of(self, client: Gav) -> frozenset[str]:
        return frozenset(t for (c, t) in self.edges if c == client)

    def client_type_sets(self) -> dict[Gav, frozenset[str]]:
        sets: dict[Gav, set[str]] = {}
        for client, type_name in self.edges:
            sets.setdefault(client, set()).add(type_name)
        return {c: frozenset(ts) for c, ts in sets.items()}

    def type_user_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {t: 0 for t in self.type_nodes}
        for _, type_name in self.edges:
            counts[type_name] += 1
        return counts

    def total_weight(self) -> int:
        return sum(self.edges.values())


@dataclass(frozen=True)
class LibGroup:
    """All versions of one library GA with its declaring and observed
    client GAs (observed is always a subset of declared)."""

    ga: Ga
    versions: frozenset[Gav]
    declared_clients: frozenset[Ga]
    observed_clients: frozenset[Ga]


def build_graph(surface: ApiSurface, records: Iterable[UsageRecord]) -> BipartiteUsageGraph:
    """Fold usage records to type level and assemble the bipartite graph.
    Member-level counts are added to their owning type's edge weight."""
    surface_types = surface.type_names()
    edges: dict[tuple[Gav, str], int] = {}
    for record in records:
        if record.library != surface.library:
            raise ForeignRecord(
                f"record for {record.library} folded into graph of {surface.library}"
            )
        if record.target_type not in surface_types:
            raise ForeignRecord(
                f"record targets {record.target_type}, not in surface of {surface.library}"
            )
        key = (record.client, record.target_type)
        edges[key] = edges.get(key, 0) + record.count
    return BipartiteUsageGraph(
        library=surface.library,
        client_nodes=frozenset(c for c, _ in edges),
        type_nodes=frozenset(t for _, t in edges),
        edges=edges,
    )


def group_by_lib(
    declarations: Iterable[tuple[Gav, DeclaredDependency]],
    records: Iterable[UsageRecord],
) -> list[LibGroup]:
    """Aggregate declarations and usage records by library GA.

    Distinct-client counting uses the client's GA. Observed clients are
    clients that both declare some version of the GA and reference some
    version's surface; records from non-declaring clients are ignored so
    that observed stays within declared.
    """
    declared: dict[Ga, set[Ga]] = {}
    versions: dict[Ga, set[Gav]] = {}
    for client_gav, dep in declarations:
        lib_ga = dep.ga
        declared.setdefault(lib_ga, set()).add(client_gav.ga)
        versions.setdefault(lib_ga, set())
        if dep.coordinates is not None:
            versions[lib_ga].add(dep.coordinates)

    observed: dict[Ga, set[Ga]] = {}
    for record in records:
        lib_ga = record.library.ga
        client_ga = record.client.ga
        if client_ga in declared.get(lib_ga, ()):
            observed.setdefault(lib_ga, set()).add(client_ga)
            versions[lib_ga].add(record.library)

    return [
        LibGroup(
            ga=ga,
            versions=frozenset(versions[ga]),
            declared_clients=frozenset(declared[ga]),
            observed_clients=frozenset(observed.get(ga, ())),
        )
        for ga in sorted(declared)
    ]


def render_graph_records(graph: BipartiteUsageGraph) -> list[str]:
    """Adjacency export: the usage-record tab convention folded to type
    level, one line per edge, stable order."""
    lines = []
    for (client, type_name), weight in sorted(
        graph.edges.items(), key=lambda item: (item[0][0], item[0][1])
    ):
        lines.append(f"{client}\t{graph.library}\t{type_name}\t-\t{weight}")
    return lines
