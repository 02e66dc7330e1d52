"""Dependency-usage and reuse-core metrics over bipartite usage graphs.

Extinction sequences hide API types one at a time in a fixed usage
ordering (ties broken by lexicographic type name) and track the fraction
of observed clients whose used types are all still visible. Core_n is the
kept-type set of the longest least-used-first hiding prefix that still
serves n% of clients; CR_n is its size relative to the observed types;
the core-index is max over n in 1..100 of min(n, 100*(1 - CR_n)).

Threshold comparisons use exact integer arithmetic; the reported
fractions are floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus.coords import Ga, Gav
from .corpus.pom import DeclaredDependency
from .graph import BipartiteUsageGraph, LibGroup
from .usage import UsageRecord

TIE_BREAK_LEXICOGRAPHIC = "lexicographic"


class EmptyGraph(Exception):
    """The usage graph has no observed clients or no observed types."""


class NoDeclaredClients(Exception):
    """DUR is undefined without declaring clients."""


class NoObservedClients(Exception):
    """TUR is undefined without observed clients."""


class Order(str, Enum):
    LEAST_USED_FIRST = "least_used_first"
    MOST_USED_FIRST = "most_used_first"


@dataclass(frozen=True)
class ExtinctionStep:
    hidden_count: int
    hidden_fraction: float
    served_fraction: float


@dataclass(frozen=True)
class ExtinctionCurve:
    order: Order
    tie_break: str
    hidden_order: tuple[str, ...]
    steps: tuple[ExtinctionStep, ...]


@dataclass(frozen=True)
class CoreResult:
    n: int
    core_types: frozenset[str]
    cr_n: float
    served_exact: float


@dataclass(frozen=True)
class CoreIndex:
    h: int
    f_values: dict[int, float]


@dataclass(frozen=True)
class DurResult:
    ga: Ga
    declared: int
    observed: int
    dur: float


@dataclass(frozen=True)
class ChordGrouping:
    """Clients grouped by their position relative to a core type set:
    using only core types, only non-core types, or both. ``usage_share``
    is each group's share of total edge weight."""

    core_types: frozenset[str]
    counts: dict[str, int]        # core_only | non_core_only | mixed
    fractions: dict[str, float]
    usage_share: dict[str, float]


def _require_non_empty(graph: BipartiteUsageGraph) -> None:
    if not graph.client_nodes or not graph.type_nodes:
        raise EmptyGraph(f"no observed usage for {graph.library}")


def hide_order(graph: BipartiteUsageGraph, order: Order) -> list[str]:
    counts = graph.type_user_counts()
    if order is Order.LEAST_USED_FIRST:
        return sorted(graph.type_nodes, key=lambda t: (counts[t], t))
    return sorted(graph.type_nodes, key=lambda t: (-counts[t], t))


def _alive_counts(graph: BipartiteUsageGraph, ordering: Sequence[str]) -> list[int]:
    """alive[k] = number of clients still served with the first k types of
    ``ordering`` hidden."""
    position = {t: i for i, t in enumerate(ordering)}
    total = len(graph.client_nodes)
    deaths = [0] * (len(ordering) + 1)
    for types in graph.client_type_sets().values():
        # a client dies one step after its earliest-hidden type
        deaths[min(position[t] for t in types) + 1] += 1
    alive = [total]
    for k in range(1, len(ordering) + 1):
        alive.append(alive[k - 1] - deaths[k])
    return alive


def served_clients(graph: BipartiteUsageGraph, hidden: Iterable[str]) -> frozenset[Gav]:
    """Clients whose used types are all outside ``hidden``."""
    hidden_set = frozenset(hidden)
    return frozenset(
        client
        for client, types in graph.client_type_sets().items()
        if not types & hidden_set
    )


def extinction(
    graph: BipartiteUsageGraph,
    order: Order = Order.LEAST_USED_FIRST,
    tie_break: str = TIE_BREAK_LEXICOGRAPHIC,
) -> ExtinctionCurve:
    """Hide one type per step in the given ordering and record the served
    fraction, including the zero-hidden step."""
    _require_non_empty(graph)
    if tie_break != TIE_BREAK_LEXICOGRAPHIC:
        raise ValueError(f"unknown tie break rule {tie_break!r}")
    ordering = hide_order(graph, order)
    alive = _alive_counts(graph, ordering)
    total_clients = len(graph.client_nodes)
    total_types = len(ordering)
    steps = tuple(
        ExtinctionStep(
            hidden_count=k,
            hidden_fraction=k / total_types,
            served_fraction=alive[k] / total_clients,
        )
        for k in range(total_types + 1)
    )
    return ExtinctionCurve(
        order=order, tie_break=tie_break, hidden_order=tuple(ordering), steps=steps
    )


def _max_hidden_serving(alive: Sequence[int], total_clients: int, n: int) -> int:
    """Largest hidden count whose served fraction is still >= n/100,
    compared exactly: 100 * alive[k] >= n * total_clients."""
    for k in range(len(alive) - 1, -1, -1):
        if 100 * alive[k] >= n * total_clients:
            return k
    return 0


def core_n(graph: BipartiteUsageGraph, n: int) -> CoreResult:
    """Kept types after the longest least-used-first hiding prefix that
    still serves n% of observed clients."""
    if not 1 <= n <= 100:
        raise ValueError(f"n must be in 1..100, got {n}")
    _require_non_empty(graph)
    ordering = hide_order(graph, Order.LEAST_USED_FIRST)
    alive = _alive_counts(graph, ordering)
    total_clients = len(graph.client_nodes)
    total_types = len(ordering)
    hidden = _max_hidden_serving(alive, total_clients, n)
    return CoreResult(
        n=n,
        core_types=frozenset(ordering[hidden:]),
        cr_n=(total_types - hidden) / total_types,
        served_exact=alive[hidden] / total_clients,
    )


def core_index(graph: BipartiteUsageGraph) -> CoreIndex:
    """max over n in 1..100 of min(n, f(n)) with f(n) = 100*(1 - CR_n),
    evaluated exactly and floored to an integer."""
    _require_non_empty(graph)
    ordering = hide_order(graph, Order.LEAST_USED_FIRST)
    alive = _alive_counts(graph, ordering)
    total_clients = len(graph.client_nodes)
    total_types = len(ordering)

    best = Fraction(0)
    f_values: dict[int, float] = {}
    hidden = total_types
    for n in range(1, 101):
        while 100 * alive[hidden] < n * total_clients:
            hidden -= 1
        f_n = Fraction(100 * hidden, total_types)
        f_values[n] = float(f_n)
        candidate = min(Fraction(n), f_n)
        if candidate > best:
            best = candidate
    return CoreIndex(h=int(best), f_values=f_values)


def dur(group: LibGroup) -> DurResult:
    """Fraction of declaring client GAs with at least one observed usage,
    unions taken over all versions of the library GA."""
    declared = len(group.declared_clients)
    if declared == 0:
        raise NoDeclaredClients(f"no declaring clients for {group.ga}")
    observed = len(group.observed_clients)
    return DurResult(ga=group.ga, declared=declared, observed=observed, dur=observed / declared)


def tur(graph: BipartiteUsageGraph, type_name: str) -> float:
    """Fraction of the library's observed clients that reference the type;
    0.0 for surface types absent from the graph."""
    if not graph.client_nodes:
        raise NoObservedClients(f"no observed clients for {graph.library}")
    if type_name not in graph.type_nodes:
        return 0.0
    return len(graph.clients_of(type_name)) / len(graph.client_nodes)


def detect_unused(
    declared: Sequence[DeclaredDependency],
    records: Iterable[UsageRecord],
    include_test_scope: bool = False,
) -> list[tuple[DeclaredDependency, str]]:
    """Classify each declaration as used or unused by matching usage
    records on the dependency GA, any version. Test-scope declarations
    are excluded unless requested."""
    used_gas = {record.library.ga for record in records}
    out = []
    for dep in declared:
        if dep.scope == "test" and not include_test_scope:
            continue
        status = "used" if dep.ga in used_gas else "unused"
        out.append((dep, status))
    return out


def chord_grouping(graph: BipartiteUsageGraph, core_types: Iterable[str]) -> ChordGrouping:
    """Group clients by core membership of the types they use."""
    _require_non_empty(graph)
    core = frozenset(core_types)
    counts = {"core_only": 0, "non_core_only": 0, "mixed": 0}
    weights = {"core_only": 0, "non_core_only": 0, "mixed": 0}
    client_weights: dict[Gav, int] = {}
    for (client, _), weight in graph.edges.items():
        client_weights[client] = client_weights.get(client, 0) + weight
    for client, types in graph.client_type_sets().items():
        in_core = bool(types & core)
        outside = bool(types - core)
        group = "mixed" if in_core and outside else ("core_only" if in_core else "non_core_only")
        counts[group] += 1
        weights[group] += client_weights[client]
    total_clients = len(graph.client_nodes)
    total_weight = graph.total_weight()
    return ChordGrouping(
        core_types=core,
        counts=counts,
        fractions={g: c / total_clients for g, c in counts.items()},
        usage_share={g: (w / total_weight if total_weight else 0.0) for g, w in weights.items()},
    )
