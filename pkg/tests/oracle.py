"""Brute-force reference computations for the reuse metrics.

Everything here recomputes served sets from scratch for every hidden
prefix, with exact rational arithmetic, independent of the incremental
bookkeeping in the implementation.
"""

from __future__ import annotations

import math
from fractions import Fraction

Edges = dict[object, frozenset[str]]  # client -> used types


def type_users(edges: Edges) -> dict[str, int]:
    users: dict[str, int] = {}
    for types in edges.values():
        for t in types:
            users[t] = users.get(t, 0) + 1
    return users


def hide_order(edges: Edges, least_first: bool = True) -> list[str]:
    users = type_users(edges)
    if least_first:
        return sorted(users, key=lambda t: (users[t], t))
    return sorted(users, key=lambda t: (-users[t], t))


def served_fraction(edges: Edges, hidden: set[str]) -> Fraction:
    alive = sum(1 for types in edges.values() if not types & hidden)
    return Fraction(alive, len(edges))


def curve(edges: Edges, least_first: bool = True) -> list[tuple[int, Fraction]]:
    order = hide_order(edges, least_first)
    return [
        (k, served_fraction(edges, set(order[:k])))
        for k in range(len(order) + 1)
    ]


def core_n(edges: Edges, n: int) -> tuple[frozenset[str], Fraction]:
    order = hide_order(edges, least_first=True)
    total = len(order)
    threshold = Fraction(n, 100)
    best = 0
    for k in range(total + 1):
        if served_fraction(edges, set(order[:k])) >= threshold:
            best = k
    return frozenset(order[best:]), Fraction(total - best, total)


def core_index(edges: Edges) -> int:
    best = Fraction(0)
    for n in range(1, 101):
        _, cr = core_n(edges, n)
        f_n = 100 * (1 - cr)
        best = max(best, min(Fraction(n), f_n))
    return math.floor(best)
