"""Shared fixtures and independent test-side oracles.

The oracles here deliberately avoid the library's own code paths: Hamiltonian
paths by permutation filtering, walks by explicit recursive enumeration, and
per-path masses by multiplying split factors along enumerated paths.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations

import pytest

from photonpath.graphs import (
    Graph,
    brute_force_hamiltonian_paths,
    complete_graph,
    path_graph,
    random_graph,
    star_graph,
)


def permutation_hamiltonian_paths(g: Graph) -> list[tuple[int, ...]]:
    """Filter all n! vertex orders; independent of the backtracking search."""
    return [
        p
        for p in permutations(range(1, g.n + 1))
        if all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
    ]


def enumerate_walks(g: Graph, length: int) -> list[tuple[int, ...]]:
    """All walks with `length` edges, by explicit tree recursion."""
    walks: list[tuple[int, ...]] = []

    def grow(v, left, acc):
        if left == 0:
            walks.append(tuple(acc))
            return
        for w in g.successors(v):
            acc.append(w)
            grow(w, left - 1, acc)
            acc.pop()

    for start in range(1, g.n + 1):
        grow(start, length, [start])
    return walks


@lru_cache(maxsize=None)
def oracle_paths(g: Graph) -> tuple[tuple[int, ...], ...]:
    return tuple(brute_force_hamiltonian_paths(g))


def hamiltonian_mass_formula(g: Graph) -> float:
    """(1/n) * sum over Hamiltonian paths of prod of 1/out-degree along the
    first n-1 vertices; the expected mass at the full-visit instant."""
    terms = []
    for p in oracle_paths(g):
        prod = 1.0
        for v in p[:-1]:
            prod /= g.out_degree(v)
        terms.append(prod)
    return math.fsum(terms) / g.n


def is_hamiltonian_path_of(g: Graph, seq) -> bool:
    return (
        len(seq) == g.n
        and len(set(seq)) == g.n
        and all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))
    )


def _suite() -> list[tuple[str, Graph]]:
    pairs: list[tuple[str, Graph]] = []
    for n in range(2, 10):
        pairs.append((f"K{n}", complete_graph(n)))
        pairs.append((f"P{n}", path_graph(n)))
        if n >= 3:
            pairs.append((f"S{n}", star_graph(n)))
    # 100 random graphs across n = 2..9, mixed densities, a few directed.
    counts = {2: 10, 3: 14, 4: 14, 5: 13, 6: 13, 7: 13, 8: 12, 9: 11}
    densities = [0.2, 0.35, 0.5, 0.7, 0.85]
    for n, m in counts.items():
        for i in range(m):
            p = densities[i % len(densities)]
            directed = i % 5 == 4
            g = random_graph(n, p, seed=1000 * n + i, directed=directed)
            pairs.append((f"R{n}_{i}", g))
    assert sum(counts.values()) == 100
    return pairs


_SUITE = _suite()


@pytest.fixture(scope="session")
def suite() -> list[tuple[str, Graph]]:
    return _SUITE
