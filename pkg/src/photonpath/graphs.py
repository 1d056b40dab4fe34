"""Graph representation, edge-list parsing, and brute-force combinatorial oracles."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

DEFAULT_ENUMERATION_CAP = 12


class GraphFormatError(ValueError):
    """Edge-list text that cannot be parsed into a graph."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class EnumerationCapError(RuntimeError):
    """Exhaustive enumeration refused because the graph exceeds the cap."""

    def __init__(self, n: int, cap: int):
        super().__init__(
            f"graph on {n} vertices exceeds the enumeration cap of {cap} vertices"
        )
        self.n = n
        self.cap = cap


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 1..n stored as a boolean adjacency matrix.

    Self-loops are rejected. Undirected graphs keep a symmetric matrix;
    for directed graphs ``adjacency[i][j]`` is the edge from vertex i+1 to
    vertex j+1.
    """

    n: int
    adjacency: tuple[tuple[bool, ...], ...]
    directed: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("vertex count must be at least 1")
        if len(self.adjacency) != self.n or any(len(row) != self.n for row in self.adjacency):
            raise ValueError(f"adjacency matrix must be {self.n}x{self.n}")
        for i in range(self.n):
            if self.adjacency[i][i]:
                raise ValueError(f"self-loop at vertex {i + 1} is not allowed")
        if not self.directed:
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if self.adjacency[i][j] != self.adjacency[j][i]:
                        raise ValueError(
                            "undirected graph needs a symmetric adjacency matrix "
                            f"(mismatch at ({i + 1}, {j + 1}))"
                        )

    @classmethod
    def from_edges(cls, n: int, edges, directed: bool = False) -> "Graph":
        """Build a graph from 1-based (i, j) pairs, symmetrizing if undirected."""
        matrix = [[False] * n for _ in range(n)]
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) is not allowed")
            matrix[i - 1][j - 1] = True
            if not directed:
                matrix[j - 1][i - 1] = True
        return cls(n, tuple(tuple(row) for row in matrix), directed)

    @cached_property
    def _successors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(j + 1 for j in range(self.n) if row[j]) for row in self.adjacency
        )

    def successors(self, j: int) -> tuple[int, ...]:
        """Vertices reachable from j along one edge, ascending, 1-based."""
        self._check_vertex(j)
        return self._successors[j - 1]

    def has_edge(self, i: int, j: int) -> bool:
        self._check_vertex(i)
        self._check_vertex(j)
        return self.adjacency[i - 1][j - 1]

    def out_degree(self, j: int) -> int:
        return len(self.successors(j))

    def min_out_degree(self) -> int:
        return min(len(s) for s in self._successors)

    def _check_vertex(self, j: int) -> None:
        if not 1 <= j <= self.n:
            raise ValueError(f"vertex {j} out of range 1..{self.n}")


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format into a Graph.

    Grammar: the first non-blank line that does not start with ``#`` is the
    header ``N`` (optionally followed by the token ``directed``); every later
    such line is an edge ``i j`` with 1-based endpoints. Blank lines and
    ``#`` comment lines are ignored everywhere.
    """
    n: int | None = None
    directed = False
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if not tokens[0].isdigit():
                raise GraphFormatError(
                    f"expected a vertex count, got {tokens[0]!r}", line_no
                )
            n = int(tokens[0])
            if n < 1:
                raise GraphFormatError("vertex count must be at least 1", line_no)
            rest = tokens[1:]
            if rest == ["directed"]:
                directed = True
            elif rest:
                raise GraphFormatError(
                    f"unexpected tokens after vertex count: {' '.join(rest)!r}", line_no
                )
            continue
        if len(tokens) != 2:
            raise GraphFormatError(f"expected an edge 'i j', got {line!r}", line_no)
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(
                f"edge endpoints must be integers, got {line!r}", line_no
            ) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"edge ({i}, {j}) out of range for n={n}", line_no)
        if i == j:
            raise GraphFormatError(f"self-loop ({i}, {j}) is not allowed", line_no)
        edges.append((i, j))
    if n is None:
        raise GraphFormatError("empty document: missing vertex-count header")
    return Graph.from_edges(n, edges, directed=directed)


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def out_degree(g: Graph, j: int) -> int:
    """Number of edges leaving vertex j (its degree when undirected)."""
    return g.out_degree(j)


def brute_force_hamiltonian_paths(
    g: Graph, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[int, ...]]:
    """Every Hamiltonian path of g, in lexicographic order.

    Depth-first extension over adjacency; ascending successor order makes the
    output lexicographic without sorting. The cap is a refusal bound, not a
    speed promise: dense graphs near it hold hundreds of millions of paths.
    """
    if g.n > cap:
        raise EnumerationCapError(g.n, cap)
    n = g.n
    succ = [g.successors(v) for v in range(1, n + 1)]
    found: list[tuple[int, ...]] = []
    path = [0] * n
    visited = [False] * (n + 1)

    def extend(v: int, depth: int) -> None:
        path[depth] = v
        if depth + 1 == n:
            found.append(tuple(path))
            return
        visited[v] = True
        for w in succ[v - 1]:
            if not visited[w]:
                extend(w, depth + 1)
        visited[v] = False

    for start in range(1, n + 1):
        extend(start, 0)
    return found


def count_walks(g: Graph, length: int) -> int:
    """Exact number of walks with `length` edges, over all start/end pairs.

    Iterates the row vector 1^T A, so the result is the full matrix-power sum
    in exact integer arithmetic (dense graphs overflow 64 bits quickly).
    """
    if length < 0:
        raise ValueError("walk length must be non-negative")
    adj = g.adjacency
    row = [1] * g.n
    for _ in range(length):
        row = [sum(row[i] for i in range(g.n) if adj[i][j]) for j in range(g.n)]
    return sum(row)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def star_graph(n: int) -> Graph:
    """Vertex 1 is the hub; vertices 2..n are leaves."""
    return Graph.from_edges(n, [(1, j) for j in range(2, n + 1)])


def random_graph(n: int, edge_probability: float, seed, directed: bool = False) -> Graph:
    """Independent-edge random graph, reproducible from the seed."""
    if not 0.0 <= edge_probability <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = []
    if directed:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    else:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for pair in pairs:
        if rng.random() < edge_probability:
            edges.append(pair)
    return Graph.from_edges(n, edges, directed=directed)
