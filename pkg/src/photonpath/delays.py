"""Prime-logarithm delay tables and exact, integer-coded arrival times.

Arrival times are sums of natural logs of primes, so questions about time
coincidences are really unique-factorization questions. Every comparison
that matters is done on integer products of primes; floating-point times
are derived for reporting only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import DEFAULT_ENUMERATION_CAP, EnumerationCapError, Graph, count_walks

ArrivalKey = tuple[int, ...]


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


def first_primes(n: int) -> tuple[int, ...]:
    """The first n primes by trial division; n stays small here."""
    primes: list[int] = []
    candidate = 2
    while len(primes) < n:
        if _is_prime(candidate):
            primes.append(candidate)
        candidate += 1
    return tuple(primes)


@dataclass(frozen=True)
class DelayTable:
    """Per-vertex delays ln(p_j) plus a uniform per-hop channel delay."""

    primes: tuple[int, ...]
    delays: tuple[float, ...]
    channel_delay: float = 0.0

    def __post_init__(self) -> None:
        if not self.primes:
            raise ValueError("delay table needs at least one prime")
        if any(not _is_prime(p) for p in self.primes):
            raise ValueError("delay table entries must all be prime")
        if any(a >= b for a, b in zip(self.primes, self.primes[1:])):
            raise ValueError("primes must be strictly increasing")
        expected = tuple(math.log(p) for p in self.primes)
        if self.delays != expected:
            raise ValueError("delays must be the natural logs of the primes")
        if self.channel_delay < 0:
            raise ValueError("channel delay must be non-negative")

    @property
    def n(self) -> int:
        return len(self.primes)


def build_delay_table(n: int, channel_delay: float = 0.0, primes=None) -> DelayTable:
    """Delay table over the first n primes, or an explicit increasing list."""
    if n < 1:
        raise ValueError("n must be at least 1")
    chosen = first_primes(n) if primes is None else tuple(primes)
    if len(chosen) != n:
        raise ValueError(f"expected {n} primes, got {len(chosen)}")
    return DelayTable(chosen, tuple(math.log(p) for p in chosen), float(channel_delay))


def key_time(key: ArrivalKey, table: DelayTable, rows_traversed: int | None = None) -> float:
    """Arrival time of a key: sum of c_j * delay_j plus per-row channel delay.

    rows_traversed defaults to the exponent sum and must equal it when given;
    each row traversal costs one channel hop.
    """
    if len(key) != table.n:
        raise ValueError(f"key has {len(key)} entries, delay table has {table.n}")
    if any(c < 0 for c in key):
        raise ValueError("key exponents must be non-negative")
    total = sum(key)
    if rows_traversed is None:
        rows_traversed = total
    elif rows_traversed != total:
        raise ValueError("rows_traversed must equal the key's exponent sum")
    return math.fsum(c * d for c, d in zip(key, table.delays)) + rows_traversed * table.channel_delay


def hamiltonian_key(n: int) -> ArrivalKey:
    """The all-ones key: every vertex delay accrued exactly once."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (1,) * n


def is_hamiltonian_key(key: ArrivalKey) -> bool:
    """True only for an all-ones key (full length, every exponent 1)."""
    return len(key) > 0 and all(c == 1 for c in key)


def hamiltonian_time(table: DelayTable) -> float:
    """Arrival time of the all-ones key, the unique full-visit instant."""
    return key_time(hamiltonian_key(table.n), table)


def hamiltonian_product(table: DelayTable) -> int:
    """Square-free product of every prime in the table."""
    prod = 1
    for p in table.primes:
        prod *= p
    return prod


def key_product(key: ArrivalKey, table: DelayTable) -> int:
    """Integer encoding of a key: the product of primes to their exponents."""
    if len(key) != table.n:
        raise ValueError(f"key has {len(key)} entries, delay table has {table.n}")
    prod = 1
    for p, c in zip(table.primes, key):
        prod *= p**c
    return prod


def product_exponents(prod: int, table: DelayTable) -> ArrivalKey:
    """Invert key_product by trial division over the table's primes."""
    if prod < 1:
        raise ValueError("product must be a positive integer")
    exponents = [0] * table.n
    rest = prod
    for idx, p in enumerate(table.primes):
        while rest % p == 0:
            rest //= p
            exponents[idx] += 1
    if rest != 1:
        raise ValueError(f"{prod} has a factor outside the table's primes")
    return tuple(exponents)


def max_visit_bound(n: int) -> int:
    """Largest multiplicity one vertex can have in a walk on n vertices.

    Without self-loops consecutive vertices differ, so a vertex appears at
    most ceil(n/2) times; the walk 1,2,1 reaches that bound for n = 3.
    """
    return (n + 1) // 2


def min_gap_approx(n: int) -> float:
    """Closed-form estimate 2 / (n ln n) for the smallest arrival-time gap."""
    if n < 2:
        raise ValueError("the gap estimate needs n >= 2")
    return 2.0 / (n * math.log(n))


def realizable_products(
    g: Graph, table: DelayTable, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[frozenset[int], ...]:
    """Products of visited-vertex primes over all walks, one set per row.

    Row r holds every product realizable by some walk on r vertices. Dynamic
    programming over (end vertex, product) pairs; the product encodes the
    whole exponent vector because factorization is unique.
    """
    if g.n > cap:
        raise EnumerationCapError(g.n, cap)
    if table.n != g.n:
        raise ValueError("delay table size must match the graph")
    primes = table.primes
    per_vertex: dict[int, set[int]] = {
        v: {primes[v - 1]} for v in range(1, g.n + 1)
    }
    rows = [frozenset().union(*per_vertex.values())]
    for _ in range(g.n - 1):
        nxt: dict[int, set[int]] = {v: set() for v in range(1, g.n + 1)}
        for v, prods in per_vertex.items():
            if not prods:
                continue
            for w in g.successors(v):
                pw = primes[w - 1]
                nxt[w].update(pr * pw for pr in prods)
        per_vertex = nxt
        rows.append(frozenset().union(*per_vertex.values()))
    return tuple(rows)


def min_gap_exact(
    g: Graph, table: DelayTable, cap: int = DEFAULT_ENUMERATION_CAP
) -> float | None:
    """Smallest |arrival-time difference| between the all-ones instant and any
    other arrival realizable by a full-length walk in g.

    The minimizing arrival is selected exactly, by comparing integer product
    ratios as fractions; only the returned magnitude is a float. None when
    the all-ones key is unrealizable (no Hamiltonian path) or when it is the
    only realizable arrival.
    """
    final = realizable_products(g, table, cap)[-1]
    target = hamiltonian_product(table)
    if target not in final:
        return None
    best: Fraction | None = None
    for prod in final:
        if prod == target:
            continue
        ratio = Fraction(prod, target) if prod > target else Fraction(target, prod)
        if best is None or ratio < best:
            best = ratio
    if best is None:
        return None
    return math.log(best.numerator / best.denominator)


def default_epsilon(
    g: Graph, table: DelayTable, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """Detection-window width: half the exact gap when defined, else half the
    2/(n ln n) estimate, so the window can never reach another arrival."""
    gap = min_gap_exact(g, table, cap)
    if gap is not None:
        return gap / 2.0
    if table.n >= 2:
        return min_gap_approx(table.n) / 2.0
    return table.delays[0] / 2.0


@dataclass(frozen=True)
class AnalysisReport:
    """Machine-readable summary of a graph's delay-time structure."""

    n: int
    directed: bool
    primes: tuple[int, ...]
    delays: tuple[float, ...]
    channel_delay: float
    hamiltonian_time: float
    hamiltonian_product: int
    hamiltonian_reachable: bool
    min_gap_exact: float | None
    min_gap_approx: float | None
    default_epsilon: float
    walk_count: int
    realizable_key_counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "directed": self.directed,
            "primes": list(self.primes),
            "delays": list(self.delays),
            "channel_delay": self.channel_delay,
            "hamiltonian_time": self.hamiltonian_time,
            "hamiltonian_product": self.hamiltonian_product,
            "hamiltonian_reachable": self.hamiltonian_reachable,
            "min_gap_exact": self.min_gap_exact,
            "min_gap_approx": self.min_gap_approx,
            "default_epsilon": self.default_epsilon,
            "walk_count": self.walk_count,
            "realizable_key_counts": list(self.realizable_key_counts),
        }


def analyze_graph(
    g: Graph, table: DelayTable | None = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> AnalysisReport:
    """Assemble the analysis report: delays, the full-visit instant, exact and
    estimated minimum gaps, walk count, and the realizable-key census."""
    if table is None:
        table = build_delay_table(g.n)
    rows = realizable_products(g, table, cap)
    target = hamiltonian_product(table)
    reachable = target in rows[-1]
    gap_exact: float | None = None
    if reachable:
        best: Fraction | None = None
        for prod in rows[-1]:
            if prod == target:
                continue
            ratio = Fraction(prod, target) if prod > target else Fraction(target, prod)
            if best is None or ratio < best:
                best = ratio
        if best is not None:
            gap_exact = math.log(best.numerator / best.denominator)
    if gap_exact is not None:
        epsilon = gap_exact / 2.0
    elif table.n >= 2:
        epsilon = min_gap_approx(table.n) / 2.0
    else:
        epsilon = table.delays[0] / 2.0
    return AnalysisReport(
        n=g.n,
        directed=g.directed,
        primes=table.primes,
        delays=table.delays,
        channel_delay=table.channel_delay,
        hamiltonian_time=hamiltonian_time(table),
        hamiltonian_product=target,
        hamiltonian_reachable=reachable,
        min_gap_exact=gap_exact,
        min_gap_approx=min_gap_approx(table.n) if table.n >= 2 else None,
        default_epsilon=epsilon,
        walk_count=count_walks(g, g.n - 1),
        realizable_key_counts=tuple(len(r) for r in rows),
    )
