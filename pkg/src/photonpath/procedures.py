"""Operational procedures: detection at the full-visit instant, and
head-first path reconstruction over truncated sweeps."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .delays import (
    ArrivalKey,
    build_delay_table,
    default_epsilon,
    hamiltonian_key,
    hamiltonian_time,
    key_time,
)
from .graphs import DEFAULT_ENUMERATION_CAP, EnumerationCapError, Graph
from .network import (
    FEEDFORWARD,
    RECURRENT,
    compile_feedforward,
    compile_recurrent,
    default_feedback_delay,
)
from .simulate import (
    INCOHERENT,
    detection_probability,
    propagate,
    propagate_rows,
    sample_shots,
)


class NoHamiltonianPathError(ValueError):
    """Reconstruction refused: no Hamiltonian path ends at the given vertex."""


class ConstructionInvariantError(RuntimeError):
    """A reconstruction pass found no candidate, which realizability of the
    target key plus adjacency rules out; it indicates an engine bug."""


@dataclass(frozen=True)
class DetectionOutcome:
    """Verdict and per-column probabilities at the full-visit instant."""

    detected: bool
    end_vertices: tuple[int, ...]
    probabilities: dict[int, float]
    total: float
    mode: str
    topology: str
    hamiltonian_instant: float
    shots: int | None = None
    caveat: str | None = None
    window: dict | None = None

    def to_dict(self) -> dict:
        return {
            "detected": self.detected,
            "end_vertices": list(self.end_vertices),
            "probabilities": dict(self.probabilities),
            "total": self.total,
            "mode": self.mode,
            "topology": self.topology,
            "hamiltonian_instant": self.hamiltonian_instant,
            "shots": self.shots,
            "caveat": self.caveat,
            "window": self.window,
        }


def detect_hamiltonian(
    g: Graph,
    mode: str = "exact",
    shots: int | None = None,
    seed=None,
    *,
    channel_delay: float = 0.0,
    topology: str = FEEDFORWARD,
    feedback_delay: float | None = None,
    epsilon: float | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DetectionOutcome:
    """Decide Hamiltonian-path existence from arrivals at the exact
    all-primes instant.

    Exact mode reads the incoherent terminal distribution; positive mass at
    the all-ones key is equivalent to the existence of a Hamiltonian path.
    Sampled mode draws seeded shots and can miss, so a miss carries a caveat
    instead of counting as a negative proof. Passing epsilon additionally
    attaches a finite-window query to an exact outcome.
    """
    if g.n > cap:
        raise EnumerationCapError(g.n, cap)
    table = build_delay_table(g.n, channel_delay)
    if topology == FEEDFORWARD:
        net = compile_feedforward(g, table)
        instant = hamiltonian_time(table)
    elif topology == RECURRENT:
        fb = default_feedback_delay(table) if feedback_delay is None else feedback_delay
        net = compile_recurrent(g, table, fb)
        instant = hamiltonian_time(table) + (g.n - 1) * net.feedback_delay
    else:
        raise ValueError(f"unknown topology {topology!r}")

    if mode == "exact":
        dist = propagate(net, INCOHERENT)
        per = {col: 0.0 for col in range(1, g.n + 1)}
        for col, w in dist.hamiltonian_weights().items():
            per[col] = w
        ends = tuple(col for col in sorted(per) if per[col] > 0)
        window = None
        if epsilon is not None:
            window = detection_probability(dist, table, epsilon).to_dict()
        return DetectionOutcome(
            detected=bool(ends),
            end_vertices=ends,
            probabilities=per,
            total=math.fsum(per.values()),
            mode="exact",
            topology=topology,
            hamiltonian_instant=instant,
            window=window,
        )
    if mode == "sampled":
        if shots is None or shots < 1:
            raise ValueError("sampled detection needs shots >= 1")
        if seed is None:
            raise ValueError("sampled detection needs an explicit seed")
        summary = sample_shots(net, shots, seed)
        per = {
            col: summary.per_column_hamiltonian[col] / shots
            for col in range(1, g.n + 1)
        }
        ends = tuple(col for col in sorted(per) if per[col] > 0)
        detected = summary.hamiltonian_hits > 0
        caveat = None
        if not detected:
            caveat = (
                f"no arrival at the full-visit instant in {shots} shots; "
                "a miss does not show that the graph lacks a Hamiltonian path"
            )
        return DetectionOutcome(
            detected=detected,
            end_vertices=ends,
            probabilities=per,
            total=summary.hamiltonian_frequency,
            mode="sampled",
            topology=topology,
            hamiltonian_instant=instant,
            shots=shots,
            caveat=caveat,
        )
    raise ValueError(f"unknown detection mode {mode!r}")


@dataclass(frozen=True)
class PassRecord:
    """One reconstruction pass: rows used, window, candidates, and choice."""

    index: int
    rows: int
    head: int
    target_key: ArrivalKey
    window_start: float
    window_end: float
    candidates: dict[int, float]
    chosen: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "rows": self.rows,
            "head": self.head,
            "target_key": list(self.target_key),
            "window_start": self.window_start,
            "window_end": self.window_end,
            "candidates": dict(self.candidates),
            "chosen": self.chosen,
        }


@dataclass(frozen=True)
class ConstructionResult:
    path: tuple[int, ...]
    end_vertex: int
    policy: str
    passes: tuple[PassRecord, ...]
    epsilon: float

    def to_dict(self) -> dict:
        return {
            "path": list(self.path),
            "end_vertex": self.end_vertex,
            "policy": self.policy,
            "passes": [p.to_dict() for p in self.passes],
            "epsilon": self.epsilon,
        }


def construct_path(
    g: Graph,
    end_vertex: int,
    policy: str = "deterministic",
    seed=None,
    *,
    channel_delay: float = 0.0,
    epsilon: float | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ConstructionResult:
    """Rebuild a Hamiltonian path ending at end_vertex, head-first, in n - 1
    passes over ever shorter truncations of the network.

    Pass i reads the sweep truncated to n - i rows and asks which vertices k,
    adjacent to the current head and not yet used, still realize the target
    key (all-ones with used vertices zeroed) at cell (k, target). Any such k
    extends to a full path, so the deterministic policy just takes the
    smallest; the sampled policy draws k proportionally to cell mass. Exact
    keys drive the logic; the reported windows restate them as instants.
    """
    g._check_vertex(end_vertex)
    if g.n > cap:
        raise EnumerationCapError(g.n, cap)
    if policy not in ("deterministic", "sampled"):
        raise ValueError(f"unknown policy {policy!r}")
    if policy == "sampled" and seed is None:
        raise ValueError("sampled reconstruction needs an explicit seed")
    table = build_delay_table(g.n, channel_delay)
    net = compile_feedforward(g, table)
    snapshots = propagate_rows(net, INCOHERENT)
    ones = hamiltonian_key(g.n)
    if snapshots[-1].entries.get((end_vertex, ones), 0) <= 0:
        raise NoHamiltonianPathError(
            f"no Hamiltonian path ends at vertex {end_vertex}"
        )
    eps = default_epsilon(g, table, cap) if epsilon is None else float(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    rng = random.Random(seed) if policy == "sampled" else None

    h = [end_vertex]
    records: list[PassRecord] = []
    for i in range(1, g.n):
        rows = g.n - i
        dist = snapshots[rows - 1]
        used = set(h)
        target = tuple(0 if v in used else 1 for v in range(1, g.n + 1))
        head = h[0]
        candidates: dict[int, float] = {}
        for k in range(1, g.n + 1):
            if k in used or not g.has_edge(k, head):
                continue
            w = dist.entries.get((k, target), 0.0)
            if w > 0:
                candidates[k] = w
        if not candidates:
            raise ConstructionInvariantError(
                f"pass {i}: no candidate precedes head {head}"
            )
        candidates = dict(sorted(candidates.items()))
        if rng is None:
            chosen = min(candidates)
        else:
            draw = rng.random() * math.fsum(candidates.values())
            chosen = max(candidates)
            for k, w in candidates.items():
                draw -= w
                if draw <= 0:
                    chosen = k
                    break
        start = key_time(target, table)
        records.append(
            PassRecord(i, rows, head, target, start, start + eps, candidates, chosen)
        )
        h.insert(0, chosen)
    return ConstructionResult(tuple(h), end_vertex, policy, tuple(records), eps)


@dataclass(frozen=True)
class PassCost:
    index: int
    rows: int
    states: int
    transitions: int


@dataclass(frozen=True)
class CostReport:
    """Work tallies for the n - 1 reconstruction passes."""

    n: int
    passes: int
    per_pass: tuple[PassCost, ...]
    total_states: int
    total_transitions: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "passes": self.passes,
            "per_pass": [
                {
                    "index": p.index,
                    "rows": p.rows,
                    "states": p.states,
                    "transitions": p.transitions,
                }
                for p in self.per_pass
            ],
            "total_states": self.total_states,
            "total_transitions": self.total_transitions,
        }


def construction_cost(
    g: Graph, *, channel_delay: float = 0.0, cap: int = DEFAULT_ENUMERATION_CAP
) -> CostReport:
    """Run the n - 1 reconstruction passes as fresh truncated sweeps and
    tally the engine work per pass, for empirical scaling against n^2 log n."""
    if g.n > cap:
        raise EnumerationCapError(g.n, cap)
    table = build_delay_table(g.n, channel_delay)
    net = compile_feedforward(g, table)
    per: list[PassCost] = []
    for i in range(1, g.n):
        rows = g.n - i
        stats = propagate(net, INCOHERENT, rows=rows).stats
        per.append(PassCost(i, rows, stats.states, stats.transitions))
    return CostReport(
        g.n,
        g.n - 1,
        tuple(per),
        sum(p.states for p in per),
        sum(p.transitions for p in per),
    )
