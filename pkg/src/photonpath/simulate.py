"""Propagate a photon, or a classical pulse ensemble, through a network.

Three weight models ride the same sparse dynamic programming over
(column, prime-product) cells:

- incoherent: probability masses, split 1/k per slit; conserves total mass
  and matches Born-rule sampling of uniform slit choices
- coherent: amplitudes, split 1/sqrt(k) and merged before squaring; kept as
  a diagnostic because same-time merges can push the summed squared
  magnitude above 1 (an ideal splitter's unused input ports are not modeled)
- classical: exact integer pulse counts, one copy per slit, so terminal
  counts equal walk counts

State never stores exponent vectors during the sweep; each cell is keyed by
the integer product of visited-vertex primes, which encodes the exponent
vector uniquely and hashes fast. Keys are expanded to exponent tuples only
when a distribution is frozen for callers.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

from .delays import (
    ArrivalKey,
    DelayTable,
    hamiltonian_key,
    hamiltonian_time,
    key_time,
    product_exponents,
)
from .network import FEEDFORWARD, Network

INCOHERENT = "incoherent"
COHERENT = "coherent"
CLASSICAL = "classical"
MODES = (INCOHERENT, COHERENT, CLASSICAL)


@dataclass(frozen=True)
class PropagationStats:
    """Work counters: cells expanded and weight transfers performed."""

    rows: int
    states: int
    transitions: int


@dataclass
class TerminalDistribution:
    """Weights over (terminal column, arrival key) cells after a sweep."""

    mode: str
    n: int
    topology: str
    rows: int
    entries: dict[tuple[int, ArrivalKey], float | complex | int]
    lost_mass: float | int
    total_mass: float | int
    time_offset: float
    stats: PropagationStats

    def mass(self, weight) -> float | int:
        """Detection mass of a raw weight under this distribution's mode."""
        if self.mode == COHERENT:
            return abs(weight) ** 2
        return weight

    def hamiltonian_weights(self) -> dict[int, float | complex | int]:
        """Raw weights of the all-ones cells, per terminal column."""
        ones = hamiltonian_key(self.n)
        return {
            col: w for (col, key), w in self.entries.items() if key == ones
        }

    def hamiltonian_mass(self) -> float | int:
        """Total detection mass arriving exactly at the all-ones instant."""
        masses = [self.mass(w) for w in self.hamiltonian_weights().values()]
        if self.mode == CLASSICAL:
            return sum(masses)
        return math.fsum(masses)


def _cell_mass(cell: dict, mode: str):
    if mode == COHERENT:
        return math.fsum(abs(w) ** 2 for w in cell.values())
    if mode == CLASSICAL:
        return sum(cell.values())
    return math.fsum(cell.values())


def _freeze(net, mode, state, lost_parts, rows_done, states, transitions, memo):
    table = net.table
    entries: dict[tuple[int, ArrivalKey], float | complex | int] = {}
    for col in sorted(state):
        cell = state[col]
        for prod in sorted(cell):
            key = memo.get(prod)
            if key is None:
                key = product_exponents(prod, table)
                memo[prod] = key
            entries[(col, key)] = cell[prod]
    if mode == CLASSICAL:
        total = sum(cell_total for cell_total in (sum(c.values()) for c in state.values()))
        lost = sum(lost_parts)
    elif mode == COHERENT:
        total = math.fsum(abs(w) ** 2 for c in state.values() for w in c.values())
        lost = math.fsum(lost_parts)
    else:
        total = math.fsum(w for c in state.values() for w in c.values())
        lost = math.fsum(lost_parts)
    offset = 0.0
    if net.topology != FEEDFORWARD and net.feedback_delay is not None:
        offset = (rows_done - 1) * net.feedback_delay
    return TerminalDistribution(
        mode=mode,
        n=net.n,
        topology=net.topology,
        rows=rows_done,
        entries=entries,
        lost_mass=lost,
        total_mass=total,
        time_offset=offset,
        stats=PropagationStats(rows_done, states, transitions),
    )


def _sweep(net: Network, mode: str, omega: float, rows: int | None, keep_all: bool):
    if mode not in MODES:
        raise ValueError(f"unknown propagation mode {mode!r}")
    n = net.n
    table = net.table
    primes = table.primes
    feedforward = net.topology == FEEDFORWARD
    if rows is not None:
        if not feedforward:
            raise ValueError("row truncation applies to feedforward networks only")
        if not 1 <= rows <= n:
            raise ValueError(f"rows must lie in 1..{n}")
    total_rows = n if rows is None else rows

    phases = None
    if mode == COHERENT and omega:
        # Accumulated phase for a path is omega times its arrival time; each
        # traversal of column c contributes delay_c plus one channel hop, and
        # recurrent re-entries additionally cross the feedback channel.
        fb = net.feedback_delay or 0.0
        entry = [
            cmath.exp(1j * omega * (table.delays[c - 1] + table.channel_delay))
            for c in range(1, n + 1)
        ]
        step = entry if feedforward else [
            ph * cmath.exp(1j * omega * fb) for ph in entry
        ]
        phases = (entry, step)

    if mode == INCOHERENT:
        w0 = 1.0 / n
    elif mode == CLASSICAL:
        w0 = 1
    else:
        w0 = 1.0 / math.sqrt(n)
    state: dict[int, dict[int, float | complex | int]] = {}
    for col in range(1, n + 1):
        w = w0 * phases[0][col - 1] if phases else w0
        state[col] = {primes[col - 1]: w}

    lost_parts: list = []
    states = 0
    transitions = 0
    memo: dict[int, ArrivalKey] = {}
    results = []
    if keep_all or total_rows == 1:
        results.append(_freeze(net, mode, state, lost_parts, 1, states, transitions, memo))
    for row_done in range(2, total_rows + 1):
        src_row = (row_done - 1) if feedforward else 1
        nxt: dict[int, dict] = {}
        for col, cell in state.items():
            unit = net.units[(src_row, col)]
            k = unit.slit_count
            states += len(cell)
            if k == 0:
                lost_parts.append(_cell_mass(cell, mode))
                continue
            transitions += len(cell) * k
            if mode == INCOHERENT:
                base = 1.0 / k
            elif mode == CLASSICAL:
                base = 1
            else:
                base = 1.0 / math.sqrt(k)
            for _, tcol in unit.successors:
                pt = primes[tcol - 1]
                f = base * phases[1][tcol - 1] if phases else base
                tgt = nxt.setdefault(tcol, {})
                get = tgt.get
                for prod, w in cell.items():
                    q = prod * pt
                    tgt[q] = get(q, 0) + w * f
        state = nxt
        if keep_all or row_done == total_rows:
            results.append(
                _freeze(net, mode, state, lost_parts, row_done, states, transitions, memo)
            )
    return results


def propagate(
    net: Network, mode: str = INCOHERENT, omega: float = 0.0, rows: int | None = None
) -> TerminalDistribution:
    """Run a full sweep and return the terminal distribution.

    The source splits its input equally over the n first-row units; each unit
    accrues its column's delay, then splits equally over its slits. Weights
    landing on the same (column, key) cell merge by addition. Absorbing units
    (out-degree 0) divert their mass to lost_mass instead of renormalizing.

    rows truncates a feedforward sweep after that many rows, modeling a
    measurement at an earlier row's output; the recurrent topology always
    runs its n - 1 feedback rounds.
    """
    return _sweep(net, mode, omega, rows, keep_all=False)[-1]


def propagate_rows(
    net: Network, mode: str = INCOHERENT, omega: float = 0.0
) -> tuple[TerminalDistribution, ...]:
    """Distributions after every row 1..n of a feedforward sweep, in one pass.

    Snapshot r equals propagate(net, mode, rows=r); reconstruction procedures
    read many truncations of the same network, so sharing the sweep saves a
    factor of n.
    """
    if net.topology != FEEDFORWARD:
        raise ValueError("per-row snapshots need a feedforward network")
    return tuple(_sweep(net, mode, omega, None, keep_all=True))


@dataclass(frozen=True)
class DetectionReport:
    """Mass arriving inside the detection window, per terminal column."""

    per_column: dict[int, float]
    total: float
    epsilon: float
    window_start: float
    window_end: float
    warning: str | None

    def to_dict(self) -> dict:
        return {
            "per_column": dict(self.per_column),
            "total": self.total,
            "epsilon": self.epsilon,
            "window_start": self.window_start,
            "window_end": self.window_end,
            "warning": self.warning,
        }


def detection_probability(
    dist: TerminalDistribution, table: DelayTable, epsilon: float
) -> DetectionReport:
    """Per-column probability of arriving inside [t_full, t_full + epsilon],
    where t_full is the all-ones instant.

    Works on intrinsic key times, so the uniform recurrent feedback offset
    cancels. When epsilon is not below the smallest realizable gap the window
    may admit other arrivals; that is reported as a warning, not a failure.
    """
    if dist.mode == CLASSICAL:
        raise ValueError("detection windows apply to incoherent or coherent runs")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lam = hamiltonian_time(table)
    ones = hamiltonian_key(table.n)
    per = {col: 0.0 for col in range(1, dist.n + 1)}
    gap: float | None = None
    for (col, key), w in dist.entries.items():
        t = key_time(key, table)
        if lam <= t <= lam + epsilon:
            per[col] += dist.mass(w)
        if key != ones:
            d = abs(t - lam)
            if gap is None or d < gap:
                gap = d
    warning = None
    if gap is not None and epsilon >= gap:
        warning = (
            f"epsilon {epsilon:.6g} is not below the smallest realizable gap "
            f"{gap:.6g}; the window may admit non-Hamiltonian arrivals"
        )
    return DetectionReport(per, math.fsum(per.values()), epsilon, lam, lam + epsilon, warning)


@dataclass(frozen=True)
class BalanceReport:
    """Conservation audit: terminal plus lost mass against the input."""

    mode: str
    total_mass: float | int
    lost_mass: float | int
    combined: float | int
    deviation_from_one: float | None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "total_mass": self.total_mass,
            "lost_mass": self.lost_mass,
            "combined": self.combined,
            "deviation_from_one": self.deviation_from_one,
        }


def probability_balance(dist: TerminalDistribution) -> BalanceReport:
    """Report terminal, lost, and combined mass, plus the distance from 1.

    Classical pulse counts are exact integers, so no deviation is reported
    for them. For coherent runs the combined value is the normalization
    diagnostic; values above 1 flag same-time merges, not numerical error.
    """
    combined = dist.total_mass + dist.lost_mass
    deviation = None if dist.mode == CLASSICAL else combined - 1.0
    return BalanceReport(dist.mode, dist.total_mass, dist.lost_mass, combined, deviation)


@dataclass(frozen=True)
class PhotonShot:
    """Outcome of one shot: a terminal cell, or None/None when absorbed."""

    terminal: int | None
    key: ArrivalKey | None

    @property
    def lost(self) -> bool:
        return self.terminal is None


def _successor_columns(net: Network) -> dict[tuple[int, int], tuple[int, ...]]:
    return {
        pos: tuple(t for _, t in unit.successors) for pos, unit in net.units.items()
    }


def _shoot(net: Network, succ_map, rng: random.Random) -> PhotonShot:
    n = net.n
    feedforward = net.topology == FEEDFORWARD
    counts = [0] * n
    col = rng.randrange(n) + 1
    counts[col - 1] += 1
    for step in range(1, n):
        row = step if feedforward else 1
        succ = succ_map[(row, col)]
        if not succ:
            return PhotonShot(None, None)
        col = succ[rng.randrange(len(succ))]
        counts[col - 1] += 1
    return PhotonShot(col, tuple(counts))


def sample_photon(net: Network, seed) -> PhotonShot:
    """One Born-rule shot: a uniform slit choice at the source and at every
    grating, which reproduces the incoherent cell probabilities exactly."""
    return _shoot(net, _successor_columns(net), random.Random(seed))


@dataclass(frozen=True)
class ShotSummary:
    """Aggregate of a seeded shot batch."""

    shots: int
    seed: int | str
    cell_counts: dict[tuple[int, ArrivalKey], int]
    lost_count: int
    hamiltonian_hits: int
    hamiltonian_frequency: float
    per_column_hamiltonian: dict[int, int]

    def to_dict(self) -> dict:
        cells = [
            {
                "terminal": col,
                "exponents": list(key),
                "count": self.cell_counts[(col, key)],
            }
            for (col, key) in sorted(self.cell_counts)
        ]
        return {
            "shots": self.shots,
            "seed": self.seed,
            "cells": cells,
            "lost_count": self.lost_count,
            "hamiltonian_hits": self.hamiltonian_hits,
            "hamiltonian_frequency": self.hamiltonian_frequency,
            "per_column_hamiltonian": dict(self.per_column_hamiltonian),
        }


def sample_shots(net: Network, shots: int, seed) -> ShotSummary:
    """Seeded batch of shots.

    Shot i draws from its own generator seeded by (seed, i), so any shot is
    reproducible from (seed, index) alone and batches could run in parallel
    without changing results.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    succ_map = _successor_columns(net)
    ones = hamiltonian_key(net.n)
    cells: dict[tuple[int, ArrivalKey], int] = {}
    per_col = {c: 0 for c in range(1, net.n + 1)}
    lost = 0
    hits = 0
    for i in range(shots):
        shot = _shoot(net, succ_map, random.Random(f"{seed}:{i}"))
        if shot.terminal is None:
            lost += 1
            continue
        cell = (shot.terminal, shot.key)
        cells[cell] = cells.get(cell, 0) + 1
        if shot.key == ones:
            hits += 1
            per_col[shot.terminal] += 1
    return ShotSummary(shots, seed, cells, lost, hits, hits / shots, per_col)


def distribution_rows(dist: TerminalDistribution, table: DelayTable) -> list[dict]:
    """Deterministic tabular export of a terminal distribution.

    One row per (terminal, key) cell, ordered by terminal column then
    lexicographic key; times include the recurrent feedback offset.
    """
    rows = []
    for col, key in sorted(dist.entries):
        w = dist.entries[(col, key)]
        row = {
            "terminal": col,
            "exponents": list(key),
            "time": key_time(key, table) + dist.time_offset,
            "mode": dist.mode,
        }
        if dist.mode == COHERENT:
            c = complex(w)
            row["weight"] = {"re": c.real, "im": c.imag}
            row["probability"] = abs(c) ** 2
        else:
            row["weight"] = w
        rows.append(row)
    return rows
