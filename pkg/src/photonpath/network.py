"""Compile a graph into the delay network it induces.

Two topologies: a feedforward n x n matrix of units whose wiring mirrors the
adjacency row by row, and a recurrent single row whose outputs feed back
through channels carrying an extra delay.
"""

from __future__ import annotations

from dataclasses import dataclass

from .delays import DelayTable, build_delay_table
from .graphs import Graph

FEEDFORWARD = "feedforward"
RECURRENT = "recurrent"
TOPOLOGIES = (FEEDFORWARD, RECURRENT)


class FeedbackDelayError(ValueError):
    """Feedback delay must strictly exceed the largest unit delay."""


@dataclass(frozen=True)
class Unit:
    """One processing unit: a delay line feeding an equal-split grating."""

    row: int
    column: int
    delay: float
    slit_count: int
    successors: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Network:
    """Immutable compiled network plus the delay table it was built from."""

    n: int
    topology: str
    table: DelayTable
    units: dict[tuple[int, int], Unit]
    source_slits: int
    feedback_delay: float | None = None


def compile_feedforward(g: Graph, table: DelayTable) -> Network:
    """n x n matrix: unit (i, j) feeds (i+1, k) exactly when j -> k is an edge.

    Terminal-row units keep only their delay line (detectors sit behind
    them). Out-degree-0 vertices yield absorbing units in earlier rows; the
    propagation engine accounts their weight as lost rather than rejecting
    the graph.
    """
    if table.n != g.n:
        raise ValueError("delay table size must match the graph")
    units: dict[tuple[int, int], Unit] = {}
    for row in range(1, g.n + 1):
        for col in range(1, g.n + 1):
            if row < g.n:
                succ = tuple((row + 1, k) for k in g.successors(col))
            else:
                succ = ()
            units[(row, col)] = Unit(row, col, table.delays[col - 1], len(succ), succ)
    return Network(g.n, FEEDFORWARD, table, units, g.n, None)


def default_feedback_delay(table: DelayTable) -> float:
    """A safe feedback delay: one time unit above the largest unit delay."""
    return table.delays[-1] + 1.0


def compile_recurrent(g: Graph, table: DelayTable, feedback_delay: float) -> Network:
    """Single row of units whose outputs feed back through delayed channels.

    Every feedback channel carries the same extra delay, which must exceed
    the largest unit delay so that successive rounds cannot overlap in time.
    """
    if table.n != g.n:
        raise ValueError("delay table size must match the graph")
    fb = float(feedback_delay)
    if not fb > table.delays[-1]:
        raise FeedbackDelayError(
            f"feedback delay {fb} must exceed the largest unit delay "
            f"{table.delays[-1]}"
        )
    units: dict[tuple[int, int], Unit] = {}
    for col in range(1, g.n + 1):
        succ = tuple((1, k) for k in g.successors(col))
        units[(1, col)] = Unit(1, col, table.delays[col - 1], len(succ), succ)
    return Network(g.n, RECURRENT, table, units, g.n, fb)


def validate_network(net: Network, g: Graph) -> list[str]:
    """Structural audit against the source graph.

    Returns human-readable violations; an empty list means the network is
    exactly what the compiler would emit for g. Violations are data, not
    exceptions, so callers can report them all at once.
    """
    problems: list[str] = []
    if net.topology not in TOPOLOGIES:
        return [f"unknown topology {net.topology!r}"]
    if net.n != g.n:
        return [f"network size {net.n} does not match graph size {g.n}"]
    if net.table.n != g.n:
        problems.append(f"delay table covers {net.table.n} columns, expected {g.n}")
        return problems
    if net.source_slits != g.n:
        problems.append(f"source has {net.source_slits} slits, expected {g.n}")

    feedforward = net.topology == FEEDFORWARD
    rows = range(1, g.n + 1) if feedforward else range(1, 2)
    expected_keys = {(r, c) for r in rows for c in range(1, g.n + 1)}
    for key in sorted(expected_keys - set(net.units)):
        problems.append(f"missing unit ({key[0]}, {key[1]})")
    for key in sorted(set(net.units) - expected_keys):
        problems.append(f"unexpected unit ({key[0]}, {key[1]})")

    for (row, col) in sorted(expected_keys & set(net.units)):
        unit = net.units[(row, col)]
        if (unit.row, unit.column) != (row, col):
            problems.append(
                f"unit stored at ({row}, {col}) reports position "
                f"({unit.row}, {unit.column})"
            )
        if unit.delay != net.table.delays[col - 1]:
            problems.append(
                f"unit ({row}, {col}): delay {unit.delay!r} does not match the "
                f"table value {net.table.delays[col - 1]!r}"
            )
        if feedforward and row == g.n:
            if unit.successors:
                problems.append(
                    f"unit ({row}, {col}) in the terminal row must have no successors"
                )
            if unit.slit_count != 0:
                problems.append(
                    f"unit ({row}, {col}) in the terminal row must have slit count 0"
                )
            continue
        degree = g.out_degree(col)
        if unit.slit_count != degree:
            problems.append(
                f"unit ({row}, {col}): slit count {unit.slit_count} does not match "
                f"out-degree {degree}"
            )
        target_row = row + 1 if feedforward else 1
        expected_succ = {(target_row, k) for k in g.successors(col)}
        got = list(unit.successors)
        if len(got) != len(set(got)):
            problems.append(f"unit ({row}, {col}): duplicate channels")
        for extra in sorted(set(got) - expected_succ):
            problems.append(
                f"unit ({row}, {col}): unexpected channel to ({extra[0]}, {extra[1]})"
            )
        for missing in sorted(expected_succ - set(got)):
            problems.append(
                f"unit ({row}, {col}): missing channel to ({missing[0]}, {missing[1]})"
            )

    if net.topology == RECURRENT:
        if net.feedback_delay is None:
            problems.append("recurrent network must carry a feedback delay")
        elif not net.feedback_delay > net.table.delays[-1]:
            problems.append(
                f"feedback delay {net.feedback_delay} must exceed the largest "
                f"unit delay {net.table.delays[-1]}"
            )
    elif net.feedback_delay is not None:
        problems.append("feedforward network must not carry a feedback delay")
    return problems


def network_to_dict(net: Network) -> dict:
    """Lossless serialization: header, units, and channels with extra delays."""
    units = []
    channels = []
    extra = net.feedback_delay if net.topology == RECURRENT else 0.0
    for key in sorted(net.units):
        unit = net.units[key]
        units.append(
            {
                "row": unit.row,
                "column": unit.column,
                "delay": unit.delay,
                "slit_count": unit.slit_count,
            }
        )
        for target in unit.successors:
            channels.append(
                {
                    "from": [unit.row, unit.column],
                    "to": [target[0], target[1]],
                    "extra_delay": extra,
                }
            )
    return {
        "format_version": 1,
        "n": net.n,
        "topology": net.topology,
        "primes": list(net.table.primes),
        "channel_delay": net.table.channel_delay,
        "feedback_delay": net.feedback_delay,
        "source_slits": net.source_slits,
        "units": units,
        "channels": channels,
    }


def network_from_dict(doc: dict) -> Network:
    """Rebuild a Network from its serialized form (inverse of network_to_dict)."""
    topology = doc["topology"]
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}")
    n = int(doc["n"])
    table = build_delay_table(
        n, float(doc.get("channel_delay", 0.0)), primes=tuple(doc["primes"])
    )
    succ: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for ch in doc["channels"]:
        succ.setdefault(tuple(ch["from"]), []).append(tuple(ch["to"]))
    units: dict[tuple[int, int], Unit] = {}
    for u in doc["units"]:
        key = (int(u["row"]), int(u["column"]))
        units[key] = Unit(
            key[0],
            key[1],
            float(u["delay"]),
            int(u["slit_count"]),
            tuple(succ.get(key, [])),
        )
    feedback = doc.get("feedback_delay")
    return Network(
        n,
        topology,
        table,
        units,
        int(doc.get("source_slits", n)),
        None if feedback is None else float(feedback),
    )
