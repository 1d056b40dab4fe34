"""Command-line interface: thin shell over the library, batch-friendly.

Every number in a report comes from a library call with the same
parameters; the CLI only parses flags, loads the graph file, and renders.
Machine output is versioned JSON and byte-identical for identical
configurations (seeds included).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .delays import analyze_graph, build_delay_table
from .graphs import (
    EnumerationCapError,
    GraphFormatError,
    brute_force_hamiltonian_paths,
    load_graph,
)
from .network import (
    FEEDFORWARD,
    RECURRENT,
    FeedbackDelayError,
    compile_feedforward,
    compile_recurrent,
    default_feedback_delay,
    network_to_dict,
    validate_network,
)
from .procedures import (
    NoHamiltonianPathError,
    construct_path,
    detect_hamiltonian,
)
from .simulate import (
    CLASSICAL,
    COHERENT,
    INCOHERENT,
    distribution_rows,
    probability_balance,
    propagate,
    sample_shots,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_GRAPH = 3
EXIT_CAP = 4
EXIT_REFUSED = 5

FORMAT_VERSION = 1


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="path to a graph edge-list file")
    p.add_argument(
        "--format",
        choices=("human", "machine"),
        default="human",
        help="human text or versioned JSON",
    )
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def _add_topology(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", choices=(FEEDFORWARD, RECURRENT), default=FEEDFORWARD)
    p.add_argument(
        "--feedback-delay",
        type=float,
        default=None,
        help="recurrent feedback delay; defaults to the largest unit delay plus 1",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonpath",
        description=(
            "Compile graphs into single-photon delay networks, propagate them "
            "exactly, and run Hamiltonian-path detection and reconstruction."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="brute-force Hamiltonian path listing")
    _add_common(p)

    p = sub.add_parser("analyze", help="delay table, arrival instants, gaps, key census")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)

    p = sub.add_parser("compile", help="emit the compiled network as JSON")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)
    _add_topology(p)

    p = sub.add_parser("propagate", help="terminal distribution export")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)
    _add_topology(p)
    p.add_argument("--mode", choices=(INCOHERENT, COHERENT, CLASSICAL), default=INCOHERENT)
    p.add_argument(
        "--phase-omega",
        type=float,
        default=0.0,
        help="per-delay phase rate for coherent runs",
    )

    p = sub.add_parser("detect", help="Hamiltonian path detection")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)
    _add_topology(p)
    p.add_argument("--epsilon", type=float, default=None, help="window width override")
    p.add_argument("--shots", type=int, default=None, help="sampled detection shot count")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("construct", help="reconstruct a path ending at a vertex")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)
    p.add_argument("--end-vertex", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help="enables the sampled policy; omit for the deterministic one",
    )

    p = sub.add_parser("sample", help="seeded single-photon shot batch")
    _add_common(p)
    p.add_argument("--channel-delay", type=float, default=0.0)
    _add_topology(p)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    return parser


def _compiled(args, g):
    table = build_delay_table(g.n, args.channel_delay)
    if args.topology == RECURRENT:
        fb = (
            default_feedback_delay(table)
            if args.feedback_delay is None
            else args.feedback_delay
        )
        return table, compile_recurrent(g, table, fb)
    return table, compile_feedforward(g, table)


def _handle_oracle(args):
    g = load_graph(args.graph)
    paths = brute_force_hamiltonian_paths(g)
    result = {
        "n": g.n,
        "hamiltonian_path_count": len(paths),
        "paths": [list(p) for p in paths],
    }
    lines = [f"hamiltonian paths: {len(paths)}"]
    lines += [" ".join(str(v) for v in p) for p in paths]
    config = {"graph": args.graph, "format": args.format}
    return result, "\n".join(lines), config


def _handle_analyze(args):
    g = load_graph(args.graph)
    table = build_delay_table(g.n, args.channel_delay)
    report = analyze_graph(g, table)
    lines = [
        f"n: {g.n} ({'directed' if g.directed else 'undirected'})",
        "primes: " + " ".join(str(p) for p in report.primes),
        "delays: " + " ".join(_fmt(d) for d in report.delays),
        f"channel delay: {_fmt(report.channel_delay)}",
        f"hamiltonian arrival time: {_fmt(report.hamiltonian_time)}",
        f"hamiltonian arrival reachable: {report.hamiltonian_reachable}",
        f"minimum gap (exact): "
        f"{_fmt(report.min_gap_exact) if report.min_gap_exact is not None else 'undefined'}",
        f"minimum gap (2/(n ln n) estimate): "
        f"{_fmt(report.min_gap_approx) if report.min_gap_approx is not None else 'undefined'}",
        f"default detection window: {_fmt(report.default_epsilon)}",
        f"walks of length n-1: {report.walk_count}",
        "realizable keys per row: "
        + " ".join(str(c) for c in report.realizable_key_counts),
    ]
    config = {
        "graph": args.graph,
        "channel_delay": args.channel_delay,
        "format": args.format,
    }
    return report.to_dict(), "\n".join(lines), config


def _handle_compile(args):
    g = load_graph(args.graph)
    table, net = _compiled(args, g)
    violations = validate_network(net, g)
    if violations:
        raise RuntimeError("compiler produced an invalid network: " + "; ".join(violations))
    result = network_to_dict(net)
    lines = [
        f"topology: {net.topology}",
        f"units: {len(net.units)}",
        f"channels: {sum(len(u.successors) for u in net.units.values())}",
        f"source slits: {net.source_slits}",
    ]
    if net.feedback_delay is not None:
        lines.append(f"feedback delay: {_fmt(net.feedback_delay)}")
    config = {
        "graph": args.graph,
        "topology": args.topology,
        "channel_delay": args.channel_delay,
        "feedback_delay": net.feedback_delay,
        "format": args.format,
    }
    return result, "\n".join(lines), config


def _handle_propagate(args):
    g = load_graph(args.graph)
    table, net = _compiled(args, g)
    dist = propagate(net, args.mode, omega=args.phase_omega)
    balance = probability_balance(dist)
    rows = distribution_rows(dist, table)
    result = {
        "mode": dist.mode,
        "topology": dist.topology,
        "time_offset": dist.time_offset,
        "rows": rows,
        "balance": balance.to_dict(),
    }
    lines = [f"{'terminal':>8} {'time':>12} {'weight':>14} exponents"]
    for row in rows:
        w = row["weight"]
        if isinstance(w, dict):
            wtxt = f"{_fmt(w['re'])}+{_fmt(w['im'])}j"
        else:
            wtxt = _fmt(w)
        lines.append(
            f"{row['terminal']:>8} {_fmt(row['time']):>12} {wtxt:>14} "
            + " ".join(str(c) for c in row["exponents"])
        )
    lines.append(f"total mass: {_fmt(balance.total_mass)}")
    lines.append(f"lost mass: {_fmt(balance.lost_mass)}")
    lines.append(f"combined: {_fmt(balance.combined)}")
    config = {
        "graph": args.graph,
        "topology": args.topology,
        "mode": args.mode,
        "channel_delay": args.channel_delay,
        "feedback_delay": net.feedback_delay,
        "phase_omega": args.phase_omega,
        "format": args.format,
    }
    return result, "\n".join(lines), config


def _handle_detect(args):
    g = load_graph(args.graph)
    if args.shots is not None and args.seed is None:
        raise ValueError("--shots requires --seed")
    mode = "sampled" if args.shots is not None else "exact"
    outcome = detect_hamiltonian(
        g,
        mode,
        shots=args.shots,
        seed=args.seed,
        channel_delay=args.channel_delay,
        topology=args.topology,
        feedback_delay=args.feedback_delay,
        epsilon=args.epsilon,
    )
    lines = [
        "verdict: "
        + (
            "Hamiltonian path detected"
            if outcome.detected
            else "no detection at the full-visit instant"
        ),
        "end vertices: "
        + (" ".join(str(v) for v in outcome.end_vertices) or "(none)"),
        "per-column probabilities: "
        + " ".join(f"{c}:{_fmt(p)}" for c, p in sorted(outcome.probabilities.items())),
        f"total: {_fmt(outcome.total)}",
        f"hamiltonian instant: {_fmt(outcome.hamiltonian_instant)}",
    ]
    if outcome.caveat:
        lines.append(f"caveat: {outcome.caveat}")
    if outcome.window and outcome.window.get("warning"):
        lines.append(f"warning: {outcome.window['warning']}")
    config = {
        "graph": args.graph,
        "mode": mode,
        "topology": args.topology,
        "channel_delay": args.channel_delay,
        "feedback_delay": args.feedback_delay,
        "epsilon": args.epsilon,
        "shots": args.shots,
        "seed": args.seed,
        "format": args.format,
    }
    return outcome.to_dict(), "\n".join(lines), config


def _handle_construct(args):
    g = load_graph(args.graph)
    policy = "sampled" if args.seed is not None else "deterministic"
    result = construct_path(
        g,
        args.end_vertex,
        policy,
        seed=args.seed,
        channel_delay=args.channel_delay,
        epsilon=args.epsilon,
    )
    lines = ["path: " + " ".join(str(v) for v in result.path)]
    for rec in result.passes:
        cands = " ".join(f"{k}:{_fmt(w)}" for k, w in rec.candidates.items())
        lines.append(
            f"pass {rec.index} (rows 1..{rec.rows}): head {rec.head}, "
            f"window [{_fmt(rec.window_start)}, {_fmt(rec.window_end)}], "
            f"candidates {{{cands}}}, chose {rec.chosen}"
        )
    config = {
        "graph": args.graph,
        "end_vertex": args.end_vertex,
        "policy": policy,
        "seed": args.seed,
        "channel_delay": args.channel_delay,
        "epsilon": args.epsilon,
        "format": args.format,
    }
    return result.to_dict(), "\n".join(lines), config


def _handle_sample(args):
    g = load_graph(args.graph)
    table, net = _compiled(args, g)
    summary = sample_shots(net, args.shots, args.seed)
    lines = [
        f"shots: {summary.shots}",
        f"lost: {summary.lost_count}",
        f"hamiltonian hits: {summary.hamiltonian_hits} "
        f"(frequency {_fmt(summary.hamiltonian_frequency)})",
        "per-column hamiltonian hits: "
        + " ".join(f"{c}:{h}" for c, h in sorted(summary.per_column_hamiltonian.items())),
    ]
    config = {
        "graph": args.graph,
        "topology": args.topology,
        "channel_delay": args.channel_delay,
        "feedback_delay": net.feedback_delay,
        "shots": args.shots,
        "seed": args.seed,
        "format": args.format,
    }
    return summary.to_dict(), "\n".join(lines), config


_HANDLERS = {
    "oracle": _handle_oracle,
    "analyze": _handle_analyze,
    "compile": _handle_compile,
    "propagate": _handle_propagate,
    "detect": _handle_detect,
    "construct": _handle_construct,
    "sample": _handle_sample,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        result, human, config = _HANDLERS[args.command](args)
    except GraphFormatError as exc:
        print(f"photonpath: graph error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except OSError as exc:
        print(f"photonpath: cannot read graph file: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except EnumerationCapError as exc:
        print(f"photonpath: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NoHamiltonianPathError, FeedbackDelayError) as exc:
        print(f"photonpath: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as exc:
        print(f"photonpath: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "machine":
        envelope = {
            "format_version": FORMAT_VERSION,
            "command": args.command,
            "config": config,
            "result": result,
        }
        text = json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    else:
        text = human + "\n"

    try:
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"photonpath: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
