"""Command-line front end.

Every command prints one JSON document on stdout.  Errors go to stderr as a
single-line JSON object.  Exit codes:

    0  success, and the verdict is positive where there is one
    1  usage error
    2  input error (bad graph file, bad vertex list, ...)
    3  verdict negative
    4  constrained-path budget exceeded
    5  counterexample construction or internal audit failed
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .dot import to_dot
from .errors import (
    BudgetExceededError,
    ConstructionFailedError,
    InputError,
    InternalConsistencyError,
    NetidentError,
)
from .graph import DEFAULT_BUDGET, Graph, constrained_path_set_exists, max_vertex_disjoint_paths
from .identify import identifiable_graph, identifiable_node
from .oracle import DEFAULT_TRIALS, OracleVerdict, rank_trials
from .schema import validate
from .simplification import OrderPolicy, inclusion_verdict, simplify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_BUDGET = 4
EXIT_FAILURE = 5

SEED_ENV = "NETIDENT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def load_graph(path: str | Path) -> tuple[Graph, dict[int, str]]:
    """Read a graph document; returns the graph and its (possibly empty) vertex labels."""
    try:
        doc = json.loads(Path(path).read_text("utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read graph file {str(path)!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"graph file {str(path)!r} is not valid JSON: {exc}") from exc
    validate(doc, "GraphDocument")
    g = Graph.from_json(doc)
    labels = {int(k): v for k, v in doc.get("labels", {}).items()}
    bad = sorted(k for k in labels if not 1 <= k <= g.n)
    if bad:
        raise InputError(f"labels given for vertices outside 1..{g.n}: {bad}")
    return g, labels


def parse_vertices(text: str, g: Graph) -> tuple[int, ...]:
    """``"2,3"`` -> ``(2, 3)``; the empty string is the empty set."""
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    try:
        vs = [int(p) for p in parts]
    except ValueError:
        raise InputError(f"vertex list must be comma-separated integers, got {text!r}") from None
    return g.vertex_set(vs)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _envelope(command: str, inputs: dict, seed: int) -> dict:
    return {"tool": "netident", "version": __version__, "command": command, "inputs": inputs, "seed": seed}


def _policy(args: argparse.Namespace) -> OrderPolicy:
    return OrderPolicy.parse(args.order)


def cmd_derive(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    anchors = parse_vertices(args.anchors, g)
    measured = parse_vertices(args.measured, g)
    policy = _policy(args)
    d = simplify(g, anchors, measured, policy)
    ok = inclusion_verdict(d, anchors)
    if args.dot:
        Path(args.dot).write_text(to_dot(d.derived_graph, d.derived_set, labels, name="derived"), "utf-8")
    inputs = {"graph": g.to_json(), "anchors": list(anchors), "measured": list(measured), "order": str(policy)}
    doc = _envelope("derive", inputs, seed) | {"verdict": ok, "derived": d.to_json()}
    return doc, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check_node(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    measured = parse_vertices(args.measured, g)
    (node,) = g.vertex_set([args.node])
    policy = _policy(args)
    v = identifiable_node(g, node, measured, with_counterexample=args.counterexample, seed=seed, policy=policy)
    inputs = {
        "graph": g.to_json(),
        "node": node,
        "measured": list(measured),
        "counterexample": bool(args.counterexample),
        "order": str(policy),
    }
    doc = _envelope("check-node", inputs, seed) | {
        "verdict": v.identifiable,
        "certificate": v.certificate.to_json() if v.certificate is not None else None,
        "details": v.to_json(),
    }
    return doc, EXIT_OK if v.identifiable else EXIT_NEGATIVE


def cmd_check_graph(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    measured = parse_vertices(args.measured, g)
    policy = _policy(args)
    v = identifiable_graph(g, measured, policy)
    inputs = {"graph": g.to_json(), "measured": list(measured), "order": str(policy)}
    doc = _envelope("check-graph", inputs, seed) | {
        "verdict": v.identifiable,
        "certificate": v.certificate.to_json() if v.certificate is not None else None,
        "details": v.to_json(),
    }
    return doc, EXIT_OK if v.identifiable else EXIT_NEGATIVE


def cmd_paths(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    src = parse_vertices(args.from_, g)
    dst = parse_vertices(args.to, g)
    count, paths = max_vertex_disjoint_paths(g, src, dst)
    inputs: dict = {"graph": g.to_json(), "from": list(src), "to": list(dst)}
    constrained = witness = None
    code = EXIT_OK
    if args.constrained:
        m = args.m if args.m is not None else len(src)
        budget = args.budget
        if budget < 1:
            raise InputError("budget must be a positive integer")
        inputs |= {"m": m, "budget": budget}
        constrained, found = constrained_path_set_exists(g, src, dst, m, budget)
        witness = found.to_json() if found is not None else None
        code = EXIT_OK if constrained else EXIT_NEGATIVE
    elif args.m is not None:
        raise UsageError("--m only applies together with --constrained")
    doc = _envelope("paths", inputs, seed) | {
        "count": count,
        "paths": paths.to_json(),
        "constrained": constrained,
        "witness": witness,
    }
    return doc, code


def cmd_oracle(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    rows = parse_vertices(args.rows, g)
    cols = parse_vertices(args.cols, g)
    if args.trials < 1:
        raise InputError("trials must be a positive integer")
    report = rank_trials(g, cols, rows, args.trials, seed)
    inputs = {"graph": g.to_json(), "rows": list(rows), "cols": list(cols), "trials": args.trials}
    doc = _envelope("oracle", inputs, seed) | {"report": report.to_json()}
    return doc, EXIT_OK if report.verdict is OracleVerdict.ALL_FULL_RANK else EXIT_NEGATIVE


def cmd_counterexample(args: argparse.Namespace, g: Graph, labels: dict[int, str], seed: int) -> tuple[dict, int]:
    measured = parse_vertices(args.measured, g)
    (node,) = g.vertex_set([args.node])
    v = identifiable_node(g, node, measured, with_counterexample=True, seed=seed, policy=_policy(args))
    if v.identifiable:
        raise InputError(f"node {node} is identifiable from {list(measured)}; no counterexample exists")
    return v.certificate.matrix.to_json(), EXIT_OK  # type: ignore[union-attr]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="netident", description="Identifiability of dynamical networks from graph topology.")
    p.add_argument("--version", action="version", version=f"netident {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser, order: bool = True) -> None:
        sp.add_argument("--graph", required=True, help="graph document (JSON)")
        sp.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
        if order:
            sp.add_argument("--order", default="det", help="operation 2 choice policy: det or seed:N")

    sp = sub.add_parser("derive", help="run the graph simplification process")
    common(sp)
    sp.add_argument("--anchors", required=True, help="anchor set U, e.g. 2,3")
    sp.add_argument("--measured", required=True, help="measured set W, e.g. 5,6")
    sp.add_argument("--dot", default=None, help="write the derived graph as DOT to this file")
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("check-node", help="are the outgoing transfer functions of a node identifiable?")
    common(sp)
    sp.add_argument("--node", type=int, required=True)
    sp.add_argument("--measured", required=True)
    sp.add_argument("--counterexample", action="store_true", help="attach a rank-deficient network matrix")
    sp.set_defaults(func=cmd_check_node)

    sp = sub.add_parser("check-graph", help="is the whole network matrix identifiable?")
    common(sp)
    sp.add_argument("--measured", required=True)
    sp.set_defaults(func=cmd_check_graph)

    sp = sub.add_parser("paths", help="vertex-disjoint paths between two vertex sets")
    common(sp, order=False)
    sp.add_argument("--from", dest="from_", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--constrained", action="store_true", help="look for a constrained path set")
    sp.add_argument("--m", type=int, default=None, help="number of paths (default |from|)")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="endpoint-pair enumeration budget")
    sp.set_defaults(func=cmd_paths)

    sp = sub.add_parser("oracle", help="sample admissible matrices and record transfer-block ranks")
    common(sp, order=False)
    sp.add_argument("--rows", required=True, help="measured set (rows of T)")
    sp.add_argument("--cols", required=True, help="anchor set (columns of T)")
    sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("counterexample", help="admissible matrix witnessing non-identifiability")
    common(sp)
    sp.add_argument("--node", type=int, required=True)
    sp.add_argument("--measured", required=True)
    sp.set_defaults(func=cmd_counterexample)
    return p


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fail(stderr: TextIO, kind: str, message: str, code: int, diagnostics: dict | None = None) -> int:
    err: dict = {"error": kind, "message": message}
    if diagnostics:
        err["diagnostics"] = diagnostics
    stderr.write(json.dumps(err, sort_keys=True, default=str) + "\n")
    return code


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(stderr, "usage", str(exc), EXIT_USAGE)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        g, labels = load_graph(args.graph)
        doc, code = args.func(args, g, labels, seed)
    except UsageError as exc:
        return _fail(stderr, "usage", str(exc), EXIT_USAGE)
    except InputError as exc:
        return _fail(stderr, "input", str(exc), EXIT_INPUT)
    except BudgetExceededError as exc:
        return _fail(stderr, "budget_exceeded", str(exc), EXIT_BUDGET)
    except ConstructionFailedError as exc:
        return _fail(stderr, "construction_failed", str(exc), EXIT_FAILURE, exc.diagnostics)
    except InternalConsistencyError as exc:
        return _fail(stderr, "internal", str(exc), EXIT_FAILURE)
    except NetidentError as exc:
        return _fail(stderr, type(exc).__name__, str(exc), EXIT_FAILURE)
    except OSError as exc:
        return _fail(stderr, "io", str(exc), EXIT_INPUT)
    stdout.write(dumps(doc))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
