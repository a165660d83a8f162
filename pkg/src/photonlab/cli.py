"""Command line front end.

Exit codes: 0 on success, 2 when the setup cannot be used, 3 when the
simulation hit a hard exploration budget (``maxSteps``/``maxNodes``) and
the reported numbers therefore cover only part of the probability.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .board import Board, SetupError
from .chsh import chsh_from_log, chsh_from_tree
from .detection import log_csv, sample_log
from .engine import SimConfig, SimTree, run_tree, tree_document
from .fixtures import fixture_board, fixture_names, load_fixture
from .setupdoc import dumps, load, loads, save
from . import views

EXIT_OK = 0
EXIT_SETUP = 2
EXIT_BUDGET = 3

_HARD_BUDGET_REASONS = {"maxSteps", "maxNodes"}


def _add_board_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("setup", nargs="?", help="setup document path, or - for stdin")
    p.add_argument("--fixture", metavar="NAME",
                   help="use a packaged experiment instead of a file")


def _add_config_arguments(p: argparse.ArgumentParser) -> None:
    defaults = SimConfig()
    p.add_argument("--steps", type=int, default=defaults.max_steps,
                   help="maximum simulation steps (default %(default)s)")
    p.add_argument("--min-branch", type=float, default=defaults.min_branch_probability,
                   help="prune branches below this probability (default %(default)s)")
    p.add_argument("--max-nodes", type=int, default=defaults.max_nodes,
                   help="stop exploring past this many tree nodes (default %(default)s)")


def _board_from(args) -> Board:
    if bool(args.setup) == bool(args.fixture):
        raise SetupError(["give a setup path or --fixture NAME, not both or neither"])
    if args.fixture:
        try:
            return load_fixture(args.fixture)
        except KeyError:
            raise SetupError(
                [f"unknown fixture {args.fixture!r}; try `photonlab fixtures`"]
            ) from None
    if args.setup == "-":
        return loads(sys.stdin.read())
    try:
        return load(args.setup)
    except OSError as exc:
        raise SetupError([f"cannot read {args.setup}: {exc}"]) from None


def _config_from(args) -> SimConfig:
    return SimConfig(
        max_steps=args.steps,
        min_branch_probability=args.min_branch,
        max_nodes=args.max_nodes,
    )


def _budget_exit(tree: SimTree) -> int:
    reasons = {t["reason"] for t in tree.truncations}
    return EXIT_BUDGET if reasons & _HARD_BUDGET_REASONS else EXIT_OK


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_run(args) -> int:
    board = _board_from(args)
    tree = run_tree(board, _config_from(args))
    doc = views.detections_document(tree)
    if args.json:
        _print_json(doc)
        return _budget_exit(tree)
    if board.title:
        print(board.title)
    print(
        f"board {board.width}x{board.height}, {len(board.elements)} elements, "
        f"{doc['nodeCount']} nodes ({doc['leafCount']} leaves)"
    )
    print(
        f"explored probability {doc['exploredProbability']:.12f}, "
        f"truncated {doc['truncatedProbability']:.12f}"
    )
    if doc["detectors"]:
        print("detections:")
        width = max(len(n) for n in doc["detectors"])
        for name in sorted(doc["detectors"]):
            print(f"  {name:<{width}}  {doc['detectors'][name]:.9f}")
    else:
        print("no detectors on this board")
    return _budget_exit(tree)


def _cmd_tree(args) -> int:
    board = _board_from(args)
    tree = run_tree(board, _config_from(args))
    text = json.dumps(
        tree_document(tree, include_states=not args.no_states),
        indent=2, sort_keys=True,
    ) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return _budget_exit(tree)


def _cmd_sample(args) -> int:
    board = _board_from(args)
    records = sample_log(board, args.seed, args.runs, _config_from(args))
    if args.format == "csv":
        text = log_csv(board, records)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="")
        else:
            sys.stdout.write(text)
    else:
        doc = {"seed": str(args.seed), "runs": args.runs, "records": records}
        if args.out:
            Path(args.out).write_text(
                json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        else:
            _print_json(doc)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    board = _board_from(args)
    tree = run_tree(board, _config_from(args))
    node_id = args.node if args.node is not None else views.default_analysis_node(tree)
    doc = {
        "node": node_id,
        "detections": views.detections_document(tree),
        "state": views.node_state_document(tree, node_id, args.basis, args.amplitude_format),
    }
    if args.entanglement:
        doc["entanglement"] = views.entanglement_document(tree, node_id)
    if args.blink:
        doc["blink"] = views.blink_document(
            tree, node_id, args.seed, args.blink, basis=args.basis
        )
    if args.chsh:
        doc["chsh"] = chsh_from_tree(tree).to_document()
    _print_json(doc)
    return _budget_exit(tree)


def _cmd_fixtures(args) -> int:
    if args.show:
        try:
            print(dumps(load_fixture(args.show)), end="")
        except KeyError:
            print(f"unknown fixture {args.show!r}", file=sys.stderr)
            return EXIT_SETUP
        return EXIT_OK
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for name in fixture_names():
            save(fixture_board(name), out / f"{name}.json")
        print(f"wrote {len(fixture_names())} setups to {out}")
        return EXIT_OK
    for name in fixture_names():
        print(f"{name:36s} {fixture_board(name).title}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import serve

    serve(host=args.host, port=args.port, ui_dir=args.ui)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonlab",
        description="Few-photon optics on a grid: exact branch trees, "
                    "sampled runs, and entanglement analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate and print detection probabilities")
    _add_board_arguments(p)
    _add_config_arguments(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("tree", help="emit the full branch tree as JSON")
    _add_board_arguments(p)
    _add_config_arguments(p)
    p.add_argument("--no-states", action="store_true",
                   help="omit per-node state vectors")
    p.add_argument("-o", "--out", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("sample", help="repeat stochastic runs and log the outcomes")
    _add_board_arguments(p)
    _add_config_arguments(p)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", default="0")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--out", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("analyze", help="inspect a node's state and correlations")
    _add_board_arguments(p)
    _add_config_arguments(p)
    p.add_argument("--node", type=int, default=None,
                   help="tree node to inspect (default: most photons)")
    p.add_argument("--basis", choices=("HV", "DA", "LR"), default="HV")
    p.add_argument("--amplitude-format", choices=("cartesian", "polar", "polar-tau", "color"),
                   default="cartesian")
    p.add_argument("--entanglement", action="store_true",
                   help="add per-particle purity and the link diagram")
    p.add_argument("--blink", type=int, metavar="SHOTS", default=0,
                   help="add sampled single-run glimpses of each particle")
    p.add_argument("--chsh", action="store_true",
                   help="add the correlator's E table and S value")
    p.add_argument("--seed", default="0", help="seed for --blink")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("fixtures", help="list, show, or export packaged experiments")
    p.add_argument("--show", metavar="NAME", help="print one setup document")
    p.add_argument("--export", metavar="DIR", help="write every setup into DIR")
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("serve", help="serve the HTTP interface")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--ui", metavar="DIR", default=None,
                   help="also serve a static front end from DIR")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SetupError as exc:
        for line in exc.errors:
            print(f"setup error: {line}", file=sys.stderr)
        return EXIT_SETUP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SETUP
    except KeyboardInterrupt:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
