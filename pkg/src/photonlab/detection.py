"""Detection logs: repeated sampled runs and their CSV form."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Mapping

from .board import Board
from .engine import BoardRuntime, SimConfig


def sample_log(
    board: Board, seed, runs: int, config: SimConfig | None = None
) -> list[dict]:
    """Sample ``runs`` independent paths; run i uses the named stream
    (seed, i) so logs are reproducible record by record."""
    if runs < 0:
        raise ValueError("runs must be nonnegative")
    runtime = BoardRuntime(board, config)
    return [runtime.sample_run(seed, i) for i in range(runs)]


def log_columns(board: Board) -> list[str]:
    switches = sorted(e.name for e in board.random_switches())
    detectors = sorted(e.name for e in board.detectors())
    outputs = sorted(e.name for e in board.elements if e.kind == "OutputVariable")
    return (
        ["run", "seed"]
        + [f"in_{n}" for n in switches]
        + [f"det_{n}" for n in detectors]
        + [f"step_{n}" for n in detectors]
        + [f"out_{n}" for n in outputs]
    )


def write_log_csv(board: Board, records: Iterable[Mapping], fh) -> None:
    switches = sorted(e.name for e in board.random_switches())
    detectors = sorted(e.name for e in board.detectors())
    outputs = sorted(e.name for e in board.elements if e.kind == "OutputVariable")
    writer = csv.writer(fh)  # RFC 4180 line endings by default
    writer.writerow(log_columns(board))
    for rec in records:
        row = [rec["run"], rec["seed"]]
        row += [rec["inputs"][n] for n in switches]
        row += [rec["latches"].get(n, 0) for n in detectors]
        row += [rec["steps"].get(n, "") for n in detectors]
        row += [rec["outputs"].get(n, 0) for n in outputs]
        writer.writerow(row)


def log_csv(board: Board, records: Iterable[Mapping]) -> str:
    buf = io.StringIO()
    write_log_csv(board, records, buf)
    return buf.getvalue()
