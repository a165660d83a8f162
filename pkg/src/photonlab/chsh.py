"""Correlation bookkeeping for two-party inequality tests.

A board declares the experiment through its Correlator element: which
random switch is each side's setting and which detector marks the −1
outcome.  The combination S = E(0,0) + E(0,1) + E(1,0) − E(1,1) is
bounded by 2 for any local strategy and reaches 2√2 on entangled pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import elements as el
from .board import Board
from .engine import SimTree

SETTINGS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class CorrelatorWiring:
    name: str
    setting_a: str
    setting_b: str
    outcome_a: str
    outcome_b: str


@dataclass(frozen=True)
class ChshResult:
    correlations: dict
    s: float
    weights: dict
    standard_errors: dict | None = None
    s_standard_error: float | None = None

    def to_document(self) -> dict:
        doc = {
            "E": {f"{x}{y}": self.correlations[x, y] for x, y in SETTINGS},
            "S": self.s,
            "weights": {f"{x}{y}": self.weights[x, y] for x, y in SETTINGS},
        }
        if self.standard_errors is not None:
            doc["standardErrors"] = {
                f"{x}{y}": self.standard_errors[x, y] for x, y in SETTINGS
            }
            doc["sStandardError"] = self.s_standard_error
        return doc


def correlator_wiring(board: Board) -> CorrelatorWiring:
    tallies = [e for e in board.elements if e.kind == el.CORRELATOR]
    if len(tallies) != 1:
        raise ValueError(f"board needs exactly one Correlator, found {len(tallies)}")
    t = tallies[0]
    try:
        return CorrelatorWiring(
            t.name,
            t.params["settingA"], t.params["settingB"],
            t.params["outcomeA"], t.params["outcomeB"],
        )
    except KeyError as exc:
        raise ValueError(f"correlator {t.name!r} is missing {exc.args[0]!r}") from None


def _combine(sums: Mapping, weights: Mapping) -> tuple[dict, float]:
    correlations = {}
    for xy in SETTINGS:
        if weights[xy] <= 0:
            raise ValueError(f"no weight on setting combination {xy}")
        correlations[xy] = sums[xy] / weights[xy]
    s = (
        correlations[0, 0] + correlations[0, 1]
        + correlations[1, 0] - correlations[1, 1]
    )
    return correlations, s


def chsh_from_tree(tree: SimTree, wiring: CorrelatorWiring | None = None) -> ChshResult:
    """Exact correlations from a fully explored branch tree."""
    w = wiring or correlator_wiring(tree.board)
    sums = {xy: 0.0 for xy in SETTINGS}
    weights = {xy: 0.0 for xy in SETTINGS}
    for n in tree.nodes:
        if not n.terminal:
            continue
        xy = (n.classical.get(w.setting_a, 0), n.classical.get(w.setting_b, 0))
        oa = -1 if n.classical.get(w.outcome_a) else 1
        ob = -1 if n.classical.get(w.outcome_b) else 1
        sums[xy] += n.probability * oa * ob
        weights[xy] += n.probability
    correlations, s = _combine(sums, weights)
    return ChshResult(correlations, s, weights)


def chsh_from_log(board: Board, records: Iterable[Mapping]) -> ChshResult:
    """Sampled correlations with per-cell and combined standard errors."""
    w = correlator_wiring(board)
    sums = {xy: 0.0 for xy in SETTINGS}
    counts = {xy: 0 for xy in SETTINGS}
    for rec in records:
        xy = (rec["inputs"][w.setting_a], rec["inputs"][w.setting_b])
        oa = -1 if rec["latches"].get(w.outcome_a) else 1
        ob = -1 if rec["latches"].get(w.outcome_b) else 1
        sums[xy] += oa * ob
        counts[xy] += 1
    correlations, s = _combine(sums, counts)
    errors = {
        xy: math.sqrt(max(0.0, 1.0 - correlations[xy] ** 2) / counts[xy])
        for xy in SETTINGS
    }
    s_error = math.sqrt(sum(e * e for e in errors.values()))
    return ChshResult(
        correlations, s, {xy: float(c) for xy, c in counts.items()}, errors, s_error
    )
