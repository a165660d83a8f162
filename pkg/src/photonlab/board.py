"""Breadboard model: named elements on a grid plus a classical wire layer.

Wires carry integer signals from value producers (switches, random
switches, detector latches, logic gates) to consumers.  A consumer that
is a logic gate treats incoming wires as its inputs; any other element
with an incoming wire is *controlled*: a nonzero OR of its wire values
switches it from ``params`` to ``params`` overlaid with ``altParams``.
The wire layer must be acyclic through logic gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import elements as el
from .photons import DEFAULT_HEIGHT, DEFAULT_WIDTH, MAX_PHOTONS


class SetupError(ValueError):
    """Invalid board description; ``errors`` lists every problem found."""

    def __init__(self, errors: Iterable[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


# wires may not terminate on these: no controllable or input behavior
_UNWIRABLE_TARGETS = frozenset(
    {el.SWITCH, el.RANDOM_SWITCH, el.COMMENT, el.CORRELATOR, el.GOAL}
)

_LATCHING_KINDS = frozenset({el.DETECTOR, el.BOMB, el.NONDEMOLITION_DETECTOR})


@dataclass
class Element:
    name: str
    kind: str
    x: int
    y: int
    rotation: int = 0
    params: dict = field(default_factory=dict)
    alt_params: dict | None = None

    def effective_params(self, control: bool) -> dict:
        """altParams overlay the base params while the control bit is set."""
        if control and self.alt_params:
            return {**self.params, **self.alt_params}
        return dict(self.params)

    @property
    def position(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Wire:
    source: str
    target: str


@dataclass
class Board:
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT
    elements: list[Element] = field(default_factory=list)
    wires: list[Wire] = field(default_factory=list)
    symmetrize: bool = False
    title: str = ""
    notes: str = ""

    # -- lookup ------------------------------------------------------------------

    def element(self, name: str) -> Element:
        for e in self.elements:
            if e.name == name:
                return e
        raise KeyError(f"no element named {name!r}")

    def element_map(self) -> dict[str, Element]:
        return {e.name: e for e in self.elements}

    def cell_map(self) -> dict[tuple[int, int], Element]:
        return {e.position: e for e in self.elements}

    def incoming(self, name: str) -> list[Wire]:
        return [w for w in self.wires if w.target == name]

    def sources(self) -> list[Element]:
        return [e for e in self.elements if e.kind in el.SOURCE_KINDS]

    def photon_budget(self) -> int:
        counts = {el.SINGLE_PHOTON_SOURCE: 1, el.BELL_PAIR_SOURCE: 2, el.GHZ_SOURCE: 3, el.W_SOURCE: 3}
        return sum(counts[e.kind] for e in self.sources())

    def random_switches(self) -> list[Element]:
        return [e for e in self.elements if e.kind == el.RANDOM_SWITCH]

    def detectors(self) -> list[Element]:
        return [e for e in self.elements if e.kind in _LATCHING_KINDS]

    # -- validation ----------------------------------------------------------------

    def validate(self) -> list[str]:
        errors: list[str] = []
        if self.width < 1 or self.height < 1:
            errors.append(f"board size {self.width}×{self.height} is empty")

        seen_names: set[str] = set()
        seen_cells: dict[tuple[int, int], str] = {}
        for e in self.elements:
            where = f"({e.x},{e.y}) {e.name}"
            if e.name in seen_names:
                errors.append(f"{where}: duplicate element name")
            seen_names.add(e.name)
            if not (0 <= e.x < self.width and 0 <= e.y < self.height):
                errors.append(f"{where}: position outside the {self.width}×{self.height} grid")
            if e.position in seen_cells:
                errors.append(f"{where}: cell already holds {seen_cells[e.position]!r}")
            else:
                seen_cells[e.position] = e.name
            for msg in el.validate_element(e.kind, e.rotation, e.params):
                errors.append(f"{where}: {msg}")
            if e.alt_params is not None:
                merged = {**e.params, **e.alt_params}
                for msg in el.validate_element(e.kind, e.rotation, merged):
                    errors.append(f"{where}: altParams: {msg}")

        by_name = {e.name: e for e in self.elements}
        for w in self.wires:
            label = f"wire {w.source!r}→{w.target!r}"
            src = by_name.get(w.source)
            dst = by_name.get(w.target)
            if src is None:
                errors.append(f"{label}: unknown source element")
            elif src.kind not in el.SIGNAL_SOURCE_KINDS:
                errors.append(f"{label}: {src.kind} produces no signal")
            if dst is None:
                errors.append(f"{label}: unknown target element")
            elif dst.kind in _UNWIRABLE_TARGETS:
                errors.append(f"{label}: {dst.kind} cannot be wired")
            if w.source == w.target:
                errors.append(f"{label}: element wired to itself")

        errors.extend(self._logic_cycle_errors(by_name))

        budget = 0
        for e in self.sources():
            budget += {el.SINGLE_PHOTON_SOURCE: 1, el.BELL_PAIR_SOURCE: 2,
                       el.GHZ_SOURCE: 3, el.W_SOURCE: 3}[e.kind]
        if budget > MAX_PHOTONS:
            errors.append(f"sources emit {budget} photons; the engine tracks at most {MAX_PHOTONS}")

        if self.symmetrize:
            singles = [e for e in self.sources() if e.kind == el.SINGLE_PHOTON_SOURCE]
            if len(singles) != 2 or len(self.sources()) != 2:
                errors.append("symmetrize requires exactly two single-photon sources")

        for e in self.elements:
            where = f"({e.x},{e.y}) {e.name}"
            if e.kind == el.CORRELATOR and not any(
                msg for msg in el.validate_element(e.kind, e.rotation, e.params)
            ):
                for role in ("settingA", "settingB"):
                    ref = by_name.get(e.params[role])
                    if ref is None:
                        errors.append(f"{where}: {role} names a missing element")
                    elif ref.kind not in (el.SWITCH, el.RANDOM_SWITCH):
                        errors.append(f"{where}: {role} must name a switch")
                for role in ("outcomeA", "outcomeB"):
                    ref = by_name.get(e.params[role])
                    if ref is None:
                        errors.append(f"{where}: {role} names a missing element")
                    elif ref.kind not in _LATCHING_KINDS:
                        errors.append(f"{where}: {role} must name a detector")
            if e.kind == el.GOAL and isinstance(e.params.get("detector"), str):
                ref = by_name.get(e.params["detector"])
                if ref is None:
                    errors.append(f"{where}: goal names a missing detector")
                elif ref.kind not in _LATCHING_KINDS:
                    errors.append(f"{where}: goal must name a detector")

        return errors

    def _logic_cycle_errors(self, by_name: Mapping[str, Element]) -> list[str]:
        gates = {n for n, e in by_name.items() if e.kind in el.LOGIC_KINDS}
        edges: dict[str, list[str]] = {g: [] for g in gates}
        for w in self.wires:
            if w.source in gates and w.target in gates:
                edges[w.source].append(w.target)
        state: dict[str, int] = {}

        def dfs(node: str, trail: list[str]) -> list[str] | None:
            state[node] = 1
            trail.append(node)
            for nxt in edges[node]:
                if state.get(nxt) == 1:
                    return trail[trail.index(nxt):] + [nxt]
                if state.get(nxt, 0) == 0:
                    cyc = dfs(nxt, trail)
                    if cyc:
                        return cyc
            trail.pop()
            state[node] = 2
            return None

        for g in sorted(gates):
            if state.get(g, 0) == 0:
                cyc = dfs(g, [])
                if cyc:
                    return [f"wire cycle through logic gates: {' → '.join(cyc)}"]
        return []

    def check(self) -> "Board":
        errors = self.validate()
        if errors:
            raise SetupError(errors)
        return self

    # -- classical layer -------------------------------------------------------------

    def wire_values(self, source_values: Mapping[str, int] | None = None) -> dict[str, int]:
        """Value of every signal producer; detectors/random switches come from
        ``source_values`` (default 0), switches from their params, logic
        gates by topological evaluation of their incoming wires."""
        source_values = source_values or {}
        values: dict[str, int] = {}
        for e in self.elements:
            if e.kind == el.SWITCH:
                values[e.name] = int(e.params.get("value", 0))
            elif e.kind == el.RANDOM_SWITCH or e.kind in _LATCHING_KINDS:
                values[e.name] = int(source_values.get(e.name, 0))
        pending = [e for e in self.elements if e.kind in el.LOGIC_KINDS]
        while pending:
            rest: list[Element] = []
            for e in pending:
                ins = [w.source for w in self.incoming(e.name)]
                if all(s in values for s in ins):
                    values[e.name] = el.apply_logic(e.kind, [values[s] for s in ins])
                else:
                    rest.append(e)
            if len(rest) == len(pending):
                raise SetupError(["wire cycle among logic gates"])
            pending = rest
        return values

    def control_bits(self, values: Mapping[str, int]) -> dict[str, int]:
        """OR of incoming wire values for every wired non-gate element."""
        bits: dict[str, int] = {}
        by_name = self.element_map()
        for w in self.wires:
            tgt = by_name.get(w.target)
            if tgt is None or tgt.kind in el.LOGIC_KINDS:
                continue
            bit = 1 if values.get(w.source, 0) else 0
            bits[w.target] = max(bits.get(w.target, 0), bit)
        return bits

    def output_values(self, values: Mapping[str, int]) -> dict[str, int]:
        """OutputVariable readings: sum of incoming wire values."""
        outs: dict[str, int] = {}
        for e in self.elements:
            if e.kind == el.OUTPUT_VARIABLE:
                outs[e.name] = sum(
                    int(values.get(w.source, 0)) for w in self.incoming(e.name)
                )
        return outs
