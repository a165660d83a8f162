"""Branching simulation of a board: every measurement outcome is explored.

A run is a tree.  Each node holds a pure, normalized few-photon state,
the absolute probability of reaching it, the classical latch values
known so far, and the events on the edge from its parent.  One step of
evolution, in order:

1. photons whose next move leaves the grid are measured out in the
   position basis (one branch per basis component), survivors advance
   one cell along their travel direction;
2. measuring elements act, photon by photon, splitting each branch into
   recorded outcomes plus the unmeasured remainder;
3. unitary elements act on whatever amplitude sits at their cell.

Element parameters are resolved from the classical values at the start
of the step, so a detection at step t can only steer elements from step
t+1 on.  Random switches branch the tree once, at the root, before any
photon exists.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from . import elements as el
from .board import Board, Element
from .photons import DIRECTION_LABELS, DIRECTION_STEPS, POLARIZATION_LABELS, photon_dims
from .setupdoc import to_document
from .tensor import SparseVector, partial_inner, tensor_product

_LATCH_EVENTS = frozenset({"detection", "click", "explosion"})


@dataclass
class SimConfig:
    max_steps: int = 200
    min_branch_probability: float = 1e-9
    max_nodes: int = 100_000


@dataclass(frozen=True)
class PhotonMeta:
    particle: int
    source: str
    wavelength: float | None = None


@dataclass
class SimNode:
    id: int
    parent: int | None
    step: int
    probability: float
    state: SparseVector | None  # None only on a synthetic random-input root
    photons: tuple[PhotonMeta, ...]
    classical: dict[str, int]
    events: list[dict]
    terminal: bool
    children: list[int] = field(default_factory=list)
    truncated: float = 0.0  # probability mass pruned directly below this node


@dataclass
class SimTree:
    board: Board
    config: SimConfig
    nodes: list[SimNode]
    root: int
    truncations: list[dict]
    max_state_entries: int

    def node(self, node_id: int) -> SimNode:
        return self.nodes[node_id]

    def leaves(self) -> list[SimNode]:
        return [n for n in self.nodes if not n.children]

    def explored_probability(self) -> float:
        return sum(n.probability for n in self.nodes if n.terminal)

    def truncated_probability(self) -> float:
        return sum(t["probability"] for t in self.truncations)

    def conservation_defect(self) -> float:
        """Worst probability-bookkeeping error anywhere in the tree."""
        worst = abs(self.explored_probability() + self.truncated_probability() - 1.0)
        for n in self.nodes:
            if n.children:
                total = sum(self.nodes[c].probability for c in n.children) + n.truncated
                worst = max(worst, abs(total - n.probability))
        return worst

    def detector_probabilities(self) -> dict[str, float]:
        """P(latch fired) per detecting element, summed over terminal leaves."""
        probs: dict[str, float] = {d.name: 0.0 for d in self.board.detectors()}
        for n in self.nodes:
            if n.terminal:
                for name in probs:
                    if n.classical.get(name):
                        probs[name] += n.probability
        return probs


@dataclass
class _Branch:
    vec: SparseVector
    photons: tuple[PhotonMeta, ...]
    events: list[dict]
    exploded: bool = False


def _scalar_state() -> SparseVector:
    return SparseVector((), {0: 1.0})


class _StateLayout:
    """Per-photon stride/size bookkeeping for fast packed-key surgery."""

    __slots__ = ("particles", "sx", "sy", "sd", "sp", "w", "h")

    def __init__(self, vec: SparseVector):
        self.particles: tuple[int, ...] = tuple(
            sorted({d.particle for d in vec.dims if d.particle is not None})
        )
        self.sx, self.sy, self.sd, self.sp = {}, {}, {}, {}
        self.w = self.h = 0
        for p in self.particles:
            ix = vec.dim_index(f"x@{p}")
            self.sx[p] = vec.strides[ix]
            self.w = vec.dims[ix].size
            iy = vec.dim_index(f"y@{p}")
            self.sy[p] = vec.strides[iy]
            self.h = vec.dims[iy].size
            self.sd[p] = vec.strides[vec.dim_index(f"dir@{p}")]
            self.sp[p] = vec.strides[vec.dim_index(f"pol@{p}")]

    def coords(self, key: int, p: int) -> tuple[int, int, int, int]:
        return (
            (key // self.sx[p]) % self.w,
            (key // self.sy[p]) % self.h,
            (key // self.sd[p]) % 4,
            (key // self.sp[p]) % 2,
        )


def _photon_basis_bra(vec: SparseVector, p: int, coords: tuple[int, int, int, int]) -> SparseVector:
    dims = tuple(vec.dims[vec.dim_index(f"{n}@{p}")] for n in ("x", "y", "dir", "pol"))
    return SparseVector.from_components(dims, {coords: 1.0})


def _apply_local_at_cell(
    vec: SparseVector,
    p: int,
    cell: tuple[int, int],
    local_op,
    sector_only: bool = False,
) -> SparseVector:
    """Act with a (dir,pol) operator on photon p's amplitude at one cell.

    sector_only keeps just the transformed cell sector (projections);
    otherwise amplitude elsewhere passes through unchanged.
    """
    lay = _StateLayout(vec)
    cols: dict[tuple[int, int], list[tuple[int, int, complex]]] = {}
    for ok, ik, z in local_op.entry_items():
        d_in, p_in = ik // 2, ik % 2
        d_out, p_out = ok // 2, ok % 2
        cols.setdefault((d_in, p_in), []).append((d_out, p_out, z))
    out: dict[int, complex] = {}
    sd, sp = lay.sd[p], lay.sp[p]
    for key, amp in vec.entries.items():
        x, y, d, pol = lay.coords(key, p)
        if (x, y) != cell:
            if not sector_only:
                out[key] = out.get(key, 0.0) + amp
            continue
        for d2, p2, z in cols.get((d, pol), ()):
            nk = key + (d2 - d) * sd + (p2 - pol) * sp
            out[nk] = out.get(nk, 0.0) + z * amp
    return SparseVector(vec.dims, out)


def _apply_pair_at_cell(
    vec: SparseVector, p: int, q: int, cell: tuple[int, int], pair_op
) -> SparseVector:
    """Two-photon (dir,pol)⊗(dir,pol) gate on the both-photons-here sector."""
    lay = _StateLayout(vec)
    cols: dict[tuple[int, ...], list[tuple[tuple[int, ...], complex]]] = {}
    for ok, ik, z in pair_op.entry_items():
        ic = (ik // 16, (ik // 8) % 2, (ik // 2) % 4, ik % 2)  # d1,p1,d2,p2
        oc = (ok // 16, (ok // 8) % 2, (ok // 2) % 4, ok % 2)
        cols.setdefault(ic, []).append((oc, z))
    out: dict[int, complex] = {}
    for key, amp in vec.entries.items():
        xp, yp, dp, pp = lay.coords(key, p)
        xq, yq, dq, pq = lay.coords(key, q)
        if (xp, yp) != cell or (xq, yq) != cell:
            out[key] = out.get(key, 0.0) + amp
            continue
        for (d1, p1, d2, p2), z in cols.get((dp, pp, dq, pq), ()):
            nk = (
                key
                + (d1 - dp) * lay.sd[p]
                + (p1 - pp) * lay.sp[p]
                + (d2 - dq) * lay.sd[q]
                + (p2 - pq) * lay.sp[q]
            )
            out[nk] = out.get(nk, 0.0) + z * amp
    return SparseVector(vec.dims, out)


class BoardRuntime:
    """Resolved board ready to evolve states step by step."""

    def __init__(self, board: Board, config: SimConfig | None = None):
        board.check()
        self.board = board
        self.config = config or SimConfig()
        self._elements = sorted(board.elements, key=lambda e: (e.y, e.x, e.name))
        self._action_cache: dict[tuple[str, bool], object] = {}
        self._latching = {e.name for e in board.detectors()}
        self._walk_cache: dict[tuple, tuple] = {}
        self.max_state_entries = 0

    # -- element resolution ---------------------------------------------------------

    def _action(self, elem: Element, control: bool):
        key = (elem.name, control)
        if key not in self._action_cache:
            params = elem.effective_params(control)
            self._action_cache[key] = el.action_for(elem.kind, elem.rotation, params)
        return self._action_cache[key]

    def _controls(self, classical: Mapping[str, int]) -> dict[str, int]:
        values = self.board.wire_values(classical)
        return self.board.control_bits(values)

    # -- initial configuration --------------------------------------------------------

    def initial_configuration(
        self, classical: Mapping[str, int]
    ) -> tuple[SparseVector, tuple[PhotonMeta, ...]]:
        controls = self._controls(classical)
        sources = sorted(self.board.sources(), key=lambda e: (e.y, e.x, e.name))
        if not sources:
            return _scalar_state(), ()

        if self.board.symmetrize:
            return self._symmetrized_pair(sources, controls)

        state: SparseVector | None = None
        metas: list[PhotonMeta] = []
        particle = 0
        for src in sources:
            action = self._action(src, bool(controls.get(src.name)))
            dims: list = []
            for j in range(len(action.directions)):
                dims.extend(photon_dims(self.board.width, self.board.height, particle + j))
            comps: dict[tuple[int, ...], complex] = {}
            for pols, amp in action.joint_polarization.items():
                coords: list[int] = []
                for direction, pol in zip(action.directions, pols):
                    coords.extend((src.x, src.y, direction, pol))
                comps[tuple(coords)] = amp
            factor = SparseVector.from_components(dims, comps)
            state = factor if state is None else tensor_product(state, factor)
            for direction in action.directions:
                metas.append(PhotonMeta(particle, src.name, action.wavelength))
                particle += 1
        assert state is not None
        return state, tuple(metas)

    def _symmetrized_pair(self, sources, controls):
        from .photons import single_photon, symmetrize

        singles = []
        for src in sources:
            action = self._action(src, bool(controls.get(src.name)))
            amps = {pols[0]: amp for pols, amp in action.joint_polarization.items()}
            singles.append(
                single_photon(
                    self.board.width,
                    self.board.height,
                    src.x,
                    src.y,
                    action.directions[0],
                    (amps.get(0, 0.0), amps.get(1, 0.0)),
                )
            )
        state = symmetrize(singles[0], singles[1])
        metas = tuple(
            PhotonMeta(i, sources[i].name, None) for i in range(2)
        )
        return state, metas

    # -- one full step ------------------------------------------------------------------

    def expand(
        self,
        state: SparseVector,
        photons: tuple[PhotonMeta, ...],
        classical: Mapping[str, int],
    ) -> list[_Branch]:
        """All outcome branches one step ahead; squared norms are the
        conditional probabilities and sum to one."""
        controls = self._controls(classical)
        base = _Branch(state, photons, [])
        branches = self._lose_and_shift(base)

        for elem in self._elements:
            action = self._action(elem, bool(controls.get(elem.name)))
            if isinstance(action, el.MeasurementAction):
                branches = self._measure_element(branches, elem, action)

        out: list[_Branch] = []
        for br in branches:
            if br.exploded or not br.photons:
                out.append(br)
                continue
            vec = br.vec
            for elem in self._elements:
                action = self._action(elem, bool(controls.get(elem.name)))
                cell = (elem.x, elem.y)
                if isinstance(action, el.PairGateAction):
                    present = [m.particle for m in br.photons]
                    for p, q in itertools.combinations(present, 2):
                        vec = _apply_pair_at_cell(vec, p, q, cell, action.op)
                elif isinstance(action, el.UnitaryAction):
                    for meta in br.photons:
                        vec = _apply_local_at_cell(vec, meta.particle, cell, action.op)
            out.append(replace(br, vec=vec))
        return out

    # losses and propagation

    def _lose_and_shift(self, base: _Branch) -> list[_Branch]:
        out: list[_Branch] = []

        def recurse(vec: SparseVector, photons: tuple[PhotonMeta, ...], events, idx: int):
            if vec.is_zero():
                return
            if idx >= len(photons):
                out.append(_Branch(self._shift(vec, photons), photons, events))
                return
            p = photons[idx].particle
            lay = _StateLayout(vec)
            leaving: dict[tuple[int, int, int, int], None] = {}
            for key in vec.entries:
                x, y, d, pol = lay.coords(key, p)
                dx, dy = DIRECTION_STEPS[d]
                if not (0 <= x + dx < self.board.width and 0 <= y + dy < self.board.height):
                    leaving[(x, y, d, pol)] = None
            if not leaving:
                recurse(vec, photons, events, idx + 1)
                return
            stay = dict(vec.entries)
            for key in list(stay):
                if lay.coords(key, p) in leaving:
                    del stay[key]
            recurse(SparseVector(vec.dims, stay), photons, events, idx + 1)
            remaining = photons[:idx] + photons[idx + 1:]
            for coords in sorted(leaving):
                bra = _photon_basis_bra(vec, p, coords)
                sub = partial_inner(bra, vec)
                if sub.is_zero():
                    continue
                x, y, d, pol = coords
                ev = {
                    "type": "loss",
                    "particle": p,
                    "x": x,
                    "y": y,
                    "direction": DIRECTION_LABELS[d],
                    "polarization": POLARIZATION_LABELS[pol],
                }
                recurse(sub, remaining, events + [ev], idx)

        recurse(base.vec, base.photons, base.events, 0)
        return out

    def _shift(self, vec: SparseVector, photons: tuple[PhotonMeta, ...]) -> SparseVector:
        if not photons or vec.is_zero():
            return vec
        lay = _StateLayout(vec)
        out: dict[int, complex] = {}
        for key, amp in vec.entries.items():
            nk = key
            for meta in photons:
                p = meta.particle
                d = (key // lay.sd[p]) % 4
                dx, dy = DIRECTION_STEPS[d]
                nk += dx * lay.sx[p] + dy * lay.sy[p]
            out[nk] = amp
        return SparseVector(vec.dims, out, prune=False)

    # measurements

    def _measure_element(
        self, branches: list[_Branch], elem: Element, action: el.MeasurementAction
    ) -> list[_Branch]:
        cell = (elem.x, elem.y)
        out: list[_Branch] = []
        for br in branches:
            if br.exploded:
                out.append(br)
                continue
            current = [br]
            for meta in br.photons:
                nxt: list[_Branch] = []
                for b in current:
                    if any(m.particle == meta.particle for m in b.photons):
                        nxt.extend(self._measure_photon(b, elem, action, meta.particle, cell))
                    else:
                        nxt.append(b)
                current = nxt
            out.extend(current)
        return out

    def _measure_photon(
        self, br: _Branch, elem: Element, action: el.MeasurementAction, p: int, cell
    ) -> list[_Branch]:
        hit = _apply_local_at_cell(br.vec, p, cell, action.projector, sector_only=True)
        if hit.is_zero():
            return [br]
        w = action.weight
        outcomes: list[_Branch] = []
        event_type = (
            "explosion"
            if action.explosive
            else ("detection" if elem.name in self._latching else "absorption")
        )
        if action.destructive:
            root_w = math.sqrt(w)
            for local_bra in action.bras:
                full = self._embed_bra(br.vec, p, cell, local_bra)
                sub = partial_inner(full, br.vec)
                if sub.is_zero():
                    continue
                ev = {"type": event_type, "element": elem.name, "particle": p,
                      "x": cell[0], "y": cell[1]}
                ev.update(self._bra_labels(local_bra))
                remaining = tuple(m for m in br.photons if m.particle != p)
                outcomes.append(
                    _Branch(
                        sub.scaled(root_w),
                        remaining,
                        br.events + [ev],
                        exploded=br.exploded or action.explosive,
                    )
                )
        else:
            ev = {"type": "click", "element": elem.name, "particle": p,
                  "x": cell[0], "y": cell[1]}
            outcomes.append(
                _Branch(hit.scaled(math.sqrt(w)), br.photons, br.events + [ev])
            )
        null_vec = br.vec + hit.scaled(math.sqrt(max(0.0, 1.0 - w)) - 1.0)
        if not null_vec.is_zero():
            outcomes.append(replace(br, vec=null_vec))
        return outcomes

    @staticmethod
    def _embed_bra(vec: SparseVector, p: int, cell, local_bra: SparseVector) -> SparseVector:
        dims = tuple(vec.dims[vec.dim_index(f"{n}@{p}")] for n in ("x", "y", "dir", "pol"))
        comps = {}
        for k, z in local_bra.items():
            d, pol = local_bra.coords_of(k)
            comps[(cell[0], cell[1], d, pol)] = z
        return SparseVector.from_components(dims, comps)

    @staticmethod
    def _bra_labels(local_bra: SparseVector) -> dict:
        keys = sorted(local_bra.entries)
        d = keys[0] // 2
        info = {"direction": DIRECTION_LABELS[d]}
        if len(keys) == 1:
            info["polarization"] = POLARIZATION_LABELS[keys[0] % 2]
        return info

    # -- tree construction -----------------------------------------------------------------

    def _root_nodes(self) -> tuple[list[SimNode], list[dict]]:
        switches = sorted(self.board.random_switches(), key=lambda e: (e.y, e.x, e.name))
        nodes: list[SimNode] = []
        truncations: list[dict] = []
        if not switches:
            state, metas = self.initial_configuration({})
            nodes.append(
                SimNode(0, None, 0, 1.0, state, metas, {}, [], terminal=not metas)
            )
            return nodes, truncations
        nodes.append(SimNode(0, None, 0, 1.0, None, (), {}, [], terminal=False))
        for combo in itertools.product((0, 1), repeat=len(switches)):
            prob = 1.0
            for sw, v in zip(switches, combo):
                pr = float(sw.params.get("probability", 0.5))
                prob *= pr if v else 1.0 - pr
            if prob <= 0.0:
                continue
            if prob < self.config.min_branch_probability:
                nodes[0].truncated += prob
                truncations.append(
                    {"node": 0, "reason": "minBranchProbability", "probability": prob}
                )
                continue
            classical = {sw.name: v for sw, v in zip(switches, combo)}
            state, metas = self.initial_configuration(classical)
            events = [
                {"type": "random", "element": sw.name, "value": v}
                for sw, v in zip(switches, combo)
            ]
            node = SimNode(
                len(nodes), 0, 0, prob, state, metas, classical, events,
                terminal=not metas,
            )
            nodes.append(node)
            nodes[0].children.append(node.id)
        return nodes, truncations

    def _updated_classical(self, classical: Mapping[str, int], events: Iterable[dict]) -> dict:
        new = dict(classical)
        for ev in events:
            if ev["type"] in _LATCH_EVENTS and ev.get("element") in self._latching:
                new[ev["element"]] = 1
        return new

    def build_tree(self) -> SimTree:
        cfg = self.config
        nodes, truncations = self._root_nodes()
        self.max_state_entries = max(
            (len(n.state.entries) for n in nodes if n.state is not None), default=0
        )
        queue = deque(n.id for n in nodes if not n.terminal and n.state is not None)
        while queue:
            nid = queue.popleft()
            node = nodes[nid]
            if node.step >= cfg.max_steps:
                truncations.append(
                    {"node": nid, "reason": "maxSteps", "probability": node.probability}
                )
                continue
            if len(nodes) >= cfg.max_nodes:
                truncations.append(
                    {"node": nid, "reason": "maxNodes", "probability": node.probability}
                )
                continue
            for br in self.expand(node.state, node.photons, node.classical):
                rel = br.vec.norm_sq()
                prob = node.probability * rel
                if prob < cfg.min_branch_probability:
                    if prob > 0.0:
                        node.truncated += prob
                        truncations.append(
                            {"node": nid, "reason": "minBranchProbability", "probability": prob}
                        )
                    continue
                state = br.vec.normalized()
                self.max_state_entries = max(self.max_state_entries, len(state.entries))
                classical = self._updated_classical(node.classical, br.events)
                terminal = br.exploded or not br.photons
                child = SimNode(
                    len(nodes), nid, node.step + 1, prob, state, br.photons,
                    classical, br.events, terminal,
                )
                nodes.append(child)
                node.children.append(child.id)
                if not terminal:
                    queue.append(child.id)
        return SimTree(self.board, cfg, nodes, 0, truncations, self.max_state_entries)

    # -- sampling ---------------------------------------------------------------------------

    def sample_run(self, seed, run_index: int = 0) -> dict:
        """Follow one stochastic path through the tree; returns the run record."""
        rng = random.Random(f"photonlab:sample:{seed}:{run_index}")
        switches = sorted(self.board.random_switches(), key=lambda e: (e.y, e.x, e.name))
        classical: dict[str, int] = {}
        for sw in switches:
            pr = float(sw.params.get("probability", 0.5))
            classical[sw.name] = 1 if rng.random() < pr else 0
        draws = dict(classical)
        state, photons = self.initial_configuration(classical)
        steps_fired: dict[str, int] = {}
        step = 0
        exploded = False
        picks: list[int] = []
        combo = tuple(sorted(draws.items()))
        while photons and not exploded and step < self.config.max_steps:
            # identical walks recur across runs; the expansion along a
            # given pick sequence is deterministic, so memoize it
            walk_key = (combo, tuple(picks))
            cached = self._walk_cache.get(walk_key)
            if cached is None:
                branches = self.expand(state, photons, classical)
                weights = [br.vec.norm_sq() for br in branches]
                self._walk_cache[walk_key] = cached = (branches, weights)
            branches, weights = cached
            total = sum(weights)
            if total <= 0.0:
                break
            pick = rng.random() * total
            acc = 0.0
            index = len(branches) - 1
            for i, wgt in enumerate(weights):
                acc += wgt
                if pick <= acc:
                    index = i
                    break
            chosen = branches[index]
            picks.append(index)
            step += 1
            classical = self._updated_classical(classical, chosen.events)
            for ev in chosen.events:
                name = ev.get("element")
                if ev["type"] in _LATCH_EVENTS and name in self._latching:
                    steps_fired.setdefault(name, step)
            state = chosen.vec.normalized()
            photons = chosen.photons
            exploded = chosen.exploded
        values = self.board.wire_values(classical)
        return {
            "run": run_index,
            "seed": seed,
            "inputs": draws,
            "latches": {d.name: classical.get(d.name, 0) for d in self.board.detectors()},
            "steps": steps_fired,
            "outputs": self.board.output_values(values),
            "final_step": step,
            "exploded": exploded,
        }


def run_tree(board: Board, config: SimConfig | None = None) -> SimTree:
    return BoardRuntime(board, config).build_tree()


# -- tree serialization ----------------------------------------------------------------------


def _state_document(state: SparseVector | None) -> dict | None:
    if state is None:
        return None
    return {
        "dims": [
            {"name": d.name, "labels": list(d.labels), "particle": d.particle}
            for d in state.dims
        ],
        "entries": [
            [k, state.entries[k].real, state.entries[k].imag]
            for k in sorted(state.entries)
        ],
    }


def tree_document(tree: SimTree, include_states: bool = True) -> dict:
    nodes = []
    for n in tree.nodes:
        item = {
            "id": n.id,
            "parent": n.parent,
            "step": n.step,
            "probability": n.probability,
            "terminal": n.terminal,
            "truncated": n.truncated,
            "photons": [
                {"particle": m.particle, "source": m.source, "wavelength": m.wavelength}
                for m in n.photons
            ],
            "classical": {k: n.classical[k] for k in sorted(n.classical)},
            "events": n.events,
            "children": list(n.children),
        }
        if include_states:
            item["state"] = _state_document(n.state)
        nodes.append(item)
    return {
        "format": "photonlab-tree",
        "version": 1,
        "board": to_document(tree.board),
        "config": {
            "maxSteps": tree.config.max_steps,
            "minBranchProbability": tree.config.min_branch_probability,
            "maxNodes": tree.config.max_nodes,
        },
        "root": tree.root,
        "nodes": nodes,
        "truncations": tree.truncations,
        "stats": {
            "nodeCount": len(tree.nodes),
            "maxStateEntries": tree.max_state_entries,
            "exploredProbability": tree.explored_probability(),
            "truncatedProbability": tree.truncated_probability(),
        },
    }


def tree_json(tree: SimTree, include_states: bool = True) -> str:
    return json.dumps(tree_document(tree, include_states), indent=2, sort_keys=True) + "\n"
