"""JSON-ready documents derived from trees, states, and elements.

Everything here renders; nothing simulates.  The command line and the
HTTP layer both read from this module so their outputs stay identical.
"""

from __future__ import annotations

import random

from . import elements as el
from .engine import SimTree
from .entanglement import blink_sample, entanglement_report
from .photons import BASES, FORMATS, basis_change_op, ket_components
from .tensor import SparseOperator, SparseVector


def _component_docs(components) -> list[dict]:
    return [
        {
            "label": c.label,
            "labels": list(c.labels),
            "re": c.amplitude.real,
            "im": c.amplitude.imag,
            "probability": c.probability,
            "display": dict(c.display),
        }
        for c in components
    ]


def state_document(
    state: SparseVector, basis: str = "HV", fmt: str = "cartesian"
) -> dict:
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; pick one of {sorted(BASES)}")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; pick one of {sorted(FORMATS)}")
    return {
        "basis": basis,
        "format": fmt,
        "normSquared": state.norm_sq(),
        "components": _component_docs(ket_components(state, basis, fmt)),
    }


def node_state_document(
    tree: SimTree, node_id: int, basis: str = "HV", fmt: str = "cartesian"
) -> dict:
    node = tree.node(node_id)
    if node.state is None:
        raise ValueError(f"node {node_id} carries no state")
    doc = state_document(node.state, basis, fmt)
    doc.update(
        node=node.id,
        step=node.step,
        probability=node.probability,
        photons=[m.particle for m in node.photons],
    )
    return doc


def detections_document(tree: SimTree) -> dict:
    return {
        "detectors": tree.detector_probabilities(),
        "exploredProbability": tree.explored_probability(),
        "truncatedProbability": tree.truncated_probability(),
        "conservationDefect": tree.conservation_defect(),
        "nodeCount": len(tree.nodes),
        "leafCount": len(tree.leaves()),
        "truncations": list(tree.truncations),
    }


def entanglement_document(tree: SimTree, node_id: int) -> dict:
    node = tree.node(node_id)
    if node.state is None:
        raise ValueError(f"node {node_id} carries no state")
    doc = entanglement_report(node.state)
    doc.update(node=node.id, step=node.step)
    return doc


def blink_document(
    tree: SimTree, node_id: int, seed, shots: int, basis: str = "HV"
) -> dict:
    """Repeated single-run glimpses of each particle's marginal."""
    node = tree.node(node_id)
    if node.state is None:
        raise ValueError(f"node {node_id} carries no state")
    if shots < 1:
        raise ValueError("shots must be positive")
    out = []
    for i in range(shots):
        rng = random.Random(f"photonlab:blink:{seed}:{i}")
        shot_doc = []
        for shot in blink_sample(node.state, rng):
            shot_doc.append(
                {
                    "particle": shot.particle,
                    "weight": shot.weight,
                    "components": _component_docs(
                        ket_components(shot.state, basis=basis)
                    ),
                }
            )
        out.append(shot_doc)
    return {"node": node_id, "seed": str(seed), "shots": out, "basis": basis}


def default_analysis_node(tree: SimTree) -> int:
    """Lowest-id node carrying the most photons: right after emission."""
    best, count = 0, -1
    for n in tree.nodes:
        if n.state is not None and len(n.photons) > count:
            best, count = n.id, len(n.photons)
    if count < 0:
        raise ValueError("tree has no stateful nodes")
    return best


def _operator_entries(op) -> list[dict]:
    rows = []
    for ok, ik, z in sorted(op.entry_items()):
        rows.append(
            {
                "out": list(op.out_labels(ok)),
                "in": list(op.in_labels(ik)),
                "re": z.real,
                "im": z.imag,
            }
        )
    return rows


def _operator_in_basis(op: SparseOperator, basis: str) -> SparseOperator:
    """Re-express every polarization axis of a square operator in `basis`."""
    target = BASES[basis]
    factors = []
    changed = False
    for d in op.out_dims:
        if d.name == "pol" and d.labels != target.labels:
            factors.append(basis_change_op(target, BASES["HV"], d.particle))
            changed = True
        else:
            factors.append(SparseOperator.identity((d,)))
    if not changed:
        return op
    change = factors[0]
    for f in factors[1:]:
        change = change.tensor(f)
    return change @ op @ change.dagger()


def operator_document(
    kind: str, rotation: int = 0, params: dict | None = None, basis: str = "HV"
) -> dict:
    """The element's action as explicit matrix components, for display.

    `basis` picks the polarization labels of matrix-valued documents;
    sources and classical kinds are unaffected by it.
    """
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; pick one of {sorted(BASES)}")
    errors = el.validate_element(kind, rotation, params or {})
    if errors:
        raise ValueError("; ".join(errors))
    action = el.action_for(kind, rotation, params or {})
    base = {"kind": kind, "rotation": rotation, "params": params or {}}
    if action is None:
        return {**base, "type": "classical"}
    if isinstance(action, el.UnitaryAction):
        op = _operator_in_basis(action.op, basis)
        return {**base, "basis": basis, "type": "unitary", "entries": _operator_entries(op)}
    if isinstance(action, el.PairGateAction):
        op = _operator_in_basis(action.op, basis)
        return {**base, "basis": basis, "type": "pairGate", "entries": _operator_entries(op)}
    if isinstance(action, el.MeasurementAction):
        return {
            **base,
            "basis": basis,
            "type": "measurement",
            "weight": action.weight,
            "destructive": action.destructive,
            "explosive": action.explosive,
            "projector": _operator_entries(_operator_in_basis(action.projector, basis)),
        }
    if isinstance(action, el.SourceAction):
        return {
            **base,
            "type": "source",
            "directions": list(action.directions),
            "amplitudes": [
                {"polarizations": list(pols), "re": amp.real, "im": amp.imag}
                for pols, amp in sorted(action.joint_polarization.items())
            ],
        }
    if isinstance(action, el.LogicAction):
        return {**base, "type": "logic"}
    raise TypeError(f"no document for {type(action).__name__}")
