"""Entanglement measures, snapshot sampling, and the star-graph layout.

Entropy here is always collision (Rényi-2) entropy of a one-particle
reduction, −log₂ tr ρ², which is 0 for product states and 1 for a
maximally mixed qubit reduction.  It is cheap on sparse states (purity
is a sum of squared overlap magnitudes) and needs no eigendecomposition.

``blink_sample`` draws a self-consistent set of single-particle
snapshots from an entangled state: random reference states contract all
not-yet-sampled particles, already-sampled particles are contracted with
their own snapshots.  Correlations survive: snapshots of a polarization
singlet always come out orthogonal.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .tensor import SparseVector, partial_inner, subsystem_purity

_BLINK_RETRIES = 8
_NULL_EPS = 1e-12


def particles_of(state: SparseVector) -> tuple[int, ...]:
    return tuple(sorted({d.particle for d in state.dims if d.particle is not None}))


def renyi2_entropy(purity: float) -> float:
    """Collision entropy in bits from a reduced-state purity."""
    if not 0.0 < purity <= 1.0 + 1e-9:
        raise ValueError(f"purity {purity} outside (0, 1]")
    return max(0.0, -math.log2(min(1.0, purity)))


def particle_purities(state: SparseVector) -> dict[int, float]:
    return {p: subsystem_purity(state, p) for p in particles_of(state)}


def particle_entropies(state: SparseVector) -> dict[int, float]:
    return {p: renyi2_entropy(q) for p, q in particle_purities(state).items()}


# -- blink snapshots ---------------------------------------------------------------


@dataclass(frozen=True)
class BlinkShot:
    particle: int
    state: SparseVector  # unit-norm single-particle state
    weight: float  # squared norm of the contraction that produced it


def _particle_dim_indices(state: SparseVector, p: int) -> list[int]:
    return [i for i, d in enumerate(state.dims) if d.particle == p]


def _untagged(vec: SparseVector) -> SparseVector:
    """Drop particle tags so snapshots of different particles share a space."""
    return SparseVector(tuple(d.tagged(None) for d in vec.dims), vec.entries, prune=False)


def _random_reference(state: SparseVector, p: int, rng: random.Random) -> SparseVector:
    """Gaussian random state on the particle's occupied basis states."""
    idxs = _particle_dim_indices(state, p)
    dims = tuple(state.dims[i] for i in idxs)
    support = sorted(
        {tuple(state.coords_of(k)[i] for i in idxs) for k in state.entries}
    )
    comps = {
        coords: complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for coords in support
    }
    vec = SparseVector.from_components(dims, comps)
    if vec.is_zero():
        raise ValueError("degenerate random reference")
    return vec.normalized()


def blink_sample(
    state: SparseVector, rng: random.Random, retries: int = _BLINK_RETRIES
) -> list[BlinkShot]:
    """One snapshot per particle, in particle order.

    A single-particle state is returned as its own (exact) snapshot.
    Draws are retried when a contraction vanishes; after ``retries``
    failed rounds the state is reported as unsampleable.
    """
    parts = particles_of(state)
    if not parts:
        return []
    if len(parts) == 1:
        return [BlinkShot(parts[0], _untagged(state.normalized()), 1.0)]

    last_error: Exception | None = None
    for _ in range(retries):
        try:
            refs = {p: _random_reference(state, p, rng) for p in parts}
        except ValueError as exc:
            last_error = exc
            continue
        snapshots: dict[int, SparseVector] = {}
        shots: list[BlinkShot] = []
        for k, p in enumerate(parts):
            vec = state
            for j, q in enumerate(parts):
                if q == p:
                    continue
                bra = snapshots[q] if j < k else refs[q]
                vec = partial_inner(bra, vec)
            weight = vec.norm_sq()
            if weight < _NULL_EPS:
                last_error = ValueError(f"contraction for particle {p} vanished")
                shots = []
                break
            snap = vec.normalized()
            snapshots[p] = snap
            shots.append(BlinkShot(p, _untagged(snap), weight))
        if shots:
            return shots
    raise RuntimeError(f"blink sampling failed {retries} times: {last_error}")


# -- graph layout ---------------------------------------------------------------------


@dataclass(frozen=True)
class GraphAnchor:
    particle: int
    x: float
    y: float
    entropy: float
    width: float  # entropy relative to the most entangled particle


@dataclass(frozen=True)
class EntanglementGraph:
    anchors: tuple[GraphAnchor, ...]
    center: tuple[float, float]


def entanglement_graph(state: SparseVector) -> EntanglementGraph:
    """Anchors evenly on the unit circle starting at −π/2 (screen top),
    hub at the entropy-weighted equilibrium of the anchor positions."""
    entropies = particle_entropies(state)
    parts = sorted(entropies)
    n = len(parts)
    anchors = []
    for i, p in enumerate(parts):
        theta = -math.pi / 2 + 2.0 * math.pi * i / n
        anchors.append((p, math.cos(theta), math.sin(theta), entropies[p]))
    top = max((h for _, _, _, h in anchors), default=0.0)
    total = sum(h for _, _, _, h in anchors)
    if total > 0.0:
        cx = sum(x * h for _, x, _, h in anchors) / total
        cy = sum(y * h for _, _, y, h in anchors) / total
    else:
        cx = sum(x for _, x, _, _ in anchors) / n
        cy = sum(y for _, _, y, _ in anchors) / n
    return EntanglementGraph(
        tuple(
            GraphAnchor(p, x, y, h, (h / top) if top > 0.0 else 0.0)
            for p, x, y, h in anchors
        ),
        (cx, cy),
    )


def entanglement_report(state: SparseVector) -> dict:
    """JSON-ready entropy summary for one state."""
    purities = particle_purities(state)
    graph = entanglement_graph(state)
    return {
        "particles": [
            {
                "particle": p,
                "purity": purities[p],
                "entropy": renyi2_entropy(purities[p]),
            }
            for p in sorted(purities)
        ],
        "graph": {
            "anchors": [
                {
                    "particle": a.particle,
                    "x": a.x,
                    "y": a.y,
                    "entropy": a.entropy,
                    "width": a.width,
                }
                for a in graph.anchors
            ],
            "center": {"x": graph.center[0], "y": graph.center[1]},
        },
    }
