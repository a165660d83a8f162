"""Photon state space on a rectangular grid.

A single photon is described by |x⟩|y⟩|direction⟩|polarization⟩: grid
column, grid row, one of four travel directions, and a two-level
polarization.  The row coordinate grows downward, so ↑ decreases y.
Multi-photon states are tensor products of per-particle copies of these
dimensions; particle tags keep the dimension keys distinct.

Polarization display bases:

    H/V  horizontal, vertical                (storage basis)
    D/A  diagonal (H+V)/√2, antidiagonal (H−V)/√2
    L/R  circular (H+iV)/√2, (H−iV)/√2

Basis changes are exact 2×2 unitaries applied per polarization axis; a
round trip restores the original amplitudes to machine precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .tensor import Dimension, SparseVector, SparseOperator, tensor_product

DEFAULT_WIDTH = 13
DEFAULT_HEIGHT = 10
MAX_PHOTONS = 3

DIRECTION_LABELS = ("→", "↑", "←", "↓")
# Screen convention: y grows downward, so ↑ is (0, -1).
DIRECTION_STEPS = ((1, 0), (0, -1), (-1, 0), (0, 1))
POLARIZATION_LABELS = ("H", "V")

TAU = 2.0 * math.pi


def column_dim(width: int, particle: int | None = None) -> Dimension:
    return Dimension("x", tuple(str(i) for i in range(width)), particle)


def row_dim(height: int, particle: int | None = None) -> Dimension:
    return Dimension("y", tuple(str(i) for i in range(height)), particle)


def direction_dim(particle: int | None = None) -> Dimension:
    return Dimension("dir", DIRECTION_LABELS, particle)


def polarization_dim(particle: int | None = None, labels: tuple[str, str] = POLARIZATION_LABELS) -> Dimension:
    return Dimension("pol", labels, particle)


def photon_dims(width: int, height: int, particle: int | None = None) -> tuple[Dimension, ...]:
    return (
        column_dim(width, particle),
        row_dim(height, particle),
        direction_dim(particle),
        polarization_dim(particle),
    )


def single_photon(
    width: int,
    height: int,
    x: int,
    y: int,
    direction: int,
    polarization: Sequence[complex] = (1.0, 0.0),
) -> SparseVector:
    """One photon at (x, y) moving in the given direction; unit norm required."""
    if not (0 <= x < width and 0 <= y < height):
        raise ValueError(f"position ({x}, {y}) outside {width}×{height} grid")
    if not 0 <= direction < 4:
        raise ValueError(f"direction index {direction} out of range")
    a_h, a_v = complex(polarization[0]), complex(polarization[1])
    n = math.sqrt(abs(a_h) ** 2 + abs(a_v) ** 2)
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"polarization amplitudes not normalized (norm {n!r})")
    dims = photon_dims(width, height)
    return SparseVector.from_components(
        dims,
        {
            (x, y, direction, 0): a_h,
            (x, y, direction, 1): a_v,
        },
    )


def retag_particles(state: SparseVector, offset: int) -> SparseVector:
    """Shift every particle tag by offset (packing is unchanged)."""
    dims = tuple(
        d.tagged((d.particle or 0) + offset if d.particle is not None else offset)
        for d in state.dims
    )
    return SparseVector(dims, state.entries, prune=False)


def particle_ids(state: SparseVector) -> tuple[int, ...]:
    seen: list[int] = []
    for d in state.dims:
        if d.particle is not None and d.particle not in seen:
            seen.append(d.particle)
    return tuple(seen)


def photon_count(state: SparseVector) -> int:
    return len(particle_ids(state))


def product_state(photons: Sequence[SparseVector]) -> SparseVector:
    """Tensor product of untagged single-particle states, tagged 0..n−1."""
    if not 1 <= len(photons) <= MAX_PHOTONS:
        raise ValueError(f"photon count {len(photons)} outside 1..{MAX_PHOTONS}")
    state: SparseVector | None = None
    for i, ph in enumerate(photons):
        if any(d.particle is not None for d in ph.dims):
            raise ValueError("product_state expects untagged factors")
        tagged = SparseVector(
            tuple(d.tagged(i) for d in ph.dims), ph.entries, prune=False
        )
        state = tagged if state is None else tensor_product(state, tagged)
    assert state is not None
    return state


def symmetrize(psi1: SparseVector, psi2: SparseVector) -> SparseVector:
    """Bosonic two-photon state (|ψ₁ψ₂⟩ + |ψ₂ψ₁⟩), normalized to unit norm.

    The symmetrized sum can never vanish: its squared norm is
    2 + 2|⟨ψ₁|ψ₂⟩|² ≥ 2.  Normalizing to one keeps downstream probability
    bookkeeping uniform regardless of the photons' overlap.
    """
    if psi1.dims != psi2.dims:
        raise ValueError("symmetrize requires photons over the same space")
    both = product_state([psi1, psi2]) + product_state([psi2, psi1])
    if both.is_zero():
        raise ValueError("symmetrized state vanished")
    return both.normalized()


# -- polarization display bases -------------------------------------------------

_S = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class PolarizationBasis:
    """A 2-level display basis given by its kets in H/V coordinates (columns)."""

    name: str
    labels: tuple[str, str]
    kets: tuple[tuple[complex, complex], tuple[complex, complex]]  # kets[hv][new]


BASES: dict[str, PolarizationBasis] = {
    "HV": PolarizationBasis("HV", ("H", "V"), ((1.0, 0.0), (0.0, 1.0))),
    "DA": PolarizationBasis("DA", ("D", "A"), ((_S, _S), (_S, -_S))),
    "LR": PolarizationBasis("LR", ("L", "R"), ((_S, _S), (_S * 1j, -_S * 1j))),
}

_LABELS_TO_BASIS = {b.labels: b for b in BASES.values()}


def basis_change_op(
    target: PolarizationBasis, source: PolarizationBasis, particle: int | None = None
) -> SparseOperator:
    """2×2 map re-expressing amplitudes from source basis into target basis."""
    # β_j = Σ_i ⟨target_j|hv_i⟩⟨hv_i| source-expansion: B_target† · B_source.
    rows = []
    for j in range(2):
        row = []
        for i in range(2):
            acc = 0.0 + 0.0j
            for hv in range(2):
                acc += target.kets[hv][j].conjugate() * source.kets[hv][i]
            row.append(acc)
        rows.append(row)
    return SparseOperator.from_matrix(
        (polarization_dim(particle, target.labels),),
        (polarization_dim(particle, source.labels),),
        rows,
    )


def to_polarization_basis(state: SparseVector, basis: str) -> SparseVector:
    """Re-express every polarization axis of the state in the named basis."""
    target = BASES[basis]
    out = state
    for d in state.dims:
        if d.name != "pol":
            continue
        source = _LABELS_TO_BASIS.get(d.labels)
        if source is None:
            raise ValueError(f"unrecognized polarization labels {d.labels}")
        if source.labels == target.labels:
            continue
        op = basis_change_op(target, source)
        out = op.apply(out, on=(d.key,))
    return out


# -- component listing ------------------------------------------------------------

FORMATS = ("cartesian", "polar", "polar-tau", "color")


@dataclass(frozen=True)
class KetComponent:
    label: str
    labels: tuple[str, ...]
    amplitude: complex
    probability: float
    display: Mapping[str, float]


def _format_amplitude(z: complex, fmt: str) -> dict[str, float]:
    if fmt == "cartesian":
        return {"re": z.real, "im": z.imag}
    r, phi = abs(z), cmath.phase(z) % TAU
    if fmt == "polar":
        return {"r": r, "phi": phi}
    if fmt == "polar-tau":
        return {"r": r, "turns": phi / TAU}
    if fmt == "color":
        return {"r": r, "hue": math.degrees(phi)}
    raise ValueError(f"unknown amplitude format {fmt!r}")


def ket_components(
    state: SparseVector, basis: str = "HV", fmt: str = "cartesian"
) -> list[KetComponent]:
    """Deterministically ordered component listing in a display basis/format."""
    shown = to_polarization_basis(state, basis)
    out = []
    for key in sorted(shown.entries):
        z = shown.entries[key]
        labels = shown.labels_of(key)
        out.append(
            KetComponent(
                label=",".join(labels),
                labels=labels,
                amplitude=z,
                probability=abs(z) ** 2,
                display=_format_amplitude(z, fmt),
            )
        )
    return out
