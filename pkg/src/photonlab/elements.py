"""Optical element catalog: local actions on (direction, polarization).

Every board element resolves to one of a few local action types:

* a unitary on a photon's direction⊗polarization pair at the element's cell,
* a weighted orthogonal projection (measurement), destructive or not,
* a two-photon gate on direction⊗polarization of a co-located pair,
* a source emission spec, or
* a classical logic gate evaluated on the wire layer.

Angles and phases are given in degrees in element parameters (so canned
setups stay exact and human-editable) and converted here.

Geometry conventions, fixed and relied on by the tests:

* ``rotation`` is in 45° steps; direction d travels at 90°·d.
* Mirror-like elements reflect direction φ to 2θ−φ about their line θ;
  beams parallel to the line pass through.  Both faces reflect.
* Reflection off a mirror flips the sign of the H amplitude (the
  transverse frame flips when the propagation direction reverses).
* Beam splitters reflect with amplitude i·√R, transmit with √(1−R); an
  optional extra reflection phase applies with opposite signs on the two
  faces, which keeps the scattering matrix unitary for any phase.
* Polarizing beam splitters transmit H and reflect V (amplitude i).
* Faraday rotators rotate polarization by the same lab-frame angle for
  both travel senses along their axis (non-reciprocal); sugar solutions
  rotate with opposite lab-frame signs (reciprocal), so a round trip
  doubles through a Faraday rotator and cancels through sugar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .photons import direction_dim, polarization_dim
from .tensor import SparseOperator, SparseVector

# -- element kinds ----------------------------------------------------------------

SINGLE_PHOTON_SOURCE = "SinglePhotonSource"
BELL_PAIR_SOURCE = "BellPairSource"
GHZ_SOURCE = "GhzSource"
W_SOURCE = "WSource"

DETECTOR = "Detector"
BOMB = "Bomb"
ROCK = "Rock"
NEUTRAL_DENSITY_FILTER = "NeutralDensityFilter"
LINEAR_POLARIZER = "LinearPolarizer"
NONDEMOLITION_DETECTOR = "NondemolitionDetector"

BEAM_SPLITTER = "BeamSplitter"
POLARIZING_BEAM_SPLITTER = "PolarizingBeamSplitter"
MIRROR = "Mirror"
CORNER_CUBE = "CornerCube"
OPTICAL_CIRCULATOR = "OpticalCirculator"
WAVE_PLATE = "WavePlate"
FARADAY_ROTATOR = "FaradayRotator"
SUGAR_SOLUTION = "SugarSolution"
VACUUM_JAR = "VacuumJar"
GLASS_SLAB = "GlassSlab"

SWITCH = "Switch"
RANDOM_SWITCH = "RandomSwitch"
OUTPUT_VARIABLE = "OutputVariable"
CORRELATOR = "Correlator"
GOAL = "Goal"
COMMENT = "Comment"

GATE_IDENTITY = "Identity"
GATE_PAULI_X = "PauliX"
GATE_PAULI_Y = "PauliY"
GATE_PAULI_Z = "PauliZ"
GATE_HADAMARD = "Hadamard"
GATE_SQRT_NOT = "SqrtNot"
GATE_CNOT = "CNOT"
GATE_CZ = "CZ"

LOGIC_AND = "AND"
LOGIC_NAND = "NAND"
LOGIC_OR = "OR"
LOGIC_NOR = "NOR"
LOGIC_XOR = "XOR"
LOGIC_SUM = "SUM"
LOGIC_MIN = "MIN"
LOGIC_MAX = "MAX"

SOURCE_KINDS = frozenset({SINGLE_PHOTON_SOURCE, BELL_PAIR_SOURCE, GHZ_SOURCE, W_SOURCE})
MEASUREMENT_KINDS = frozenset(
    {DETECTOR, BOMB, ROCK, NEUTRAL_DENSITY_FILTER, LINEAR_POLARIZER, NONDEMOLITION_DETECTOR}
)
SINGLE_GATE_KINDS = frozenset(
    {GATE_IDENTITY, GATE_PAULI_X, GATE_PAULI_Y, GATE_PAULI_Z, GATE_HADAMARD, GATE_SQRT_NOT}
)
PAIR_GATE_KINDS = frozenset({GATE_CNOT, GATE_CZ})
PASSIVE_OPTICS_KINDS = frozenset(
    {
        BEAM_SPLITTER,
        POLARIZING_BEAM_SPLITTER,
        MIRROR,
        CORNER_CUBE,
        OPTICAL_CIRCULATOR,
        WAVE_PLATE,
        FARADAY_ROTATOR,
        SUGAR_SOLUTION,
        VACUUM_JAR,
        GLASS_SLAB,
    }
)
LOGIC_KINDS = frozenset(
    {LOGIC_AND, LOGIC_NAND, LOGIC_OR, LOGIC_NOR, LOGIC_XOR, LOGIC_SUM, LOGIC_MIN, LOGIC_MAX}
)
IO_KINDS = frozenset({SWITCH, RANDOM_SWITCH, OUTPUT_VARIABLE, CORRELATOR, GOAL, COMMENT})
SIGNAL_SOURCE_KINDS = frozenset(
    {SWITCH, RANDOM_SWITCH, DETECTOR, BOMB, NONDEMOLITION_DETECTOR} | LOGIC_KINDS
)

ALL_KINDS = (
    SOURCE_KINDS
    | MEASUREMENT_KINDS
    | SINGLE_GATE_KINDS
    | PAIR_GATE_KINDS
    | PASSIVE_OPTICS_KINDS
    | LOGIC_KINDS
    | IO_KINDS
)

VERTICAL_DIRECTIONS = (1, 3)
HORIZONTAL_DIRECTIONS = (0, 2)

POLARIZATION_LABEL_AMPLITUDES: dict[str, tuple[complex, complex]] = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "D": (1 / math.sqrt(2), 1 / math.sqrt(2)),
    "A": (1 / math.sqrt(2), -1 / math.sqrt(2)),
    "L": (1 / math.sqrt(2), 1j / math.sqrt(2)),
    "R": (1 / math.sqrt(2), -1j / math.sqrt(2)),
}

BELL_STATES: dict[str, dict[tuple[int, ...], complex]] = {
    "phi+": {(0, 0): 1 / math.sqrt(2), (1, 1): 1 / math.sqrt(2)},
    "phi-": {(0, 0): 1 / math.sqrt(2), (1, 1): -1 / math.sqrt(2)},
    "psi+": {(0, 1): 1 / math.sqrt(2), (1, 0): 1 / math.sqrt(2)},
    "psi-": {(0, 1): 1 / math.sqrt(2), (1, 0): -1 / math.sqrt(2)},
}


# -- local actions -----------------------------------------------------------------


@dataclass(frozen=True)
class UnitaryAction:
    op: SparseOperator  # on (dir, pol)


@dataclass(frozen=True)
class MeasurementAction:
    """Weighted orthogonal projection M = w·P at one cell.

    Destructive outcomes list local bra vectors over (dir, pol); every bra
    is its own branch and removes the measured photon.  Nondemolition
    outcomes keep the photon, applying √w·P.  The unmeasured remainder is
    handled by the engine's shared null outcome.
    """

    weight: float
    projector: SparseOperator
    bras: tuple[SparseVector, ...]
    destructive: bool
    explosive: bool = False


@dataclass(frozen=True)
class PairGateAction:
    op: SparseOperator  # on (dir, pol, dir, pol), both role assignments composed


@dataclass(frozen=True)
class SourceAction:
    directions: tuple[int, ...]
    joint_polarization: Mapping[tuple[int, ...], complex]
    wavelength: float | None = None


@dataclass(frozen=True)
class LogicAction:
    op: str


def local_dims():
    return (direction_dim(), polarization_dim())


def pair_dims():
    # tagged so the four dims stay distinct; apply() re-tags onto real photons
    return (direction_dim(0), polarization_dim(0), direction_dim(1), polarization_dim(1))


# -- geometry ---------------------------------------------------------------------


def reflect_direction(direction: int, rotation: int) -> int | None:
    """Reflect a travel direction about a line at 45°·rotation; None = passes."""
    phi = 90 * direction
    theta = 45 * (rotation % 4)
    phi_out = (2 * theta - phi) % 360
    if phi_out == phi:
        return None
    return phi_out // 90


def _face_sign(direction: int, rotation: int) -> int:
    """Which face of a splitter the beam hits: sign of sin(φ − θ)."""
    s = (90 * direction - 45 * (rotation % 4)) % 360
    return 1 if 0 < s < 180 else -1


def _rotation_matrix(angle_rad: float) -> list[list[complex]]:
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return [[c, -s], [s, c]]


def _axis_directions(rotation: int) -> tuple[int, int] | None:
    """(forward, backward) direction indices for an element axis, if cardinal."""
    if rotation % 2 != 0:
        return None
    fwd = (rotation // 2) % 4
    return fwd, (fwd + 2) % 4


def _per_direction_op(pol_ops: Mapping[int, Sequence[Sequence[complex]]]) -> SparseOperator:
    """Direction-preserving unitary with a 2×2 polarization block per direction."""
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d in range(4):
        block = pol_ops.get(d, ((1.0, 0.0), (0.0, 1.0)))
        for po in range(2):
            for pi in range(2):
                z = complex(block[po][pi])
                if z != 0:
                    entries[((d, po), (d, pi))] = z
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


# -- unitary builders ---------------------------------------------------------------


def beam_splitter_op(rotation: int, reflectance: float, reflection_phase_rad: float) -> SparseOperator:
    t = math.sqrt(max(0.0, 1.0 - reflectance))
    r = math.sqrt(max(0.0, reflectance))
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d in range(4):
        rd = reflect_direction(d, rotation)
        for p in range(2):
            if rd is None:
                entries[((d, p), (d, p))] = 1.0
            else:
                entries[((d, p), (d, p))] = t
                phase = cmath.exp(1j * reflection_phase_rad * _face_sign(d, rotation))
                entries[((rd, p), (d, p))] = 1j * r * phase
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


def mirror_op(rotation: int) -> SparseOperator:
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d in range(4):
        rd = reflect_direction(d, rotation)
        if rd is None:
            for p in range(2):
                entries[((d, p), (d, p))] = 1.0
        else:
            entries[((rd, 0), (d, 0))] = -1.0  # H sign flip on reflection
            entries[((rd, 1), (d, 1))] = 1.0
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


def polarizing_beam_splitter_op(rotation: int) -> SparseOperator:
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d in range(4):
        entries[((d, 0), (d, 0))] = 1.0  # H transmits
        rd = reflect_direction(d, rotation)
        if rd is None:
            entries[((d, 1), (d, 1))] = 1.0
        else:
            entries[((rd, 1), (d, 1))] = 1j  # V reflects
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


def corner_cube_op() -> SparseOperator:
    entries = {}
    for d in range(4):
        for p in range(2):
            entries[(((d + 2) % 4, p), (d, p))] = 1.0
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


def circulator_op(order: str) -> SparseOperator:
    shift = -1 if order == "cw" else 1
    entries = {}
    for d in range(4):
        for p in range(2):
            entries[(((d + shift) % 4, p), (d, p))] = 1.0
    return SparseOperator.from_entries(local_dims(), local_dims(), entries)


def faraday_rotator_op(rotation: int, angle_rad: float) -> SparseOperator:
    axis = _axis_directions(rotation)
    if axis is None:
        raise ValueError("polarization rotators need a cardinal axis (even rotation)")
    rot = _rotation_matrix(angle_rad)
    return _per_direction_op({axis[0]: rot, axis[1]: rot})


def sugar_solution_op(rotation: int, angle_rad: float) -> SparseOperator:
    axis = _axis_directions(rotation)
    if axis is None:
        raise ValueError("polarization rotators need a cardinal axis (even rotation)")
    return _per_direction_op(
        {axis[0]: _rotation_matrix(angle_rad), axis[1]: _rotation_matrix(-angle_rad)}
    )


def wave_plate_op(rotation: int, axis_angle_rad: float, delay_rad: float) -> SparseOperator:
    axis = _axis_directions(rotation)
    if axis is None:
        raise ValueError("wave plates need a cardinal axis (even rotation)")
    c, s = math.cos(axis_angle_rad), math.sin(axis_angle_rad)
    e = cmath.exp(1j * delay_rad)
    # R(α) · diag(1, e^{iδ}) · R(−α); symmetric, hence identical both senses.
    w = [
        [c * c + e * s * s, c * s - e * c * s],
        [c * s - e * c * s, s * s + e * c * c],
    ]
    return _per_direction_op({axis[0]: w, axis[1]: w})


def phase_shift_op(phase_rad: float) -> SparseOperator:
    z = cmath.exp(1j * phase_rad)
    return _per_direction_op({d: ((z, 0.0), (0.0, z)) for d in range(4)})


_GATE_MATRICES: dict[str, tuple[tuple[complex, complex], tuple[complex, complex]]] = {
    GATE_IDENTITY: ((1, 0), (0, 1)),
    GATE_PAULI_X: ((0, 1), (1, 0)),
    GATE_PAULI_Y: ((0, -1j), (1j, 0)),
    GATE_PAULI_Z: ((1, 0), (0, -1)),
    GATE_HADAMARD: (
        (1 / math.sqrt(2), 1 / math.sqrt(2)),
        (1 / math.sqrt(2), -1 / math.sqrt(2)),
    ),
    GATE_SQRT_NOT: (
        (0.5 + 0.5j, 0.5 - 0.5j),
        (0.5 - 0.5j, 0.5 + 0.5j),
    ),
}


def polarization_gate_op(kind: str) -> SparseOperator:
    g = _GATE_MATRICES[kind]
    return _per_direction_op({d: g for d in range(4)})


def cnot_role_op(control_first: bool) -> SparseOperator:
    """CNOT conditioned on one photon moving vertically (control) and the
    other horizontally (target); identity off that direction subspace."""
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d1 in range(4):
        for d2 in range(4):
            for p1 in range(2):
                for p2 in range(2):
                    if control_first:
                        active = d1 in VERTICAL_DIRECTIONS and d2 in HORIZONTAL_DIRECTIONS
                        out = (d1, p1, d2, p2 ^ p1) if active else (d1, p1, d2, p2)
                    else:
                        active = d2 in VERTICAL_DIRECTIONS and d1 in HORIZONTAL_DIRECTIONS
                        out = (d1, p1 ^ p2, d2, p2) if active else (d1, p1, d2, p2)
                    entries[(out, (d1, p1, d2, p2))] = 1.0
    return SparseOperator.from_entries(pair_dims(), pair_dims(), entries)


def cz_role_op(control_first: bool) -> SparseOperator:
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for d1 in range(4):
        for d2 in range(4):
            if control_first:
                active = d1 in VERTICAL_DIRECTIONS and d2 in HORIZONTAL_DIRECTIONS
            else:
                active = d2 in VERTICAL_DIRECTIONS and d1 in HORIZONTAL_DIRECTIONS
            for p1 in range(2):
                for p2 in range(2):
                    amp = -1.0 if (active and p1 == 1 and p2 == 1) else 1.0
                    entries[((d1, p1, d2, p2), (d1, p1, d2, p2))] = amp
    return SparseOperator.from_entries(pair_dims(), pair_dims(), entries)


def pair_gate_op(kind: str) -> SparseOperator:
    if kind == GATE_CNOT:
        return cnot_role_op(True) @ cnot_role_op(False)
    if kind == GATE_CZ:
        return cz_role_op(True) @ cz_role_op(False)
    raise ValueError(f"not a two-photon gate: {kind}")


# -- measurement builders -------------------------------------------------------------


def _local_identity() -> SparseOperator:
    return SparseOperator.identity(local_dims())


def _all_basis_bras() -> tuple[SparseVector, ...]:
    out = []
    for d in range(4):
        for p in range(2):
            out.append(SparseVector.from_components(local_dims(), {(d, p): 1.0}))
    return tuple(out)


def absorber_measurement(weight: float = 1.0, explosive: bool = False) -> MeasurementAction:
    return MeasurementAction(
        weight=weight,
        projector=_local_identity(),
        bras=_all_basis_bras(),
        destructive=True,
        explosive=explosive,
    )


def polarizer_measurement(angle_rad: float) -> MeasurementAction:
    """Absorb the component orthogonal to the transmission axis, any direction."""
    ax, ay = -math.sin(angle_rad), math.cos(angle_rad)  # absorbed axis = angle + 90°
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    bras = []
    for d in range(4):
        bras.append(SparseVector.from_components(local_dims(), {(d, 0): ax, (d, 1): ay}))
        for po, ao in ((0, ax), (1, ay)):
            for pi, ai in ((0, ax), (1, ay)):
                z = ao * ai  # real axis, so no conjugation needed
                if z != 0:
                    entries[((d, po), (d, pi))] = z
    projector = SparseOperator.from_entries(local_dims(), local_dims(), entries)
    return MeasurementAction(
        weight=1.0, projector=projector, bras=tuple(bras), destructive=True
    )


def nondemolition_measurement(efficiency: float) -> MeasurementAction:
    return MeasurementAction(
        weight=efficiency, projector=_local_identity(), bras=(), destructive=False
    )


# -- parameter handling ---------------------------------------------------------------


class ParamError(ValueError):
    pass


def polarization_amplitudes(spec) -> tuple[complex, complex]:
    if isinstance(spec, str):
        try:
            return POLARIZATION_LABEL_AMPLITUDES[spec]
        except KeyError:
            raise ParamError(f"unknown polarization label {spec!r}") from None
    if isinstance(spec, (list, tuple)) and len(spec) == 4:
        a = complex(spec[0], spec[1])
        b = complex(spec[2], spec[3])
        n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if abs(n - 1.0) > 1e-9:
            raise ParamError(f"polarization amplitudes not normalized (norm {n})")
        return a, b
    raise ParamError("polarization must be a label or [reH, imH, reV, imV]")


def _num(params: Mapping, key: str, default, lo=None, hi=None) -> float:
    v = params.get(key, default)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ParamError(f"{key} must be a number")
    if lo is not None and not (lo <= v <= (hi if hi is not None else math.inf)):
        raise ParamError(f"{key}={v} outside [{lo}, {hi}]")
    return float(v)


_ALLOWED_PARAMS: dict[str, frozenset[str]] = {
    SINGLE_PHOTON_SOURCE: frozenset({"polarization", "wavelength"}),
    BELL_PAIR_SOURCE: frozenset({"bell", "wavelength"}),
    GHZ_SOURCE: frozenset({"wavelength"}),
    W_SOURCE: frozenset({"wavelength"}),
    DETECTOR: frozenset(),
    BOMB: frozenset(),
    ROCK: frozenset(),
    NEUTRAL_DENSITY_FILTER: frozenset({"absorption"}),
    LINEAR_POLARIZER: frozenset({"angle"}),
    NONDEMOLITION_DETECTOR: frozenset({"efficiency"}),
    BEAM_SPLITTER: frozenset({"reflectance", "reflectionPhase"}),
    POLARIZING_BEAM_SPLITTER: frozenset(),
    MIRROR: frozenset(),
    CORNER_CUBE: frozenset(),
    OPTICAL_CIRCULATOR: frozenset({"order"}),
    WAVE_PLATE: frozenset({"angle", "delay"}),
    FARADAY_ROTATOR: frozenset({"angle"}),
    SUGAR_SOLUTION: frozenset({"angle"}),
    VACUUM_JAR: frozenset({"phase"}),
    GLASS_SLAB: frozenset({"phase"}),
    SWITCH: frozenset({"value"}),
    RANDOM_SWITCH: frozenset({"probability"}),
    OUTPUT_VARIABLE: frozenset(),
    CORRELATOR: frozenset({"settingA", "settingB", "outcomeA", "outcomeB"}),
    GOAL: frozenset({"detector", "threshold"}),
    COMMENT: frozenset({"text"}),
    **{k: frozenset({"enabled"}) for k in SINGLE_GATE_KINDS | PAIR_GATE_KINDS},
    **{k: frozenset() for k in LOGIC_KINDS},
}

_EVEN_ROTATION_KINDS = (
    SOURCE_KINDS | {WAVE_PLATE, FARADAY_ROTATOR, SUGAR_SOLUTION}
)


def allowed_params(kind: str) -> frozenset[str]:
    """Parameter names an element kind accepts."""
    try:
        return _ALLOWED_PARAMS[kind]
    except KeyError:
        raise ValueError(f"unknown element kind {kind!r}") from None


def validate_element(kind: str, rotation: int, params: Mapping) -> list[str]:
    """Parameter/rotation legality for one element; returns error strings."""
    errors: list[str] = []
    if kind not in ALL_KINDS:
        return [f"unknown element kind {kind!r}"]
    if not isinstance(rotation, int) or not 0 <= rotation < 8:
        errors.append(f"rotation must be an integer in 0..7, got {rotation!r}")
    elif kind in _EVEN_ROTATION_KINDS and rotation % 2 != 0:
        errors.append(f"{kind} requires a cardinal rotation (even step)")
    allowed = _ALLOWED_PARAMS[kind]
    for key in params:
        if key not in allowed:
            errors.append(f"{kind} does not accept parameter {key!r}")
    try:
        _checked_params(kind, params)
    except ParamError as exc:
        errors.append(str(exc))
    return errors


def _checked_params(kind: str, params: Mapping) -> None:
    if kind == SINGLE_PHOTON_SOURCE:
        polarization_amplitudes(params.get("polarization", "H"))
        if "wavelength" in params:
            _num(params, "wavelength", 0.0)
    elif kind == BELL_PAIR_SOURCE:
        bell = params.get("bell", "phi+")
        if bell not in BELL_STATES:
            raise ParamError(f"unknown Bell state {bell!r}")
    elif kind == NEUTRAL_DENSITY_FILTER:
        _num(params, "absorption", 0.5, 0.0, 1.0)
    elif kind == LINEAR_POLARIZER or kind in (WAVE_PLATE, FARADAY_ROTATOR, SUGAR_SOLUTION):
        _num(params, "angle", 0.0)
        if kind == WAVE_PLATE:
            _num(params, "delay", 90.0)
    elif kind == NONDEMOLITION_DETECTOR:
        _num(params, "efficiency", 1.0, 0.0, 1.0)
    elif kind == BEAM_SPLITTER:
        _num(params, "reflectance", 0.5, 0.0, 1.0)
        _num(params, "reflectionPhase", 0.0)
    elif kind == OPTICAL_CIRCULATOR:
        if params.get("order", "cw") not in ("cw", "ccw"):
            raise ParamError("circulator order must be 'cw' or 'ccw'")
    elif kind in (VACUUM_JAR, GLASS_SLAB):
        _num(params, "phase", 90.0)
    elif kind == SWITCH:
        v = params.get("value", 0)
        if v not in (0, 1):
            raise ParamError("switch value must be 0 or 1")
    elif kind == RANDOM_SWITCH:
        _num(params, "probability", 0.5, 0.0, 1.0)
    elif kind == CORRELATOR:
        for key in ("settingA", "settingB", "outcomeA", "outcomeB"):
            if not isinstance(params.get(key), str):
                raise ParamError(f"correlator needs element name {key!r}")
    elif kind == GOAL:
        if not isinstance(params.get("detector"), str):
            raise ParamError("goal needs a detector element name")
        _num(params, "threshold", 0.0, 0.0, 1.0)
    elif kind in SINGLE_GATE_KINDS | PAIR_GATE_KINDS:
        if not isinstance(params.get("enabled", True), bool):
            raise ParamError("enabled must be a boolean")


# -- dispatch --------------------------------------------------------------------------


def action_for(kind: str, rotation: int, params: Mapping):
    """Resolve an element to its local action (None for purely classical kinds)."""
    if kind in LOGIC_KINDS:
        return LogicAction(kind)
    if kind in (SWITCH, RANDOM_SWITCH, OUTPUT_VARIABLE, CORRELATOR, GOAL, COMMENT):
        return None

    if kind in SOURCE_KINDS:
        wavelength = params.get("wavelength")
        d = (rotation // 2) % 4
        if kind == SINGLE_PHOTON_SOURCE:
            a, b = polarization_amplitudes(params.get("polarization", "H"))
            return SourceAction((d,), {(0,): a, (1,): b}, wavelength)
        if kind == BELL_PAIR_SOURCE:
            joint = BELL_STATES[params.get("bell", "phi+")]
            return SourceAction((d, (d + 2) % 4), dict(joint), wavelength)
        s3 = 1 / math.sqrt(3)
        dirs = (d, (d + 1) % 4, (d + 3) % 4)
        if kind == GHZ_SOURCE:
            s2 = 1 / math.sqrt(2)
            return SourceAction(dirs, {(0, 0, 0): s2, (1, 1, 1): s2}, wavelength)
        return SourceAction(
            dirs, {(0, 0, 1): s3, (0, 1, 0): s3, (1, 0, 0): s3}, wavelength
        )

    if kind in (DETECTOR, ROCK):
        return absorber_measurement()
    if kind == BOMB:
        return absorber_measurement(explosive=True)
    if kind == NEUTRAL_DENSITY_FILTER:
        return absorber_measurement(weight=_num(params, "absorption", 0.5, 0.0, 1.0))
    if kind == LINEAR_POLARIZER:
        return polarizer_measurement(math.radians(_num(params, "angle", 0.0)))
    if kind == NONDEMOLITION_DETECTOR:
        return nondemolition_measurement(_num(params, "efficiency", 1.0, 0.0, 1.0))

    if kind == BEAM_SPLITTER:
        return UnitaryAction(
            beam_splitter_op(
                rotation,
                _num(params, "reflectance", 0.5, 0.0, 1.0),
                math.radians(_num(params, "reflectionPhase", 0.0)),
            )
        )
    if kind == POLARIZING_BEAM_SPLITTER:
        return UnitaryAction(polarizing_beam_splitter_op(rotation))
    if kind == MIRROR:
        return UnitaryAction(mirror_op(rotation))
    if kind == CORNER_CUBE:
        return UnitaryAction(corner_cube_op())
    if kind == OPTICAL_CIRCULATOR:
        return UnitaryAction(circulator_op(params.get("order", "cw")))
    if kind == WAVE_PLATE:
        return UnitaryAction(
            wave_plate_op(
                rotation,
                math.radians(_num(params, "angle", 0.0)),
                math.radians(_num(params, "delay", 90.0)),
            )
        )
    if kind == FARADAY_ROTATOR:
        return UnitaryAction(
            faraday_rotator_op(rotation, math.radians(_num(params, "angle", 0.0)))
        )
    if kind == SUGAR_SOLUTION:
        return UnitaryAction(
            sugar_solution_op(rotation, math.radians(_num(params, "angle", 0.0)))
        )
    if kind == VACUUM_JAR:
        return UnitaryAction(phase_shift_op(-math.radians(_num(params, "phase", 90.0))))
    if kind == GLASS_SLAB:
        return UnitaryAction(phase_shift_op(math.radians(_num(params, "phase", 90.0))))

    if kind in SINGLE_GATE_KINDS:
        if not params.get("enabled", True):
            return UnitaryAction(polarization_gate_op(GATE_IDENTITY))
        return UnitaryAction(polarization_gate_op(kind))
    if kind in PAIR_GATE_KINDS:
        if not params.get("enabled", True):
            return PairGateAction(SparseOperator.identity(pair_dims()))
        return PairGateAction(pair_gate_op(kind))

    raise ValueError(f"unknown element kind {kind!r}")


def apply_logic(op: str, values: Sequence[int]) -> int:
    bits = [1 if v else 0 for v in values]
    if op == LOGIC_AND:
        return 1 if bits and all(bits) else 0
    if op == LOGIC_NAND:
        return 0 if bits and all(bits) else 1
    if op == LOGIC_OR:
        return 1 if any(bits) else 0
    if op == LOGIC_NOR:
        return 0 if any(bits) else 1
    if op == LOGIC_XOR:
        out = 0
        for b in bits:
            out ^= b
        return out
    if op == LOGIC_SUM:
        return sum(int(v) for v in values)
    if op == LOGIC_MIN:
        return min((int(v) for v in values), default=0)
    if op == LOGIC_MAX:
        return max((int(v) for v in values), default=0)
    raise ValueError(f"unknown logic op {op!r}")
