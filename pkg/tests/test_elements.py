"""Element catalog: geometry, unitarity, measurement structure, logic."""

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonlab.elements import (
    BELL_STATES,
    GATE_CNOT,
    GATE_CZ,
    LOGIC_KINDS,
    PAIR_GATE_KINDS,
    SINGLE_GATE_KINDS,
    MeasurementAction,
    PairGateAction,
    SourceAction,
    UnitaryAction,
    absorber_measurement,
    action_for,
    apply_logic,
    beam_splitter_op,
    circulator_op,
    cnot_role_op,
    corner_cube_op,
    cz_role_op,
    faraday_rotator_op,
    local_dims,
    mirror_op,
    nondemolition_measurement,
    pair_dims,
    pair_gate_op,
    phase_shift_op,
    polarization_amplitudes,
    polarization_gate_op,
    polarizer_measurement,
    polarizing_beam_splitter_op,
    reflect_direction,
    sugar_solution_op,
    validate_element,
    wave_plate_op,
)
from photonlab.tensor import SparseOperator, SparseVector, operator_distance

S2 = 1 / math.sqrt(2)


def ket(d, p=0):
    return SparseVector.basis_state(local_dims(), (d, p))


# -- reflection geometry -----------------------------------------------------------


def test_reflection_table_slash():
    # "/" mirror line at 45°
    assert reflect_direction(0, 1) == 1
    assert reflect_direction(1, 1) == 0
    assert reflect_direction(2, 1) == 3
    assert reflect_direction(3, 1) == 2


def test_reflection_table_backslash():
    assert reflect_direction(0, 3) == 3
    assert reflect_direction(3, 3) == 0
    assert reflect_direction(1, 3) == 2
    assert reflect_direction(2, 3) == 1


def test_parallel_beams_pass():
    assert reflect_direction(0, 0) is None  # "-" line, horizontal beam
    assert reflect_direction(2, 0) is None
    assert reflect_direction(1, 2) is None  # "|" line, vertical beam
    assert reflect_direction(1, 0) == 3
    assert reflect_direction(0, 2) == 2


@given(st.integers(0, 3), st.integers(0, 7))
def test_reflection_is_involutive(d, rot):
    rd = reflect_direction(d, rot)
    if rd is not None:
        assert reflect_direction(rd, rot) == d


# -- unitarity sweeps -------------------------------------------------------------


@pytest.mark.parametrize("rotation", range(8))
@pytest.mark.parametrize("reflectance", [0.0, 0.25, 0.5, 0.9, 1.0])
@pytest.mark.parametrize("phase", [0.0, math.pi / 4, math.pi / 2])
def test_beam_splitter_unitary(rotation, reflectance, phase):
    assert beam_splitter_op(rotation, reflectance, phase).is_unitary(1e-10)


@pytest.mark.parametrize("rotation", range(8))
def test_mirror_and_pbs_unitary(rotation):
    assert mirror_op(rotation).is_unitary(1e-10)
    assert polarizing_beam_splitter_op(rotation).is_unitary(1e-10)


@pytest.mark.parametrize("rotation", [0, 2, 4, 6])
@pytest.mark.parametrize("angle", [0.0, math.pi / 8, math.pi / 4, 1.0])
def test_rotator_unitary(rotation, angle):
    assert faraday_rotator_op(rotation, angle).is_unitary(1e-10)
    assert sugar_solution_op(rotation, angle).is_unitary(1e-10)
    assert wave_plate_op(rotation, angle, math.pi / 2).is_unitary(1e-10)
    assert wave_plate_op(rotation, angle, math.pi).is_unitary(1e-10)


def test_fixed_routing_unitary():
    assert corner_cube_op().is_unitary(1e-10)
    assert circulator_op("cw").is_unitary(1e-10)
    assert circulator_op("ccw").is_unitary(1e-10)
    for kind in SINGLE_GATE_KINDS:
        assert polarization_gate_op(kind).is_unitary(1e-10)
    for kind in PAIR_GATE_KINDS:
        assert pair_gate_op(kind).is_unitary(1e-10)


# -- mirrors ----------------------------------------------------------------------


def test_mirror_flips_h_sign():
    m = mirror_op(1)
    out = m.apply(ket(0, 0))
    assert abs(out.amplitude((1, 0)) + 1.0) < 1e-12
    out = m.apply(ket(0, 1))
    assert abs(out.amplitude((1, 1)) - 1.0) < 1e-12


def test_mirror_swaps_circular_handedness():
    # |L⟩ = (|H⟩ + i|V⟩)/√2 reflects to −|R⟩: handedness swaps.
    left = SparseVector.from_components(local_dims(), {(0, 0): S2, (0, 1): 1j * S2})
    out = mirror_op(1).apply(left)
    assert abs(out.amplitude((1, 0)) + S2) < 1e-12
    assert abs(out.amplitude((1, 1)) - 1j * S2) < 1e-12


def test_mirror_parallel_pass():
    out = mirror_op(0).apply(ket(0, 1))
    assert abs(out.amplitude((0, 1)) - 1.0) < 1e-12


# -- beam splitters ---------------------------------------------------------------


def test_beam_splitter_balanced_amplitudes():
    bs = beam_splitter_op(1, 0.5, 0.0)
    out = bs.apply(ket(0, 0))
    assert abs(out.amplitude((0, 0)) - S2) < 1e-12
    assert abs(out.amplitude((1, 0)) - 1j * S2) < 1e-12


def test_beam_splitter_limits():
    assert operator_distance(
        beam_splitter_op(1, 0.0, 0.0), SparseOperator.identity(local_dims())
    ) < 1e-12
    full = beam_splitter_op(1, 1.0, 0.0)
    out = full.apply(ket(0, 0))
    assert abs(out.amplitude((1, 0)) - 1j) < 1e-12


def test_beam_splitter_face_phase_signs():
    # The two faces take opposite extra phases; at 90° the i cancels or doubles.
    bs = beam_splitter_op(1, 1.0, math.pi / 2)
    hit_minus = bs.apply(ket(0, 0))  # → hits the "/" from the lower face
    assert abs(hit_minus.amplitude((1, 0)) - 1.0) < 1e-12
    hit_plus = bs.apply(ket(1, 0))
    assert abs(hit_plus.amplitude((0, 0)) + 1.0) < 1e-12


# -- polarizing beam splitter -------------------------------------------------------


def test_pbs_routes_by_polarization():
    pbs = polarizing_beam_splitter_op(1)
    out_h = pbs.apply(ket(0, 0))
    assert abs(out_h.amplitude((0, 0)) - 1.0) < 1e-12
    out_v = pbs.apply(ket(0, 1))
    assert abs(out_v.amplitude((1, 1)) - 1j) < 1e-12


# -- fixed routing ------------------------------------------------------------------


def test_corner_cube_retroreflects():
    cc = corner_cube_op()
    for d in range(4):
        out = cc.apply(ket(d, 1))
        assert abs(out.amplitude(((d + 2) % 4, 1)) - 1.0) < 1e-12
    assert operator_distance(cc @ cc, SparseOperator.identity(local_dims())) < 1e-12


def test_circulator_quarter_turns():
    cw = circulator_op("cw")
    assert abs(cw.apply(ket(0)).amplitude((3, 0)) - 1.0) < 1e-12
    assert abs(cw.apply(ket(1)).amplitude((0, 0)) - 1.0) < 1e-12
    ccw = circulator_op("ccw")
    assert operator_distance(cw @ ccw, SparseOperator.identity(local_dims())) < 1e-12


# -- polarization rotators -----------------------------------------------------------


def test_faraday_round_trip_doubles():
    f = faraday_rotator_op(0, math.radians(45))
    cc = corner_cube_op()
    out = f.apply(cc.apply(f.apply(ket(0, 0))))
    assert abs(out.amplitude((2, 1)) - 1.0) < 1e-12


def test_sugar_round_trip_cancels():
    s = sugar_solution_op(0, math.radians(45))
    cc = corner_cube_op()
    out = s.apply(cc.apply(s.apply(ket(0, 0))))
    assert abs(out.amplitude((2, 0)) - 1.0) < 1e-12


def test_rotators_skip_perpendicular_beams():
    f = faraday_rotator_op(0, math.radians(45))
    out = f.apply(ket(1, 0))  # travelling ↑ through a horizontal-axis rotator
    assert abs(out.amplitude((1, 0)) - 1.0) < 1e-12


def test_rotators_reject_diagonal_axis():
    with pytest.raises(ValueError):
        faraday_rotator_op(1, 0.3)
    with pytest.raises(ValueError):
        sugar_solution_op(3, 0.3)


def test_half_wave_plate_reflects_polarization():
    w = wave_plate_op(0, math.radians(22.5), math.pi)
    out = w.apply(ket(0, 0))
    assert abs(out.amplitude((0, 0)) - math.cos(math.radians(45))) < 1e-12
    assert abs(out.amplitude((0, 1)) - math.sin(math.radians(45))) < 1e-12


def test_quarter_wave_plate_makes_circular():
    w = wave_plate_op(0, math.radians(45), math.pi / 2)
    out = w.apply(ket(0, 0))
    assert abs(abs(out.amplitude((0, 0))) ** 2 - 0.5) < 1e-12
    assert abs(abs(out.amplitude((0, 1))) ** 2 - 0.5) < 1e-12


def test_wave_plate_same_both_senses():
    w = wave_plate_op(0, math.radians(30), math.pi / 2)
    fwd = w.apply(ket(0, 0))
    bwd = w.apply(ket(2, 0))
    assert abs(fwd.amplitude((0, 1)) - bwd.amplitude((2, 1))) < 1e-12


# -- phase shifters ------------------------------------------------------------------


def test_glass_advances_vacuum_retards():
    g = phase_shift_op(math.pi / 2)
    v = phase_shift_op(-math.pi / 2)
    assert abs(g.apply(ket(0)).amplitude((0, 0)) - 1j) < 1e-12
    assert abs(v.apply(ket(0)).amplitude((0, 0)) + 1j) < 1e-12
    assert operator_distance(g @ v, SparseOperator.identity(local_dims())) < 1e-12


# -- polarization gates ---------------------------------------------------------------


def test_hadamard_maps_h_to_diagonal():
    h = polarization_gate_op("Hadamard")
    out = h.apply(ket(0, 0))
    assert abs(out.amplitude((0, 0)) - S2) < 1e-12
    assert abs(out.amplitude((0, 1)) - S2) < 1e-12


def test_sqrt_not_squares_to_x():
    s = polarization_gate_op("SqrtNot")
    x = polarization_gate_op("PauliX")
    assert operator_distance(s @ s, x) < 1e-12


# -- two-photon gates ----------------------------------------------------------------


def pair_ket(d1, p1, d2, p2):
    return SparseVector.basis_state(pair_dims(), (d1, p1, d2, p2))


def test_cnot_role_assignments_commute():
    v12, v21 = cnot_role_op(True), cnot_role_op(False)
    assert operator_distance(v12 @ v21, v21 @ v12) < 1e-12
    z12, z21 = cz_role_op(True), cz_role_op(False)
    assert operator_distance(z12 @ z21, z21 @ z12) < 1e-12


def test_cnot_vertical_controls_horizontal():
    g = pair_gate_op(GATE_CNOT)
    out = g.apply(pair_ket(1, 1, 0, 0))  # V-polarized ↑ photon flips → photon
    assert abs(out.amplitude((1, 1, 0, 1)) - 1.0) < 1e-12
    out = g.apply(pair_ket(1, 0, 0, 1))  # H control leaves target alone
    assert abs(out.amplitude((1, 0, 0, 1)) - 1.0) < 1e-12
    out = g.apply(pair_ket(0, 0, 1, 1))  # roles swap with the direction pattern
    assert abs(out.amplitude((0, 1, 1, 1)) - 1.0) < 1e-12


def test_cnot_identity_off_crossing_subspace():
    g = pair_gate_op(GATE_CNOT)
    out = g.apply(pair_ket(0, 1, 0, 1))  # both horizontal: no control role
    assert abs(out.amplitude((0, 1, 0, 1)) - 1.0) < 1e-12
    out = g.apply(pair_ket(1, 1, 3, 1))  # both vertical
    assert abs(out.amplitude((1, 1, 3, 1)) - 1.0) < 1e-12


def test_cz_phases_vv_crossing():
    g = pair_gate_op(GATE_CZ)
    assert abs(g.apply(pair_ket(1, 1, 0, 1)).amplitude((1, 1, 0, 1)) + 1.0) < 1e-12
    assert abs(g.apply(pair_ket(1, 1, 0, 0)).amplitude((1, 1, 0, 0)) - 1.0) < 1e-12


# -- measurements --------------------------------------------------------------------


def test_detector_measurement_structure():
    m = action_for("Detector", 0, {})
    assert isinstance(m, MeasurementAction)
    assert m.weight == 1.0 and m.destructive and not m.explosive
    assert len(m.bras) == 8
    assert operator_distance(m.projector, SparseOperator.identity(local_dims())) < 1e-12


def test_bomb_is_explosive_rock_is_not():
    assert action_for("Bomb", 0, {}).explosive
    assert not action_for("Rock", 0, {}).explosive


def test_neutral_density_filter_weight():
    m = action_for("NeutralDensityFilter", 0, {"absorption": 0.3})
    assert m.weight == pytest.approx(0.3)
    assert m.destructive and len(m.bras) == 8


def test_nondemolition_keeps_photon():
    m = nondemolition_measurement(0.8)
    assert not m.destructive and m.bras == () and m.weight == pytest.approx(0.8)


def test_polarizer_absorbs_orthogonal_axis():
    m = polarizer_measurement(math.radians(45))  # transmits diagonal
    diag = SparseVector.from_components(local_dims(), {(0, 0): S2, (0, 1): S2})
    for bra in m.bras:
        from photonlab.tensor import inner_product

        assert abs(inner_product(bra, diag)) < 1e-12


def test_polarizer_projector_is_orthogonal_projection():
    m = polarizer_measurement(math.radians(30))
    p = m.projector
    assert operator_distance(p @ p, p) < 1e-12
    assert operator_distance(p.dagger(), p) < 1e-12


def test_polarizer_transmission_convention():
    # angle 0 transmits H: the absorbed bra per direction is ⟨V|.
    m = polarizer_measurement(0.0)
    out = m.projector.apply(SparseVector.from_components(local_dims(), {(0, 0): S2, (0, 1): S2}))
    assert abs(out.amplitude((0, 1)) - S2) < 1e-12
    assert abs(out.amplitude((0, 0))) < 1e-12


def test_measurement_bras_resolve_projector():
    # Σ |bra⟩⟨bra| over listed outcomes equals the projector (orthogonal split).
    m = polarizer_measurement(math.radians(30))
    acc = None
    for bra in m.bras:
        entries = {}
        for ko, zo in bra.items():
            for ki, zi in bra.items():
                entries[(bra.coords_of(ko), bra.coords_of(ki))] = zo * zi.conjugate()
        term = SparseOperator.from_entries(local_dims(), local_dims(), entries)
        acc = term if acc is None else acc + term
    assert operator_distance(acc, m.projector) < 1e-12


# -- sources --------------------------------------------------------------------------


def test_single_photon_source_action():
    a = action_for("SinglePhotonSource", 0, {"polarization": "D"})
    assert isinstance(a, SourceAction)
    assert a.directions == (0,)
    assert a.joint_polarization[(0,)] == pytest.approx(S2)
    assert a.joint_polarization[(1,)] == pytest.approx(S2)


def test_source_rotation_sets_direction():
    assert action_for("SinglePhotonSource", 2, {}).directions == (1,)
    assert action_for("SinglePhotonSource", 6, {}).directions == (3,)


def test_bell_source_action():
    a = action_for("BellPairSource", 0, {"bell": "psi-"})
    assert a.directions == (0, 2)
    assert a.joint_polarization[(0, 1)] == pytest.approx(S2)
    assert a.joint_polarization[(1, 0)] == pytest.approx(-S2)


def test_three_photon_sources():
    g = action_for("GhzSource", 0, {})
    assert g.directions == (0, 1, 3)
    assert g.joint_polarization[(0, 0, 0)] == pytest.approx(S2)
    w = action_for("WSource", 0, {})
    assert w.joint_polarization[(1, 0, 0)] == pytest.approx(1 / math.sqrt(3))
    assert len(w.joint_polarization) == 3


def test_polarization_amplitude_parsing():
    a, b = polarization_amplitudes("L")
    assert a == pytest.approx(S2) and b == pytest.approx(1j * S2)
    a, b = polarization_amplitudes([0.6, 0.0, 0.0, 0.8])
    assert a == pytest.approx(0.6) and b == pytest.approx(0.8j)
    with pytest.raises(ValueError):
        polarization_amplitudes("Q")
    with pytest.raises(ValueError):
        polarization_amplitudes([1.0, 0.0, 1.0, 0.0])


# -- dispatch and validation -----------------------------------------------------------


def test_disabled_gates_become_identity():
    a = action_for("PauliX", 0, {"enabled": False})
    assert operator_distance(a.op, SparseOperator.identity(local_dims())) < 1e-12
    p = action_for("CNOT", 0, {"enabled": False})
    assert isinstance(p, PairGateAction)
    assert operator_distance(p.op, SparseOperator.identity(pair_dims())) < 1e-12


def test_classical_kinds_have_no_local_action():
    for kind in ("Switch", "RandomSwitch", "OutputVariable", "Correlator", "Goal", "Comment"):
        assert action_for(kind, 0, {}) is None


def test_validate_rejects_unknown_kind_and_params():
    assert validate_element("Teleporter", 0, {}) != []
    assert any("accept" in e for e in validate_element("Mirror", 0, {"angle": 5}))
    assert validate_element("Mirror", 1, {}) == []


def test_validate_rotation_rules():
    assert any("cardinal" in e for e in validate_element("FaradayRotator", 1, {}))
    assert any("rotation" in e for e in validate_element("Mirror", 9, {}))
    assert validate_element("SinglePhotonSource", 4, {}) == []
    assert any("cardinal" in e for e in validate_element("SinglePhotonSource", 3, {}))


def test_validate_parameter_ranges():
    assert any("outside" in e for e in validate_element("BeamSplitter", 0, {"reflectance": 1.5}))
    assert any("0 or 1" in e for e in validate_element("Switch", 0, {"value": 2}))
    assert any("Bell" in e for e in validate_element("BellPairSource", 0, {"bell": "omega"}))
    assert validate_element("Correlator", 0, {"settingA": "a"}) != []


# -- classical logic -------------------------------------------------------------------


def test_logic_gate_truth_tables():
    assert apply_logic("AND", [1, 1]) == 1
    assert apply_logic("AND", [1, 0]) == 0
    assert apply_logic("AND", []) == 0
    assert apply_logic("NAND", [1]) == 0
    assert apply_logic("NAND", [0]) == 1  # single-input NAND is NOT
    assert apply_logic("OR", [0, 0, 1]) == 1
    assert apply_logic("NOR", [0, 0]) == 1
    assert apply_logic("XOR", [1, 1, 1]) == 1
    assert apply_logic("XOR", [1, 1]) == 0
    assert apply_logic("SUM", [1, 2, 1]) == 4
    assert apply_logic("MIN", [3, 1, 2]) == 1
    assert apply_logic("MAX", []) == 0


def test_logic_kinds_dispatch():
    for kind in LOGIC_KINDS:
        a = action_for(kind, 0, {})
        assert a.op == kind
