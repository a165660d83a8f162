"""Canned experiment boards.

Each builder returns a fresh validated Board; the same boards ship as
JSON documents under ``data/fixtures/`` (regenerated by
``tools/gen_fixtures.py``) so they can be loaded, edited, and served
without touching Python.  Geometry notes live next to each builder;
coordinates are tuned so that crossing photons meet on the right step.
"""

from __future__ import annotations

from importlib import resources
from typing import Callable

from .board import Board, Element, Wire
from .setupdoc import loads

_REGISTRY: dict[str, Callable[[], Board]] = {}


def _fixture(name: str):
    def register(fn: Callable[[], Board]):
        _REGISTRY[name] = fn
        return fn

    return register


def fixture_names() -> list[str]:
    return sorted(_REGISTRY)


def fixture_board(name: str) -> Board:
    """Build a fixture from code (canonical source of the shipped JSON)."""
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; see fixture_names()") from None
    return builder().check()


def load_fixture(name: str) -> Board:
    """Load the packaged JSON document for a fixture."""
    ref = resources.files("photonlab").joinpath(f"data/fixtures/{name}.json")
    if not ref.is_file():
        raise KeyError(f"no packaged fixture {name!r}")
    return loads(ref.read_text(encoding="utf-8"))


# -- interferometers ----------------------------------------------------------------


def _mz_elements():
    # source row y=7, return row y=3; both splitters "/" so the bright
    # port is straight through at (11,3) and the dark port is (9,1)
    return [
        Element("src", "SinglePhotonSource", 1, 7),
        Element("bs1", "BeamSplitter", 3, 7, rotation=1),
        Element("mirror_far", "Mirror", 9, 7, rotation=1),
        Element("mirror_near", "Mirror", 3, 3, rotation=1),
        Element("bs2", "BeamSplitter", 9, 3, rotation=1),
        Element("d_bright", "Detector", 11, 3),
        Element("d_dark", "Detector", 9, 1),
    ]


@_fixture("mach-zehnder")
def mach_zehnder() -> Board:
    return Board(
        title="Mach-Zehnder interferometer",
        notes="Balanced arms: every photon exits the bright port.",
        elements=_mz_elements(),
    )


@_fixture("mach-zehnder-delay")
def mach_zehnder_delay() -> Board:
    b = Board(
        title="Mach-Zehnder with a quarter-wave delay",
        notes="A glass slab in one arm shifts the phase 90° and splits the output 50/50.",
        elements=_mz_elements(),
    )
    b.elements.append(Element("delay", "GlassSlab", 6, 7, params={"phase": 90}))
    return b


@_fixture("michelson-morley")
def michelson_morley() -> Board:
    # split at (5,5); both arms fold back on normal-incidence mirrors
    return Board(
        title="Michelson interferometer",
        notes="Equal arms recombine toward the output port below the splitter.",
        elements=[
            Element("src", "SinglePhotonSource", 1, 5),
            Element("bs", "BeamSplitter", 5, 5, rotation=1),
            Element("arm_east", "Mirror", 9, 5, rotation=2),
            Element("arm_north", "Mirror", 5, 1, rotation=0),
            Element("d_out", "Detector", 5, 8),
        ],
    )


@_fixture("sagnac")
def sagnac() -> Board:
    # the circulator lets the returning beam reach its own detector
    return Board(
        title="Sagnac loop",
        notes="Counter-propagating paths share every mirror; all light returns to the entry port.",
        elements=[
            Element("src", "SinglePhotonSource", 1, 5, rotation=2),
            Element("circ", "OpticalCirculator", 1, 3, params={"order": "cw"}),
            Element("bs", "BeamSplitter", 3, 3, rotation=3),
            Element("m_ne", "Mirror", 9, 3, rotation=3),
            Element("m_se", "Mirror", 9, 7, rotation=1),
            Element("m_sw", "Mirror", 3, 7, rotation=3),
            Element("d_return", "Detector", 1, 1),
            Element("d_dark", "Detector", 3, 1),
        ],
    )


# -- polarization chains ----------------------------------------------------------------


def _polarizer_row(angles, source_pol="D"):
    elems = [
        Element("src", "SinglePhotonSource", 0, 5, params={"polarization": source_pol})
    ]
    for i, angle in enumerate(angles):
        elems.append(
            Element(f"pol{i}", "LinearPolarizer", 2 + i, 5, params={"angle": angle})
        )
    elems.append(Element("d_out", "Detector", len(angles) + 4, 5))
    return elems


@_fixture("three-polarizer")
def three_polarizer() -> Board:
    return Board(
        title="Crossed polarizers",
        notes="0° and 90° in series block everything.",
        elements=_polarizer_row([0, 90]),
    )


@_fixture("three-polarizer-inserted")
def three_polarizer_inserted() -> Board:
    return Board(
        title="Crossed polarizers with a 45° insert",
        notes="The middle polarizer reopens the blocked pair: 1/8 gets through.",
        elements=_polarizer_row([0, 45, 90]),
    )


@_fixture("three-polarizer-h-input")
def three_polarizer_h_input() -> Board:
    return Board(
        title="Polarizer staircase on an H photon",
        notes="H input loses nothing at the first filter: 1/4 gets through.",
        elements=_polarizer_row([0, 45, 90], source_pol="H"),
    )


def zeno_board(k: int) -> Board:
    """k polarizers stepping the axis to 90° in equal increments."""
    if k < 1:
        raise ValueError("need at least one polarizer")
    angles = [j * 90.0 / k for j in range(1, k + 1)]
    b = Board(
        title=f"Polarization rotation by {k} small measurements",
        notes="Survival cos(π/2k)^2k approaches one as the steps shrink.",
        elements=_polarizer_row(angles, source_pol="H"),
    )
    return b


for _k in (2, 4, 8):
    _REGISTRY[f"zeno-{_k}"] = (lambda k: lambda: zeno_board(k))(_k)


@_fixture("optical-diode-forward")
def optical_diode_forward() -> Board:
    return Board(
        title="Optical diode, forward",
        notes="Polarizer, 45° Faraday rotation, polarizer at 45°: forward light passes.",
        elements=[
            Element("src", "SinglePhotonSource", 1, 5, params={"polarization": "H"}),
            Element("pol_in", "LinearPolarizer", 3, 5, params={"angle": 0}),
            Element("rot", "FaradayRotator", 5, 5, params={"angle": 45}),
            Element("pol_out", "LinearPolarizer", 7, 5, params={"angle": 45}),
            Element("d_pass", "Detector", 10, 5),
        ],
    )


@_fixture("optical-diode-reverse")
def optical_diode_reverse() -> Board:
    # same stack, illuminated from the right: the non-reciprocal rotation
    # now adds to 90° against the exit polarizer and nothing gets out
    b = optical_diode_forward()
    b.title = "Optical diode, reverse"
    b.notes = "The same stack blocks light sent backwards through it."
    src = b.element("src")
    src.x = 11
    src.rotation = 4
    src.params["polarization"] = "D"
    b.element("d_pass").x = 0
    return b


@_fixture("nonorthogonal-discrimination-h")
def nonorthogonal_discrimination_h() -> Board:
    return _discrimination_board("H")


@_fixture("nonorthogonal-discrimination-d")
def nonorthogonal_discrimination_d() -> Board:
    return _discrimination_board("D")


def _discrimination_board(pol: str) -> Board:
    # minimum-error basis for H-vs-D sits at −22.5°/67.5°; rotating the
    # state +22.5° maps it onto the splitter's H/V ports
    return Board(
        title=f"Distinguishing H from D, {pol} sent",
        notes="Guess H on the straight port, D on the reflected port; error sin²(22.5°).",
        elements=[
            Element("src", "SinglePhotonSource", 1, 5, params={"polarization": pol}),
            Element("rot", "FaradayRotator", 4, 5, params={"angle": 22.5}),
            Element("pbs", "PolarizingBeamSplitter", 7, 5, rotation=1),
            Element("d_guess_h", "Detector", 10, 5),
            Element("d_guess_d", "Detector", 7, 2),
        ],
    )


# -- interaction-free and eraser ------------------------------------------------------------


@_fixture("elitzur-vaidman")
def elitzur_vaidman() -> Board:
    b = Board(
        title="Interaction-free bomb test",
        notes="A dud-free bomb in one arm: half explode, a quarter reveal it without touching it.",
        elements=_mz_elements(),
    )
    b.elements.append(Element("bomb", "Bomb", 3, 5))
    return b


@_fixture("elitzur-vaidman-nobomb")
def elitzur_vaidman_nobomb() -> Board:
    return Board(
        title="Interaction-free test, empty arm",
        notes="Without the bomb the interferometer stays balanced: the dark port never fires.",
        elements=_mz_elements(),
    )


@_fixture("quantum-eraser")
def quantum_eraser() -> Board:
    b = quantum_eraser_marked()
    b.title = "Quantum eraser"
    b.notes = "Diagonal polarizers before the detectors erase the path marking; fringes return."
    b.elements.append(Element("eraser_bright", "LinearPolarizer", 10, 3, params={"angle": 45}))
    b.elements.append(Element("eraser_dark", "LinearPolarizer", 9, 2, params={"angle": 45}))
    return b


@_fixture("quantum-eraser-marked")
def quantum_eraser_marked() -> Board:
    # sugar in the vertical arm turns H into V: the arms stop interfering
    b = Board(
        title="Path-marked interferometer",
        notes="A 90° polarization rotation tags one arm; the interference washes out to 50/50.",
        elements=_mz_elements(),
    )
    b.elements.append(
        Element("marker", "SugarSolution", 3, 5, rotation=2, params={"angle": 90})
    )
    return b


def nondemolition_probe_board(efficiency: float) -> Board:
    b = Board(
        title="Interferometer with a which-path probe",
        notes="A nondemolition click in one arm costs the coherence that kept the dark port dark.",
        elements=_mz_elements(),
    )
    b.elements.append(
        Element("probe", "NondemolitionDetector", 3, 5, params={"efficiency": efficiency})
    )
    return b


_REGISTRY["nondemolition-probe"] = lambda: nondemolition_probe_board(0.5)


# -- wired logic ------------------------------------------------------------------------------


def _dj_board(f0: int, f1: int) -> Board:
    # the oracle phases each arm by 180°·f(arm); constant f keeps the
    # bright port, balanced f flips every photon to the dark port
    b = Board(elements=_mz_elements())
    b.elements += [
        Element("oracle_low", "GlassSlab", 6, 7, params={"phase": 0},
                alt_params={"phase": 180}),
        Element("oracle_high", "GlassSlab", 3, 5, params={"phase": 0},
                alt_params={"phase": 180}),
        Element("f0", "Switch", 0, 0, params={"value": f0}),
        Element("f1", "Switch", 1, 0, params={"value": f1}),
    ]
    b.wires += [Wire("f0", "oracle_low"), Wire("f1", "oracle_high")]
    return b


@_fixture("deutsch-jozsa-constant")
def deutsch_jozsa_constant() -> Board:
    b = _dj_board(1, 1)
    b.title = "One-query oracle test, constant function"
    b.notes = "Equal phases on both arms: the bright port always fires."
    return b


@_fixture("deutsch-jozsa-balanced")
def deutsch_jozsa_balanced() -> Board:
    b = _dj_board(0, 1)
    b.title = "One-query oracle test, balanced function"
    b.notes = "Opposite phases on the arms: the dark port always fires."
    return b


@_fixture("bb84")
def bb84() -> Board:
    # Alice encodes a random bit in a random basis; Bob measures in his
    # own random basis.  Matching bases reproduce the bit exactly.
    return Board(
        title="Four-state key exchange",
        notes="Compare bases afterwards; keep the bits where they agree.",
        elements=[
            Element("alice_bit", "RandomSwitch", 0, 0),
            Element("alice_basis", "RandomSwitch", 1, 0),
            Element("bob_basis", "RandomSwitch", 2, 0),
            Element("src", "SinglePhotonSource", 0, 5, params={"polarization": "H"}),
            Element("encode_bit", "PauliX", 2, 5, params={"enabled": False},
                    alt_params={"enabled": True}),
            Element("encode_basis", "FaradayRotator", 4, 5, params={"angle": 0},
                    alt_params={"angle": 45}),
            Element("decode_basis", "FaradayRotator", 8, 5, params={"angle": 0},
                    alt_params={"angle": -45}),
            Element("pbs", "PolarizingBeamSplitter", 10, 5, rotation=1),
            Element("d_zero", "Detector", 12, 5),
            Element("d_one", "Detector", 10, 2),
        ],
        wires=[
            Wire("alice_bit", "encode_bit"),
            Wire("alice_basis", "encode_basis"),
            Wire("bob_basis", "decode_basis"),
        ],
    )


# -- entangled pairs --------------------------------------------------------------------------


@_fixture("bell-pair")
def bell_pair() -> Board:
    return Board(
        title="Polarization-entangled pair",
        notes="Both reductions are maximally mixed: one full bit of entanglement.",
        elements=[
            Element("pair", "BellPairSource", 6, 4),
            Element("d_east", "Detector", 11, 4),
            Element("d_west", "Detector", 1, 4),
        ],
    )


@_fixture("ghz-state")
def ghz_state() -> Board:
    return Board(
        title="Three-photon GHZ state",
        notes="Any single photon looks maximally mixed; the triple is perfectly correlated.",
        elements=[
            Element("trio", "GhzSource", 6, 4),
            Element("d_east", "Detector", 11, 4),
            Element("d_north", "Detector", 6, 0),
            Element("d_south", "Detector", 6, 9),
        ],
    )


@_fixture("w-state")
def w_state() -> Board:
    return Board(
        title="Three-photon W state",
        notes="One excitation shared three ways; entanglement survives losing a photon.",
        elements=[
            Element("trio", "WSource", 6, 4),
            Element("d_east", "Detector", 11, 4),
            Element("d_north", "Detector", 6, 0),
            Element("d_south", "Detector", 6, 9),
        ],
    )


@_fixture("hong-ou-mandel")
def hong_ou_mandel() -> Board:
    # both photons reach the splitter cell on step 4; bosonic exchange
    # symmetry cancels the coincidence terms
    return Board(
        title="Two-photon bunching",
        notes="Indistinguishable photons leave the splitter together: no coincidences.",
        symmetrize=True,
        elements=[
            Element("src_west", "SinglePhotonSource", 1, 5),
            Element("src_south", "SinglePhotonSource", 5, 9, rotation=2),
            Element("bs", "BeamSplitter", 5, 5, rotation=1),
            Element("d_east", "Detector", 9, 5),
            Element("d_north", "Detector", 5, 1),
        ],
    )


@_fixture("hong-ou-mandel-distinguishable")
def hong_ou_mandel_distinguishable() -> Board:
    b = hong_ou_mandel()
    b.symmetrize = False
    b.title = "Two-photon bunching, distinguishable"
    b.notes = "Labelled photons split independently: coincidences half the time."
    return b


# -- nonlocal correlation tests -----------------------------------------------------------------


def _analyzer_elements(side: str, x_pbs: int, x_rot: int, pbs_rotation: int,
                       plus_pos, minus_pos, base_angle: float, alt_angle: float):
    return [
        Element(f"rot{side}", "FaradayRotator", x_rot, 4,
                params={"angle": base_angle}, alt_params={"angle": alt_angle}),
        Element(f"pbs{side}", "PolarizingBeamSplitter", x_pbs, 4, rotation=pbs_rotation),
        Element(f"d{side}plus", "Detector", plus_pos[0], plus_pos[1]),
        Element(f"d{side}minus", "Detector", minus_pos[0], minus_pos[1]),
    ]


@_fixture("chsh-bell")
def chsh_bell() -> Board:
    # measuring at angle θ = rotating by −θ before an H/V splitter;
    # settings a=0°,a'=45° and b=22.5°,b'=−22.5° give S = 2√2 exactly
    return Board(
        title="Bell-inequality test",
        notes="Entangled pair with randomly switched analyzers; S reaches 2√2.",
        elements=[
            Element("pair", "BellPairSource", 6, 4),
            Element("switchA", "RandomSwitch", 4, 6),
            Element("switchB", "RandomSwitch", 8, 6),
            *_analyzer_elements("A", 2, 4, 3, (0, 4), (2, 2), 0.0, -45.0),
            *_analyzer_elements("B", 10, 8, 1, (12, 4), (10, 2), -22.5, 22.5),
            Element("tally", "Correlator", 6, 8, params={
                "settingA": "switchA", "settingB": "switchB",
                "outcomeA": "dAminus", "outcomeB": "dBminus",
            }),
        ],
        wires=[Wire("switchA", "rotA"), Wire("switchB", "rotB")],
    )


@_fixture("ekert")
def ekert() -> Board:
    # the singlet anticorrelates every matched basis; the same analyzer
    # angles used for eavesdropping checks drive S to −2√2
    b = chsh_bell()
    b.title = "Entanglement-distributed key"
    b.notes = "Singlet pairs; matched bases give opposite bits, unmatched ones feed a Bell check."
    b.element("pair").params["bell"] = "psi-"
    return b


def classical_chsh_board(a0: int, a1: int, b0: int, b1: int) -> Board:
    """Deterministic local strategy: each side's ±1 outcome is a fixed
    function of its own setting.  A NAND inverts where the strategy
    answers −1 on setting 0."""
    for v in (a0, a1, b0, b1):
        if v not in (-1, 1):
            raise ValueError("strategy outcomes must be ±1")

    def side(side_name: str, x0: int, o0: int, o1: int, pbs_rotation: int,
             plus_pos, minus_pos, src_pos, src_rotation: int):
        elems = [
            Element(f"src{side_name}", "SinglePhotonSource", src_pos[0], src_pos[1],
                    rotation=src_rotation, params={"polarization": "H"}),
            Element(f"pbs{side_name}", "PolarizingBeamSplitter", x0, 4,
                    rotation=pbs_rotation),
            Element(f"d{side_name}plus", "Detector", plus_pos[0], plus_pos[1]),
            Element(f"d{side_name}minus", "Detector", minus_pos[0], minus_pos[1]),
        ]
        wires = []
        flip_x = x0 + (2 if side_name == "A" else -2)
        if (o0, o1) == (1, 1):
            pass
        else:
            elems.append(Element(f"flip{side_name}", "PauliX", flip_x, 4,
                                 params={"enabled": False}, alt_params={"enabled": True}))
            if (o0, o1) == (-1, -1):
                elems.append(Element(f"always{side_name}", "Switch", flip_x, 0,
                                     params={"value": 1}))
                wires.append(Wire(f"always{side_name}", f"flip{side_name}"))
            elif (o0, o1) == (1, -1):
                wires.append(Wire(f"switch{side_name}", f"flip{side_name}"))
            else:  # flip on setting 0
                elems.append(Element(f"not{side_name}", "NAND", flip_x, 0))
                wires.append(Wire(f"switch{side_name}", f"not{side_name}"))
                wires.append(Wire(f"not{side_name}", f"flip{side_name}"))
        return elems, wires

    elems = [
        Element("switchA", "RandomSwitch", 4, 6),
        Element("switchB", "RandomSwitch", 8, 6),
        Element("tally", "Correlator", 6, 8, params={
            "settingA": "switchA", "settingB": "switchB",
            "outcomeA": "dAminus", "outcomeB": "dBminus",
        }),
    ]
    wires = []
    ea, wa = side("A", 2, a0, a1, 3, (0, 4), (2, 2), (6, 4), 4)
    eb, wb = side("B", 10, b0, b1, 1, (12, 4), (10, 2), (7, 4), 0)
    elems += ea + eb
    wires += wa + wb
    return Board(
        title="Local deterministic strategy",
        notes="Outcomes fixed by each side's setting alone; |S| can never pass 2.",
        elements=elems,
        wires=wires,
    )


_REGISTRY["chsh-classical"] = lambda: classical_chsh_board(1, 1, 1, 1)


# -- teleportation ------------------------------------------------------------------------------


def teleportation_board(polarization="D") -> Board:
    """Measured corrections rebuild the input polarization on the far photon.

    The input photon falls onto the shared pair's near photon at the
    crossing gate, the folded Hadamard-and-splitters block reads both,
    and the two wired correction gates fire before the far photon
    reaches them.  The far photon crosses two mirrors, whose H sign
    flips cancel pairwise.
    """
    return Board(
        title="Teleporting a polarization",
        notes="Works in every measurement branch once both corrections are wired in.",
        elements=[
            Element("input", "SinglePhotonSource", 8, 0, rotation=6,
                    params={"polarization": polarization}),
            Element("pair", "BellPairSource", 6, 2),
            Element("join", "CNOT", 8, 2),
            Element("mix", "Hadamard", 8, 3),
            Element("split0", "PolarizingBeamSplitter", 8, 4, rotation=3),
            Element("d0h", "Detector", 8, 6),
            Element("d0v", "Detector", 11, 4),
            Element("split1", "PolarizingBeamSplitter", 10, 2, rotation=3),
            Element("d1h", "Detector", 12, 2),
            Element("d1v", "Detector", 10, 6),
            Element("fold_west", "Mirror", 3, 2, rotation=1),
            Element("fold_south", "Mirror", 3, 8, rotation=3),
            Element("fix_x", "PauliX", 6, 8, params={"enabled": False},
                    alt_params={"enabled": True}),
            Element("fix_z", "PauliZ", 7, 8, params={"enabled": False},
                    alt_params={"enabled": True}),
            Element("d_out", "Detector", 10, 8),
        ],
        wires=[Wire("d1v", "fix_x"), Wire("d0v", "fix_z")],
    )


_REGISTRY["teleportation"] = lambda: teleportation_board()
