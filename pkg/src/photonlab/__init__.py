"""Grid-based few-photon quantum optics simulator.

Sparse named-dimension tensor states, unitary element catalog, POVM
measurement with full branch exploration, classical control wiring,
entanglement analysis, a canned experiment library, and a CLI with a
local HTTP protocol for interactive front ends.
"""

from .tensor import (
    PRUNE_EPS,
    Dimension,
    SparseOperator,
    SparseVector,
    inner_product,
    operator_distance,
    partial_inner,
    subsystem_purity,
    tensor_product,
)
from .photons import (
    BASES,
    DIRECTION_LABELS,
    DIRECTION_STEPS,
    POLARIZATION_LABELS,
    KetComponent,
    ket_components,
    photon_count,
    product_state,
    single_photon,
    symmetrize,
    to_polarization_basis,
)
from .board import Board, Element, SetupError, Wire
from .setupdoc import SETUP_SCHEMA, dumps, load, loads, save, to_document
from .engine import (
    BoardRuntime,
    PhotonMeta,
    SimConfig,
    SimNode,
    SimTree,
    run_tree,
    tree_document,
    tree_json,
)
from .entanglement import (
    BlinkShot,
    blink_sample,
    entanglement_graph,
    entanglement_report,
    particle_entropies,
    particle_purities,
    renyi2_entropy,
)
from .chsh import ChshResult, chsh_from_log, chsh_from_tree, correlator_wiring
from .detection import log_csv, sample_log, write_log_csv
from .fixtures import (
    classical_chsh_board,
    fixture_board,
    fixture_names,
    load_fixture,
    nondemolition_probe_board,
    teleportation_board,
    zeno_board,
)

__version__ = "0.1.0"
