"""Inequality arithmetic, exact and sampled."""

import itertools
import math

import pytest

from photonlab.chsh import ChshResult, chsh_from_log, chsh_from_tree, correlator_wiring
from photonlab.detection import sample_log
from photonlab.engine import run_tree
from photonlab.fixtures import classical_chsh_board, fixture_board

ROOT2 = math.sqrt(2)


@pytest.fixture(scope="module")
def bell_tree():
    return run_tree(fixture_board("chsh-bell"))


def test_wiring_read_from_board():
    w = correlator_wiring(fixture_board("chsh-bell"))
    assert (w.setting_a, w.setting_b) == ("switchA", "switchB")
    assert (w.outcome_a, w.outcome_b) == ("dAminus", "dBminus")


def test_wiring_requires_a_correlator():
    with pytest.raises(ValueError, match="exactly one Correlator"):
        correlator_wiring(fixture_board("mach-zehnder"))


def test_entangled_pair_reaches_tsirelson(bell_tree):
    result = chsh_from_tree(bell_tree)
    assert result.s == pytest.approx(2 * ROOT2, abs=1e-9)
    for xy in ((0, 0), (0, 1), (1, 0)):
        assert result.correlations[xy] == pytest.approx(1 / ROOT2, abs=1e-9)
    assert result.correlations[1, 1] == pytest.approx(-1 / ROOT2, abs=1e-9)
    for xy, weight in result.weights.items():
        assert weight == pytest.approx(0.25, abs=1e-9)


def test_singlet_flips_the_sign():
    result = chsh_from_tree(run_tree(fixture_board("ekert")))
    assert result.s == pytest.approx(-2 * ROOT2, abs=1e-9)


def test_every_local_strategy_is_bounded():
    for strategy in itertools.product((-1, 1), repeat=4):
        tree = run_tree(classical_chsh_board(*strategy))
        result = chsh_from_tree(tree)
        assert abs(result.s) <= 2 + 1e-9, strategy
        a0, a1, b0, b1 = strategy
        expected = (a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1)
        assert result.s == pytest.approx(expected, abs=1e-9)


def test_sampled_estimate_tracks_the_exact_value():
    board = fixture_board("chsh-bell")
    records = sample_log(board, seed="chsh-smoke", runs=2000)
    result = chsh_from_log(board, records)
    assert result.s_standard_error is not None
    assert result.s_standard_error < 0.1
    assert abs(result.s - 2 * ROOT2) < 4 * result.s_standard_error
    assert sum(result.weights.values()) == 2000


def test_sampled_errors_shrink_with_n():
    board = fixture_board("chsh-bell")
    records = sample_log(board, seed="chsh-n", runs=800)
    small = chsh_from_log(board, records[:200])
    large = chsh_from_log(board, records)
    assert large.s_standard_error < small.s_standard_error


def test_log_without_a_setting_combo_raises():
    board = fixture_board("chsh-bell")
    records = [r for r in sample_log(board, seed="gap", runs=40)
               if (r["inputs"]["switchA"], r["inputs"]["switchB"]) != (1, 1)]
    with pytest.raises(ValueError, match="no weight"):
        chsh_from_log(board, records)


def test_result_document_shape(bell_tree):
    doc = chsh_from_tree(bell_tree).to_document()
    assert set(doc) == {"E", "S", "weights"}
    assert set(doc["E"]) == {"00", "01", "10", "11"}
    board = fixture_board("chsh-bell")
    sampled = chsh_from_log(board, sample_log(board, seed="doc", runs=64)).to_document()
    assert "standardErrors" in sampled and "sStandardError" in sampled
