"""3-edge-coloring counts by epsilon-tensor contraction."""

import pytest

import tnq
from tnq import counting as ct
from tnq.errors import ParseError, ShapeError

THETA = ct.ColorGraph(2, [(0, 1), (0, 1), (0, 1)])
K4 = ct.ColorGraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
PRISM = ct.ColorGraph(6, [(0, 1), (1, 2), (2, 0),
                          (3, 4), (4, 5), (5, 3),
                          (0, 3), (1, 4), (2, 5)])
CUBE = ct.ColorGraph(8, [(0, 1), (1, 2), (2, 3), (3, 0),
                         (4, 5), (5, 6), (6, 7), (7, 4),
                         (0, 4), (1, 5), (2, 6), (3, 7)])
K33 = ct.ColorGraph(6, [(a, b + 3) for a in range(3) for b in range(3)])
PETERSEN = ct.ColorGraph(10, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                              (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                              (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)])


def test_graph_validation():
    with pytest.raises(ShapeError):
        ct.ColorGraph(2, [(0, 0)])
    with pytest.raises(ShapeError):
        ct.ColorGraph(2, [(0, 5)])
    assert THETA.degrees() == [3, 3]


def test_parse_edgelist():
    g = ct.parse_edgelist("# theta\n0 1\n0 1\n0 1\n")
    assert g.n_nodes == 2 and len(g.edges) == 3
    with pytest.raises(ParseError):
        ct.parse_edgelist("0 1 2\n")
    with pytest.raises(ParseError):
        ct.parse_edgelist("0 x\n")


def test_non_cubic_rejected():
    g = ct.ColorGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(ShapeError):
        ct.count_colorings_epsilon(g)


@pytest.mark.parametrize("graph,count", [
    (THETA, 6), (K4, 6), (PRISM, 6), (CUBE, 24), (PETERSEN, 0),
])
def test_epsilon_count_planar_and_petersen(graph, count):
    assert abs(ct.count_colorings_epsilon(graph)) == count


@pytest.mark.parametrize("graph,count", [
    (THETA, 6), (K4, 6), (PRISM, 6), (CUBE, 24), (PETERSEN, 0), (K33, 12),
])
def test_bruteforce_oracle(graph, count):
    assert ct.count_colorings_bruteforce(graph) == count


def test_k33_signed_sum_vanishes():
    # bipartite non-planar counterexample: signed contraction gives 0 even
    # though 12 proper colorings exist
    assert ct.count_colorings_epsilon(K33) == 0
    assert ct.count_colorings_bruteforce(K33) == 12


def test_epsilon_matches_oracle_on_planar_fixtures():
    for g in (THETA, K4, PRISM, CUBE):
        assert (abs(ct.count_colorings_epsilon(g))
                == ct.count_colorings_bruteforce(g))
