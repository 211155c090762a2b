from hgv.aps import build_aps, config_aps, is_forest, is_tree, leaves, to_dot, verdict
from hgv.surface import parse_hyperenv

from conftest import corpus_config

PAIRS = [("x", "x'"), ("y", "y'"), ("z", "z'")]
EX_TREE = "x:!1.end!, y:!1.end! | x':?1.end?, z:1 | y':?1.end?"
EX_CYCLE = "x:!1.end!, z':?1.end? | x':?1.end?, y:!1.end! | y':?1.end?, z:!1.end!"


def edges(g):
    return sorted(tuple(sorted((u, v))) for u, v, _ in g.graph.edges(keys=True))


def test_tree_example():
    g = build_aps(parse_hyperenv(EX_TREE), PAIRS[:2])
    assert edges(g) == [(0, 1), (0, 2)]
    assert is_tree(g)
    assert leaves(g) == {1, 2}
    assert verdict(g) == "tree"


def test_cycle_example():
    g = build_aps(parse_hyperenv(EX_CYCLE), PAIRS)
    assert edges(g) == [(0, 1), (0, 2), (1, 2)]
    assert not is_tree(g)
    assert verdict(g) == "cyclic"


def test_single_vertex():
    g = build_aps(parse_hyperenv("p:1"), [])
    assert g.graph.number_of_nodes() == 1 and not edges(g)
    assert is_tree(g)
    assert leaves(g) == set()


def test_two_vertices_one_edge():
    g = build_aps(parse_hyperenv("x:!1.end! | x':?1.end?"), PAIRS[:1])
    assert leaves(g) == {0, 1}


def test_forest_is_not_tree():
    g = build_aps(parse_hyperenv("p:1 | q:1"), [])
    assert is_forest(g) and not is_tree(g)


def test_double_edge_is_cycle():
    g = build_aps(parse_hyperenv("x:!1.end!, y:!1.end! | x':?1.end?, y':?1.end?"), PAIRS[:2])
    assert not is_tree(g)


def test_corpus_cycle():
    _, g = config_aps(corpus_config("cycle"))
    assert verdict(g) == "cyclic"


def test_corpus_ping_tree():
    h, g = config_aps(corpus_config("ping"))
    assert len(h) == 2 and is_tree(g)


def test_dot():
    g = build_aps(parse_hyperenv(EX_TREE), PAIRS[:2])
    text = to_dot(g)
    assert text.startswith("graph") and "--" in text
