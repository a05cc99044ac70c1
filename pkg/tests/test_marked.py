import pytest

from fixtures import labeled_cherry, labeled_non_cherry, two_reticulations
from spinaltc.counting import count_stc, d_coef, s_coef
from spinaltc.enumeration import (
    enumerate_marked_trees,
    enumerate_nlstc_via_marked,
    enumerate_stc,
    enumerate_stc_cherry,
    enumerate_stc_non_cherry,
)
from spinaltc.counting import count_nlstc
from spinaltc.marked import (
    MarkedTree,
    MarkedTreeError,
    cherry_to_non_cherry,
    marked_tree_to_network,
    network_to_marked_tree,
    non_cherry_to_cherry,
    spinal_subpaths,
)
from spinaltc.network import NetworkError, Terminal, classify_terminal, isomorphic, spine_of


def test_cherry_network_to_marked_tree():
    net, ids = labeled_cherry()
    mt = network_to_marked_tree(net)
    assert (mt.n, mt.k) == (5, 4)
    assert 5 not in mt.leaf_labels.values()
    names = {v: name for name, v in ids.items()}
    paths = [[names[v] for v in p] for p in spinal_subpaths(mt)]
    assert paths == [["a", "b", "c", "d", "e"], ["f", "g", "h"], ["i", "j"], ["k", "l"]]
    back = marked_tree_to_network(mt, 5)
    assert isomorphic(back, net)


def test_marked_tree_requires_labels():
    net, _ = two_reticulations()
    with pytest.raises(NetworkError):
        network_to_marked_tree(net)


def test_marked_tree_rejects_non_cherry():
    net, _ = labeled_non_cherry()
    with pytest.raises(NetworkError):
        network_to_marked_tree(net)


def test_removed_label_checks():
    mt = network_to_marked_tree(labeled_cherry()[0])
    with pytest.raises(MarkedTreeError):
        marked_tree_to_network(mt)
    with pytest.raises(MarkedTreeError):
        marked_tree_to_network(mt, 1)
    with pytest.raises(MarkedTreeError):
        marked_tree_to_network(mt, 9)


def test_invariant_violations():
    # r_1 hanging off its own path
    bad = MarkedTree(0, {0: (1,), 1: (2, 3), 2: (), 3: (4,), 4: ()}, {0: 0, 3: 1})
    with pytest.raises(MarkedTreeError):
        spinal_subpaths(bad)
    # root not labeled r_0
    with pytest.raises(MarkedTreeError):
        spinal_subpaths(MarkedTree(0, {0: (1,), 1: ()}, {1: 0}))


def test_non_cherry_reduction_on_example():
    net, _ = labeled_non_cherry()
    cherry, (a, b) = non_cherry_to_cherry(net)
    assert (cherry.n, cherry.k) == (5, 2)
    assert classify_terminal(cherry, spine_of(cherry)) is Terminal.CHERRY
    assert (a, b) == (1, 4)
    assert isomorphic(cherry_to_non_cherry(cherry, a, b), net)


def test_choice_bounds():
    net, _ = labeled_cherry()
    with pytest.raises(NetworkError):
        cherry_to_non_cherry(net, 2, 0)
    with pytest.raises(NetworkError):
        cherry_to_non_cherry(net, 0, 99)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(1, 6) for k in range(1, n + 1)])
def test_marked_tree_counts(n, k):
    trees = list(enumerate_marked_trees(n, k))
    assert len(trees) == d_coef(n, k)
    assert len({t.key() for t in trees}) == len(trees)
    for t in trees:
        spinal_subpaths(t)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(1, 5) for k in range(1, n + 1)])
def test_labeled_marked_tree_counts(n, k):
    trees = list(enumerate_marked_trees(n, k, labeled=True))
    assert len(trees) == s_coef(n, k)
    assert len({t.key() for t in trees}) == len(trees)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(2, 6) for k in range(0, min(n, 4))])
def test_stc_through_marked_trees(n, k):
    cherry = list(enumerate_stc_cherry(n, k))
    non_cherry = list(enumerate_stc_non_cherry(n, k))
    assert len(cherry) + len(non_cherry) == count_stc(n, k)
    assert len(cherry) == n * s_coef(n - 1, k + 1) // 2
    for net in non_cherry[:50]:
        back, choice = non_cherry_to_cherry(net)
        assert isomorphic(cherry_to_non_cherry(back, *choice), net)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(2, 7) for k in range(0, n)])
def test_nlstc_through_marked_trees(n, k):
    assert len(list(enumerate_nlstc_via_marked(n, k))) == count_nlstc(n, k)


def test_enumerate_stc_small():
    assert len(list(enumerate_stc(2, 1))) == 2
    with pytest.raises(ValueError):
        list(enumerate_stc(1, 0))
