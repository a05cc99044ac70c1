"""Hand-built example networks shared by the test modules."""

from spinaltc.network import PhyloNetwork


def build(names, arcs, labels=None):
    """Build a network from named vertices; ``labels`` maps leaf names to labels."""
    ids = {name: i for i, name in enumerate(names)}
    net = PhyloNetwork.from_arcs([(ids[u], ids[v]) for u, v in arcs])
    # from_arcs drops isolated names, so every name must appear in an arc
    if labels is not None:
        net = net.with_labels({ids[v]: lab for v, lab in labels.items()})
    return net, ids


# two-reticulation network whose spine is a b c d e f g h i j1
TWO_RET_NAMES = "a b c d e f g h i j1 b1 e1 g1 j".split()
TWO_RET_ARCS = [
    ("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "h"),
    ("h", "i"), ("i", "j1"), ("b", "b1"), ("e", "e1"), ("g", "g1"), ("i", "j"),
    ("c", "f"), ("d", "h"),
]
TWO_RET_WORD = (3, 1, 2, 1, 1, 2, 2, 4, 3, 4)
TWO_RET_LRQ = "L R1 L R2 L Q1 Q2 L"


def two_reticulations():
    return build(TWO_RET_NAMES, TWO_RET_ARCS)


# not tree-child: A2 has two reticulation children
def not_tree_child():
    names = "root1 root A B A1 A2 r1 r2 l1 l2 l3 l4".split()
    arcs = [("root1", "root"), ("root", "A"), ("root", "B"), ("A", "A1"), ("A", "A2"),
            ("A2", "r1"), ("A2", "r2"), ("A1", "r1"), ("A1", "l1"), ("B", "r2"), ("B", "l4"),
            ("r1", "l2"), ("r2", "l3")]
    return build(names, arcs, {"l1": 1, "l2": 2, "l3": 3, "l4": 4})


# tree-child with five leaves and one reticulation, but no spine
def tree_child_not_spinal():
    names = "root1 root A B A1 A2 r1 l1 l2 l3 l4 l5".split()
    arcs = [("root1", "root"), ("root", "A"), ("root", "B"), ("A", "A1"), ("A", "A2"),
            ("A2", "r1"), ("A2", "l3"), ("A1", "r1"), ("A1", "l1"), ("B", "l5"), ("B", "l2"),
            ("r1", "l4")]
    return build(names, arcs, {f"l{i}": i for i in range(1, 6)})


# labeled cherry network, n=6, k=3; terminal leaf carries label 5
def labeled_cherry():
    names = "a b c d e f g h i j k l x1 x2 x3 x4 x5 x6".split()
    arcs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "h"),
            ("h", "i"), ("i", "j"), ("j", "k"), ("k", "l"), ("l", "x5"),
            ("b", "x1"), ("c", "f"), ("d", "i"), ("e", "x2"), ("g", "k"), ("h", "x3"),
            ("j", "x4"), ("l", "x6")]
    return build(names, arcs, {f"x{i}": i for i in range(1, 7)})


# non-cherry network, n=5, k=3; the last reticulation's other parent is p
def labeled_non_cherry():
    names = "a b c d e f p h i j k x1 x2 x3 x4 x5".split()
    arcs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "p"), ("p", "h"),
            ("h", "i"), ("i", "j"), ("j", "k"), ("k", "x5"),
            ("b", "x1"), ("c", "f"), ("d", "i"), ("e", "x2"), ("p", "k"), ("h", "x3"),
            ("j", "x4")]
    return build(names, arcs, {f"x{i}": i for i in range(1, 6)})


# spinal caterpillar network with eight leaves and two reticulations
CATERPILLAR_WORD = (3, 1, 2, 1, 4, 1, 2, 5, 6, 2, 7, 3, 4, 5, 6, 7)


def caterpillar_example():
    names = "a b c d e f g h i j1 j b1 e1 e11 e12 g1 g11 g12 g111 g112".split()
    arcs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "h"),
            ("h", "i"), ("i", "j1"), ("i", "j"), ("b", "b1"), ("e", "e1"), ("e1", "e11"),
            ("e1", "e12"), ("g", "g1"), ("g1", "g11"), ("g1", "g12"), ("g11", "g111"),
            ("g11", "g112"), ("c", "f"), ("d", "h")]
    return build(names, arcs)
