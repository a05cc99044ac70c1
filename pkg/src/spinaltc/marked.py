"""Marked trees and the cherry / non-cherry reductions of spinal tree-child networks.

A cherry network with a chosen spine becomes a marked tree by cutting the
arcs s_i -> r_i and dropping the terminal leaf.  A non-cherry network becomes
a cherry network with one reticulation fewer by deleting the arc p -> r_k
and suppressing the two vertices that turn elementary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .network import (
    Kind,
    NetworkError,
    PhyloNetwork,
    Spine,
    Terminal,
    classify_terminal,
    find_spines,
    require_spinal_tree_child,
    spine_of,
)


class MarkedTreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MarkedTree:
    """Rooted tree whose elementary vertices are r_0..r_k (labeled) or s_1..s_{k+1} (unlabeled).

    ``r_labels`` maps vertices to their index i of r_i; ``leaf_labels`` is
    ``None`` for the unlabeled variant.
    """

    root: int
    children: Mapping[int, tuple[int, ...]]
    r_labels: Mapping[int, int]
    leaf_labels: Mapping[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", {v: tuple(cs) for v, cs in self.children.items()})
        object.__setattr__(self, "r_labels", dict(self.r_labels))
        if self.leaf_labels is not None:
            object.__setattr__(self, "leaf_labels", dict(self.leaf_labels))

    def __eq__(self, other):
        if not isinstance(other, MarkedTree):
            return NotImplemented
        return (self.root, self.children, self.r_labels, self.leaf_labels) == (
            other.root, other.children, other.r_labels, other.leaf_labels)

    @property
    def leaves(self) -> list[int]:
        return sorted(v for v, cs in self.children.items() if not cs)

    @property
    def n(self) -> int:
        return len(self.leaves)

    @property
    def k(self) -> int:
        """Number of labeled elementary vertices (r_0 included)."""
        return len(self.r_labels)

    def unlabeled_elementary(self) -> list[int]:
        return sorted(v for v, cs in self.children.items() if len(cs) == 1 and v not in self.r_labels)

    def parents(self) -> dict[int, int]:
        return {c: v for v, cs in self.children.items() for c in cs}

    def key(self) -> tuple:
        """Identifier-free description, equal iff the marked trees are isomorphic."""
        def enc(v):
            cs = self.children[v]
            if not cs:
                return (("leaf", 0 if self.leaf_labels is None else self.leaf_labels[v]), ())
            tag = ("r", self.r_labels[v]) if v in self.r_labels else ("v", len(cs))
            return (tag, tuple(sorted(enc(c) for c in cs)))
        return enc(self.root)


def spinal_subpaths(mt: MarkedTree) -> list[list[int]]:
    """The paths P_0..P_k from r_i down to s_{i+1}; raises on any broken invariant."""
    rs = sorted(mt.r_labels.items(), key=lambda kv: kv[1])
    if [i for _, i in rs] != list(range(len(rs))):
        raise MarkedTreeError("labeled elementary vertices must be r_0..r_k")
    if mt.r_labels.get(mt.root) != 0:
        raise MarkedTreeError("the root must be the labeled elementary vertex r_0")
    for v, cs in mt.children.items():
        if len(cs) > 2:
            raise MarkedTreeError(f"vertex {v} has {len(cs)} children")
        if v in mt.r_labels and len(cs) != 1:
            raise MarkedTreeError(f"r-labeled vertex {v} is not elementary")
    parent = mt.parents()
    if set(parent) | {mt.root} != set(mt.children):
        raise MarkedTreeError("not a tree rooted at r_0")
    paths = []
    covered: set[int] = set()
    for r, i in rs:
        path = [r]
        v = mt.children[r][0]
        while True:
            cs = mt.children[v]
            if not cs:
                raise MarkedTreeError(f"path from r_{i} reaches a leaf before an unlabeled elementary vertex")
            if v in mt.r_labels:
                raise MarkedTreeError(f"path from r_{i} runs into another labeled vertex")
            path.append(v)
            if len(cs) == 1:
                if mt.children[cs[0]]:
                    raise MarkedTreeError(f"the child of s_{i + 1} must be a leaf")
                break
            off = [c for c in cs if not mt.children[c] or c in mt.r_labels]
            if len(off) != 1:
                raise MarkedTreeError(f"vertex {v} needs exactly one off-path child (leaf or r_j)")
            if off[0] in mt.r_labels and mt.r_labels[off[0]] <= i:
                raise MarkedTreeError(f"r_{mt.r_labels[off[0]]} hangs off P_{i}; needs index > {i}")
            v = cs[0] if cs[1] == off[0] else cs[1]
        paths.append(path)
        if covered & set(path):
            raise MarkedTreeError("spinal subpaths overlap")
        covered |= set(path)
    internal = {v for v, cs in mt.children.items() if cs}
    if covered != internal:
        raise MarkedTreeError("spinal subpaths do not cover the internal vertices")
    return paths


def network_to_marked_tree(net: PhyloNetwork, spine: Spine | None = None) -> MarkedTree:
    if not net.labeled:
        raise NetworkError("network_to_marked_tree expects a leaf-labeled network")
    return _to_marked(net, spine)


def _to_marked(net: PhyloNetwork, spine: Spine | None) -> MarkedTree:
    require_spinal_tree_child(net)
    if spine is None:
        spine = spine_of(net)
    if classify_terminal(net, spine) is not Terminal.CHERRY or spine.length < 2:
        raise NetworkError("marked trees are defined for cherry networks with n >= 2")
    path = spine.path
    r_vertices = [path[0]] + [path[p] for p in spine.reticulation_positions] + [path[-1]]
    cut = {(path[path.index(r) - 1], r) for r in r_vertices[1:]}
    terminal = path[-1]
    children: dict[int, list[int]] = {v: [] for v in net.kinds if v != terminal}
    for u, v in sorted(net.arcs):
        if (u, v) not in cut:
            children[u].append(v)
    r_labels = {r: i for i, r in enumerate(r_vertices[:-1])}
    leaf_labels = None
    if net.labels is not None:
        leaf_labels = {v: lab for v, lab in net.labels.items() if v != terminal}
    return MarkedTree(path[0], {v: tuple(cs) for v, cs in children.items()}, r_labels, leaf_labels)


def marked_tree_to_network(mt: MarkedTree, removed_label: int | None = None) -> PhyloNetwork:
    """Restore the arcs s_i -> r_i and the terminal leaf (labeled ``removed_label``)."""
    paths = spinal_subpaths(mt)
    if mt.leaf_labels is not None:
        if removed_label is None:
            raise MarkedTreeError("a labeled marked tree needs the label of the removed leaf")
        if removed_label in mt.leaf_labels.values():
            raise MarkedTreeError(f"label {removed_label} is already used by a leaf")
        if not 1 <= removed_label <= mt.n + 1:
            raise MarkedTreeError(f"label {removed_label} outside 1..{mt.n + 1}")
    elif removed_label is not None:
        raise MarkedTreeError("an unlabeled marked tree takes no removed-leaf label")
    kinds: dict[int, Kind] = {}
    arcs: set[tuple[int, int]] = set()
    for v, cs in mt.children.items():
        for c in cs:
            arcs.add((v, c))
    terminal = max(mt.children) + 1
    r_by_index = {i: v for v, i in mt.r_labels.items()}
    for i, path in enumerate(paths):
        s = path[-1]
        target = r_by_index.get(i + 1, terminal)
        arcs.add((s, target))
    for v, cs in mt.children.items():
        if v == mt.root:
            kinds[v] = Kind.ROOT
        elif not cs:
            kinds[v] = Kind.LEAF
        elif v in mt.r_labels:
            kinds[v] = Kind.RET
        else:
            kinds[v] = Kind.TREE
    kinds[terminal] = Kind.LEAF
    labels = None
    if mt.leaf_labels is not None:
        labels = dict(mt.leaf_labels)
        labels[terminal] = removed_label
    return PhyloNetwork(kinds, frozenset(arcs), labels)


# ---------------------------------------------------------------------------
# cherry <-> non-cherry
# ---------------------------------------------------------------------------

def _leaf_key(net: PhyloNetwork, leaf: int):
    return net.labels[leaf] if net.labels is not None else leaf


def _tree_nodes(net: PhyloNetwork, spine: Spine) -> list[int]:
    return [v for v in spine.path if net.kinds[v] is Kind.TREE]


def cherry_to_non_cherry(net: PhyloNetwork, cherry_arc_choice: int, tree_node_choice: int) -> PhyloNetwork:
    """Subdivide a cherry arc (new reticulation r_k) and a spine arc into a tree
    vertex (new vertex p), then add the arc p -> r_k.

    ``cherry_arc_choice`` picks one of the two cherry leaves (ordered by label,
    or by identifier when unlabeled); ``tree_node_choice`` indexes the tree
    vertices in spine order.
    """
    require_spinal_tree_child(net)
    spine = spine_of(net)
    if spine.length < 2 or classify_terminal(net, spine) is not Terminal.CHERRY:
        raise NetworkError("cherry_to_non_cherry needs a cherry network with n >= 2")
    s = spine.path[-2]
    cherry = sorted(net.children[s], key=lambda c: _leaf_key(net, c))
    if cherry_arc_choice not in (0, 1):
        raise NetworkError(f"cherry_arc_choice must be 0 or 1, got {cherry_arc_choice}")
    tree_nodes = _tree_nodes(net, spine)
    if not 0 <= tree_node_choice < len(tree_nodes):
        raise NetworkError(f"tree_node_choice must lie in 0..{len(tree_nodes) - 1}")
    leaf = cherry[cherry_arc_choice]
    u = tree_nodes[tree_node_choice]
    (q,) = net.parents[u]
    p, r = max(net.kinds) + 1, max(net.kinds) + 2
    arcs = set(net.arcs) - {(s, leaf), (q, u)}
    arcs |= {(s, r), (r, leaf), (q, p), (p, u), (p, r)}
    kinds = dict(net.kinds)
    kinds[p] = Kind.TREE
    kinds[r] = Kind.RET
    return PhyloNetwork(kinds, frozenset(arcs), net.labels)


def non_cherry_to_cherry(net: PhyloNetwork) -> tuple[PhyloNetwork, tuple[int, int]]:
    """Inverse of :func:`cherry_to_non_cherry`; also returns the choice pair."""
    require_spinal_tree_child(net)
    spine = spine_of(net)
    if spine.length < 2 or classify_terminal(net, spine) is not Terminal.NON_CHERRY:
        raise NetworkError("non_cherry_to_cherry needs a non-cherry network")
    leaf = spine.path[-1]
    r = spine.path[-2]
    s = spine.path[-3]
    (p,) = [x for x in net.parents[r] if x != s]
    (c,) = [x for x in net.children[p] if x != r]
    (q,) = net.parents[p]
    arcs = set(net.arcs) - {(s, r), (r, leaf), (q, p), (p, c), (p, r)}
    arcs |= {(q, c), (s, leaf)}
    kinds = {v: kd for v, kd in net.kinds.items() if v not in (p, r)}
    out = PhyloNetwork(kinds, frozenset(arcs), net.labels)
    out_spine = spine_of(out)
    cherry = sorted(out.children[s], key=lambda x: _leaf_key(out, x))
    choices = (cherry.index(leaf), _tree_nodes(out, out_spine).index(c))
    return out, choices
