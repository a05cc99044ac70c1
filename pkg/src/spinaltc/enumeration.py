"""Exhaustive generators for partitions, words, marked trees and networks,
and the brute-force oracle that builds spinal networks vertex role by role.

The oracle only depends on the network core (validation, tree-child test,
spine search, canonical form); it never touches words, codecs or formulas.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator

from .codec import decode_nlsctc, decode_nlstc
from .counting import ExactCount
from .marked import MarkedTree, cherry_to_non_cherry, marked_tree_to_network
from .network import (
    Kind,
    PhyloNetwork,
    canonical_form,
    find_spines,
    is_tree_child,
    validate,
)
from .words import PairPartition, Word, partition_to_word_c1


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class EnumerationBudget:
    max_n: int = 5
    max_k: int = 3
    max_objects: int = 1_000_000
    time_limit: float = 300.0
    _started: float = field(default_factory=time.monotonic, repr=False)

    def __post_init__(self):
        if min(self.max_n, self.max_k, self.max_objects) < 0 or self.time_limit <= 0:
            raise ValueError("budget fields must be positive")

    def admit(self, n: int, k: int) -> None:
        if n > self.max_n or k > self.max_k:
            raise BudgetExceeded(f"(n, k) = ({n}, {k}) exceeds budget ({self.max_n}, {self.max_k})")

    def tick(self, produced: int) -> None:
        if produced > self.max_objects:
            raise BudgetExceeded(f"more than {self.max_objects} objects")
        if time.monotonic() - self._started > self.time_limit:
            raise BudgetExceeded(f"time limit of {self.time_limit}s reached")


def _range_check(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise ValueError(f"parameters out of range: n={n}, k={k}")


# ---------------------------------------------------------------------------
# pair partitions and words
# ---------------------------------------------------------------------------

def _pairings(items: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for tail in _pairings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


def enumerate_pair_partitions(n: int, k: int) -> Iterator[PairPartition]:
    """Partitions of {1..n+k} into k pairs and n-k singletons, each exactly once."""
    _range_check(n, k)
    if k > n:
        return
    for chosen in itertools.combinations(range(1, n + k + 1), 2 * k):
        for pairing in _pairings(chosen):
            yield PairPartition(n, k, frozenset(frozenset(p) for p in pairing))


def enumerate_c1_classes(n: int, k: int) -> Iterator[Word]:
    """Canonical representatives of C1_{n,k}/~, in lexicographic order."""
    words = {partition_to_word_c1(p) for p in enumerate_pair_partitions(n, k)}
    yield from sorted(words, key=lambda w: w.letters)


def enumerate_c2_classes(n: int, k: int) -> Iterator[Word]:
    """Canonical representatives of C2_{n,k}/~.

    A pairing of 2k compressed slots fixes the thrice-used letters; then the
    n-k first appearances of the other letters are dropped into any of the
    n+2k positions of the expanded prefix.
    """
    _range_check(n, k)
    if k > n:
        return
    words = []
    for pairing in _pairings(tuple(range(1, 2 * k + 1))):
        slots = [0] * (2 * k)
        for letter, (lo, hi) in enumerate(sorted(pairing, key=lambda p: p[1]), start=1):
            slots[lo - 1] = letter
            slots[hi - 1] = -letter
        low: list[int] = []
        for a in slots:
            low.extend((-a, -a) if a < 0 else (a,))
        length = n + 2 * k
        for high_pos in itertools.combinations(range(length), n - k):
            prefix = []
            it = iter(low)
            marks = set(high_pos)
            nxt = k + 1
            for pos in range(length):
                if pos in marks:
                    prefix.append(nxt)
                    nxt += 1
                else:
                    prefix.append(next(it))
            words.append(Word(tuple(prefix) + tuple(range(k + 1, n + 1)), n, k))
    yield from sorted(words, key=lambda w: w.letters)


def enumerate_nlstc(n: int, k: int) -> Iterator[PhyloNetwork]:
    """Unlabeled spinal tree-child networks, by decoding every C1_{n-1,k} class."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for w in enumerate_c1_classes(n - 1, k):
        yield decode_nlstc(w)


def enumerate_nlsctc(n: int, k: int) -> Iterator[PhyloNetwork]:
    if n < 1:
        raise ValueError("n must be at least 1")
    for w in enumerate_c2_classes(n - 1, k):
        yield decode_nlsctc(w)


# ---------------------------------------------------------------------------
# marked trees
# ---------------------------------------------------------------------------

def _mt_shapes(n: int, labels: tuple[int, ...]) -> Iterator[tuple]:
    """Nested shapes (r, items): a path from r whose intermediate vertices carry
    'L' or a sub-shape, closed by an unlabeled elementary vertex with a leaf.
    The smallest label goes to the root (boxed product)."""
    if n < len(labels) or not labels:
        return
    root, rest = labels[0], labels[1:]
    for items in _mt_sequences(n - 1, rest):
        yield (root, tuple(items))


def _mt_sequences(n: int, labels: tuple[int, ...]) -> Iterator[list]:
    if n < len(labels):
        return
    if n == 0:
        yield []
        return
    for tail in _mt_sequences(n - 1, labels):
        yield ["L"] + tail
    for size in range(1, len(labels) + 1):
        for chosen in itertools.combinations(labels, size):
            remaining = tuple(x for x in labels if x not in chosen)
            for m in range(size, n - len(remaining) + 1):
                for sub in _mt_shapes(m, chosen):
                    for tail in _mt_sequences(n - m, remaining):
                        yield [sub] + tail


def _shape_to_tree(shape: tuple) -> tuple[int, dict[int, list[int]], dict[int, int], list[int]]:
    children: dict[int, list[int]] = {}
    r_labels: dict[int, int] = {}
    leaves: list[int] = []

    def new() -> int:
        v = len(children)
        children[v] = []
        return v

    def build(sh) -> int:
        label, items = sh
        r = new()
        r_labels[r] = label
        prev = r
        for item in items:
            t = new()
            children[prev].append(t)
            if item == "L":
                leaf = new()
                leaves.append(leaf)
                children[t].append(leaf)
            else:
                children[t].append(build(item))
            prev = t
        s = new()
        children[prev].append(s)
        leaf = new()
        leaves.append(leaf)
        children[s].append(leaf)
        return r

    root = build(shape)
    return root, children, r_labels, leaves


def enumerate_marked_trees(n: int, k: int, labeled: bool = False,
                           leaf_labels: tuple[int, ...] | None = None) -> Iterator[MarkedTree]:
    """Marked trees with n leaves and k labeled elementary vertices r_0..r_{k-1}.

    Unlabeled: d_{n,k} trees.  Labeled: every assignment of ``leaf_labels``
    (default 1..n) to the leaves, s_{n,k} trees in total.
    """
    if n < 1 or k < 1:
        raise ValueError("marked trees need n >= 1 and k >= 1")
    if labeled:
        leaf_labels = tuple(leaf_labels) if leaf_labels is not None else tuple(range(1, n + 1))
        if len(leaf_labels) != n:
            raise ValueError(f"need {n} leaf labels, got {len(leaf_labels)}")
    for shape in _mt_shapes(n, tuple(range(k))):
        root, children, r_labels, leaves = _shape_to_tree(shape)
        if not labeled:
            yield MarkedTree(root, children, r_labels, None)
            continue
        for perm in itertools.permutations(leaf_labels):
            yield MarkedTree(root, children, r_labels, dict(zip(leaves, perm)))


# ---------------------------------------------------------------------------
# labeled networks through marked trees
# ---------------------------------------------------------------------------

def _dedup(nets: Iterator[PhyloNetwork]) -> Iterator[PhyloNetwork]:
    seen: set[bytes] = set()
    for net in nets:
        key = canonical_form(net)
        if key not in seen:
            seen.add(key)
            yield net


def enumerate_stc_cherry(n: int, k: int) -> Iterator[PhyloNetwork]:
    def raw():
        if n - 1 < k + 1:
            return
        for j in range(1, n + 1):
            rest = tuple(x for x in range(1, n + 1) if x != j)
            for mt in enumerate_marked_trees(n - 1, k + 1, labeled=True, leaf_labels=rest):
                yield marked_tree_to_network(mt, j)
    yield from _dedup(raw())


def enumerate_stc_non_cherry(n: int, k: int) -> Iterator[PhyloNetwork]:
    def raw():
        if k < 1:
            return
        for base in enumerate_stc_cherry(n, k - 1):
            for a in (0, 1):
                for b in range(n + k - 2):
                    yield cherry_to_non_cherry(base, a, b)
    yield from _dedup(raw())


def enumerate_stc(n: int, k: int) -> Iterator[PhyloNetwork]:
    """Leaf-labeled spinal tree-child networks: cherry ones from marked trees,
    non-cherry ones by inserting a reticulation into a cherry network."""
    if n < 2:
        raise ValueError("enumerate_stc needs n >= 2")
    _range_check(n, k)
    yield from enumerate_stc_cherry(n, k)
    yield from enumerate_stc_non_cherry(n, k)


def enumerate_nlstc_via_marked(n: int, k: int) -> Iterator[PhyloNetwork]:
    """Unlabeled networks from unlabeled marked trees; an independent route to NLSTC."""
    if n < 2:
        raise ValueError("needs n >= 2")

    def cherry(kk):
        if n - 1 < kk + 1:
            return
        for mt in enumerate_marked_trees(n - 1, kk + 1):
            yield marked_tree_to_network(mt)

    def raw():
        yield from cherry(k)
        if k >= 1:
            for base in cherry(k - 1):
                for b in range(n + k - 2):
                    yield cherry_to_non_cherry(base, 0, b)
    yield from _dedup(raw())


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

@dataclass
class OracleResult:
    count: ExactCount
    networks: list[PhyloNetwork]


def _spine_candidates(n: int, k: int) -> Iterator[PhyloNetwork]:
    """Every assignment of roles to spine positions plus off-spine attachments.

    Position 0 is the root and the last position a leaf.  Each interior
    position is a tree vertex or a reticulation.  Each reticulation takes a
    second parent among the tree vertices above it; every tree vertex left
    without an off-spine child gets a fresh leaf.
    """
    max_len = 2 * (n + k) + 1
    for length in range(1, max_len + 1):
        interior = list(range(1, length))
        for ret_pos in itertools.combinations(interior, k):
            tree_pos = [p for p in interior if p not in ret_pos]
            # leaves = one terminal + one per tree vertex not used as an extra parent
            if len(tree_pos) - k + 1 != n:
                continue
            options = [[t for t in tree_pos if t < r - 1] for r in ret_pos]
            for extra in itertools.product(*options):
                if len(set(extra)) != k:
                    continue
                yield _assemble(length, ret_pos, tree_pos, extra)


def _assemble(length, ret_pos, tree_pos, extra) -> PhyloNetwork:
    kinds = {0: Kind.ROOT, length: Kind.LEAF}
    arcs = {(p, p + 1) for p in range(length)}
    for p in ret_pos:
        kinds[p] = Kind.RET
    for p in tree_pos:
        kinds[p] = Kind.TREE
    for r, parent in zip(ret_pos, extra):
        arcs.add((parent, r))
    nxt = length + 1
    used = set(extra)
    for t in tree_pos:
        if t not in used:
            kinds[nxt] = Kind.LEAF
            arcs.add((t, nxt))
            nxt += 1
    return PhyloNetwork(kinds, frozenset(arcs))


def brute_force_oracle(n: int, k: int, labeled: bool = False,
                       budget: EnumerationBudget | None = None) -> OracleResult:
    """All spinal tree-child networks with n leaves and k reticulations, up to isomorphism."""
    budget = budget or EnumerationBudget()
    if n < 1 or k < 0:
        raise ValueError(f"parameters out of range: n={n}, k={k}")
    budget.admit(n, k)
    found: dict[bytes, PhyloNetwork] = {}
    produced = 0
    for cand in _spine_candidates(n, k):
        produced += 1
        budget.tick(produced)
        if validate(cand) or not is_tree_child(cand) or not find_spines(cand):
            continue
        if cand.n != n or cand.k != k:
            continue
        found.setdefault(canonical_form(cand), cand)
    unlabeled = [found[key] for key in sorted(found)]
    if not labeled:
        return OracleResult(ExactCount(len(unlabeled), "oracle"), unlabeled)
    out: dict[bytes, PhyloNetwork] = {}
    for net in unlabeled:
        leaves = net.leaves
        for perm in itertools.permutations(range(1, n + 1)):
            produced += 1
            budget.tick(produced)
            lab = net.with_labels(dict(zip(leaves, perm)))
            out.setdefault(canonical_form(lab), lab)
    nets = [out[key] for key in sorted(out)]
    return OracleResult(ExactCount(len(nets), "oracle"), nets)


def _caterpillar(kinds, arcs, attach_to: int, old_leaf: int, size: int) -> None:
    """Replace ``old_leaf`` (child of ``attach_to``) by a caterpillar with ``size`` leaves."""
    if size == 1:
        return
    arcs.discard((attach_to, old_leaf))
    prev = attach_to
    nxt = max(kinds) + 1
    for _ in range(size - 1):
        t = nxt
        kinds[t] = Kind.TREE
        arcs.add((prev, t))
        leaf = nxt + 1
        kinds[leaf] = Kind.LEAF
        arcs.add((t, leaf))
        prev = t
        nxt += 2
    arcs.add((prev, old_leaf))


def caterpillar_oracle(n: int, k: int, budget: EnumerationBudget | None = None) -> OracleResult:
    """Unlabeled spinal caterpillar networks: take oracle spinal networks with
    fewer leaves and grow every leaf whose sibling is a reticulation into a caterpillar."""
    budget = budget or EnumerationBudget()
    found: dict[bytes, PhyloNetwork] = {}
    for base_n in range(k + 1, n + 1):
        extra = n - base_n
        for base in brute_force_oracle(base_n, k, budget=budget).networks:
            sites = []
            for leaf in base.leaves:
                (parent,) = base.parents[leaf]
                sibling = [c for c in base.children[parent] if c != leaf]
                if sibling and base.kinds[sibling[0]] is Kind.RET:
                    sites.append((parent, leaf))
            for sizes in itertools.product(range(1, extra + 2), repeat=len(sites)):
                if sum(s - 1 for s in sizes) != extra:
                    continue
                kinds = dict(base.kinds)
                arcs = set(base.arcs)
                for (parent, leaf), size in zip(sites, sizes):
                    _caterpillar(kinds, arcs, parent, leaf, size)
                net = PhyloNetwork(kinds, frozenset(arcs))
                found.setdefault(canonical_form(net), net)
    nets = [found[key] for key in sorted(found)]
    return OracleResult(ExactCount(len(nets), "oracle"), nets)
