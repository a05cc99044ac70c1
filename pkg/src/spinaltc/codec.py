"""Bijections between unlabeled spinal (caterpillar) tree-child networks and
~-classes of words in C1 / C2, plus the bottom-to-top {L, R, Q} spine reading.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .network import (
    Kind,
    NetworkError,
    PhyloNetwork,
    Spine,
    find_spines,
    is_valid,
    is_tree_child,
    require_spinal_tree_child,
    require_valid,
    spine_of,
)
from .words import LRQWord, Word, canonicalize_tilde, require_class


@dataclass(frozen=True)
class PathComponent:
    vertices: tuple[int, ...]
    kind: str  # "spinal" or "exterior"


# ---------------------------------------------------------------------------
# path components
# ---------------------------------------------------------------------------

def _follow_caterpillar(net: PhyloNetwork, start: int, allow: bool) -> list[int]:
    """Walk from the off-spine child of s_i down to a leaf.

    With ``allow`` false the start must already be a leaf.  Otherwise the walk
    follows the internal child of every caterpillar vertex; at the last one
    (two leaf children) the lower-numbered leaf ends the path.
    """
    path = [start]
    v = start
    while net.kinds[v] is not Kind.LEAF:
        if not allow:
            raise NetworkError(f"vertex {v} hangs off the spine but is not a leaf; network is not spinal")
        if net.kinds[v] is not Kind.TREE:
            raise NetworkError(f"vertex {v} in an off-spine caterpillar is not a tree vertex")
        cs = net.children[v]
        internal = [c for c in cs if net.kinds[c] is not Kind.LEAF]
        if len(internal) > 1:
            raise NetworkError(f"off-spine subtree at {start} is not a caterpillar")
        v = internal[0] if internal else min(cs)
        path.append(v)
    return path


def _components(net: PhyloNetwork, spine: Spine, caterpillars: bool) -> list[PathComponent]:
    path = spine.path
    rets = set(spine.reticulation_positions)
    comps: list[PathComponent] = []
    current: list[int] = [path[0]]
    for pos in range(1, len(path)):
        v = path[pos]
        if pos in rets:
            s = path[pos - 1]
            off = [c for c in net.children[s] if c != v]
            if len(off) != 1:
                raise NetworkError(f"spine parent {s} of reticulation {v} is not a tree vertex")
            current.extend(_follow_caterpillar(net, off[0], caterpillars))
            comps.append(PathComponent(tuple(current), "spinal"))
            current = [v]
        else:
            current.append(v)
    comps.append(PathComponent(tuple(current), "spinal"))
    on_paths = {v for c in comps for v in c.vertices}
    exterior = []
    for c in comps:
        for v in c.vertices:
            for ch in net.children[v]:
                if ch not in on_paths and net.kinds[ch] is Kind.LEAF:
                    exterior.append(ch)
    comps.extend(PathComponent((leaf,), "exterior") for leaf in exterior)
    covered = {v for c in comps for v in c.vertices}
    if covered != set(net.kinds):
        raise NetworkError("path components do not cover the network")
    return comps


def decompose_paths(net: PhyloNetwork, spine: Spine | None = None) -> list[PathComponent]:
    """Spinal segments P_0..P_k followed by the exterior-leaf singletons.

    Exterior leaves are listed in the order in which their parents appear
    when the spinal segments are read top to bottom.
    """
    require_spinal_tree_child(net)
    if spine is None:
        spine = spine_of(net)
    elif spine not in find_spines(net):
        raise NetworkError(f"{spine.path} is not a spine of this network")
    return _components(net, spine, caterpillars=False)


def _read_word(net: PhyloNetwork, comps: list[PathComponent], k: int) -> tuple[int, ...]:
    letter: dict[int, int] = {}
    spinal = [c for c in comps if c.kind == "spinal"]
    for i, comp in enumerate(spinal[1:], start=1):
        r = comp.vertices[0]
        letter[r] = i
        for p in net.parents[r]:
            letter[p] = i
    # assign exterior letters in reading order so the word comes out ~-canonical
    exterior = {c.vertices[0] for c in comps if c.kind == "exterior"}
    order = [ch for comp in spinal for v in comp.vertices for ch in net.children[v] if ch in exterior]
    ext_letter = {leaf: j for j, leaf in enumerate(order, start=k + 1)}
    for leaf, j in ext_letter.items():
        letter[leaf] = j
        letter[net.parents[leaf][0]] = j
    word = []
    for comp in comps:
        if comp.kind == "spinal":
            word.extend(letter[v] for v in comp.vertices if v in letter and net.kinds[v] is not Kind.LEAF)
        else:
            word.append(letter[comp.vertices[0]])
    return tuple(word)


def encode_nlstc(net: PhyloNetwork) -> Word:
    """Unlabeled spinal tree-child network on n leaves -> canonical word of C1_{n-1,k}."""
    if net.labeled:
        raise NetworkError("encode_nlstc expects an unlabeled network; strip the labels first")
    comps = decompose_paths(net)
    word = Word(_read_word(net, comps, net.k), net.n - 1, net.k)
    return canonicalize_tilde(word, "c1")


# ---------------------------------------------------------------------------
# caterpillar extension
# ---------------------------------------------------------------------------

def _is_caterpillar(net: PhyloNetwork, v: int) -> bool:
    while net.kinds[v] is not Kind.LEAF:
        if net.kinds[v] is not Kind.TREE:
            return False
        internal = [c for c in net.children[v] if net.kinds[c] is not Kind.LEAF]
        if len(internal) > 1:
            return False
        if not internal:
            return True
        v = internal[0]
    return True


def caterpillar_spines(net: PhyloNetwork) -> list[Spine]:
    """Root-to-leaf paths that cover every internal vertex except those inside
    caterpillars hanging off the spine parent of a reticulation."""
    require_valid(net)
    if not is_tree_child(net):
        return []
    out = []
    path = [net.root]

    def check(path: tuple[int, ...]) -> Spine | None:
        on = set(path)
        allowed: set[int] = set()
        rets = []
        for pos, v in enumerate(path):
            if net.kinds[v] is Kind.RET:
                rets.append(pos)
                s = path[pos - 1]
                for c in net.children[s]:
                    if c != v and _is_caterpillar(net, c):
                        allowed |= _subtree(net, c)
        for v, kind in net.kinds.items():
            if kind is Kind.LEAF or v in on or v in allowed:
                continue
            return None
        return Spine(path, tuple(rets))

    def walk(v: int) -> None:
        cs = net.children[v]
        if not cs:
            sp = check(tuple(path))
            if sp is not None:
                out.append(sp)
            return
        for c in cs:
            path.append(c)
            walk(c)
            path.pop()

    walk(net.root)
    return out


def _subtree(net: PhyloNetwork, v: int) -> set[int]:
    seen = {v}
    stack = [v]
    while stack:
        for c in net.children[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def is_spinal_caterpillar_tree_child(net: PhyloNetwork) -> bool:
    return is_valid(net) and bool(caterpillar_spines(net))


def decompose_paths_caterpillar(net: PhyloNetwork) -> list[PathComponent]:
    spines = caterpillar_spines(net)
    if not spines:
        raise NetworkError("network is not a spinal caterpillar tree-child network")
    return _components(net, spines[0], caterpillars=True)


def encode_nlsctc(net: PhyloNetwork) -> Word:
    """Unlabeled spinal caterpillar tree-child network -> canonical word of C2_{n-1,k}."""
    if net.labeled:
        raise NetworkError("encode_nlsctc expects an unlabeled network")
    comps = decompose_paths_caterpillar(net)
    word = Word(_read_word(net, comps, net.k), net.n - 1, net.k)
    return canonicalize_tilde(word, "c2")


# ---------------------------------------------------------------------------
# decoding (shared by C1 and C2)
# ---------------------------------------------------------------------------

def _decode(w: Word) -> PhyloNetwork:
    m, k = w.n, w.k
    body = w.letters[:len(w.letters) - (m - k)]
    seen: Counter = Counter()
    cuts = []
    for pos, a in enumerate(body):
        seen[a] += 1
        if a <= k and seen[a] == 3:
            cuts.append(pos)
    pieces = []
    start = 0
    for c in cuts:
        pieces.append(body[start:c])
        start = c
    pieces.append(body[start:])

    kinds: dict[int, Kind] = {}
    arcs: set[tuple[int, int]] = set()
    head: dict[int, int] = {}
    pending: list[tuple[int, int]] = []  # (tree vertex, letter)

    def new(kind: Kind) -> int:
        v = len(kinds)
        kinds[v] = kind
        return v

    for i, piece in enumerate(pieces):
        if i == 0:
            prev = new(Kind.ROOT)
            letters = piece
        else:
            prev = new(Kind.RET)
            head[piece[0]] = prev
            letters = piece[1:]
        for a in letters:
            v = new(Kind.TREE)
            arcs.add((prev, v))
            pending.append((v, a))
            prev = v
        leaf = new(Kind.LEAF)
        arcs.add((prev, leaf))
    for a in range(k + 1, m + 1):
        head[a] = new(Kind.LEAF)
    for v, a in pending:
        arcs.add((v, head[a]))
    return PhyloNetwork(kinds, frozenset(arcs))


def decode_nlstc(w: Word) -> PhyloNetwork:
    """Word of C1_{n-1,k} -> unlabeled spinal tree-child network on n leaves."""
    require_class(w, "c1")
    return _decode(w)


def decode_nlsctc(w: Word) -> PhyloNetwork:
    """Word of C2_{n-1,k} -> unlabeled spinal caterpillar tree-child network."""
    require_class(w, "c2")
    return _decode(w)


# ---------------------------------------------------------------------------
# {L, R, Q} reading
# ---------------------------------------------------------------------------

def lrq_encode(net: PhyloNetwork, spine: Spine | None = None) -> LRQWord:
    require_spinal_tree_child(net)
    if spine is None:
        spine = spine_of(net)
    path = spine.path
    on = set(path)
    rets_bottom_up = [path[p] for p in reversed(spine.reticulation_positions)]
    r_index = {r: i for i, r in enumerate(rets_bottom_up, start=1)}
    tokens = []
    for pos in range(len(path) - 2, 0, -1):
        v = path[pos]
        if v in r_index:
            tokens.append(("R", r_index[v]))
            continue
        off = [c for c in net.children[v] if c != path[pos + 1]]
        if len(off) != 1:
            raise NetworkError(f"spine vertex {v} does not have exactly one off-spine child")
        c = off[0]
        if net.kinds[c] is Kind.LEAF and c not in on:
            tokens.append(("L", 0))
        elif c in r_index:
            tokens.append(("Q", r_index[c]))
        else:
            raise NetworkError(f"cannot label spine vertex {v}")
    return LRQWord(tuple(tokens), net.n, net.k)
