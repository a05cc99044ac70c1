"""Binary phylogenetic networks: data model, validation, spines and isomorphism.

Vertices are opaque integers.  Everything that matters lives in the vertex
kinds, the arc set and (for labeled networks) the leaf labels, so any
renaming of vertex identifiers gives an isomorphic network.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class NetworkError(ValueError):
    """Raised when an operation needs a valid (or spinal) network and gets something else."""


class Kind(enum.Enum):
    ROOT = "root"
    LEAF = "leaf"
    TREE = "tree"
    RET = "ret"


# (indegree, outdegree) per kind
DEGREES = {
    Kind.ROOT: (0, 1),
    Kind.LEAF: (1, 0),
    Kind.TREE: (1, 2),
    Kind.RET: (2, 1),
}


class Terminal(enum.Enum):
    CHERRY = "cherry"
    NON_CHERRY = "non-cherry"


@dataclass(frozen=True)
class Violation:
    code: str
    vertex: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.vertex is None else f" at vertex {self.vertex}"
        return f"{self.code}{where}: {self.message}"


@dataclass(frozen=True)
class Spine:
    path: tuple[int, ...]
    reticulation_positions: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def terminal(self) -> int:
        return self.path[-1]


@dataclass(frozen=True)
class SpineMetrics:
    tree_vertex_count: int
    spine_length: int


@dataclass(frozen=True, eq=False)
class PhyloNetwork:
    """An immutable vertex-typed DAG with optional leaf labels.

    ``labels`` maps leaf vertices to taxa; ``None`` means the network is
    unlabeled.  Construction never checks anything; use :func:`validate`.
    """

    kinds: Mapping[int, Kind]
    arcs: frozenset[tuple[int, int]]
    labels: Mapping[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kinds", dict(self.kinds))
        object.__setattr__(self, "arcs", frozenset((int(u), int(v)) for u, v in self.arcs))
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int]], labels: Mapping[int, int] | None = None) -> PhyloNetwork:
        """Build a network inferring each vertex kind from its degrees."""
        arcs = [tuple(a) for a in arcs]
        indeg: dict[int, int] = {}
        outdeg: dict[int, int] = {}
        for u, v in arcs:
            outdeg[u] = outdeg.get(u, 0) + 1
            indeg[v] = indeg.get(v, 0) + 1
            indeg.setdefault(u, 0)
            outdeg.setdefault(v, 0)
        by_degree = {deg: kind for kind, deg in DEGREES.items()}
        kinds = {}
        for v in indeg:
            deg = (indeg[v], outdeg[v])
            if deg not in by_degree:
                raise NetworkError(f"vertex {v} has degrees {deg}, which match no vertex kind")
            kinds[v] = by_degree[deg]
        return cls(kinds, frozenset(arcs), labels)

    def __eq__(self, other):
        if not isinstance(other, PhyloNetwork):
            return NotImplemented
        return (self.kinds, self.arcs, self.labels) == (other.kinds, other.arcs, other.labels)

    def __hash__(self):
        return hash(self.arcs)

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.kinds}
        for u, v in sorted(self.arcs):
            out.setdefault(u, []).append(v)
            out.setdefault(v, [])
        return {v: tuple(cs) for v, cs in out.items()}

    @cached_property
    def parents(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.kinds}
        for u, v in sorted(self.arcs):
            out.setdefault(v, []).append(u)
            out.setdefault(u, [])
        return {v: tuple(ps) for v, ps in out.items()}

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    def vertices_of(self, kind: Kind) -> list[int]:
        return sorted(v for v, k in self.kinds.items() if k is kind)

    @property
    def root(self) -> int:
        roots = self.vertices_of(Kind.ROOT)
        if len(roots) != 1:
            raise NetworkError(f"expected exactly one root, found {len(roots)}")
        return roots[0]

    @property
    def leaves(self) -> list[int]:
        return self.vertices_of(Kind.LEAF)

    @property
    def n(self) -> int:
        return len(self.leaves)

    @property
    def k(self) -> int:
        return len(self.vertices_of(Kind.RET))

    def is_internal(self, v: int) -> bool:
        return self.kinds[v] is not Kind.LEAF

    def unlabeled(self) -> PhyloNetwork:
        return PhyloNetwork(self.kinds, self.arcs, None)

    def with_labels(self, labels: Mapping[int, int]) -> PhyloNetwork:
        return PhyloNetwork(self.kinds, self.arcs, labels)

    def relabel_vertices(self, mapping: Mapping[int, int]) -> PhyloNetwork:
        """Rename vertex identifiers; ``mapping`` must be injective."""
        labels = None
        if self.labels is not None:
            labels = {mapping[v]: lab for v, lab in self.labels.items()}
        return PhyloNetwork(
            {mapping[v]: k for v, k in self.kinds.items()},
            frozenset((mapping[u], mapping[v]) for u, v in self.arcs),
            labels,
        )

    def compact(self) -> PhyloNetwork:
        """Renumber vertices 0..|V|-1 in sorted order of the old identifiers."""
        return self.relabel_vertices({v: i for i, v in enumerate(sorted(self.kinds))})

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        vertices = []
        for v in sorted(self.kinds):
            entry = {"id": v, "kind": self.kinds[v].value}
            if self.labels is not None and v in self.labels:
                entry["label"] = self.labels[v]
            vertices.append(entry)
        return {
            "n": self.n,
            "k": self.k,
            "labeled": self.labeled,
            "vertices": vertices,
            "arcs": [list(a) for a in sorted(self.arcs)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> PhyloNetwork:
        kinds = {}
        try:
            labels = {} if data.get("labeled") else None
            for entry in data["vertices"]:
                kinds[int(entry["id"])] = Kind(entry["kind"])
                if labels is not None and "label" in entry:
                    labels[int(entry["id"])] = int(entry["label"])
            if any(len(a) != 2 for a in data["arcs"]):
                raise ValueError("every arc must be a pair [tail, head]")
            arcs = frozenset((int(u), int(v)) for u, v in data["arcs"])
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise NetworkError(f"malformed network record: {exc!r}") from None
        return cls(kinds, arcs, labels)

    @classmethod
    def from_json(cls, text: str) -> PhyloNetwork:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
        if not isinstance(data, dict):
            raise NetworkError("line 1: expected a JSON object")
        return cls.from_dict(data)

    def to_dot(self, name: str = "N") -> str:
        """Graphviz rendering: reticulations as boxes, everything else as circles."""
        lines = [f"digraph {name} {{"]
        for v in sorted(self.kinds):
            kind = self.kinds[v]
            shape = "box" if kind is Kind.RET else "circle"
            text = ""
            if kind is Kind.LEAF and self.labels is not None:
                text = str(self.labels.get(v, ""))
            lines.append(f'  {v} [shape={shape}, label="{text}"];')
        for u, v in sorted(self.arcs):
            lines.append(f"  {u} -> {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation and structure
# ---------------------------------------------------------------------------

def validate(net: PhyloNetwork) -> list[Violation]:
    """List every way ``net`` fails to be a binary phylogenetic network."""
    report: list[Violation] = []
    vertices = set(net.kinds)
    for u, v in sorted(net.arcs):
        for end in (u, v):
            if end not in vertices:
                report.append(Violation("unknown-vertex", end, f"arc ({u}, {v}) uses an undeclared vertex"))
        if u == v:
            report.append(Violation("self-loop", u, "arc from a vertex to itself"))

    roots = net.vertices_of(Kind.ROOT)
    if len(roots) != 1:
        report.append(Violation("root-count", None, f"expected exactly one root, found {len(roots)}"))

    for v in sorted(vertices):
        kind = net.kinds[v]
        want = DEGREES[kind]
        got = (len(net.parents.get(v, ())), len(net.children.get(v, ())))
        if got != want:
            report.append(Violation(
                "degree", v, f"{kind.value} vertex needs (in, out) = {want}, has {got}"))

    if _has_cycle(net):
        report.append(Violation("cycle", None, "the arc set contains a directed cycle"))

    if net.labels is not None:
        leaves = set(net.leaves)
        keys = set(net.labels)
        if keys != leaves:
            report.append(Violation("labels", None, "labels must be attached to exactly the leaves"))
        values = sorted(net.labels.values())
        if values != list(range(1, len(leaves) + 1)):
            report.append(Violation("labels", None, f"labels must be a bijection onto 1..{len(leaves)}"))
    return report


def _has_cycle(net: PhyloNetwork) -> bool:
    indeg = {v: len(net.parents.get(v, ())) for v in net.children}
    stack = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for c in net.children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    return seen != len(indeg)


def is_valid(net: PhyloNetwork) -> bool:
    return not validate(net)


def require_valid(net: PhyloNetwork) -> None:
    report = validate(net)
    if report:
        raise NetworkError("invalid network: " + "; ".join(map(str, report)))


def is_tree_child(net: PhyloNetwork) -> bool:
    require_valid(net)
    for v, cs in net.children.items():
        if not cs:
            continue
        if all(net.kinds[c] is Kind.RET for c in cs):
            return False
    return True


def find_spines(net: PhyloNetwork) -> list[Spine]:
    """All root-to-leaf paths that pass through every internal vertex."""
    require_valid(net)
    internal = sum(1 for v in net.kinds if net.is_internal(v))
    spines = []
    path = [net.root]

    def walk(v: int) -> None:
        cs = net.children[v]
        if not cs:
            if len(path) - 1 == internal:
                spines.append(_make_spine(net, tuple(path)))
            return
        for c in cs:
            path.append(c)
            walk(c)
            path.pop()

    walk(net.root)
    return spines


def _make_spine(net: PhyloNetwork, path: tuple[int, ...]) -> Spine:
    rets = tuple(i for i, v in enumerate(path) if net.kinds[v] is Kind.RET)
    return Spine(path, rets)


def spine_of(net: PhyloNetwork) -> Spine:
    """The spine used by the encoders: the first one found, deterministic."""
    spines = find_spines(net)
    if not spines:
        raise NetworkError("network is not spinal")
    return spines[0]


def is_spinal_tree_child(net: PhyloNetwork) -> bool:
    return is_valid(net) and is_tree_child(net) and bool(find_spines(net))


def require_spinal_tree_child(net: PhyloNetwork) -> None:
    require_valid(net)
    if not is_tree_child(net):
        raise NetworkError("network is not tree-child")
    if not find_spines(net):
        raise NetworkError("network is not spinal")


def _check_spine(net: PhyloNetwork, spine: Spine) -> None:
    if spine not in find_spines(net):
        raise NetworkError(f"{spine.path} is not a spine of this network")


def spine_metrics(net: PhyloNetwork, spine: Spine) -> SpineMetrics:
    _check_spine(net, spine)
    return SpineMetrics(len(net.vertices_of(Kind.TREE)), spine.length)


def classify_terminal(net: PhyloNetwork, spine: Spine) -> Terminal:
    _check_spine(net, spine)
    if spine.length == 1:
        return Terminal.CHERRY
    parent = spine.path[-2]
    if net.kinds[parent] is Kind.RET:
        return Terminal.NON_CHERRY
    return Terminal.CHERRY


def arc_count_identities(net: PhyloNetwork) -> tuple[int, int, int]:
    """(|A|, 1+2t+k, t+2k+n): the arc count read off from out- and in-degrees."""
    t = len(net.vertices_of(Kind.TREE))
    return len(net.arcs), 1 + 2 * t + net.k, t + 2 * net.k + net.n


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

_KIND_CODE = {Kind.ROOT: 0, Kind.TREE: 1, Kind.RET: 2, Kind.LEAF: 3}


def _refined_colors(net: PhyloNetwork) -> dict[int, int]:
    labels = net.labels or {}
    colors = {v: (_KIND_CODE[k], labels.get(v, 0)) for v, k in net.kinds.items()}
    colors = _compress(colors)
    while True:
        sig = {
            v: (colors[v],
                tuple(sorted(colors[c] for c in net.children[v])),
                tuple(sorted(colors[p] for p in net.parents[v])))
            for v in net.kinds
        }
        new = _compress(sig)
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _compress(sig: dict) -> dict[int, int]:
    ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {v: ranks[s] for v, s in sig.items()}


def _encoding(net: PhyloNetwork, order: Mapping[int, tuple[int, ...]]) -> tuple:
    ids: dict[int, int] = {}
    stack = [net.root]
    while stack:
        v = stack.pop()
        if v in ids:
            continue
        ids[v] = len(ids)
        stack.extend(reversed(order[v]))
    labels = net.labels or {}
    rows = [None] * len(ids)
    for v, i in ids.items():
        rows[i] = (_KIND_CODE[net.kinds[v]], labels.get(v, 0),
                   tuple(sorted(ids[c] for c in net.children[v])))
    return tuple(rows)


def canonical_form(net: PhyloNetwork) -> bytes:
    """A byte string equal for two networks iff they are isomorphic.

    Children are visited in refined-color order; ties between non-leaf
    children are resolved by trying every order and keeping the smallest
    encoding.  Leaf labels, when present, are part of the vertex colors.
    """
    require_valid(net)
    colors = _refined_colors(net)
    base: dict[int, tuple[int, ...]] = {}
    ties: list[tuple[int, list[list[int]]]] = []
    for v, cs in net.children.items():
        ordered = sorted(cs, key=lambda c: colors[c])
        base[v] = tuple(ordered)
        groups = [list(g) for _, g in itertools.groupby(ordered, key=lambda c: colors[c])]
        if any(len(g) > 1 and net.kinds[g[0]] is not Kind.LEAF for g in groups):
            ties.append((v, groups))

    if not ties:
        best = _encoding(net, base)
    else:
        best = None
        options = [
            [tuple(itertools.chain.from_iterable(p)) for p in _group_orders(groups)]
            for _, groups in ties
        ]
        for choice in itertools.product(*options):
            order = dict(base)
            for (v, _), cs in zip(ties, choice):
                order[v] = cs
            enc = _encoding(net, order)
            if best is None or enc < best:
                best = enc
    head = b"L" if net.labeled else b"U"
    return head + repr(best).replace(" ", "").encode()


def _group_orders(groups: list[list[int]]):
    per_group = [list(itertools.permutations(g)) for g in groups]
    for combo in itertools.product(*per_group):
        yield combo


def isomorphic(a: PhyloNetwork, b: PhyloNetwork) -> bool:
    if a.labeled != b.labeled:
        raise NetworkError("cannot compare a labeled network with an unlabeled one")
    return canonical_form(a) == canonical_form(b)
