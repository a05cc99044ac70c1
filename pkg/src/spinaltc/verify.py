"""Data-driven verification matrix: each identity is a check run over a grid of (n, k).

Counters are looked up on their modules at call time, so a patched counter
shows up as a named failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable

from . import codec, counting, enumeration, network, words
from .enumeration import BudgetExceeded, EnumerationBudget


@dataclass(frozen=True)
class CellResult:
    identity: str
    n: int
    k: int
    status: str  # "pass", "fail" or "skip"
    detail: str = ""

    def line(self) -> str:
        tail = f" {self.detail}" if self.detail else ""
        return f"{self.status.upper()} {self.identity} n={self.n} k={self.k}{tail}"


@dataclass(frozen=True)
class Identity:
    name: str
    cells: Callable[[], Iterable[tuple[int, int]]]
    check: Callable[[int, int, EnumerationBudget], "bool | str"]
    description: str = ""


def _grid(n_lo: int, n_hi: int, k_hi: Callable[[int], int], k_lo: int = 0):
    return lambda: [(n, k) for n in range(n_lo, n_hi + 1) for k in range(k_lo, k_hi(n) + 1)]


def _eq(a, b) -> bool | str:
    def show(x):
        return int(x) if isinstance(x, int) else x
    return True if a == b else f"{show(a)} != {show(b)}"


def _check_series(n: int, k: int, budget) -> bool | str:
    s = counting.series_expand_s(n, k)
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            want = Fraction(counting.s_coef(i, j), factorial(i) * factorial(j))
            if s[i, j] != want:
                return f"coefficient x^{i} z^{j}: {s[i, j]} != {want}"
    if not counting.check_ode_residual(s):
        return "ODE residual is nonzero"
    if any(s[i, 1] != 1 for i in range(1, n + 1)):
        return "row z^1 is not x/(1-x)"
    return True


def _check_oracle_nlstc(n, k, budget):
    return _eq(enumeration.brute_force_oracle(n, k, budget=budget).count, counting.count_nlstc(n, k))


def _check_oracle_stc(n, k, budget):
    return _eq(enumeration.brute_force_oracle(n, k, labeled=True, budget=budget).count, counting.count_stc(n, k))


def _check_oracle_nlsctc(n, k, budget):
    return _eq(enumeration.caterpillar_oracle(n, k, budget=budget).count, counting.count_nlsctc(n, k))


def _check_structure(n, k, budget):
    for net in enumeration.brute_force_oracle(n, k, budget=budget).networks:
        for spine in network.find_spines(net):
            m = network.spine_metrics(net, spine)
            if m.tree_vertex_count != n + k - 1 or m.spine_length != n + 2 * k:
                return f"t={m.tree_vertex_count} l={m.spine_length} on {net.to_json()}"
    return True


def _check_codec(cls: str):
    enum = enumeration.enumerate_c1_classes if cls == "c1" else enumeration.enumerate_c2_classes
    dec = codec.decode_nlstc if cls == "c1" else codec.decode_nlsctc
    enc = codec.encode_nlstc if cls == "c1" else codec.encode_nlsctc

    def check(n, k, budget):
        for i, w in enumerate(enum(n, k)):
            budget.tick(i)
            net = dec(w)
            back = enc(net)
            if back != words.canonicalize_tilde(w, cls):
                return f"encode(decode({w})) = {back}"
            if not network.isomorphic(dec(back), net):
                return f"decode(encode(N)) differs from N for word {w}"
        return True
    return check


def _check_c1_enum(n, k, budget):
    return _eq(sum(1 for _ in enumeration.enumerate_c1_classes(n, k)), counting.count_c1_classes(n, k))


def _check_c2_enum(n, k, budget):
    return _eq(sum(1 for _ in enumeration.enumerate_c2_classes(n, k)), counting.count_c2_classes(n, k))


EXAMPLE_ARCS = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9),
    (1, 10), (4, 11), (6, 12), (8, 13), (2, 5), (3, 7),
]
EXAMPLE_WORD = "3,1,2,1,1,2,2,4,3,4"
EXAMPLE_LRQ = "L R1 L R2 L Q1 Q2 L"


def _check_worked_example(n, k, budget):
    net = network.PhyloNetwork.from_arcs(EXAMPLE_ARCS)
    got = str(codec.encode_nlstc(net))
    if got != EXAMPLE_WORD:
        return f"encoded {got}"
    u = codec.lrq_encode(net)
    if str(u) != EXAMPLE_LRQ:
        return f"LRQ reading {u}"
    _, w2, _, final = words.transform_t_steps(words.parse_lrq(EXAMPLE_LRQ))
    if words.format_word(w2) != "4,2,2,1,1,2,1,3":
        return f"intermediate {words.format_word(w2)}"
    return _eq(str(final), EXAMPLE_WORD)


IDENTITIES: list[Identity] = [
    Identity("labeled_vs_unlabeled", _grid(2, 8, lambda n: n - 1),
             lambda n, k, b: _eq(counting.count_stc_via_unlabeled(n, k), counting.count_stc(n, k)),
             "n! NLSTC(n,k) - (n!/2) NLSTC(n-1,k) = STC(n,k)"),
    Identity("factored", _grid(2, 8, lambda n: n - 1),
             lambda n, k, b: _eq(counting.count_stc_factored(n, k), counting.count_stc(n, k)),
             "factored closed form = STC(n,k)"),
    Identity("marked_stc", _grid(2, 8, lambda n: n - 1),
             lambda n, k, b: _eq(counting.count_stc_via_marked(n, k), counting.count_stc(n, k)),
             "cherry + non-cherry marked-tree relation = STC(n,k)"),
    Identity("marked_nlstc", _grid(2, 8, lambda n: n - 1),
             lambda n, k, b: _eq(counting.count_nlstc_via_marked(n, k), counting.count_nlstc(n, k)),
             "unlabeled marked-tree relation = NLSTC(n,k)"),
    Identity("caterpillar", _grid(2, 8, lambda n: n - 1),
             lambda n, k, b: _eq(counting.count_nlsctc(n, k), counting.count_c2_classes(n - 1, k)),
             "NLSCTC(n,k) = |C2_{n-1,k}/~|"),
    Identity("series", lambda: [(8, 8)], _check_series,
             "S(x,z) coefficients, ODE residual and the z^1 row"),
    Identity("c1_enum", _grid(0, 7, lambda n: min(n, 4)), _check_c1_enum,
             "enumerated C1 classes = Bessel count"),
    Identity("c2_enum", _grid(0, 5, lambda n: min(n, 2)), _check_c2_enum,
             "enumerated C2 classes = closed form"),
    Identity("codec_c1", _grid(0, 6, lambda n: min(n, 3)), _check_codec("c1"),
             "C1 codec roundtrips"),
    Identity("codec_c2", _grid(0, 5, lambda n: min(n, 2)), _check_codec("c2"),
             "C2 codec roundtrips"),
    Identity("oracle_nlstc", _grid(2, 5, lambda n: min(3, n - 1)), _check_oracle_nlstc,
             "brute-force oracle = NLSTC(n,k)"),
    Identity("oracle_stc", _grid(2, 5, lambda n: min(3, n - 1)), _check_oracle_stc,
             "labeled brute-force oracle = STC(n,k)"),
    Identity("oracle_nlsctc", _grid(2, 5, lambda n: min(2, n - 1)), _check_oracle_nlsctc,
             "caterpillar oracle = NLSCTC(n,k)"),
    Identity("structure", _grid(1, 5, lambda n: min(3, n - 1)), _check_structure,
             "t = n+k-1 and spine length = n+2k on oracle networks"),
    Identity("worked_example", lambda: [(5, 2)], _check_worked_example,
             "example network word, LRQ reading and transformation"),
]

IDENTITY_NAMES = [i.name for i in IDENTITIES]


def run_identity(identity: Identity, deadline: float, max_objects: int) -> list[CellResult]:
    out = []
    for n, k in identity.cells():
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            out.append(CellResult(identity.name, n, k, "skip", "budget exhausted"))
            continue
        budget = EnumerationBudget(max_n=10 ** 6, max_k=10 ** 6, max_objects=max_objects, time_limit=remaining)
        try:
            verdict = identity.check(n, k, budget)
        except BudgetExceeded as exc:
            out.append(CellResult(identity.name, n, k, "skip", str(exc)))
            continue
        if verdict is True:
            out.append(CellResult(identity.name, n, k, "pass"))
        else:
            out.append(CellResult(identity.name, n, k, "fail", str(verdict)))
    return out


def run_matrix(only: Iterable[str] | None = None, budget_seconds: float = 600.0,
               max_objects: int = 10 ** 7) -> list[CellResult]:
    selected = list(only) if only else IDENTITY_NAMES
    unknown = [name for name in selected if name not in IDENTITY_NAMES]
    if unknown:
        raise KeyError(f"unknown identity {unknown[0]!r}")
    deadline = time.monotonic() + budget_seconds
    results = []
    for identity in IDENTITIES:
        if identity.name in selected:
            results.extend(run_identity(identity, deadline, max_objects))
    return results
