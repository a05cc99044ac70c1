"""Restricted words over a_1..a_n, the ~ equivalence, pair partitions, and the
{L, R, Q} spine alphabet with its transformation into canonical words.

A word is a tuple of positive letter indices (``3`` stands for a_3) plus the
parameters (n, k) of the class it is claimed to live in.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


class WordError(ValueError):
    """A word, partition or LRQ word is malformed or not in the required class."""


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    n: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        if self.n < 0 or self.k < 0:
            raise WordError(f"negative parameters n={self.n}, k={self.k}")

    @classmethod
    def infer(cls, letters: Iterable[int]) -> Word:
        """Read n as the largest letter and k as the number of thrice-used letters."""
        letters = tuple(letters)
        counts = Counter(letters)
        return cls(letters, max(letters, default=0), sum(1 for c in counts.values() if c == 3))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self.letters)

    def pretty(self) -> str:
        return "".join(f"a{a}" for a in self.letters)

    def to_text(self) -> str:
        return f"n={self.n} k={self.k}\n{format_word(self.letters)}\n"


def format_word(letters: Sequence[int]) -> str:
    return ",".join(str(a) for a in letters)


def parse_letters(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        letters = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise WordError(f"cannot parse word {text!r}; expected comma-separated integers") from None
    if any(a < 1 for a in letters):
        raise WordError(f"letter indices must be positive in {text!r}")
    return letters


_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s+k\s*=\s*(\d+)\s*$")


def parse_word_text(text: str) -> Word:
    """Parse ``"n=4 k=2\\n3,1,2,..."``; without a header the parameters are inferred.

    Errors carry the 1-based line number of the offending line.
    """
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if lines and _HEADER.match(lines[0][1]):
        m = _HEADER.match(lines[0][1])
        if len(lines) > 2:
            raise WordError(f"line {lines[2][0]}: unexpected extra line after the word")
        lineno, body = lines[1] if len(lines) > 1 else (lines[0][0] + 1, "")
        return Word(_letters_at(body, lineno), int(m.group(1)), int(m.group(2)))
    if len(lines) > 1:
        raise WordError(f"line {lines[0][0]}: expected a header 'n=.. k=..' before a multi-line word")
    lineno, body = lines[0] if lines else (1, "")
    return Word.infer(_letters_at(body, lineno))


def _letters_at(body: str, lineno: int) -> tuple[int, ...]:
    try:
        return parse_letters(body)
    except WordError as exc:
        raise WordError(f"line {lineno}: {exc}") from None


# ---------------------------------------------------------------------------
# recognizers
# ---------------------------------------------------------------------------

def _prefix_dominance(letters: Sequence[int], n: int) -> bool:
    counts = [0] * (n + 2)
    for a in letters:
        counts[a] += 1
        # only the counts of a changed; check pairs (i, a) with i < a, and (a, j) with j > a
        ca = counts[a]
        for i in range(1, a):
            if counts[i] and counts[i] < ca:
                return False
        for j in range(a + 1, n + 1):
            if counts[j] > ca:
                return False
    return True


def in_class_c(w: Word) -> bool:
    n, k = w.n, w.k
    if k > n or len(w.letters) != 2 * n + k:
        return False
    if any(a < 1 or a > n for a in w.letters):
        return False
    counts = Counter(w.letters)
    thrice = sum(1 for a in range(1, n + 1) if counts[a] == 3)
    twice = sum(1 for a in range(1, n + 1) if counts[a] == 2)
    if thrice != k or twice != n - k:
        return False
    return _prefix_dominance(w.letters, n)


def _has_suffix(w: Word) -> bool:
    m = w.n - w.k
    if m == 0:
        return True
    return w.letters[-m:] == tuple(range(w.k + 1, w.n + 1))


def _occurrences(letters: Sequence[int]) -> dict[int, list[int]]:
    occ: dict[int, list[int]] = {}
    for pos, a in enumerate(letters):
        occ.setdefault(a, []).append(pos)
    return occ


def in_class_c1(w: Word) -> bool:
    if not in_class_c(w) or not _has_suffix(w):
        return False
    occ = _occurrences(w.letters)
    return all(occ[i][2] == occ[i][1] + 1 for i in range(1, w.k + 1))


def in_class_c2(w: Word) -> bool:
    if not in_class_c(w) or not _has_suffix(w):
        return False
    occ = _occurrences(w.letters)
    for i in range(1, w.k + 1):
        second, third = occ[i][1], occ[i][2]
        if any(a <= w.k for a in w.letters[second + 1:third]):
            return False
    return True


CLASSES = {"c1": in_class_c1, "c2": in_class_c2}


def require_class(w: Word, cls: str) -> None:
    try:
        test = CLASSES[cls]
    except KeyError:
        raise WordError(f"unknown word class {cls!r}") from None
    if not test(w):
        raise WordError(f"{format_word(w.letters)} is not in {cls.upper()}_{{{w.n},{w.k}}}: "
                        + membership_failure(w, cls))


def membership_failure(w: Word, cls: str = "c") -> str:
    """Name the first condition of the class definition that ``w`` violates."""
    n, k = w.n, w.k
    if len(w.letters) != 2 * n + k:
        return f"length {len(w.letters)} != 2n+k = {2 * n + k}"
    if any(a < 1 or a > n for a in w.letters):
        return f"letters must lie in 1..{n}"
    counts = Counter(w.letters)
    if sorted(counts.get(a, 0) for a in range(1, n + 1)) != sorted([3] * k + [2] * (n - k)):
        return f"need {k} letters used thrice and {n - k} twice"
    if not _prefix_dominance(w.letters, n):
        return "prefix-dominance condition fails"
    if cls in ("c1", "c2") and not _has_suffix(w):
        return f"word must end with a{k + 1}..a{n}"
    if cls == "c1" and not in_class_c1(w):
        return "second and third occurrences of a thrice-used letter must be adjacent"
    if cls == "c2" and not in_class_c2(w):
        return "only letters above k may separate second and third occurrences"
    return "ok"


# ---------------------------------------------------------------------------
# ~ equivalence
# ---------------------------------------------------------------------------

def canonicalize_tilde(w: Word, cls: str = "c1") -> Word:
    """Rename first appearances of a_{k+1}..a_n so that they occur in increasing order."""
    require_class(w, cls)
    k = w.k
    seen: set[int] = set()
    firsts = []
    for pos, a in enumerate(w.letters):
        if a > k and a not in seen:
            seen.add(a)
            firsts.append(pos)
    letters = list(w.letters)
    for new, pos in enumerate(firsts, start=k + 1):
        letters[pos] = new
    return Word(tuple(letters), w.n, w.k)


def equivalent(w1: Word, w2: Word, cls: str = "c1") -> bool:
    return canonicalize_tilde(w1, cls) == canonicalize_tilde(w2, cls)


# ---------------------------------------------------------------------------
# pair partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairPartition:
    """k disjoint unordered pairs of {1..n+k}; the other n-k elements are singletons."""

    n: int
    k: int
    pairs: frozenset[frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(frozenset(p) for p in self.pairs))
        m = self.n + self.k
        if self.k > self.n or self.n < 0 or self.k < 0:
            raise WordError(f"bad parameters n={self.n}, k={self.k}")
        if len(self.pairs) != self.k:
            raise WordError(f"expected {self.k} pairs, got {len(self.pairs)}")
        used: set[int] = set()
        for p in self.pairs:
            if len(p) != 2 or not all(1 <= x <= m for x in p):
                raise WordError(f"pair {sorted(p)} is not a 2-subset of 1..{m}")
            if used & p:
                raise WordError("pairs are not disjoint")
            used |= p

    @property
    def ground_size(self) -> int:
        return self.n + self.k

    @property
    def singletons(self) -> tuple[int, ...]:
        used = set().union(*self.pairs) if self.pairs else set()
        return tuple(x for x in range(1, self.ground_size + 1) if x not in used)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """Pairs as (min, max), ordered by their maximal element."""
        return sorted((tuple(sorted(p)) for p in self.pairs), key=lambda p: p[1])


def partition_to_word_c1(p: PairPartition) -> Word:
    n, k = p.n, p.k
    compressed: list[int] = [0] * p.ground_size
    for letter, (lo, hi) in enumerate(p.sorted_pairs(), start=1):
        compressed[lo - 1] = letter
        compressed[hi - 1] = -letter  # block standing for the adjacent 2nd and 3rd occurrences
    for letter, pos in enumerate(p.singletons, start=k + 1):
        compressed[pos - 1] = letter
    letters: list[int] = []
    for a in compressed:
        letters.extend((-a, -a) if a < 0 else (a,))
    letters.extend(range(k + 1, n + 1))
    return Word(tuple(letters), n, k)


def word_to_partition_c1(w: Word) -> PairPartition:
    w = canonicalize_tilde(w, "c1")
    n, k = w.n, w.k
    body = w.letters[:len(w.letters) - (n - k)]
    compressed: list[int] = []
    seen: Counter = Counter()
    for a in body:
        seen[a] += 1
        if a <= k and seen[a] == 3:
            continue  # absorbed into the block opened by the second occurrence
        compressed.append(a)
    where: dict[int, list[int]] = {}
    for pos, a in enumerate(compressed, start=1):
        where.setdefault(a, []).append(pos)
    pairs = frozenset(frozenset(where[i]) for i in range(1, k + 1))
    return PairPartition(n, k, pairs)


# ---------------------------------------------------------------------------
# {L, R, Q} words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LRQWord:
    """Bottom-to-top reading of the internal spine vertices.

    Tokens are ``("L", 0)``, ``("R", i)`` or ``("Q", i)``; ``n`` is the number
    of leaves of the network the word was read from.
    """

    tokens: tuple[tuple[str, int], ...]
    n: int
    k: int

    def __str__(self):
        return " ".join(t if t == "L" else f"{t}{i}" for t, i in self.tokens)


_TOKEN = re.compile(r"^(L|R(\d+)|Q(\d+))$")


def parse_lrq(text: str) -> LRQWord:
    tokens = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"bad LRQ token {tok!r}")
        if tok == "L":
            tokens.append(("L", 0))
        else:
            tokens.append((tok[0], int(tok[1:])))
    k = sum(1 for t, _ in tokens if t == "R")
    n = sum(1 for t, _ in tokens if t == "L") + 1
    return LRQWord(tuple(tokens), n, k)


def check_lrq(u: LRQWord) -> None:
    """Multiplicity and ordering checks that the transformation T relies on."""
    toks = u.tokens
    n_l = sum(1 for t, _ in toks if t == "L")
    if n_l != u.n - 1:
        raise WordError(f"expected {u.n - 1} L tokens, found {n_l}")
    for kind in "RQ":
        idx = sorted(i for t, i in toks if t == kind)
        if idx != list(range(1, u.k + 1)):
            raise WordError(f"each of {kind}1..{kind}{u.k} must occur exactly once")
    r_pos = {i: p for p, (t, i) in enumerate(toks) if t == "R"}
    q_pos = {i: p for p, (t, i) in enumerate(toks) if t == "Q"}
    if [r_pos[i] for i in range(1, u.k + 1)] != sorted(r_pos.values()):
        raise WordError("R tokens must be numbered in reading order")
    for i in range(1, u.k + 1):
        p = r_pos[i]
        if p + 1 >= len(toks) or toks[p + 1] != ("L", 0):
            raise WordError(f"R{i} must be immediately followed by L (the parent above the reticulation)")
        if q_pos[i] < p + 2:
            raise WordError(f"Q{i} must lie above the L that follows R{i}")


def transform_t_steps(u: LRQWord) -> tuple[list, list[int], list[int], Word]:
    """The intermediate words w1, w2, w3 and the final T(u).

    w1 still contains the untouched ``"L"`` tokens.
    """
    check_lrq(u)
    n, k = u.n, u.k
    toks = u.tokens
    w1: list = ["L"] * len(toks)
    for p, (t, i) in enumerate(toks):
        if t in "RQ":
            w1[p] = k + 1 - i
            if t == "R":
                w1[p + 1] = k + 1 - i
    w2 = list(w1)
    letter = k + 1
    for p in range(len(w2) - 1, -1, -1):
        if w2[p] == "L":
            w2[p] = letter
            letter += 1
    w3 = w2[::-1]
    final = Word(tuple(w3) + tuple(range(k + 1, n)), n - 1, k)
    if not in_class_c1(final):
        raise WordError(f"T({u}) = {format_word(final.letters)} is not in C1; the LRQ word does not come from a network")
    return w1, w2, w3, final


def transform_t(u: LRQWord) -> Word:
    return transform_t_steps(u)[3]
