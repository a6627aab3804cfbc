"""Colored braid words: colorings, purity, deletions, clasp search, certificates.

Letters are signed 1-indexed integers: ``2`` is sigma_2 and ``-2`` its inverse.
A word is read top to bottom; letter ``i`` swaps the labels at positions
``i-1`` and ``i`` of the running coloring.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .laurent import LaurentPoly


class BraidError(Exception):
    pass


class NotColorPure(BraidError):
    pass


class IntervalNotColorPure(BraidError):
    pass


class IncompatibleWithPeriod(BraidError):
    pass


class BudgetExhausted(BraidError):
    """A bounded search ran out of budget before reaching a verdict."""


NotFound = BudgetExhausted

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class Coloring:
    labels: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        for x in self.labels:
            if not 0 <= x <= self.N:
                raise ValueError(f"label {x} outside [0, {self.N}]")

    @property
    def n(self) -> int:
        return len(self.labels)

    def permuted(self, letter: int) -> Coloring:
        i = abs(letter)
        lab = list(self.labels)
        lab[i - 1], lab[i] = lab[i], lab[i - 1]
        return Coloring(tuple(lab), self.N)

    def is_uniform(self) -> bool:
        return len(set(self.labels)) <= 1


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) > self.n - 1:
                raise ValueError(f"letter {x} invalid for {self.n} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: BraidWord) -> BraidWord:
        if other.n != self.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def __mul__(self, k: int) -> BraidWord:
        return BraidWord(self.n, self.letters * k)

    def pairs(self) -> list[tuple[int, int]]:
        return [(abs(x), 1 if x > 0 else -1) for x in self.letters]

    def positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def permutation(self) -> tuple[int, ...]:
        """perm[k] is the top position of the strand ending at bottom position k."""
        perm = list(range(self.n))
        for x in self.letters:
            i = abs(x)
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return tuple(perm)

    def sub(self, a: int, b: int) -> BraidWord:
        """Partial braid made of letters a+1 .. b."""
        return BraidWord(self.n, self.letters[a:b])

    def to_text(self) -> str:
        return " ".join(str(x) for x in self.letters)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> BraidWord:
        letters = [int(t) for t in text.split()]
        if n is None:
            n = max((abs(x) for x in letters), default=0) + 1
        return cls(n, tuple(letters))


def color_size(gamma: Coloring | Sequence[int]) -> int:
    labels = gamma.labels if isinstance(gamma, Coloring) else tuple(gamma)
    return sum(min(labels[i], labels[j])
               for i in range(len(labels)) for j in range(i + 1, len(labels)))


colorSize = color_size


def induced_coloring(B: BraidWord, gamma: Coloring, ell: int) -> Coloring:
    if not 0 <= ell <= len(B):
        raise IndexError(f"index {ell} outside [0, {len(B)}]")
    lab = list(gamma.labels)
    for x in B.letters[:ell]:
        i = abs(x)
        lab[i - 1], lab[i] = lab[i], lab[i - 1]
    return Coloring(tuple(lab), gamma.N)


def colorings_along(letters: Iterable[int], gamma: Coloring) -> Iterator[tuple[int, ...]]:
    """Yield gamma(0), gamma(1), ... for the given letters."""
    lab = list(gamma.labels)
    yield tuple(lab)
    for x in letters:
        i = abs(x)
        lab[i - 1], lab[i] = lab[i], lab[i - 1]
        yield tuple(lab)


def full_twist(n: int) -> BraidWord:
    if n < 1:
        raise ValueError("need at least one strand")
    return BraidWord(n, tuple(range(1, n)) * n)


def crossing_colors(B: BraidWord, gamma: Coloring) -> list[tuple[int, int]]:
    """(left, right) labels just above each crossing."""
    out = []
    for k, lab in enumerate(colorings_along(B.letters, gamma)):
        if k == len(B):
            break
        i = abs(B.letters[k])
        out.append((lab[i - 1], lab[i]))
    return out


def min_color_sum(B: BraidWord, gamma: Coloring) -> int:
    return sum(min(a, b) for a, b in crossing_colors(B, gamma))


def negative_min_color_sum(B: BraidWord, gamma: Coloring) -> int:
    """Sum of min colors over negative crossings only."""
    return sum(min(a, b) for (a, b), x in zip(crossing_colors(B, gamma), B.letters) if x < 0)


def is_color_pure(B: BraidWord, gamma: Coloring) -> bool:
    return induced_coloring(B, gamma, len(B)).labels == gamma.labels


# Infinite words --------------------------------------------------------------


@dataclass(frozen=True)
class InfiniteBraidWord:
    n: int
    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        object.__setattr__(self, "period", tuple(int(x) for x in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        BraidWord(self.n, self.prefix + self.period)

    def letter(self, k: int) -> int:
        """The k-th letter, 1-indexed."""
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.period[(k - len(self.prefix) - 1) % len(self.period)]

    def truncate(self, ell: int) -> BraidWord:
        return BraidWord(self.n, tuple(self.letter(k) for k in range(1, ell + 1)))

    def letters_between(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(self.letter(k) for k in range(a + 1, b + 1))

    def positive(self) -> bool:
        return all(x > 0 for x in self.prefix + self.period)

    def to_json(self, gamma: Coloring | None = None) -> dict:
        out: dict = {"n": self.n, "prefix": list(self.prefix), "period": list(self.period)}
        if gamma is not None:
            out["N"] = gamma.N
            out["gamma"] = list(gamma.labels)
        return out


def full_twist_infinite(n: int) -> InfiniteBraidWord:
    return InfiniteBraidWord(n, (), full_twist(n).letters)


def load_infinite_word(obj: dict | str) -> tuple[InfiniteBraidWord, Coloring]:
    if isinstance(obj, str):
        obj = json.loads(obj)
    n = int(obj["n"])
    W = InfiniteBraidWord(n, tuple(obj.get("prefix", ())), tuple(obj["period"]))
    gamma = Coloring(tuple(obj["gamma"]), int(obj["N"]))
    if gamma.n != n:
        raise ValueError("gamma length differs from n")
    return W, gamma


def _period_orbit(W: InfiniteBraidWord, gamma: Coloring) -> int:
    """Letters in one coloring cycle after the prefix: |period| times the orbit order."""
    start = induced_coloring(W.truncate(len(W.prefix)), gamma, len(W.prefix))
    per = BraidWord(W.n, W.period)
    cur, order = start, 0
    while True:
        cur = induced_coloring(per, cur, len(per))
        order += 1
        if cur == start:
            return order * len(W.period)


@dataclass(frozen=True)
class PuritySequence:
    gamma: Coloring
    head: tuple[int, ...]
    cycle: tuple[int, ...]
    stride: int

    def __iter__(self) -> Iterator[int]:
        yield from self.head
        j = 0
        while True:
            for m in self.cycle:
                yield m + j * self.stride
            j += 1

    def take(self, k: int) -> list[int]:
        out = []
        for m in self:
            if len(out) >= k:
                break
            out.append(m)
        return out

    def index_of(self, m: int) -> int | None:
        """1-based position of m in the sequence, or None."""
        if m in self.head:
            return self.head.index(m) + 1
        base = len(self.head)
        if not self.cycle or m < self.cycle[0]:
            return None
        j, r = divmod(m - self.cycle[0], self.stride)
        r += self.cycle[0]
        if r in self.cycle:
            return base + j * len(self.cycle) + self.cycle.index(r) + 1
        return None

    def count_upto(self, ell: int) -> int:
        """Number of entries <= ell."""
        c = sum(1 for m in self.head if m <= ell)
        if self.cycle and ell >= self.cycle[0]:
            for m in self.cycle:
                if ell >= m:
                    c += (ell - m) // self.stride + 1
        return c


def maximal_purity_sequence(W: InfiniteBraidWord, gamma: Coloring) -> PuritySequence:
    p = len(W.prefix)
    D = _period_orbit(W, gamma)
    head, cycle = [], []
    for k, lab in enumerate(colorings_along(W.letters_between(0, p + D), gamma)):
        if k == 0 or lab != gamma.labels:
            continue
        (head if k <= p else cycle).append(k)
    if not cycle:
        raise NotColorPure("no pure index recurs within one coloring cycle of the period")
    return PuritySequence(gamma, tuple(head), tuple(cycle), D)


def maximalPuritySequence(W: InfiniteBraidWord, gamma: Coloring, count: int) -> list[int]:
    return maximal_purity_sequence(W, gamma).take(count)


# Certificates and deletions --------------------------------------------------


@dataclass(frozen=True)
class CompletenessCertificate:
    head: tuple[tuple[int, int], ...] = ()
    tail_start: int | None = None
    tail_stride: int | None = None
    tail_pattern: tuple[tuple[int, int], ...] = ()

    @property
    def has_tail(self) -> bool:
        return self.tail_start is not None and bool(self.tail_pattern)

    def intervals(self, upto: int) -> list[tuple[int, int]]:
        """Every interval with start below ``upto``, in order."""
        out = [iv for iv in self.head if iv[0] < upto]
        if self.has_tail:
            j = 0
            while self.tail_start + j * self.tail_stride < upto:
                base = self.tail_start + j * self.tail_stride
                out.extend((base + a, base + b) for a, b in self.tail_pattern if base + a < upto)
                j += 1
        return out

    def to_json(self) -> dict:
        out: dict = {"head": [list(iv) for iv in self.head]}
        if self.has_tail:
            out["tail"] = {"start": self.tail_start, "stride": self.tail_stride,
                           "pattern": [list(iv) for iv in self.tail_pattern]}
        return out

    @classmethod
    def from_json(cls, obj: dict | str) -> CompletenessCertificate:
        if isinstance(obj, str):
            obj = json.loads(obj)
        head = tuple((int(a), int(b)) for a, b in obj.get("head", ()))
        tail = obj.get("tail")
        if not tail:
            return cls(head)
        return cls(head, int(tail["start"]), int(tail["stride"]),
                   tuple((int(a), int(b)) for a, b in tail["pattern"]))


EMPTY_CERTIFICATE = CompletenessCertificate()


def _check_layout(W: InfiniteBraidWord, cert: CompletenessCertificate) -> None:
    for a, b in cert.head:
        if not 0 <= a < b:
            raise IncompatibleWithPeriod(f"bad interval ({a}, {b})")
    for (a1, b1), (a2, b2) in zip(cert.head, cert.head[1:]):
        if a2 < b1:
            raise IncompatibleWithPeriod("head intervals overlap or are out of order")
    if not cert.has_tail:
        return
    s, d = cert.tail_start, cert.tail_stride
    if d <= 0 or d % len(W.period):
        raise IncompatibleWithPeriod("tail stride must be a positive multiple of the period")
    if s < 0 or (cert.head and cert.head[-1][1] > s):
        raise IncompatibleWithPeriod("tail must start after the head intervals")
    prev = 0
    for a, b in cert.tail_pattern:
        if not (prev <= a < b <= d):
            raise IncompatibleWithPeriod("tail pattern must be ordered and fit in one stride")
        prev = b
    for t in range(s, len(W.prefix)):
        if W.letter(t + 1) != W.letter(t + 1 + d):
            raise IncompatibleWithPeriod("tail start lies in a non-periodic part of the prefix")


def _check_pure_intervals(W: InfiniteBraidWord, gamma: Coloring,
                          cert: CompletenessCertificate) -> None:
    horizon = max([b for _, b in cert.head] + [0])
    if cert.has_tail:
        # colorings at block starts repeat within n! blocks
        s, d = cert.tail_start, cert.tail_stride
        seen = set()
        j = 0
        while True:
            lab = induced_coloring(W.truncate(s + j * d), gamma, s + j * d).labels
            if lab in seen:
                break
            seen.add(lab)
            j += 1
        horizon = max(horizon, s + j * d + 1)
    cols = list(colorings_along(W.letters_between(0, horizon + (cert.tail_stride or 0)), gamma))
    for a, b in cert.intervals(horizon):
        if cols[a] != cols[b]:
            raise IntervalNotColorPure(f"interval ({a}, {b}) is not color-pure")


def delete_subbraids(W: InfiniteBraidWord, gamma: Coloring,
                     cert: CompletenessCertificate) -> InfiniteBraidWord:
    _check_layout(W, cert)
    _check_pure_intervals(W, gamma, cert)
    if not cert.has_tail:
        end = max([b for _, b in cert.head] + [0])
        end = max(end, len(W.prefix))
        keep = _drop(W.letters_between(0, end), cert.head)
        return InfiniteBraidWord(W.n, keep, W.period)
    s, d = cert.tail_start, cert.tail_stride
    prefix = _drop(W.letters_between(0, s), cert.head)
    period = _drop(W.letters_between(s, s + d), cert.tail_pattern)
    if not period:
        raise IncompatibleWithPeriod("deletion leaves a finite word")
    return InfiniteBraidWord(W.n, prefix, period)


def _drop(letters: Sequence[int], intervals: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    gone = set()
    for a, b in intervals:
        gone.update(range(a, b))
    return tuple(x for k, x in enumerate(letters) if k not in gone)


def deleteSubbraids(W, gamma, cert):
    return delete_subbraids(W, gamma, cert)


# Braid moves -----------------------------------------------------------------

# sign patterns on (i, j, i) -> (j, i, j) for |i - j| = 1
_BRAID_SIGNS = {
    (1, 1, 1): (1, 1, 1),
    (-1, -1, -1): (-1, -1, -1),
    (1, 1, -1): (-1, 1, 1),
    (-1, 1, 1): (1, 1, -1),
    (1, -1, -1): (-1, -1, 1),
    (-1, -1, 1): (1, -1, -1),
}


def neighbors(word: tuple[int, ...], mixed: bool = False) -> Iterator[tuple[tuple[str, int], tuple[int, ...]]]:
    """Words one braid move away, with the move as (kind, 1-indexed position)."""
    w = word
    for p in range(len(w) - 1):
        x, y = w[p], w[p + 1]
        if abs(abs(x) - abs(y)) >= 2 and (mixed or (x > 0 and y > 0)):
            yield ("far", p + 1), w[:p] + (y, x) + w[p + 2:]
    for p in range(len(w) - 2):
        x, y, z = w[p], w[p + 1], w[p + 2]
        if abs(x) != abs(z) or abs(abs(x) - abs(y)) != 1:
            continue
        signs = (_sgn(x), _sgn(y), _sgn(z))
        if not mixed and signs != (1, 1, 1):
            continue
        out = _BRAID_SIGNS.get(signs)
        if out is None:
            continue
        i, j = abs(x), abs(y)
        yield ("braid", p + 1), w[:p] + (out[0] * j, out[1] * i, out[2] * j) + w[p + 3:]


def _sgn(x: int) -> int:
    return 1 if x > 0 else -1


def apply_move(word: Sequence[int], move: tuple[str, int], mixed: bool = True) -> tuple[int, ...]:
    for mv, w2 in neighbors(tuple(word), mixed=mixed):
        if mv == move:
            return w2
    raise ValueError(f"move {move} does not apply")


def replay(word: Sequence[int], moves: Iterable[tuple[str, int]]) -> tuple[int, ...]:
    w = tuple(word)
    for mv in moves:
        w = apply_move(w, mv)
    return w


def bfs_search(word: Sequence[int], found: Callable[[tuple[int, ...]], int | None],
               budget: int = DEFAULT_BUDGET, mixed: bool = False):
    """Level-by-level BFS, each level in lexicographic order.

    Returns (word, hit, moves) for the first word where ``found`` is not None.
    Returns None if the move class is exhausted without a hit; raises
    BudgetExhausted if more than ``budget`` words would be expanded.
    """
    start = tuple(word)
    parent: dict[tuple[int, ...], tuple | None] = {start: None}
    level = [start]
    expanded = 0
    while level:
        level.sort()
        for w in level:
            hit = found(w)
            if hit is not None:
                return w, hit, _path(parent, w)
        nxt = []
        for w in level:
            expanded += 1
            if expanded > budget:
                raise BudgetExhausted(f"budget of {budget} expanded words exhausted")
            for mv, w2 in neighbors(w, mixed=mixed):
                if w2 not in parent:
                    parent[w2] = (w, mv)
                    nxt.append(w2)
        level = nxt
    return None


def _path(parent, w) -> list[tuple[str, int]]:
    moves = []
    while parent[w] is not None:
        w, mv = parent[w]
        moves.append(mv)
    return moves[::-1]


def first_clasp(w: Sequence[int]) -> int | None:
    for p in range(len(w) - 1):
        if w[p] > 0 and w[p] == w[p + 1]:
            return p + 1
    return None


@dataclass(frozen=True)
class ClaspResult:
    word: BraidWord
    position: int
    moves: tuple[tuple[str, int], ...] = field(default=())


def find_clasp(B: BraidWord, gamma: Coloring, budget: int = DEFAULT_BUDGET) -> ClaspResult:
    if not B.positive():
        raise ValueError("findClasp expects a positive word")
    res = bfs_search(B.letters, first_clasp, budget)
    if res is None:
        raise BudgetExhausted("move class exhausted without a clasp")
    w, pos, moves = res
    return ClaspResult(BraidWord(B.n, w), pos, tuple(moves))


findClasp = find_clasp


# Braid equivalence for certificates -------------------------------------------


def burau(B: BraidWord) -> tuple[tuple[LaurentPoly, ...], ...]:
    """Unreduced Burau matrix, variable q."""
    n = B.n
    one, zero = LaurentPoly.one(), LaurentPoly.zero()
    M = [[one if r == c else zero for c in range(n)] for r in range(n)]
    t = LaurentPoly.monomial(1)
    tinv = LaurentPoly.monomial(-1)
    for x in B.letters:
        i = abs(x) - 1
        if x > 0:
            blk = ((one - t, t), (one, zero))
        else:
            blk = ((zero, one), (tinv, one - tinv))
        for r in range(n):
            a, b = M[r][i], M[r][i + 1]
            M[r][i] = a * blk[0][0] + b * blk[1][0]
            M[r][i + 1] = a * blk[0][1] + b * blk[1][1]
    return tuple(tuple(row) for row in M)


def positive_equivalent(u: Sequence[int], v: Sequence[int], n: int,
                        budget: int = DEFAULT_BUDGET) -> bool:
    """Decide whether two positive words are equal as braids.

    Length, permutation and Burau matrix give exact rejections. Burau is
    faithful for n <= 3; otherwise the positive move class of ``u`` is searched.
    """
    u, v = tuple(u), tuple(v)
    if u == v:
        return True
    if len(u) != len(v):
        return False
    bu, bv = BraidWord(n, u), BraidWord(n, v)
    if bu.permutation() != bv.permutation():
        return False
    if burau(bu) != burau(bv):
        return False
    if n <= 3:
        return True
    res = bfs_search(u, lambda w: 0 if w == v else None, budget)
    return res is not None


def verify_completeness_certificate(W: InfiniteBraidWord, gamma: Coloring,
                                    cert: CompletenessCertificate,
                                    budget: int = DEFAULT_BUDGET) -> bool:
    """True iff deleting the certificate's intervals yields FT^infinity.

    The deleted word D is eventually periodic with period P. With L = n(n-1)
    and block length lcm(P, L), D matches FT^infinity iff for some cut c that
    is a multiple of L in the first block after the prefix, D[:c] equals
    FT^(c/L) and D[c : c + block] equals FT^(block/L) as positive braids.
    """
    if not W.positive():
        raise ValueError("certificates are defined for positive words")
    D = delete_subbraids(W, gamma, cert)
    n = W.n
    if n == 1:
        return True
    L = n * (n - 1)
    ft = full_twist(n).letters
    block = math.lcm(len(D.period), L)
    p = len(D.prefix)
    first = -(-p // L) * L
    for c in range(first, p + block, L):
        if not positive_equivalent(D.letters_between(c, c + block), ft * (block // L), n, budget):
            continue
        if positive_equivalent(D.letters_between(0, c), ft * (c // L), n, budget):
            return True
    return False


verifyCompletenessCertificate = verify_completeness_certificate
inducedColoring = induced_coloring
fullTwist = full_twist
minColorSum = min_color_sum
isColorPure = is_color_pure
