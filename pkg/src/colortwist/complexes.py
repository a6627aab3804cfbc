"""Graded skeletons of braid complexes: terms, multicones, cone presentations.

A skeleton records, for every term of a complex, its web, homological degree
``h``, quantum degree ``qdeg`` and a multiplicity. Differentials are not
tracked; the Euler operator sum (-1)^h q^qdeg mult webOp(web) is the check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

from .braidcore import (BraidWord, BudgetExhausted, Coloring, bfs_search, color_size,
                        colorings_along, find_clasp, negative_min_color_sum)
from .laurent import LaurentPoly, q_binom
from .webalg import (UP_LEFT, UP_RIGHT, Crossing, LadderWeb, OperatorQ, Rung,
                     crossing_degrees, crossing_ladder, web_op)

IDENTITY = "Identity"
OTHER = "Other"

ClaspSearchExhausted = BudgetExhausted


@dataclass(frozen=True)
class SkeletonTerm:
    web: LadderWeb
    h: int
    qdeg: int
    tag: str = OTHER
    witness: tuple[int, ...] | None = None
    mult: int = 1

    def shifted(self, dh: int, dq: int = 0) -> SkeletonTerm:
        return replace(self, h=self.h + dh, qdeg=self.qdeg + dq)

    def to_json(self) -> dict:
        return {"h": self.h, "q": self.qdeg, "mult": self.mult, "tag": self.tag,
                "web": self.web.to_json(),
                "witness": list(self.witness) if self.witness is not None else None}


@dataclass(frozen=True)
class ComplexSkeleton:
    top: tuple[int, ...]
    bottom: tuple[int, ...]
    terms: tuple[SkeletonTerm, ...] = ()

    def __post_init__(self):
        for t in self.terms:
            if t.web.top != self.top or t.web.bottom != self.bottom:
                raise ValueError("term boundary differs from skeleton boundary")

    def __len__(self) -> int:
        return len(self.terms)

    def shifted(self, dh: int, dq: int = 0) -> ComplexSkeleton:
        return ComplexSkeleton(self.top, self.bottom, tuple(t.shifted(dh, dq) for t in self.terms))

    def identity_terms(self) -> list[SkeletonTerm]:
        return [t for t in self.terms if t.tag == IDENTITY]

    def to_json(self) -> list[dict]:
        return [t.to_json() for t in self.terms]


def euler_of_skeleton(S: ComplexSkeleton, N: int) -> OperatorQ:
    total = OperatorQ.zero(S.bottom, S.top, N)
    for t in S.terms:
        total = total + web_op(t.web, N).scale(LaurentPoly.monomial(t.qdeg, (-1) ** t.h * t.mult))
    return total


eulerOfSkeleton = euler_of_skeleton


def min_size_level(web: LadderWeb) -> tuple[int, ...]:
    """First level of the web with the smallest color size."""
    return min(web.levels(), key=color_size)


def _term(web: LadderWeb, h: int, q: int, ref: Sequence[int], mult: int = 1) -> SkeletonTerm:
    if not web.columns or all(isinstance(c, Rung) and c.k == 0 for c in web.columns):
        return SkeletonTerm(web, h, q, IDENTITY, None, mult)
    w = min_size_level(web)
    return SkeletonTerm(web, h, q, OTHER, w if color_size(w) < color_size(ref) else None, mult)


# Crossings ---------------------------------------------------------------------


def crossing_skeleton_at(top: Sequence[int], position: int, sign: int) -> ComplexSkeleton:
    """Ladder terms of one crossing; ``top`` lists every strand's label above it."""
    top = tuple(top)
    p = position - 1
    i, j = top[p], top[p + 1]
    bottom = top[:p] + (j, i) + top[p + 2:]
    terms = []
    for k in range(min(i, j) + 1):
        h = crossing_degrees(i, j, sign, k)
        web = LadderWeb(top, crossing_ladder(top, position, k))
        if k == 0 and min(i, j) == 0 or (k == 0 and i == j):
            terms.append(SkeletonTerm(web, h, h, IDENTITY))
        else:
            terms.append(_term(web, h, h, top))
    return ComplexSkeleton(top, bottom, tuple(terms))


def crossing_skeleton(i: int, j: int, sign: int) -> ComplexSkeleton:
    """Top colors (i, j) on two strands."""
    return crossing_skeleton_at((i, j), 1, sign)


crossingSkeleton = crossing_skeleton


# Multicones --------------------------------------------------------------------


@dataclass(frozen=True)
class MulticoneSpec:
    """Indexed family of skeletons with an integer grading on the index set."""

    parts: tuple[tuple[int, ComplexSkeleton], ...]


def assemble_multicone(spec: MulticoneSpec) -> ComplexSkeleton:
    if not spec.parts:
        raise ValueError("empty multicone")
    top, bottom = spec.parts[0][1].top, spec.parts[0][1].bottom
    terms = []
    for hc, sk in spec.parts:
        if (sk.top, sk.bottom) != (top, bottom):
            raise ValueError("boundary mismatch between multicone parts")
        terms.extend(t.shifted(hc) for t in sk.terms)
    return ComplexSkeleton(top, bottom, tuple(terms))


assembleMulticone = assemble_multicone


def stack_terms(upper: SkeletonTerm, lower: SkeletonTerm, ref: Sequence[int]) -> SkeletonTerm:
    web = upper.web.then(lower.web)
    return _term(web, upper.h + lower.h, upper.qdeg + lower.qdeg, ref, upper.mult * lower.mult)


def stack(upper: ComplexSkeleton, lower: ComplexSkeleton) -> ComplexSkeleton:
    """Vertical composition: every pair of terms, degrees added."""
    terms = tuple(stack_terms(a, b, upper.top) for a in upper.terms for b in lower.terms)
    return ComplexSkeleton(upper.top, lower.bottom, terms)


def braid_skeleton(B: BraidWord, gamma: Coloring | Sequence[int]) -> ComplexSkeleton:
    """Full ladder expansion of a braid, assembled crossing by crossing as multicones."""
    labels = gamma.labels if isinstance(gamma, Coloring) else tuple(gamma)
    if not B.letters:
        return ComplexSkeleton(labels, labels, (SkeletonTerm(LadderWeb(labels), 0, 0, IDENTITY),))
    x = B.letters[0]
    first = crossing_skeleton_at(labels, abs(x), x)
    rest = braid_skeleton(BraidWord(B.n, B.letters[1:]), first.bottom)
    parts = []
    for t in first.terms:
        one = ComplexSkeleton(first.top, first.bottom, (replace(t, h=0),))
        parts.append((t.h, stack(one, rest)))
    out = assemble_multicone(MulticoneSpec(tuple(parts)))
    return ComplexSkeleton(out.top, out.bottom,
                           tuple(_term(t.web, t.h, t.qdeg, labels, t.mult) for t in out.terms))


def slide_shift(before: LadderWeb, after: LadderWeb, gamma: Sequence[int] | None = None) -> int:
    """Sum of min crossing colors before the move minus the same sum after it."""
    if gamma is not None:
        before = LadderWeb(tuple(gamma), before.columns)
        after = LadderWeb(tuple(gamma), after.columns)
    return _crossing_min_sum(before) - _crossing_min_sum(after)


def _crossing_min_sum(w: LadderWeb) -> int:
    total = 0
    for col, lab in zip(w.columns, w.levels()):
        if isinstance(col, Crossing):
            total += min(lab[col.position - 1], lab[col.position])
    return total


slideShift = slide_shift


# Clasps ------------------------------------------------------------------------


def _crossings(top: Sequence[int], letters: Sequence[int]) -> LadderWeb:
    return LadderWeb(tuple(top), tuple(Crossing(abs(x), 1 if x > 0 else -1) for x in letters))


def trapezoid_expansion(top: Sequence[int], position: int):
    """Expand the product of the two k=0 clasp ladders.

    Returns (p, coefficient, columns) triples; p = 0 is the identity and the
    rest are the rung squares with p indices moved out and back.
    """
    top = tuple(top)
    a, b = top[position - 1], top[position]
    ell = abs(a - b)
    out = []
    for p in range(ell + 1 if a != b else 1):
        c = q_binom(ell, ell - p)
        if a < b:
            cols = (Rung(position, UP_LEFT, p), Rung(position, UP_RIGHT, p))
        else:
            cols = (Rung(position, UP_RIGHT, p), Rung(position, UP_LEFT, p))
        if p == 0:
            cols = ()
        web = LadderWeb(top, cols)
        if any(x < 0 for lab in web.levels() for x in lab):
            continue
        out.append((p, c, cols))
    return out


def clasp_ladders(top: Sequence[int], position: int, k1: int, k2: int) -> tuple:
    top = tuple(top)
    p = position - 1
    mid = top[:p] + (top[p + 1], top[p]) + top[p + 2:]
    return crossing_ladder(top, position, k1) + crossing_ladder(mid, position, k2)


@dataclass
class ConePresentation:
    """Cone(identity -> X) with X obtained from ``C`` by removing ``eliminated``.

    ``C`` collects the shifted nonzero-degree summands of each expanded
    crossing or clasp. ``eliminated`` lists the summands of ``C`` cancelled
    against the p > 0 trapezoids by Gaussian elimination; they are kept so the
    Euler operator of X is exact.
    """

    gamma: Coloring
    identity_term: SkeletonTerm
    C: ComplexSkeleton
    eliminated: tuple[SkeletonTerm, ...] = ()
    elimination_log: list = field(default_factory=list)

    def x_euler(self, N: int | None = None) -> OperatorQ:
        N = self.gamma.N if N is None else N
        gone = ComplexSkeleton(self.C.top, self.C.bottom, self.eliminated)
        return euler_of_skeleton(self.C, N) - euler_of_skeleton(gone, N)

    def euler(self, N: int | None = None) -> OperatorQ:
        N = self.gamma.N if N is None else N
        ident = ComplexSkeleton(self.C.top, self.C.bottom, (self.identity_term,))
        return euler_of_skeleton(ident, N) - self.x_euler(N)

    def contract_violations(self) -> list[str]:
        cs = color_size(self.gamma)
        bad = []
        for t in self.C.terms + self.eliminated:
            if t.h < 0:
                bad.append(f"term at h={t.h}")
            if t.witness is None:
                bad.append("term without witness")
            elif t.witness not in t.web.levels():
                bad.append("witness is not a level of its web")
            elif color_size(t.witness) >= cs:
                bad.append(f"witness {t.witness} not smaller than gamma")
        return bad


def _first_unicolored(letters: Sequence[int], labels: tuple[int, ...]) -> int | None:
    for t, lab in enumerate(colorings_along(letters, Coloring(labels, max(labels + (0,))))):
        if t == len(letters):
            break
        i = abs(letters[t])
        if lab[i - 1] == lab[i]:
            return t
    return None


def _top_at(letters: Sequence[int], labels: tuple[int, ...], t: int) -> tuple[int, ...]:
    lab = list(labels)
    for x in letters[:t]:
        i = abs(x)
        lab[i - 1], lab[i] = lab[i], lab[i - 1]
    return tuple(lab)


def _context_web(labels, letters, t, cols, width) -> LadderWeb:
    """Crossings before letter t, then ``cols``, then crossings after t+width letters."""
    pre = _crossings(labels, letters[:t])
    mid = LadderWeb(pre.bottom, tuple(cols))
    post = _crossings(mid.bottom, letters[t + width:])
    return pre.then(mid).then(post)


def simplify_color_pure(B: BraidWord, gamma: Coloring, budget: int = 100_000) -> ConePresentation:
    if not B.positive():
        raise ValueError("simplifyColorPure expects a positive word")
    labels = gamma.labels
    if _top_at(B.letters, labels, len(B)) != labels:
        raise ValueError("word is not color-pure for this coloring")
    cur = tuple(B.letters)
    C: list[SkeletonTerm] = []
    gone: list[SkeletonTerm] = []
    log: list = []
    while cur:
        t = _first_unicolored(cur, labels)
        if t is not None:
            top = _top_at(cur, labels, t)
            i = top[abs(cur[t]) - 1]
            for k in range(1, i + 1):
                web = _context_web(labels, cur, t, crossing_ladder(top, abs(cur[t]), k), 1)
                C.append(_term(web, k - 1, k, labels))
            log.append({"step": "unicolored", "position": t + 1, "color": i})
            cur = cur[:t] + cur[t + 1:]
            continue
        res = find_clasp(BraidWord(B.n, cur), gamma, budget)
        if res.moves:
            log.append({"step": "isotopy", "moves": [list(m) for m in res.moves]})
        cur = res.word.letters
        t = res.position - 1
        pos = abs(cur[t])
        top = _top_at(cur, labels, t)
        a, b = top[pos - 1], top[pos]
        m = min(a, b)
        for k1, k2 in itertools.product(range(m + 1), repeat=2):
            if k1 == k2 == 0:
                continue
            web = _context_web(labels, cur, t, clasp_ladders(top, pos, k1, k2), 2)
            C.append(_term(web, k1 + k2 - 1, k1 + k2, labels))
        log.append({"step": "clasp", "position": t + 1, "colors": [a, b]})
        for p, coeff, cols in trapezoid_expansion(top, pos):
            if p == 0:
                continue
            web = _context_web(labels, cur, t, cols, 2)
            for e, c in coeff.items():
                gone.append(_term(web, 0, e, labels, c))
            log.append({"step": "eliminate", "p": p, "coefficient": coeff.to_json()})
        cur = cur[:t] + cur[t + 2:]
    ident = SkeletonTerm(LadderWeb(labels), 0, 0, IDENTITY)
    return ConePresentation(gamma, ident, ComplexSkeleton(labels, labels, tuple(C)),
                            tuple(gone), log)


simplifyColorPure = simplify_color_pure


# Mixed signs -------------------------------------------------------------------


def _first_pair(w: Sequence[int]) -> int | None:
    for p in range(len(w) - 1):
        if abs(w[p]) == abs(w[p + 1]):
            return p
    return None


def posneg_skeleton(B: BraidWord, gamma: Coloring, budget: int = 100_000) -> ComplexSkeleton:
    """Multicone skeleton of a color-pure braid with mixed signs.

    Exactly one term is tagged Identity, at h equal to the sum of min colors
    over negative crossings; R2 cancellations contribute (-q)^min.
    """
    labels = gamma.labels
    if _top_at(B.letters, labels, len(B)) != labels:
        raise ValueError("word is not color-pure for this coloring")
    cur = tuple(B.letters)
    h0 = q0 = 0
    terms: list[SkeletonTerm] = []
    while cur:
        t = _first_unicolored(cur, labels)
        if t is not None:
            x = cur[t]
            top = _top_at(cur, labels, t)
            i = top[abs(x) - 1]
            for k in range(1, i + 1):
                h = crossing_degrees(i, i, x, k)
                web = _context_web(labels, cur, t, crossing_ladder(top, abs(x), k), 1)
                terms.append(_term(web, h0 + h, q0 + h, labels))
            d = crossing_degrees(i, i, x, 0)
            h0, q0 = h0 + d, q0 + d
            cur = cur[:t] + cur[t + 1:]
            continue
        res = bfs_search(cur, _first_pair, budget, mixed=True)
        if res is None:
            raise ClaspSearchExhausted("no clasp or cancelling pair in the move class")
        cur, t, _ = res
        x, y = cur[t], cur[t + 1]
        pos = abs(x)
        top = _top_at(cur, labels, t)
        a, b = top[pos - 1], top[pos]
        m = min(a, b)
        if x != y:
            h0, q0 = h0 + m, q0 + m
            cur = cur[:t] + cur[t + 2:]
            continue
        for k1, k2 in itertools.product(range(m + 1), repeat=2):
            if k1 == k2 == 0:
                continue
            h = crossing_degrees(a, b, x, k1) + crossing_degrees(b, a, x, k2)
            web = _context_web(labels, cur, t, clasp_ladders(top, pos, k1, k2), 2)
            terms.append(_term(web, h0 + h, q0 + h, labels))
        ht = 2 * crossing_degrees(a, b, x, 0)
        for p, coeff, cols in trapezoid_expansion(top, pos):
            if p == 0:
                continue
            web = _context_web(labels, cur, t, cols, 2)
            for e, c in coeff.items():
                terms.append(_term(web, h0 + ht, q0 + ht + e, labels, c))
        h0, q0 = h0 + ht, q0 + ht
        cur = cur[:t] + cur[t + 2:]
    terms.append(SkeletonTerm(LadderWeb(labels), h0, q0, IDENTITY))
    return ComplexSkeleton(labels, labels, tuple(terms))


posnegSkeleton = posneg_skeleton


def t_minus(B: BraidWord, gamma: Coloring) -> int:
    return negative_min_color_sum(B, gamma)
