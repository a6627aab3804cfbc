"""Decategorified sl(N) ladder webs acting on tensor products of exterior powers.

Basis states are tuples of sorted index tuples, one per strand, with indices
in ``range(N)``. JSON output shifts them to ``1..N``.

Conventions, fixed so the digon, square-switch and braid relations hold
exactly:

* split  v_S -> sum_{S = A u B} (-1)^inv(A,B) q^(|A||B| - inv(A,B)) v_A (x) v_B
* merge  v_A (x) v_B -> (-1)^inv(A,B) q^(-inv(A,B)) v_(A u B), zero unless disjoint
* a rung moving k indices between neighbours is a split followed by a merge
* the crossing with bottom labels (x, y) has ladder terms L_k, k = 0..min:
  UR(k) then UL(y-x+k) going upward when x <= y, the mirror otherwise;
  the positive crossing weights L_k by (-q)^k, the negative one by (-q)^(m-k)
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .braidcore import BraidWord, Coloring, colorings_along, full_twist
from .laurent import LaurentPoly, q_binom, q_fact, q_int

State = tuple[tuple[int, ...], ...]

qInt, qFact, qBinom = q_int, q_fact, q_binom


@functools.lru_cache(maxsize=None)
def basis(labels: tuple[int, ...], N: int) -> tuple[State, ...]:
    if any(not 0 <= a <= N for a in labels):
        return ()
    return tuple(itertools.product(*[tuple(itertools.combinations(range(N), a)) for a in labels]))


def inv(A: Iterable[int], B: Iterable[int]) -> int:
    B = tuple(B)
    return sum(1 for x in A for y in B if x > y)


def _merge_coeff(A, B) -> tuple[int, int]:
    t = inv(A, B)
    return (-1) ** t, -t


def _split_coeff(A, B) -> tuple[int, int]:
    t = inv(A, B)
    return (-1) ** t, len(A) * len(B) - t


class OperatorQ:
    """Sparse matrix over Laurent polynomials from ``dom`` labels to ``cod`` labels."""

    __slots__ = ("dom", "cod", "N", "entries")

    def __init__(self, dom: Sequence[int], cod: Sequence[int], N: int,
                 entries: dict[tuple[State, State], LaurentPoly] | None = None):
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.N = N
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def identity(cls, labels: Sequence[int], N: int) -> OperatorQ:
        labels = tuple(labels)
        one = LaurentPoly.one()
        return cls(labels, labels, N, {(s, s): one for s in basis(labels, N)})

    @classmethod
    def zero(cls, dom, cod, N) -> OperatorQ:
        return cls(dom, cod, N, {})

    @property
    def dim(self) -> tuple[int, int]:
        return len(basis(self.cod, self.N)), len(basis(self.dom, self.N))

    def is_zero(self) -> bool:
        return not self.entries

    def _check_same(self, other: OperatorQ) -> None:
        if (self.dom, self.cod, self.N) != (other.dom, other.cod, other.N):
            raise ValueError("operator shapes differ")

    def __add__(self, other: OperatorQ) -> OperatorQ:
        self._check_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return OperatorQ(self.dom, self.cod, self.N, out)

    def __neg__(self) -> OperatorQ:
        return OperatorQ(self.dom, self.cod, self.N, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: OperatorQ) -> OperatorQ:
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> OperatorQ:
        return OperatorQ(self.dom, self.cod, self.N, {k: v * c for k, v in self.entries.items()})

    def __matmul__(self, other: OperatorQ) -> OperatorQ:
        """Composition: apply ``other`` first."""
        if self.dom != other.cod or self.N != other.N:
            raise ValueError(f"cannot compose {self.dom} with codomain {other.cod}")
        rows: dict[State, list[tuple[State, LaurentPoly]]] = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        acc: dict[tuple[State, State], dict[int, int]] = {}
        for (r, m), v in self.entries.items():
            for c, w in rows.get(m, ()):
                d = acc.setdefault((r, c), {})
                for e1, c1 in v._c.items():
                    for e2, c2 in w._c.items():
                        d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        out = {}
        for k, d in acc.items():
            p = LaurentPoly({e: c for e, c in d.items() if c})
            if p:
                out[k] = p
        return OperatorQ(other.dom, self.cod, self.N, out)

    def tensor(self, other: OperatorQ) -> OperatorQ:
        """Place ``other`` to the right of ``self``."""
        if self.N != other.N:
            raise ValueError("ranks differ")
        out = {}
        for (r1, c1), v1 in self.entries.items():
            for (r2, c2), v2 in other.entries.items():
                out[(r1 + r2, c1 + c2)] = v1 * v2
        return OperatorQ(self.dom + other.dom, self.cod + other.cod, self.N, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorQ):
            return NotImplemented
        return (self.dom, self.cod, self.N) == (other.dom, other.cod, other.N) \
            and self.entries == other.entries

    __hash__ = None

    def min_degree(self) -> int | None:
        """Smallest q-exponent over nonzero entries; None for the zero operator."""
        degs = [v.min_degree() for v in self.entries.values()]
        return min(degs) if degs else None

    def truncate(self, M: int) -> OperatorQ:
        return OperatorQ(self.dom, self.cod, self.N,
                         {k: v.truncate(M) for k, v in self.entries.items()})

    def equal_mod(self, other: OperatorQ, M: int) -> bool:
        d = (self - other).min_degree()
        return d is None or d >= M

    def to_json(self) -> dict:
        rows, cols = self.dim
        ents = []
        for (r, c), v in sorted(self.entries.items()):
            ents.append([_state_json(r), _state_json(c), _poly_json(v)])
        return {"dim": [rows, cols], "N": self.N, "dom": list(self.dom), "cod": list(self.cod),
                "entries": ents}

    @classmethod
    def from_json(cls, obj: dict) -> OperatorQ:
        ents = {}
        for r, c, p in obj["entries"]:
            ents[(_state_parse(r), _state_parse(c))] = LaurentPoly(
                {int(e): int(v) for e, v in p.items()})
        return cls(obj["dom"], obj["cod"], obj["N"], ents)

    def digest(self, M: int | None = None) -> str:
        op = self if M is None else self.truncate(M)
        blob = json.dumps(op.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self) -> str:
        return f"OperatorQ({self.dom} -> {self.cod}, N={self.N}, nnz={len(self.entries)})"


def _state_json(s: State) -> list[list[int]]:
    return [[x + 1 for x in part] for part in s]


def _state_parse(s) -> State:
    return tuple(tuple(x - 1 for x in part) for part in s)


def _poly_json(p: LaurentPoly) -> dict[str, str]:
    return {str(e): str(c) for e, c in p.items()}


# Basic webs ------------------------------------------------------------------


def split_op(a: int, b: int, position: int, context: Sequence[int], N: int) -> OperatorQ:
    """Split strand ``position`` (1-indexed) of ``context`` labelled a+b into (a, b)."""
    dom = tuple(context)
    if not 1 <= position <= len(dom):
        raise IndexError("position out of range")
    if dom[position - 1] != a + b:
        raise ValueError("context label differs from a + b")
    p = position - 1
    cod = dom[:p] + (a, b) + dom[p + 1:]
    if min(a, b) < 0 or a + b > N:
        return OperatorQ.zero(dom, cod, N)
    out = {}
    for st in basis(dom, N):
        S = st[p]
        for A in itertools.combinations(S, a):
            B = tuple(x for x in S if x not in A)
            sg, e = _split_coeff(A, B)
            out[(st[:p] + (A, B) + st[p + 1:], st)] = LaurentPoly.monomial(e, sg)
    return OperatorQ(dom, cod, N, out)


def merge_op(a: int, b: int, position: int, context: Sequence[int], N: int) -> OperatorQ:
    """Merge strands ``position``, ``position+1`` labelled (a, b) into a+b."""
    dom = tuple(context)
    if not 1 <= position < len(dom):
        raise IndexError("position out of range")
    if dom[position - 1: position + 1] != (a, b):
        raise ValueError("context labels differ from (a, b)")
    p = position - 1
    cod = dom[:p] + (a + b,) + dom[p + 2:]
    if a + b > N:
        return OperatorQ.zero(dom, cod, N)
    out = {}
    for st in basis(dom, N):
        A, B = st[p], st[p + 1]
        if set(A) & set(B):
            continue
        sg, e = _merge_coeff(A, B)
        out[(st[:p] + (tuple(sorted(A + B)),) + st[p + 2:], st)] = LaurentPoly.monomial(e, sg)
    return OperatorQ(dom, cod, N, out)


splitOp, mergeOp = split_op, merge_op

UP_RIGHT = "R"
UP_LEFT = "L"


@dataclass(frozen=True)
class Crossing:
    position: int
    sign: int = 1


@dataclass(frozen=True)
class Rung:
    position: int
    direction: str
    k: int

    def __post_init__(self):
        if self.direction not in (UP_RIGHT, UP_LEFT):
            raise ValueError("direction must be 'R' (up-right) or 'L' (up-left)")


Column = Crossing | Rung


def column_bottom(col: Column, top: tuple[int, ...]) -> tuple[int, ...]:
    """Labels just below a column, given the labels just above it."""
    p = col.position - 1
    lab = list(top)
    if isinstance(col, Crossing):
        lab[p], lab[p + 1] = lab[p + 1], lab[p]
    elif col.direction == UP_RIGHT:
        lab[p] += col.k
        lab[p + 1] -= col.k
    else:
        lab[p] -= col.k
        lab[p + 1] += col.k
    return tuple(lab)


def column_top(col: Column, bottom: tuple[int, ...]) -> tuple[int, ...]:
    p = col.position - 1
    lab = list(bottom)
    if isinstance(col, Crossing):
        lab[p], lab[p + 1] = lab[p + 1], lab[p]
    elif col.direction == UP_RIGHT:
        lab[p] -= col.k
        lab[p + 1] += col.k
    else:
        lab[p] += col.k
        lab[p + 1] -= col.k
    return tuple(lab)


@dataclass(frozen=True)
class LadderWeb:
    """Columns listed top to bottom below the top boundary ``top``."""

    top: tuple[int, ...]
    columns: tuple[Column, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "columns", tuple(self.columns))

    def levels(self) -> list[tuple[int, ...]]:
        """Labels above the first column, between columns, and below the last."""
        out = [self.top]
        for col in self.columns:
            out.append(column_bottom(col, out[-1]))
        return out

    @property
    def bottom(self) -> tuple[int, ...]:
        return self.levels()[-1]

    def is_zero(self, N: int) -> bool:
        return any(not 0 <= a <= N for lab in self.levels() for a in lab)

    def then(self, other: LadderWeb) -> LadderWeb:
        """Stack ``other`` below ``self``."""
        if other.top != self.bottom:
            raise ValueError("boundary mismatch between webs")
        return LadderWeb(self.top, self.columns + other.columns)

    @classmethod
    def identity(cls, labels: Sequence[int]) -> LadderWeb:
        return cls(tuple(labels), ())

    @classmethod
    def from_braid(cls, B: BraidWord, top: Sequence[int]) -> LadderWeb:
        return cls(tuple(top), tuple(Crossing(abs(x), 1 if x > 0 else -1) for x in B.letters))

    def crossings(self) -> list[Crossing]:
        return [c for c in self.columns if isinstance(c, Crossing)]

    def to_json(self) -> dict:
        cols = []
        for c in self.columns:
            if isinstance(c, Crossing):
                cols.append(["X", c.position, c.sign])
            else:
                cols.append([c.direction, c.position, c.k])
        return {"top": list(self.top), "columns": cols}

    @classmethod
    def from_json(cls, obj: dict) -> LadderWeb:
        cols = []
        for kind, p, v in obj["columns"]:
            cols.append(Crossing(p, v) if kind == "X" else Rung(p, kind, v))
        return cls(tuple(obj["top"]), tuple(cols))


@functools.lru_cache(maxsize=None)
def _rung_cached(bottom: tuple[int, ...], position: int, direction: str, k: int, N: int) -> OperatorQ:
    col = Rung(position, direction, k)
    top = column_top(col, bottom)
    if any(not 0 <= a <= N for a in bottom + top):
        return OperatorQ.zero(bottom, top, N)
    if k == 0:
        return OperatorQ.identity(bottom, N)
    p = position - 1
    out: dict = {}
    for st in basis(bottom, N):
        S, T = st[p], st[p + 1]
        if direction == UP_RIGHT:
            for K in itertools.combinations(S, k):
                if set(K) & set(T):
                    continue
                A = tuple(x for x in S if x not in K)
                s1, e1 = _split_coeff(A, K)
                s2, e2 = _merge_coeff(K, T)
                new = st[:p] + (A, tuple(sorted(K + T))) + st[p + 2:]
                _acc(out, (new, st), e1 + e2, s1 * s2)
        else:
            for K in itertools.combinations(T, k):
                if set(K) & set(S):
                    continue
                B = tuple(x for x in T if x not in K)
                s1, e1 = _split_coeff(K, B)
                s2, e2 = _merge_coeff(S, K)
                new = st[:p] + (tuple(sorted(S + K)), B) + st[p + 2:]
                _acc(out, (new, st), e1 + e2, s1 * s2)
    return OperatorQ(bottom, top, N, {key: LaurentPoly(d) for key, d in out.items()})


def _acc(out, key, e, c):
    d = out.setdefault(key, {})
    d[e] = d.get(e, 0) + c


def rung_op(col: Rung, bottom: Sequence[int], N: int) -> OperatorQ:
    """Operator of a rung column from its bottom labels to its top labels."""
    return _rung_cached(tuple(bottom), col.position, col.direction, col.k, N)


rungOp = rung_op


def crossing_ladder(top: tuple[int, ...], position: int, k: int) -> tuple[Rung, Rung]:
    """Ladder term L_k of the crossing at ``position`` with the given top labels.

    Returned top to bottom, so the second rung is applied first going upward.
    """
    p = position - 1
    y, x = top[p], top[p + 1]  # bottom labels are (x, y)
    if x <= y:
        return Rung(position, UP_LEFT, y - x + k), Rung(position, UP_RIGHT, k)
    return Rung(position, UP_RIGHT, x - y + k), Rung(position, UP_LEFT, k)


def crossing_degrees(i: int, j: int, sign: int, k: int) -> int:
    """Homological degree (equal to the q-degree) of ladder term k."""
    m = min(i, j)
    return k if sign > 0 else m - k


@functools.lru_cache(maxsize=None)
def _crossing_cached(top: tuple[int, ...], position: int, sign: int, N: int) -> OperatorQ:
    p = position - 1
    i, j = top[p], top[p + 1]
    bottom = top[:p] + (j, i) + top[p + 2:]
    total = OperatorQ.zero(bottom, top, N)
    for k in range(min(i, j) + 1):
        h = crossing_degrees(i, j, sign, k)
        total = total + web_op(LadderWeb(top, crossing_ladder(top, position, k)), N).scale(
            LaurentPoly.monomial(h, (-1) ** h))
    return total


def crossing_euler_op(i: int, j: int, sign: int, position: int, context: Sequence[int],
                      N: int) -> OperatorQ:
    """Euler operator of one crossing whose top labels at ``position`` are (i, j).

    ``context`` gives the top labels of every strand.
    """
    top = tuple(context)
    if top[position - 1: position + 1] != (i, j):
        raise ValueError("context labels differ from (i, j)")
    return _crossing_cached(top, position, 1 if sign > 0 else -1, N)


crossingEulerOp = crossing_euler_op


def web_op(w: LadderWeb, N: int) -> OperatorQ:
    levels = w.levels()
    if any(not 0 <= a <= N for lab in levels for a in lab):
        return OperatorQ.zero(levels[-1], levels[0], N)
    result = OperatorQ.identity(w.top, N)
    for col, top, bot in zip(w.columns, levels, levels[1:]):
        if isinstance(col, Crossing):
            op = _crossing_cached(top, col.position, col.sign, N)
        else:
            op = rung_op(col, bot, N)
        result = result @ op
        if result.is_zero():
            return OperatorQ.zero(levels[-1], levels[0], N)
    return result


webOp = web_op


def braid_euler_op(B: BraidWord, gamma: Coloring | Sequence[int], N: int | None = None) -> OperatorQ:
    """Euler operator of a braid word with top coloring ``gamma``."""
    if isinstance(gamma, Coloring):
        N = gamma.N if N is None else N
        gamma = gamma.labels
    return web_op(LadderWeb.from_braid(B, gamma), N)


braidEulerOp = braid_euler_op


# Relations -------------------------------------------------------------------


@dataclass
class WebRelationReport:
    name: str
    params: tuple
    left: OperatorQ = field(repr=False)
    right: OperatorQ = field(repr=False)

    @property
    def equal(self) -> bool:
        return self.left == self.right

    def to_json(self) -> dict:
        return {"name": self.name, "params": list(self.params), "equal": self.equal}


def digon_relation(i: int, j: int, N: int) -> WebRelationReport:
    """merge after split on a strand labelled i+j equals [i+j choose i]."""
    ctx = (i + j,)
    left = merge_op(i, j, 1, (i, j), N) @ split_op(i, j, 1, ctx, N)
    right = OperatorQ.identity(ctx, N).scale(q_binom(i + j, i))
    return WebRelationReport("digon", (i, j, N), left, right)


def digon_web(i: int, j: int) -> LadderWeb:
    """Digon written as a ladder on (i+j, 0): split off j, then merge it back."""
    return LadderWeb((i + j, 0), (Rung(1, UP_LEFT, j), Rung(1, UP_RIGHT, j)))


def square_switch_relation(i: int, j: int, k: int, ell: int, N: int,
                           mirrored: bool = False) -> WebRelationReport:
    """Bottom labels (i, j+k), top labels (i+k, j).

    UR(ell-k) over UL(ell) equals sum_p [j-i choose ell-p] UL(p) over UR(p-k).
    The mirrored form reflects strands and rung directions left to right.
    """
    a, b = (Rung(1, UP_LEFT, 0), Rung(1, UP_RIGHT, 0)) if mirrored else \
        (Rung(1, UP_RIGHT, 0), Rung(1, UP_LEFT, 0))
    top = (j, i + k) if mirrored else (i + k, j)
    bottom = (j + k, i) if mirrored else (i, j + k)

    def ladder(upper, u, lower, v):
        return LadderWeb(top, (Rung(1, upper.direction, u), Rung(1, lower.direction, v)))

    left = web_op(ladder(a, ell - k, b, ell), N)
    right = OperatorQ.zero(bottom, top, N)
    for p in range(max(0, k), ell + 1):
        c = q_binom(j - i, ell - p)
        if c:
            right = right + web_op(ladder(b, p, a, p - k), N).scale(c)
    name = "square_switch_mirror" if mirrored else "square_switch"
    return WebRelationReport(name, (i, j, k, ell, N), left, right)


def square_switch_params(N: int) -> Iterable[tuple[int, int, int, int]]:
    """Admissible (i, j, k, ell): boundary labels in [0, N] and rungs nonnegative."""
    for i, j in itertools.product(range(N + 1), repeat=2):
        for k in range(-N, N + 1):
            if not (0 <= j + k <= N and 0 <= i + k <= N):
                continue
            for ell in range(max(0, k), N + 1):
                yield i, j, k, ell


def braid_relation(labels: Sequence[int], N: int, i: int) -> WebRelationReport:
    n = len(labels)
    left = braid_euler_op(BraidWord(n, (i, i + 1, i)), labels, N)
    right = braid_euler_op(BraidWord(n, (i + 1, i, i + 1)), labels, N)
    return WebRelationReport("R3", (tuple(labels), N, i), left, right)


def far_commutation(labels: Sequence[int], N: int, i: int, j: int) -> WebRelationReport:
    n = len(labels)
    left = braid_euler_op(BraidWord(n, (i, j)), labels, N)
    right = braid_euler_op(BraidWord(n, (j, i)), labels, N)
    return WebRelationReport("far_commutation", (tuple(labels), N, i, j), left, right)


def twist_centrality(labels: Sequence[int], N: int, i: int) -> WebRelationReport:
    """FT then sigma_i equals sigma_i then FT (the twist is pure)."""
    n = len(labels)
    ft = full_twist(n)
    left = braid_euler_op(ft + BraidWord(n, (i,)), labels, N)
    right = braid_euler_op(BraidWord(n, (i,)) + ft, labels, N)
    return WebRelationReport("twist_central", (tuple(labels), N, i), left, right)


def r2_monomial(i: int, j: int, N: int) -> tuple[int, int] | None:
    """(sign, s) with chi(sigma) chi(sigma^-1) = sign q^s id on top labels (i, j)."""
    op = braid_euler_op(BraidWord(2, (1, -1)), (i, j), N)
    ident = OperatorQ.identity((i, j), N)
    vals = set()
    for s in basis((i, j), N):
        v = op.entries.get((s, s))
        if v is None or len(v.items()) != 1:
            return None
        vals.add(v.items()[0])
    if len(vals) != 1 or len(op.entries) != len(ident.entries):
        return None
    (s, c), = vals
    return c, s
