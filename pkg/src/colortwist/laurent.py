"""Integer Laurent polynomials in q, quantum integers and q-binomials."""

from __future__ import annotations

import functools
from typing import Iterable, Mapping


class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c: dict[int, int] = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    self._c[int(e)] = int(c)

    @classmethod
    def _raw(cls, d: dict[int, int]) -> LaurentPoly:
        p = object.__new__(cls)
        p._c = d
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls._raw({})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls._raw({0: 1})

    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_degree(self) -> int | None:
        return min(self._c) if self._c else None

    def max_degree(self) -> int | None:
        return max(self._c) if self._c else None

    def __add__(self, other) -> LaurentPoly:
        other = _coerce(other)
        d = dict(self._c)
        for e, c in other._c.items():
            v = d.get(e, 0) + c
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other) -> LaurentPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return _coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        other = _coerce(other)
        d: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                v = d.get(e, 0) + c1 * c2
                if v:
                    d[e] = v
                else:
                    d.pop(e, None)
        return LaurentPoly._raw(d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self._c.items()
            if c not in (1, -1):
                raise ValueError("monomial coefficient must be a unit")
            return LaurentPoly._raw({e * k: c ** (-k)})
        out = LaurentPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by q^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()})

    def bar(self) -> LaurentPoly:
        """Substitute q -> q^{-1}."""
        return LaurentPoly._raw({-e: c for e, c in self._c.items()})

    def truncate(self, m: int) -> LaurentPoly:
        """Drop every term of degree >= m."""
        return LaurentPoly._raw({e: c for e, c in self._c.items() if e < m})

    def evaluate(self, q):
        return sum(c * q ** e for e, c in self._c.items())

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in sorted(self._c.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in obj.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items()):
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*q^{e}")
        return " + ".join(parts)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.monomial(0, x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


def q_pow(k: int, sign: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(k, sign)


@functools.lru_cache(maxsize=None)
def q_int(n: int) -> LaurentPoly:
    """Balanced quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    if n == 0:
        return LaurentPoly.zero()
    if n < 0:
        return -q_int(-n)
    return LaurentPoly({n - 1 - 2 * t: 1 for t in range(n)})


@functools.lru_cache(maxsize=None)
def q_fact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("q-factorial of a negative integer")
    out = LaurentPoly.one()
    for k in range(1, n + 1):
        out = out * q_int(k)
    return out


@functools.lru_cache(maxsize=None)
def q_binom(n: int, k: int) -> LaurentPoly:
    """Symmetric q-binomial [n choose k].

    For n < 0 the generalized value (-1)^k [k-n-1 choose k] is used, which
    keeps the Pascal recursion valid for every integer n.
    """
    if k < 0:
        return LaurentPoly.zero()
    if n < 0:
        return q_binom(k - n - 1, k) * (-1) ** k
    if k > n:
        return LaurentPoly.zero()
    if k == 0 or k == n:
        return LaurentPoly.one()
    # [n,k] = q^{-k}[n-1,k] + q^{n-k}[n-1,k-1]
    return q_binom(n - 1, k).shift(-k) + q_binom(n - 1, k - 1).shift(n - k)


def poly_sum(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    d: dict[int, int] = {}
    for p in polys:
        for e, c in p._c.items():
            d[e] = d.get(e, 0) + c
    return LaurentPoly({e: c for e, c in d.items() if c})
