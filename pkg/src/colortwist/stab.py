"""Inverse systems of truncations: twist decompositions, the bound b, q-adic stabilization."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .braidcore import (EMPTY_CERTIFICATE, BraidWord, Coloring, CompletenessCertificate,
                        IncompatibleWithPeriod, InfiniteBraidWord, PuritySequence, full_twist,
                        full_twist_infinite, induced_coloring, is_color_pure,
                        maximal_purity_sequence, negative_min_color_sum)
from .webalg import OperatorQ, basis, braid_euler_op

DEFAULT_PRECISION = 20
DEFAULT_MAX_STATES = 20_000

MAXIMAL = "maximal"
SUBSEQUENCE = "subsequence"
TWIST = "twist"


class DimensionOverflow(Exception):
    pass


class BlockOverlap(Exception):
    pass


class ColoringMismatch(Exception):
    pass


def _guard(labels: Sequence[int], N: int, max_states: int) -> None:
    size = math.prod(math.comb(N, a) for a in labels)
    if size > max_states:
        raise DimensionOverflow(f"{size} basis states exceed the ceiling of {max_states}")


def qdiff(a: OperatorQ | None, b: OperatorQ | None) -> int | None:
    """Smallest q-exponent of a nonzero entry of a - b; None means equal."""
    if a is None or b is None:
        return None
    return (a - b).min_degree()


def _ge(d: int | None, M: int) -> bool:
    return d is None or d >= M


def _le(a: int | None, b: int | None) -> bool:
    if b is None:
        return True
    return a is not None and a <= b


# Inverse systems ----------------------------------------------------------------


@dataclass(frozen=True)
class InverseSystemSpec:
    word: InfiniteBraidWord
    gamma: Coloring
    certificate: CompletenessCertificate | None = None
    kind: str = MAXIMAL
    indices: tuple[int, ...] = ()

    @property
    def sequence(self) -> PuritySequence:
        return maximal_purity_sequence(self.word, self.gamma)

    @property
    def cert(self) -> CompletenessCertificate:
        return self.certificate or EMPTY_CERTIFICATE


def system_indices(spec: InverseSystemSpec, count: int) -> list[int]:
    seq = spec.sequence
    if spec.kind == MAXIMAL:
        return seq.take(count)
    if spec.kind == SUBSEQUENCE:
        idx = list(spec.indices[:count])
        for m in idx:
            if seq.index_of(m) is None:
                raise ValueError(f"index {m} is not in the maximal purity sequence")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("subsequence indices must increase")
        return idx
    if spec.kind == TWIST:
        return twist_aligned_indices(spec, count)
    raise ValueError(f"unknown system kind {spec.kind!r}")


def truncations(spec: InverseSystemSpec, count: int) -> list[BraidWord]:
    return [spec.word.truncate(m) for m in system_indices(spec, count)]


# Twist decompositions -----------------------------------------------------------


@dataclass(frozen=True)
class TwistDecomposition:
    """B_m cut into runs of kept letters and deleted color-pure blocks.

    ``segments`` alternate ("ft", letters) and ("beta", letters); ``runs``
    holds the kept-letter count of each stretch between consecutive betas.
    """

    n: int
    m: int
    segments: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def twist_length(self) -> int:
        return self.n * (self.n - 1)

    @property
    def betas(self) -> list[tuple[int, ...]]:
        return [w for kind, w in self.segments if kind == "beta"]

    @property
    def runs(self) -> list[int]:
        out = [0]
        for kind, w in self.segments:
            if kind == "beta":
                out.append(0)
            else:
                out[-1] += len(w)
        return out

    @property
    def z(self) -> int:
        L = self.twist_length
        return sum(self.runs) // L if L else 0

    def word(self) -> tuple[int, ...]:
        return tuple(x for _, w in self.segments for x in w)

    def deleted(self) -> tuple[int, ...]:
        return tuple(x for kind, w in self.segments if kind == "ft" for x in w)


def twist_decomposition(W: InfiniteBraidWord, gamma: Coloring, cert: CompletenessCertificate,
                        m: int) -> TwistDecomposition | None:
    """Decomposition of B_m, or None when m falls strictly inside an interval."""
    intervals = cert.intervals(m)
    if any(a < m < b for a, b in intervals):
        return None
    letters = W.letters_between(0, m)
    segs: list[tuple[str, tuple[int, ...]]] = []
    pos = 0
    for a, b in intervals:
        if a > pos:
            segs.append(("ft", letters[pos:a]))
        seg = letters[a:b]
        if not is_color_pure(BraidWord(W.n, seg), induced_coloring(W.truncate(a), gamma, a)):
            raise IncompatibleWithPeriod(f"interval ({a}, {b}) is not color-pure")
        segs.append(("beta", seg))
        pos = b
    if pos < m:
        segs.append(("ft", letters[pos:m]))
    return TwistDecomposition(W.n, m, tuple(segs))


def _kept_upto(cert: CompletenessCertificate, m: int) -> int | None:
    intervals = cert.intervals(m)
    if any(a < m < b for a, b in intervals):
        return None
    return m - sum(b - a for a, b in intervals)


def twist_aligned_indices(spec: InverseSystemSpec, count: int) -> list[int]:
    """For z = 1..count, the first purity index whose truncation holds z twists."""
    L = spec.word.n * (spec.word.n - 1)
    if L == 0:
        return spec.sequence.take(count)
    out: list[int] = []
    z = 1
    guard = 0
    for m in spec.sequence:
        guard += 1
        if guard > 10_000 * max(count, 1) * L:
            raise IncompatibleWithPeriod("twist count does not grow along the word")
        k = _kept_upto(spec.cert, m)
        if k is None:
            continue
        while k // L >= z and len(out) < count:
            if not out or out[-1] != m:
                out.append(m)
            z += 1
        if len(out) >= count:
            return out
    return out


def bound_b(decomp: TwistDecomposition) -> int:
    """min over identity/X assignments to the betas of c1 + 2 c2.

    c1 counts betas sent to X, c2 is the largest number of complete twists in
    a run of kept letters not interrupted by an X-assigned beta. For each cap
    C on c2, a DP finds the fewest cuts keeping every segment within C twists.
    """
    runs = decomp.runs
    L = decomp.twist_length or 1
    r = len(runs) - 1
    prefix = [0]
    for x in runs:
        prefix.append(prefix[-1] + x)
    total = prefix[-1] // L
    best = None
    for cap in range(total + 1):
        # f[j]: fewest cuts for runs[:j] with a cut right after run j-1
        INF = r + 1
        f = [INF] * (r + 2)
        f[0] = -1
        for j in range(1, r + 2):
            for i in range(j):
                if f[i] < INF and (prefix[j] - prefix[i]) // L <= cap:
                    f[j] = min(f[j], f[i] + 1)
        if f[r + 1] < INF:
            val = f[r + 1] + 2 * cap
            best = val if best is None else min(best, val)
    return best if best is not None else 0


def bound_b_exhaustive(decomp: TwistDecomposition) -> int:
    runs = decomp.runs
    L = decomp.twist_length or 1
    r = len(runs) - 1
    best = None
    for delta in itertools.product((0, 1), repeat=r):
        c1 = sum(delta)
        c2, cur = 0, runs[0]
        for d, x in zip(delta, runs[1:]):
            if d:
                c2 = max(c2, cur // L)
                cur = 0
            cur += x
        c2 = max(c2, cur // L)
        val = c1 + 2 * c2
        best = val if best is None else min(best, val)
    return best


boundB = bound_b


@dataclass
class CauchyReport:
    steps: list[dict]
    verdict: str
    reason: str = ""

    def to_json(self) -> dict:
        return {"steps": self.steps, "verdict": self.verdict, "reason": self.reason}


def cauchy_certificate(spec: InverseSystemSpec, count: int) -> CauchyReport:
    """Bound b along the non-straddling part of the maximal purity sequence.

    Cauchy-certified iff b never decreases and grows over the second half of
    the run, so no plateau is in sight.
    """
    seq = spec.sequence
    steps = []
    cert = spec.cert
    for m in seq:
        if len(steps) >= count:
            break
        dec = twist_decomposition(spec.word, spec.gamma, cert, m)
        if dec is None:
            continue
        steps.append({"ell": len(steps) + 1, "m": m, "z": dec.z, "b": bound_b(dec), "r": len(dec.betas)})
        if len(steps) > 50 * count + 1000:
            break
    bs = [s["b"] for s in steps]
    mono = all(x <= y for x, y in zip(bs, bs[1:]))
    for s, prev in zip(steps, [None] + bs):
        s["nondecreasing"] = prev is None or prev <= s["b"]
    if not bs:
        return CauchyReport(steps, "NotCertified", "no admissible truncation")
    if not mono:
        return CauchyReport(steps, "NotCertified", "b decreases")
    half = bs[(len(bs) - 1) // 2]
    if bs[-1] <= half:
        return CauchyReport(steps, "NotCertified", "b plateaus")
    return CauchyReport(steps, "Cauchy-certified")


cauchyCertificate = cauchy_certificate


# Stabilization -----------------------------------------------------------------


@dataclass
class StabilizationReport:
    steps: list[dict]
    verdict: str
    M: int

    def to_json(self) -> dict:
        return {"steps": self.steps, "verdict": self.verdict, "M": self.M}


def _z_and_b(spec: InverseSystemSpec, m: int) -> tuple[int | None, int | None]:
    dec = twist_decomposition(spec.word, spec.gamma, spec.cert, m)
    if dec is None:
        return None, None
    return dec.z, bound_b(dec)


def stabilize(specA: InverseSystemSpec, specB: InverseSystemSpec, N: int, steps: int,
              M: int = DEFAULT_PRECISION, max_states: int = DEFAULT_MAX_STATES) -> StabilizationReport:
    """Track B's truncations, each against its predecessor and against A at equal z.

    ``qdiff_prev`` and ``qdiff_ft`` are smallest q-exponents of nonzero
    differences (None when equal). Converging iff the cross differences never
    drop and the last one reaches M.
    """
    if specA.gamma.labels != specB.gamma.labels:
        raise ColoringMismatch("both systems need the same coloring")
    _guard(specB.gamma.labels, N, max_states)
    idxB = system_indices(specB, steps)
    a_cache: dict[int, OperatorQ] = {}

    def a_at_z(z: int) -> OperatorQ | None:
        if z not in a_cache:
            idx = twist_aligned_indices(specA, z) if z > 0 else [0]
            if z > 0 and len(idx) < z:
                return None
            m = idx[-1] if z > 0 else 0
            a_cache[z] = braid_euler_op(specA.word.truncate(m), specA.gamma, N)
        return a_cache[z]

    idxA = system_indices(specA, steps)
    out = []
    prev = OperatorQ.identity(specB.gamma.labels, N)
    for ell, m in enumerate(idxB, start=1):
        op = braid_euler_op(specB.word.truncate(m), specB.gamma, N)
        z, b = _z_and_b(specB, m)
        if z is not None:
            ref = a_at_z(z)
        else:
            ref = braid_euler_op(specA.word.truncate(idxA[ell - 1]), specA.gamma, N) \
                if ell <= len(idxA) else None
        out.append({"ell": ell, "m": m, "z": z, "b": b,
                    "qdiff_prev": qdiff(op, prev), "qdiff_ft": qdiff(op, ref),
                    "digest": op.digest(M)})
        prev = op
    cross = [s["qdiff_ft"] for s in out]
    ok = bool(cross) and all(_le(x, y) for x, y in zip(cross, cross[1:])) and _ge(cross[-1], M + 1)
    return StabilizationReport(out, "Converging" if ok else "NotConverging", M)


def projector_truncation(n: int, gamma: Coloring, N: int, k: int) -> OperatorQ:
    return braid_euler_op(full_twist(n) * k, gamma, N)


projectorTruncation = projector_truncation


def projector_defects(n: int, gamma: Coloring, N: int, kmax: int) -> list[dict]:
    """D(k) for idempotence and absorption of each generator, k = 1..kmax."""
    out = []
    gens = [braid_euler_op(BraidWord(n, (i,)), gamma, N) for i in range(1, n)]
    for k in range(1, kmax + 1):
        P = projector_truncation(n, gamma, N, k)
        absorb = [qdiff(g @ P, P) for g in gens] + [qdiff(P @ g, P) for g in gens]
        finite = [d for d in absorb if d is not None]
        out.append({"k": k, "idempotence": qdiff(P @ P, P),
                    "absorption": min(finite) if finite else None})
    return out


def negative_shift(B: BraidWord, gamma: Coloring) -> int:
    return negative_min_color_sum(B, gamma)


negativeShift = negative_shift


def measure_shift(A: OperatorQ, B: OperatorQ) -> tuple[int, int, int | None] | None:
    """(sign, s, D) with A = sign q^s B modulo q^D; None if no entry pins s down."""
    lead = None
    for key, v in sorted(B.entries.items()):
        d = v.min_degree()
        if lead is None or d < lead[1]:
            lead = (key, d)
    if lead is None:
        return None
    key, d = lead
    a = A.entries.get(key)
    if a is None:
        return None
    s = a.min_degree() - d
    sign = 1 if a.coeff(a.min_degree()) * B.entries[key].coeff(d) > 0 else -1
    from .laurent import LaurentPoly
    return sign, s, qdiff(A, B.scale(LaurentPoly.monomial(s, sign)))


# Horizontal splitting ---------------------------------------------------------------


def _block_of(blocks: Sequence[tuple[int, int]], i: int) -> int | None:
    for k, (lo, hi) in enumerate(blocks):
        if lo <= i and i + 1 <= hi:
            return k
    return None


def horizontal_factorization(W: InfiniteBraidWord, gamma: Coloring, blocks: Sequence[Sequence[int]],
                             N: int, steps: int, M: int = DEFAULT_PRECISION, head: int = 0) -> dict:
    """Compare each truncation with head followed by the tensor product of block words.

    ``blocks`` are contiguous 1-indexed strand ranges (lo, hi); strands outside
    every block form singleton blocks.
    """
    spans = sorted((min(b), max(b)) for b in blocks)
    for (l1, h1), (l2, h2) in zip(spans, spans[1:]):
        if l2 <= h1:
            raise BlockOverlap("strand blocks overlap")
    full: list[tuple[int, int]] = []
    s = 1
    for lo, hi in spans:
        full.extend((k, k) for k in range(s, lo))
        full.append((lo, hi))
        s = hi + 1
    full.extend((k, k) for k in range(s, W.n + 1))
    seq = maximal_purity_sequence(W, gamma)
    idx = [m for m in seq.take(steps + 100) if m >= head][:steps]
    head_word = W.truncate(head)
    mid = induced_coloring(head_word, gamma, head).labels
    head_op = braid_euler_op(head_word, gamma, N)
    rows = []
    prev_blocks: list[OperatorQ | None] = [None] * len(full)
    for m in idx:
        letters = W.letters_between(head, m)
        per = [[] for _ in full]
        for x in letters:
            k = _block_of(full, abs(x))
            if k is None:
                raise BlockOverlap(f"letter {x} crosses a block boundary")
            per[k].append(x)
        ops = []
        for k, (lo, hi) in enumerate(full):
            sub = BraidWord(hi - lo + 1, tuple((abs(x) - lo + 1) * (1 if x > 0 else -1) for x in per[k]))
            ops.append(braid_euler_op(sub, mid[lo - 1:hi], N))
        tens = ops[0]
        for o in ops[1:]:
            tens = tens.tensor(o)
        lhs = braid_euler_op(W.truncate(m), gamma, N)
        rows.append({"m": m, "exact": lhs == head_op @ tens,
                     "block_qdiff_prev": [qdiff(o, p) for o, p in zip(ops, prev_blocks)]})
        prev_blocks = ops
    return {"blocks": [list(b) for b in full], "steps": rows,
            "factorizes": all(r["exact"] for r in rows)}


horizontalFactorization = horizontal_factorization


# Bi-infinite words ----------------------------------------------------------------


@dataclass(frozen=True)
class BiInfiniteWord:
    """left_tail is read upward from the top of the core, right_tail downward from its bottom."""

    left_tail: InfiniteBraidWord
    core: BraidWord
    right_tail: InfiniteBraidWord
    gamma: Coloring
    gamma_prime: Coloring

    def __post_init__(self):
        if induced_coloring(self.core, self.gamma, len(self.core)).labels != self.gamma_prime.labels:
            raise ColoringMismatch("core does not carry gamma to gamma_prime")

    def word(self, a: int, b: int) -> BraidWord:
        left = self.left_tail.truncate(a).letters[::-1]
        return BraidWord(self.core.n, left + self.core.letters + self.right_tail.truncate(b).letters)


def shift_word(W: InfiniteBraidWord, a: int) -> InfiniteBraidWord:
    """The word read from letter a+1 on."""
    if a <= len(W.prefix):
        return InfiniteBraidWord(W.n, W.prefix[a:], W.period)
    r = (a - len(W.prefix)) % len(W.period)
    return InfiniteBraidWord(W.n, (), W.period[r:] + W.period[:r])


def _bi_ops(Wb: BiInfiniteWord, N: int, steps: int) -> list[OperatorQ]:
    ls = maximal_purity_sequence(Wb.left_tail, Wb.gamma).take(steps)
    rs = maximal_purity_sequence(Wb.right_tail, Wb.gamma_prime).take(steps)
    return [braid_euler_op(Wb.word(a, b), Wb.gamma, N) for a, b in zip(ls, rs)]


def bi_infinite_analyze(Wb: BiInfiniteWord, N: int, steps: int, M: int = DEFAULT_PRECISION,
                        shift: tuple[int, int] = (1, 1)) -> dict:
    """Stabilization along both tails, and agreement mod q^M after moving the starting points.

    ``shift`` counts how many pure blocks of each tail are absorbed into the core.
    """
    ops = _bi_ops(Wb, N, steps)
    diffs = [qdiff(b, a) for a, b in zip(ops, ops[1:])]
    a0 = maximal_purity_sequence(Wb.left_tail, Wb.gamma).take(shift[0])[-1] if shift[0] else 0
    b0 = maximal_purity_sequence(Wb.right_tail, Wb.gamma_prime).take(shift[1])[-1] if shift[1] else 0
    core = Wb.word(a0, b0)
    moved = BiInfiniteWord(shift_word(Wb.left_tail, a0), core, shift_word(Wb.right_tail, b0),
                           Wb.gamma, Wb.gamma_prime)
    ops2 = _bi_ops(moved, N, steps)
    last, last2 = ops[-1], ops2[-1]
    return {"qdiff_prev": diffs,
            "stabilizing": all(_le(x, y) for x, y in zip(diffs, diffs[1:])),
            "digest": last.digest(M), "shifted_digest": last2.digest(M),
            "shift_qdiff": qdiff(last, last2),
            "shift_invariant": last.digest(M) == last2.digest(M)}


biInfiniteAnalyze = bi_infinite_analyze
