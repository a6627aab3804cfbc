"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

from colortwist.braidcore import (BraidWord, Coloring, CompletenessCertificate, InfiniteBraidWord,
                                  color_size, full_twist, full_twist_infinite, is_color_pure,
                                  min_color_sum, negative_min_color_sum,
                                  verify_completeness_certificate)
from colortwist.complexes import simplify_color_pure
from colortwist.laurent import LaurentPoly
from colortwist.stab import (TWIST, BiInfiniteWord, InverseSystemSpec, TwistDecomposition,
                             bi_infinite_analyze, bound_b, bound_b_exhaustive, horizontal_factorization,
                             measure_shift, projector_defects, stabilize, twist_decomposition)
from colortwist.webalg import (braid_euler_op, braid_relation, digon_relation, far_commutation,
                               square_switch_params, square_switch_relation, twist_centrality)
from colortwist.braidcore import EMPTY_CERTIFICATE

FROZEN = json.loads((Path(__file__).parent / "data" / "frozen_stabilization.json").read_text())


class Gate:
    def __init__(self, k, title, limit=None):
        self.k, self.title, self.limit = k, title, limit
        self.failures = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, et, ev, tb):
        dt = time.perf_counter() - self.t0
        if et is not None:
            self.failures.append(f"{et.__name__}: {ev}")
        if self.limit is not None and dt >= self.limit:
            self.failures.append(f"took {dt:.1f}s, limit {self.limit}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] criterion {self.k}: {self.title} ({dt:.2f}s)"
        if self.failures:
            line += " :: " + "; ".join(map(str, self.failures[:3]))
        _print(line)
        assert not self.failures, line
        return False


def _print(line):
    capman = getattr(_print, "capman", None)
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print(line)
    else:
        print(line)


@pytest.fixture(autouse=True)
def _uncaptured(request):
    _print.capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _print.capman = None


def test_c1_digon():
    with Gate(1, "digon relation, i+j <= N <= 4, exact", 10) as g:
        count = 0
        for N in range(5):
            for i in range(N + 1):
                for j in range(N + 1 - i):
                    g.check(digon_relation(i, j, N).equal, (i, j, N))
                    count += 1
        g.check(count == 35, f"{count} cases")


def test_c2_square_switch():
    with Gate(2, "square switch and its mirror, labels <= N <= 3, exact", 60) as g:
        for N in range(4):
            for p in square_switch_params(N):
                for mirrored in (False, True):
                    g.check(square_switch_relation(*p, N, mirrored).equal, (p, N, mirrored))


def test_c3_braid_relations():
    with Gate(3, "R3, far commutation, twist centrality, n <= 4, labels <= N <= 3, exact", 120) as g:
        for N in range(1, 4):
            for n in (2, 3, 4):
                for labels in itertools.product(range(N + 1), repeat=n):
                    for i in range(1, n - 1):
                        g.check(braid_relation(labels, N, i).equal, ("R3", labels, N, i))
                    for i in range(1, n):
                        for j in range(i + 2, n):
                            g.check(far_commutation(labels, N, i, j).equal, ("far", labels, N, i, j))
                        g.check(twist_centrality(labels, N, i).equal, ("FT", labels, N, i))


def test_c4_full_twist_color_size():
    with Gate(4, "minColorSum(FT, gamma) = 2 cs(gamma), n <= 5, labels <= 4", 60) as g:
        for n in range(1, 6):
            ft = full_twist(n)
            for labels in itertools.product(range(5), repeat=n):
                gamma = Coloring(labels, 4)
                g.check(min_color_sum(ft, gamma) == 2 * color_size(gamma), labels)


def _random_pure_words(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice([2, 3, 3, 3])
        gamma = Coloring(tuple(rng.randint(1, 3) for _ in range(n)), 3)
        B = BraidWord(n, tuple(rng.randint(1, n - 1) for _ in range(rng.randint(4, 10))))
        if is_color_pure(B, gamma) and (n == 2 or {1, 2} <= {abs(x) for x in B.letters}):
            out.append((B, gamma))
    return out


def test_c5_cone_presentation():
    with Gate(5, "cone presentation contract on 50 random positive color-pure words") as g:
        for B, gamma in _random_pure_words(50, 2024):
            cp = simplify_color_pure(B, gamma)
            g.check(not cp.contract_violations(), (B.letters, gamma.labels, cp.contract_violations()))
            cs = color_size(gamma)
            for t in cp.C.terms:
                g.check(t.h >= 0, ("h", B.letters, gamma.labels))
                g.check(t.witness is not None and color_size(t.witness) < cs, ("witness", B.letters))
            g.check(cp.euler() == braid_euler_op(B, gamma), ("euler", B.letters, gamma.labels))


def _runs_decomp(n, runs):
    segs = []
    for i, r in enumerate(runs):
        if i:
            segs.append(("beta", (1, 1)))
        segs.append(("ft", (1,) * r))
    return TwistDecomposition(n, 0, tuple(segs))


def test_c6_bound():
    with Gate(6, "b = 2z on FT^inf; DP equals exhaustive up to 12 blocks") as g:
        for n in (2, 3, 4):
            W = full_twist_infinite(n)
            L = n * (n - 1)
            for z in range(0, 8):
                dec = twist_decomposition(W, Coloring(tuple(range(1, n + 1)), n), EMPTY_CERTIFICATE, z * L)
                g.check(dec.z == z and bound_b(dec) == 2 * z, (n, z))
        # every run vector over a grid straddling twist boundaries, up to 6 blocks
        grid = (0, 5, 6, 12, 17)
        for blocks in range(1, 7):
            for runs in itertools.product(grid, repeat=blocks):
                d = _runs_decomp(3, runs)
                g.check(bound_b(d) == bound_b_exhaustive(d), runs)
        rng = random.Random(6)
        for _ in range(3000):
            runs = [rng.randint(0, 40) for _ in range(rng.randint(7, 12))]
            d = _runs_decomp(rng.choice([2, 3]), runs)
            g.check(bound_b(d) == bound_b_exhaustive(d), runs)


def _le(a, b):
    return b is None or (a is not None and a <= b)


def test_c7_stabilization():
    with Gate(7, "projector defects and (s1^2 s2^2)^inf vs FT^inf, N=2", 600) as g:
        for key, rows in FROZEN["projector"].items():
            labels = tuple(int(x) for x in key.split(","))
            got = projector_defects(len(labels), Coloring(labels, 2), 2, 6)
            pairs = [[r["idempotence"], r["absorption"]] for r in got]
            g.check(pairs == rows, ("projector frozen", key))
            for col in (0, 1):
                d = [p[col] for p in pairs]
                for a, b in zip(d, d[1:]):
                    g.check(b is None or (a is not None and b >= a + 1), ("gain", key, col, d))
        cert = CompletenessCertificate.from_json(
            {"head": [], "tail": {"start": 0, "stride": 4, "pattern": [[1, 2], [3, 4]]}})
        for key in ("1,1,1", "2,2,2"):
            gamma = Coloring(tuple(int(x) for x in key.split(",")), 2)
            A = InverseSystemSpec(full_twist_infinite(3), gamma, kind=TWIST)
            B = InverseSystemSpec(InfiniteBraidWord(3, (), (1, 1, 2, 2)), gamma, cert, TWIST)
            cross = [s["qdiff_ft"] for s in stabilize(A, B, 2, 5).steps]
            g.check(cross == FROZEN["cross"][key], ("cross frozen", key, cross))
            g.check(all(_le(a, b) for a, b in zip(cross, cross[1:])), ("monotone", key, cross))
            g.check(cross[-1] is None or cross[-1] >= 8, ("floor", key, cross))


def test_c8_negative_crossings():
    with Gate(8, "padded twists carry the sign and shift of negative crossings, exact") as g:
        rng = random.Random(8)
        cases = 0
        for n in (2, 3):
            for labels in itertools.product(range(3), repeat=n):
                gamma = Coloring(labels, 2)
                for k in range(0, 3):
                    base = full_twist(n) * k
                    for _ in range(3):
                        letters = list(base.letters)
                        for _ in range(rng.randint(1, 2)):
                            pos = rng.randint(0, len(letters))
                            i = rng.randint(1, n - 1)
                            letters[pos:pos] = [-i, i]
                        padded = BraidWord(n, tuple(letters))
                        t = negative_min_color_sum(padded, gamma)
                        lhs = braid_euler_op(padded, gamma, 2)
                        rhs = braid_euler_op(base, gamma, 2).scale(LaurentPoly.monomial(t, (-1) ** t))
                        g.check(lhs == rhs, (labels, padded.letters))
                        ms = measure_shift(lhs, braid_euler_op(base, gamma, 2))
                        g.check(ms == ((-1) ** t, t, None), ("shift", labels, padded.letters, ms))
                        cases += 1
        g.check(cases > 0, "no cases")


def test_c9_horizontal_and_bi_infinite():
    with Gate(9, "horizontal tensor splitting exact; bi-infinite shift invariance mod q^12") as g:
        W = InfiniteBraidWord(4, (), (1, 1, 3, 3))
        for labels in [(1, 2, 1, 2), (1, 1, 2, 2), (2, 1, 1, 2)]:
            rep = horizontal_factorization(W, Coloring(labels, 2), [(1, 2), (3, 4)], 2, 4)
            g.check(rep["factorizes"], ("horizontal", labels))
        ftw = InfiniteBraidWord(4, (), (1, 3))
        rep = horizontal_factorization(ftw, Coloring((1, 1, 1, 1), 2), [(1, 2), (3, 4)], 2, 4)
        g.check(rep["factorizes"], "horizontal FT blocks")
        ft2 = full_twist_infinite(2)
        gamma = Coloring((1, 1), 2)
        for core in [(), (1,)]:
            Wb = BiInfiniteWord(ft2, BraidWord(2, core), ft2, gamma, gamma)
            rep = bi_infinite_analyze(Wb, 2, 4, M=12)
            g.check(rep["stabilizing"], ("stabilizing", core, rep["qdiff_prev"]))
            g.check(rep["shift_invariant"], ("shift", core, rep["shift_qdiff"]))


def test_c10_certificate_rejection():
    with Gate(10, "(s1^2 s2^2)^inf on distinct colors with s2^2 blocks deleted is rejected definitively") as g:
        W = InfiniteBraidWord(3, (), (1, 1, 2, 2))
        cert = CompletenessCertificate.from_json({"head": [], "tail": {"start": 2, "stride": 4, "pattern": [[0, 2]]}})
        result = verify_completeness_certificate(W, Coloring((1, 2, 3), 3), cert)
        g.check(result is False, f"got {result!r}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
