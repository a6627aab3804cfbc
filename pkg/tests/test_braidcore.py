import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from colortwist.braidcore import (EMPTY_CERTIFICATE, BraidWord, BudgetExhausted, Coloring,
                                  CompletenessCertificate, IncompatibleWithPeriod,
                                  InfiniteBraidWord, IntervalNotColorPure, NotColorPure,
                                  bfs_search, burau, color_size, delete_subbraids, find_clasp,
                                  full_twist, full_twist_infinite, induced_coloring,
                                  is_color_pure, load_infinite_word, maximal_purity_sequence,
                                  min_color_sum, neighbors, positive_equivalent, replay,
                                  verify_completeness_certificate)


def test_color_size_examples():
    assert color_size(Coloring((1, 2, 3), 3)) == 4
    assert color_size(Coloring((5,), 5)) == 0
    for c, n in [(2, 4), (3, 5)]:
        assert color_size(Coloring((c,) * n, 3 if c <= 3 else c)) == c * n * (n - 1) // 2


def test_color_size_permutation_invariant():
    for n in range(1, 5):
        for lab in itertools.product(range(4), repeat=n):
            cs = color_size(lab)
            for perm in itertools.permutations(lab):
                assert color_size(perm) == cs


def test_induced_coloring():
    g = Coloring((1, 2), 2)
    assert induced_coloring(BraidWord(2, (1,)), g, 1).labels == (2, 1)
    g3 = Coloring((1, 2, 3), 3)
    assert induced_coloring(full_twist(3), g3, 6) == g3
    u = Coloring((2, 2, 2), 2)
    assert induced_coloring(BraidWord(3, (1, -2, 2)), u, 2) == u
    with pytest.raises(IndexError):
        induced_coloring(BraidWord(2, (1,)), g, 2)


def test_full_twist():
    assert full_twist(2).letters == (1, 1)
    assert full_twist(4).letters == (1, 2, 3) * 4
    for n in range(1, 7):
        ft = full_twist(n)
        assert len(ft) == n * (n - 1) and ft.positive()
        assert ft.permutation() == tuple(range(n))


def test_min_color_sum():
    assert min_color_sum(BraidWord(2, (1,)), Coloring((1, 2), 2)) == 1
    assert min_color_sum(BraidWord(3, (1, 2) * 3), Coloring((1, 2, 3), 3)) == 8


def test_color_purity():
    assert is_color_pure(BraidWord(2, (1, 1)), Coloring((1, 2), 2))
    assert not is_color_pure(BraidWord(2, (1,)), Coloring((1, 2), 2))
    assert is_color_pure(BraidWord(3, (1, 2, 2, -1, 2)), Coloring((1, 1, 1), 1))


def test_clasp_restores_colors_on_its_strands():
    for a, b in itertools.product(range(3), repeat=2):
        g = Coloring((a, b), 2)
        assert induced_coloring(BraidWord(2, (1, 1)), g, 2) == g


def test_purity_sequences():
    assert maximal_purity_sequence(full_twist_infinite(2), Coloring((1, 2), 2)).take(4) == [2, 4, 6, 8]
    W = InfiniteBraidWord(3, (2,), (1, 2, 1))
    assert maximal_purity_sequence(W, Coloring((1, 1, 1), 1)).take(5) == [1, 2, 3, 4, 5]
    assert maximal_purity_sequence(full_twist_infinite(3), Coloring((1, 2, 3), 3)).take(3) == [6, 12, 18]
    with pytest.raises(NotColorPure):
        maximal_purity_sequence(InfiniteBraidWord(3, (2,), (1, 1)), Coloring((1, 1, 2), 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.data())
def test_purity_sequence_matches_brute_force(n, data):
    N = 2
    gamma = Coloring(tuple(data.draw(st.lists(st.integers(0, N), min_size=n, max_size=n))), N)
    prefix = tuple(data.draw(st.lists(st.integers(1, n - 1), max_size=4)))
    period = tuple(data.draw(st.lists(st.integers(1, n - 1), min_size=1, max_size=4)))
    W = InfiniteBraidWord(n, prefix, period)
    horizon = len(prefix) + 24 * len(period) * 6
    brute = [k for k in range(1, horizon + 1)
             if induced_coloring(W.truncate(k), gamma, k) == gamma]
    try:
        seq = maximal_purity_sequence(W, gamma)
    except NotColorPure:
        assert all(k <= len(prefix) for k in brute)
        return
    got = seq.take(len(brute) + 5)
    assert [m for m in got if m <= horizon] == brute
    assert seq.stride % len(period) == 0
    for m in brute:
        assert seq.index_of(m) == brute.index(m) + 1
        assert seq.count_upto(m) == brute.index(m) + 1


def test_delete_examples():
    u3 = Coloring((1, 1, 1), 1)
    W = InfiniteBraidWord(3, (), (1, 1, 2, 2))
    assert delete_subbraids(W, u3, EMPTY_CERTIFICATE).truncate(12) == W.truncate(12)
    cert = CompletenessCertificate((), 2, 4, ((0, 2),))
    D = delete_subbraids(W, u3, cert)
    assert set(D.truncate(20).letters) == {1}
    W4 = InfiniteBraidWord(4, (3,), full_twist(4).letters)
    D4 = delete_subbraids(W4, Coloring((1,) * 4, 1), CompletenessCertificate(((0, 1),)))
    assert D4.truncate(36) == full_twist_infinite(4).truncate(36)


def test_delete_errors():
    g = Coloring((1, 2, 3), 3)
    W = InfiniteBraidWord(3, (), (1, 1, 2, 2))
    with pytest.raises(IntervalNotColorPure):
        delete_subbraids(W, g, CompletenessCertificate(((0, 1),)))
    with pytest.raises(IncompatibleWithPeriod):
        delete_subbraids(W, g, CompletenessCertificate((), 0, 3, ((0, 2),)))
    with pytest.raises(IncompatibleWithPeriod):
        delete_subbraids(W, g, CompletenessCertificate((), 0, 4, ((0, 4),)))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_deletion_preserves_purity(data):
    n = 3
    gamma = Coloring(tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))), 2)
    blocks = data.draw(st.lists(st.lists(st.integers(1, 2), min_size=1, max_size=3), min_size=2, max_size=4))
    period = tuple(x for b in blocks for x in b)
    W = InfiniteBraidWord(n, (), period)
    starts = [0]
    for b in blocks:
        starts.append(starts[-1] + len(b))
    cols = [induced_coloring(W.truncate(s), gamma, s).labels for s in starts]
    cols_after = [induced_coloring(W.truncate(s + len(period)), gamma, s + len(period)).labels for s in starts]
    pattern = tuple((starts[k], starts[k + 1]) for k in range(len(blocks))
                    if cols[k] == cols[k + 1] and cols[k] == cols_after[k]
                    and k % 2 == 0 and len(blocks[k]) < len(period))
    pattern = pattern[:1]
    if not pattern or not is_color_pure(BraidWord(n, period), gamma):
        return
    cert = CompletenessCertificate((), 0, len(period), pattern)
    try:
        D = delete_subbraids(W, gamma, cert)
    except IntervalNotColorPure:
        return
    assert is_color_pure(BraidWord(n, D.prefix + D.period), gamma)


def test_find_clasp_examples():
    res = find_clasp(BraidWord(3, (1, 2, 1, 2, 1, 2)), Coloring((1, 2, 3), 3))
    assert res.word.letters == (1, 1, 2, 1, 1, 2) and res.position == 1
    assert res.moves == (("braid", 2),)
    res = find_clasp(BraidWord(2, (1, 1)), Coloring((1, 2), 2))
    assert res.position == 1 and res.moves == ()
    res = find_clasp(BraidWord(3, (1, 2, 2, 1)), Coloring((1, 2, 1), 2))
    assert res.position == 2 and res.moves == ()


def test_find_clasp_budget():
    with pytest.raises(BudgetExhausted):
        find_clasp(BraidWord(4, (1, 3, 2, 1, 3, 2) * 2), Coloring((1, 2, 3, 4), 4), budget=1)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 4), st.lists(st.integers(1, 3), min_size=2, max_size=8))
def test_find_clasp_against_oracle(n, letters):
    letters = tuple(min(x, n - 1) for x in letters)
    B = BraidWord(n, letters)
    ref = oracle.clasp_bfs(letters)
    try:
        res = find_clasp(B, Coloring((1,) * n, 1), budget=20_000)
    except BudgetExhausted:
        assert ref is None
        return
    assert ref is not None
    assert res.word.letters == ref[0] and len(res.moves) == ref[1]
    assert replay(letters, res.moves) == res.word.letters
    p = res.position
    assert res.word.letters[p - 1] == res.word.letters[p]


def test_mixed_moves_preserve_burau():
    random.seed(3)
    for _ in range(200):
        w = tuple(random.choice([1, -1]) * random.randint(1, 3) for _ in range(6))
        for mv, w2 in neighbors(w, mixed=True):
            assert burau(BraidWord(4, w)) == burau(BraidWord(4, w2)), (w, mv)


def test_bfs_reports_exhausted_class():
    assert bfs_search((1, 3), lambda w: None) is None


def test_positive_equivalence():
    assert positive_equivalent((2, 1) * 3, (1, 2) * 3, 3)
    assert not positive_equivalent((1,) * 6, (1, 2) * 3, 3)
    assert positive_equivalent((3, 2, 1) * 4, (1, 2, 3) * 4, 4)
    assert positive_equivalent((1, 3, 1, 3), (1, 1, 3, 3), 4)
    assert not positive_equivalent((1, 2, 1, 2), (2, 1, 2, 1), 4)


def test_certificates():
    u = Coloring((1, 1, 1), 1)
    assert verify_completeness_certificate(full_twist_infinite(3), u, EMPTY_CERTIFICATE)
    beta = (1, 1, 2, 2)
    W = InfiniteBraidWord(3, (), beta + full_twist(3).letters)
    cert = CompletenessCertificate((), 0, 10, ((0, 4),))
    assert verify_completeness_certificate(W, Coloring((1, 2, 3), 3), cert)
    W2 = InfiniteBraidWord(3, (), (1, 1, 2, 2))
    assert verify_completeness_certificate(W2, u, CompletenessCertificate((), 0, 4, ((1, 2), (3, 4))))
    fig1 = CompletenessCertificate((), 2, 4, ((0, 2),))
    assert not verify_completeness_certificate(W2, Coloring((1, 2, 3), 3), fig1)
    # dropping one letter of (s1 s2)^inf leaves (s2 s1)^inf, still the twist blockwise
    assert verify_completeness_certificate(InfiniteBraidWord(3, (), (1, 2)), u,
                                           CompletenessCertificate(((0, 1),)))
    assert not verify_completeness_certificate(InfiniteBraidWord(3, (), (1, 1, 2, 2)), u, EMPTY_CERTIFICATE)
    assert not verify_completeness_certificate(InfiniteBraidWord(4, (), (1, 2, 3, 1, 2)), Coloring((1,) * 4, 1),
                                               EMPTY_CERTIFICATE)


def test_certificate_json_round_trip():
    c = CompletenessCertificate(((0, 1), (3, 5)), 6, 4, ((1, 2),))
    assert CompletenessCertificate.from_json(c.to_json()) == c
    W, g = load_infinite_word('{"n":3,"N":2,"gamma":[1,1,2],"prefix":[2],"period":[1,1]}')
    assert W.prefix == (2,) and g.labels == (1, 1, 2)


def test_text_format():
    B = BraidWord.from_text("1 2 -1")
    assert B.n == 3 and B.letters == (1, 2, -1) and B.to_text() == "1 2 -1"
