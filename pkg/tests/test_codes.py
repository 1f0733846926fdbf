import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.balls import ListRecoveryBall, random_rectangle, rectangle
from listrec.codes import (
    code_from_parity_check, codewords, contains, coset_rectangle, count_in_ball, count_in_rectangle,
    count_in_subfield_coset_rectangle, redundancy_for, sample_rlc, span_probability_check, subfield_basis,
)
from listrec.errors import BadDegree, NotExtensionField, TooLarge
from listrec.gf import GF, field_new, matvec, rank

F2, F3, F5 = GF(2), GF(3), GF(5)
F4 = field_new(2, 2)
F16 = field_new(2, 4)


def _code_with_dim(F, n, k, rng):
    while True:
        code = sample_rlc(F, n, Fraction(k, n), rng)
        if code.k == k:
            return code


def test_redundancy_rounding():
    assert redundancy_for(10, Fraction(1, 2)) == 5
    assert redundancy_for(7, Fraction(1, 2)) == 4  # 3.5 rounds up
    assert redundancy_for(8, 1) == 0
    assert redundancy_for(8, 0) == 8


def test_full_rate_is_whole_space():
    code = sample_rlc(F5, 6, 1, np.random.default_rng(0))
    assert code.redundancy == 0 and code.k == 6
    assert count_in_rectangle(code, rectangle(F5, [range(5)] * 6)) == 5**6


def test_basis_in_kernel_and_rate():
    rng = np.random.default_rng(1)
    for F in (F2, F4, F5):
        for _ in range(20):
            code = sample_rlc(F, 10, Fraction(2, 5), rng)
            assert code.k == 10 - rank(F, code.H)
            assert code.rate >= code.design_rate
            for g in code.generator:
                assert not matvec(F, code.H, g).any()


def test_same_seed_same_code():
    a = sample_rlc(F4, 12, 0.5, np.random.default_rng(9))
    b = sample_rlc(F4, 12, 0.5, np.random.default_rng(9))
    assert np.array_equal(a.H, b.H)


def test_zero_rate_rank_distribution():
    # a square uniform matrix is invertible with probability prod(1 - q^-i)
    n, trials = 6, 10**4
    rng = np.random.default_rng(2)
    trivial = sum(sample_rlc(F2, n, 0, rng).k == 0 for _ in range(trials))
    p = math.prod(1 - 2.0**-i for i in range(1, n + 1))
    assert abs(trivial / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_contains():
    rng = np.random.default_rng(3)
    code = _code_with_dim(F3, 6, 2, rng)
    words = {tuple(w) for w in codewords(code).tolist()}
    assert contains(code, np.zeros(6, dtype=np.int64))
    for g in code.generator:
        assert contains(code, g)
    while True:
        x = rng.integers(0, 3, 6)
        if tuple(x.tolist()) not in words:
            break
    assert not contains(code, x)


def test_linearity():
    rng = np.random.default_rng(4)
    for F in (F4, F5):
        code = sample_rlc(F, 8, 0.5, rng)
        W = codewords(code)
        assert len(W) == code.size() == len({tuple(w) for w in W.tolist()})
        for _ in range(10):
            x, y = W[rng.integers(len(W))], W[rng.integers(len(W))]
            lam = int(rng.integers(1, F.q))
            assert contains(code, F.add(x, y))
            assert contains(code, F.mul(lam, x))


def test_codewords_cap():
    code = sample_rlc(F5, 20, 0.5, np.random.default_rng(0))
    with pytest.raises(TooLarge):
        codewords(code, cap=1000)


def test_span_probability_examples():
    rng = np.random.default_rng(5)
    zero = span_probability_check(F2, 6, Fraction(1, 2), [np.zeros(6, dtype=np.int64)], 100, rng)
    assert zero.predicted == 1 and zero.empirical == 1
    v = np.array([1, 0, 1, 1, 0, 0])
    one = span_probability_check(F2, 6, Fraction(1, 2), [v], 4000, rng)
    assert one.predicted == 1 / 8 and one.within()
    v, w = np.array([1, 2, 0, 3, 4, 1, 0, 2]), np.array([0, 1, 1, 0, 2, 2, 3, 4])
    two = span_probability_check(F5, 8, Fraction(3, 4), [v, F5.mul(2, v), w], 4000, rng)
    assert two.dimension == 2 and two.predicted == 5.0**-4 and two.within()


def test_rectangle_trivial_counts():
    rng = np.random.default_rng(6)
    code = sample_rlc(F5, 8, 0.5, rng)
    assert count_in_rectangle(code, rectangle(F5, [range(5)] * 8), strategy="codewords") == code.size()
    for strategy in ("codewords", "rectangle", "mitm"):
        assert count_in_rectangle(code, rectangle(F5, [[0]] * 8), strategy=strategy) == 1


def test_rectangle_strategies_agree():
    rng = np.random.default_rng(7)
    for _ in range(100):
        code = _code_with_dim(F5, 10, 4, rng)
        rect = random_rectangle(F5, 10, 2, rng)
        counts = {s: count_in_rectangle(code, rect, strategy=s) for s in ("codewords", "rectangle", "mitm")}
        assert len(set(counts.values())) == 1, counts


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (5, 1), (2, 3)]), st.integers(4, 9), st.integers(0, 2**32 - 1))
def test_strategies_agree_property(qm, n, seed):
    F = field_new(*qm)
    rng = np.random.default_rng(seed)
    code = sample_rlc(F, n, 0.5, rng)
    ell = int(rng.integers(1, F.q + 1))
    rect = random_rectangle(F, n, ell, rng)
    brute = sum(1 for w in codewords(code) if rect.contains(w))
    for s in ("codewords", "rectangle", "mitm"):
        assert count_in_rectangle(code, rect, strategy=s) == brute


def test_rectangle_cap():
    code = sample_rlc(F5, 30, 0.5, np.random.default_rng(0))
    with pytest.raises(TooLarge):
        count_in_rectangle(code, rectangle(F5, [range(5)] * 30), cap=1000)


def test_subfield_basis():
    assert len(subfield_basis(F16, 2)) == 2
    assert set(F16.subfield(2)) == {
        F16.add(F16.mul(a, x), F16.mul(b, y)) for (x, y) in [subfield_basis(F16, 2)] for a in (0, 1) for b in (0, 1)
    }


def test_subfield_count_trivial():
    n = 6
    full = code_from_parity_check(F4, np.zeros((0, n), dtype=np.int64))
    assert count_in_subfield_coset_rectangle(full, [1] * n, 1) == 2**n
    zero = code_from_parity_check(F4, np.eye(n, dtype=np.int64))
    assert count_in_subfield_coset_rectangle(zero, [3] * n, 1) == 1


def test_subfield_count_matches_explicit():
    rng = np.random.default_rng(8)
    for _ in range(20):
        code = sample_rlc(F4, 12, Fraction(5, 12), rng)
        gammas = rng.integers(1, 4, 12)
        fast = count_in_subfield_coset_rectangle(code, gammas, 1)
        assert fast == count_in_rectangle(code, coset_rectangle(F4, gammas, 1), strategy="codewords")


def test_subfield_count_f16_and_free_coordinates():
    rng = np.random.default_rng(10)
    code = sample_rlc(F16, 6, 0.5, rng)
    gammas = rng.integers(1, 16, 6)
    free = np.array([True, False, False, True, False, False])
    rect = coset_rectangle(F16, gammas, 2)
    sides = [list(range(16)) if free[i] else list(rect.sides[i].elements) for i in range(6)]
    expect = count_in_rectangle(code, rectangle(F16, sides), strategy="codewords")
    assert count_in_subfield_coset_rectangle(code, gammas, 2, free) == expect


def test_subfield_errors():
    code = sample_rlc(F5, 6, 0.5, np.random.default_rng(0))
    with pytest.raises(NotExtensionField):
        count_in_subfield_coset_rectangle(code, [1] * 6, 1)
    code = sample_rlc(F16, 6, 0.5, np.random.default_rng(0))
    with pytest.raises(BadDegree):
        count_in_subfield_coset_rectangle(code, [1] * 6, 3)


def test_ball_counts():
    rng = np.random.default_rng(11)
    code = _code_with_dim(F3, 10, 5, rng)
    rect = random_rectangle(F3, 10, 1, rng)
    assert count_in_ball(code, ListRecoveryBall(rect, 10)) == 3**5
    assert count_in_ball(code, ListRecoveryBall(rect, 0)) == count_in_rectangle(code, rect)
    prev = 0
    for r in range(11):
        ball = ListRecoveryBall(rect, r)
        a = count_in_ball(code, ball, strategy="codewords")
        assert a == count_in_ball(code, ball, strategy="ball")
        assert a >= prev
        prev = a


def test_ball_count_matches_member_scan():
    rng = np.random.default_rng(12)
    code = sample_rlc(F3, 8, 0.5, rng)
    ball = ListRecoveryBall(random_rectangle(F3, 8, 1, rng), 3)
    members = ball.members()
    assert count_in_ball(code, ball) == sum(contains(code, x) for x in members)
