from fractions import Fraction

import numpy as np
import pytest

from listrec.balls import Rectangle
from listrec.codes import (
    codewords, count_in_rectangle, count_in_subfield_coset_rectangle, coset_rectangle, sample_rlc,
)
from listrec.errors import ConfigInfeasible
from listrec.gf import GF, field_new, rank
from listrec.samplers import (
    RectangleSampler, check_sampler, erasure_mask, fp_basis_of_code, fp_span, pinned_coset_search,
    pinned_interval_search, quotient_projection, restrict, subfield_degree_for,
)

F4, F16 = field_new(2, 2), field_new(2, 4)
F5, F9 = GF(5), field_new(3, 2)


def test_subfield_degree():
    assert subfield_degree_for(F4, 2) == 1
    assert subfield_degree_for(F16, 4) == 2
    assert subfield_degree_for(F9, 3) == 1
    for F, ell in ((F5, 2), (F4, 3), (F16, 8), (F4, 4)):
        with pytest.raises(ConfigInfeasible):
            subfield_degree_for(F, ell)


def test_check_sampler():
    check_sampler(F5, 2, "adversarial-scan")
    check_sampler(F4, 2, "uniform-subsets")
    with pytest.raises(ConfigInfeasible):
        check_sampler(F4, 2, "centered-intervals")
    with pytest.raises(ConfigInfeasible):
        check_sampler(F5, 2, "no-such-sampler")


def test_erasure_mask():
    rng = np.random.default_rng(0)
    assert erasure_mask(10, 0.0, rng).sum() == 0
    assert erasure_mask(10, 0.3, rng).sum() == 3
    assert erasure_mask(7, 0.5, rng).sum() == 3


def test_quotient_projection_kernel_is_subfield():
    for F, s in ((F4, 1), (F16, 1), (F16, 2), (F9, 1)):
        P = quotient_projection(F, s)
        assert P.shape == (F.m - s, F.m)
        in_kernel = {a for a in range(F.q) if not ((F.digits(a) @ P.T) % F.p).any()}
        assert in_kernel == set(F.subfield(s))


def test_fp_basis_spans_code():
    rng = np.random.default_rng(1)
    code = sample_rlc(F4, 6, 0.5, rng)
    span = {tuple(w) for w in fp_span(F4, fp_basis_of_code(code)).tolist()}
    assert span == {tuple(w) for w in codewords(code).tolist()}


def test_restrict_imposes_conditions():
    rng = np.random.default_rng(2)
    code = sample_rlc(F16, 8, 0.5, rng)
    W = fp_basis_of_code(code)
    coords = np.array([0, 3])
    cond = F16.digits(W[:, coords]).reshape(len(W), -1)
    W2 = restrict(F16, W, cond)
    assert not W2[:, coords].any()
    assert len(W2) == rank(GF(2), F16.digits(W2).reshape(len(W2), -1))


@pytest.mark.parametrize("F,ell", [(F4, 2), (F16, 4), (F9, 3)])
def test_pinned_coset_search_consistent(F, ell):
    rng = np.random.default_rng(3)
    s = subfield_degree_for(F, ell)
    for _ in range(5):
        code = sample_rlc(F, 10, 0.5, rng)
        gam = pinned_coset_search(code, s, rng)
        assert gam.shape == (10,) and (gam != 0).all()
        fast = count_in_subfield_coset_rectangle(code, gam, s)
        if code.size() <= 2**20:
            assert fast == count_in_rectangle(code, coset_rectangle(F, gam, s), strategy="codewords")
        assert fast >= 1


def test_pinned_coset_beats_random_on_average():
    rng = np.random.default_rng(4)
    pinned, random_ = [], []
    for _ in range(10):
        code = sample_rlc(F4, 16, Fraction(9, 16), rng)
        pinned.append(count_in_subfield_coset_rectangle(code, pinned_coset_search(code, 1, rng), 1))
        random_.append(count_in_subfield_coset_rectangle(code, rng.integers(1, 4, 16), 1))
    assert np.mean(pinned) > np.mean(random_)


def test_pinned_interval_search_sides():
    rng = np.random.default_rng(5)
    code = sample_rlc(F5, 12, 0.5, rng)
    free = np.zeros(12, dtype=bool)
    free[[2, 7]] = True
    sides = pinned_interval_search(code, 2, rng, free)
    assert [s.size for s in sides] == [5 if f else 2 for f in free]
    assert count_in_rectangle(code, Rectangle(F5, tuple(sides))) >= 1


def test_sampler_subfield_rectangle_matches_fast_count():
    rng = np.random.default_rng(6)
    code = sample_rlc(F4, 10, 0.5, rng)
    sampler = RectangleSampler(code, 2, "subfield-cosets", adaptive_every=2)
    for j in range(6):
        free = erasure_mask(10, 0.2, rng)
        state = rng.bit_generator.state
        rect = sampler.rectangle(j, free, rng)
        rng.bit_generator.state = state
        gam = sampler.gammas(j, free, rng)
        assert count_in_rectangle(code, rect) == count_in_subfield_coset_rectangle(code, gam, 1, free)


@pytest.mark.parametrize("kind", ["uniform-subsets", "centered-intervals", "adversarial-scan"])
def test_sampler_side_sizes(kind):
    rng = np.random.default_rng(7)
    code = sample_rlc(F5, 9, 0.5, rng)
    sampler = RectangleSampler(code, 3, kind, adaptive_every=4)
    for j in range(8):
        free = erasure_mask(9, 1 / 3, rng)
        rect = sampler.rectangle(j, free, rng)
        assert rect.side_sizes == [5 if f else 3 for f in free]


def test_adaptive_schedule():
    code = sample_rlc(F5, 6, 0.5, np.random.default_rng(0))
    assert [RectangleSampler(code, 2, "adversarial-scan", 4).adaptive(j) for j in range(5)] == [
        True, False, False, False, True,
    ]
    assert not RectangleSampler(code, 2, "uniform-subsets").adaptive(0)
    assert not RectangleSampler(code, 2, "adversarial-scan", 0).adaptive(0)
