import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec import info
from listrec.balls import ListRecoveryBall, ball_size_exact, rectangle
from listrec.errors import OutOfDomain
from listrec.gf import field_new

TOL = 1e-12


def test_entropy_endpoints():
    assert info.entropy_ql(4, 2, 0) == pytest.approx(0.5, abs=TOL)
    for q, ell in [(3, 1), (4, 2), (5, 2), (7, 3), (16, 5)]:
        assert info.entropy_ql(q, ell, 1 - ell / q) == 1.0
        assert info.entropy_ql(q, ell, 0) == pytest.approx(math.log(ell, q), abs=TOL)


def test_entropy_domain():
    with pytest.raises(OutOfDomain):
        info.entropy_ql(4, 2, 0.6)
    with pytest.raises(OutOfDomain):
        info.entropy_ql(4, 2, -0.1)


@pytest.mark.parametrize("q,ell", [(3, 1), (4, 2), (5, 2), (7, 3)])
def test_entropy_increasing_and_concave(q, ell):
    xs = np.linspace(0, 1 - ell / q, 1002)[1:-1]
    h = np.array([info.entropy_ql(q, ell, x) for x in xs])
    assert np.all(np.diff(h) > 0)
    assert np.all(np.diff(h, 2) < 1e-12)
    assert np.all((h >= math.log(ell, q) - TOL) & (h <= 1 + TOL))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
def test_ell_one_is_q_ary_entropy(q):
    for x in np.linspace(0, 1 - 1 / q, 200):
        assert info.entropy_ql(q, 1, x) == pytest.approx(info.entropy_q(q, x), abs=TOL)


def _ball_exponent(q, ell, n, rho):
    F = field_new(2, 2) if q == 4 else field_new(q)
    rect = rectangle(F, [range(ell)] * n)
    return math.log(ball_size_exact(ListRecoveryBall(rect, round(rho * n))), q) / n


def test_entropy_matches_ball_growth():
    # exponent approaches h from below, within the sqrt(2n) slack
    h = info.entropy_ql(4, 2, 0.25)
    for n in (8, 12):
        e = _ball_exponent(4, 2, n, 0.25)
        assert e <= h + TOL
        assert e >= h - math.log(math.sqrt(2 * n), 4) / n - TOL
    assert abs(_ball_exponent(4, 2, 12, 0.25) - h) < abs(_ball_exponent(4, 2, 8, 0.25) - h)


def test_capacity_erasures_examples():
    assert info.capacity_erasures(info.ErasureParams(4, 2, 0)) == pytest.approx(0.5, abs=TOL)
    for q in (3, 7):
        assert info.capacity_erasures(info.ErasureParams(q, 1, 0.3)) == pytest.approx(0.7, abs=TOL)
    c = info.capacity_erasures(info.ErasureParams(5, 2, 0.2))
    assert c == pytest.approx(0.8 * (1 - math.log(2, 5)), abs=TOL)


def test_capacity_errors_examples():
    assert info.capacity_errors_at(4, 2, 0) == pytest.approx(0.5, abs=TOL)
    assert info.capacity_errors_at(4, 2, 0.5) == 0
    assert info.capacity_errors(info.ErrorParams(5, 2, 0.3)) == pytest.approx(1 - info.entropy_ql(5, 2, 0.3))
    assert info.capacity_errors(info.ErrorParams(5, 2, 0.3)) == pytest.approx(0.114193, abs=1e-6)


def test_error_params_messages():
    with pytest.raises(OutOfDomain, match="rho must lie in"):
        info.ErrorParams(5, 2, 0.7)
    with pytest.raises(OutOfDomain):
        info.ErrorParams(5, 5, 0.1)
    with pytest.raises(OutOfDomain):
        info.ErasureParams(5, 2, 1.0)


def test_divergence_properties():
    for q in (2, 3, 5):
        assert info.divergence_q(q, 0.3, 0.3) == 0
        d13 = info.divergence_q(q, 0.7, 0.3)
        d12 = info.divergence_q(q, 0.7, 0.5)
        assert d13 > d12 > 0


def test_pinsker_grid():
    for p in np.arange(0.2, 0.81, 0.1):
        for d in np.arange(0.01, p / 2 + 1e-9, 0.01):
            for q in (2, 5, 16):
                assert math.log(q) * info.divergence_q(q, p, p - d) >= 2 * d * d - TOL


def _binom_tail(n, p, k):
    return sum(Fraction(math.comb(n, j)) * Fraction(p) ** j * (1 - Fraction(p)) ** (n - j) for j in range(k, n + 1))


def test_binomial_tail_examples():
    exact = float(_binom_tail(20, Fraction(3, 10), 10))
    for q in (2, 3, 7):
        assert exact <= info.binomial_tail_bound(20, 0.3, 0.5, q)
    # the bound does not depend on the base
    assert info.binomial_tail_bound(20, 0.3, 0.5, 2) == pytest.approx(info.binomial_tail_bound(20, 0.3, 0.5, 9))


def test_binomial_floor_examples():
    assert Fraction(252, 1024) >= info.binomial_floor(10, 0.5)
    assert info.binomial_floor(10, 0.5) == pytest.approx(0.2236, abs=1e-4)
    assert info.binomial_floor(2, 0.5) == 0.5
    with pytest.raises(OutOfDomain):
        info.binomial_floor(10, 0.33)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 40), st.data())
def test_binomial_floor_holds(n, data):
    k = data.draw(st.integers(1, n - 1))
    p = Fraction(k, n)
    pmf = math.comb(n, k) * p**k * (1 - p) ** (n - k)
    assert float(pmf) >= info.binomial_floor(n, k / n) - 1e-15


@settings(max_examples=200, deadline=None)
@given(st.integers(5, 60), st.floats(0.05, 0.6), st.floats(0.05, 0.35))
def test_binomial_tail_holds(n, p, gap):
    pp = p + gap
    if not pp < 1:
        return
    k = math.ceil(pp * n - 1e-12)
    exact = float(_binom_tail(n, Fraction(p), k))
    assert exact <= info.binomial_tail_bound(n, p, pp) * (1 + 1e-9)


def test_entropy_gap_examples():
    p = info.ErrorParams(5, 2, 0.3)
    assert info.entropy_gap_lower_bound(p, 0) == 0
    assert info.entropy_gap(5, 2, 0.3, 0) == 0
    assert info.entropy_gap(5, 2, 0.3, 0.1) >= info.entropy_gap_lower_bound(p, 0.1)
    assert info.entropy_gap_lower_bound((5, 2, 0.6), 0.2) == pytest.approx(0, abs=TOL)


@pytest.mark.parametrize("q,ell", [(3, 1), (4, 2), (5, 2), (7, 3), (16, 4)])
def test_entropy_gap_grid(q, ell):
    hi = 1 - ell / q
    for rho in np.linspace(0, hi, 41)[1:-1]:
        for eta in np.linspace(0, rho, 21):
            bound = info.entropy_gap_lower_bound((q, ell, rho), eta)
            assert info.entropy_gap(q, ell, rho, eta) >= bound - 1e-12


def test_delta_examples():
    d = info.delta_error_mixing(info.ErrorParams(5, 2, 0.3))
    lead = math.log(3 * 0.7 / (0.3 * 2), 5)
    assert d == pytest.approx(lead * 0.3**4 * 0.3**2 / (16 * math.log2(5)))
    assert d > 0 and info.delta_error_mixing((5, 2, 0.05)) > 0
    assert info.delta_error_mixing((5, 2, 0.6 - 1e-9)) < 1e-15
    with pytest.raises(OutOfDomain):
        info.delta_error_mixing((5, 2, 0.6))


@pytest.mark.parametrize("q,ell", [(3, 1), (4, 2), (5, 2), (7, 3), (13, 6)])
def test_first_omega_inequality(q, ell):
    rng = np.random.default_rng(q * 100 + ell)
    hi = 1 - ell / q
    for rho in rng.uniform(0, hi, 1000):
        if 0 < rho < hi:
            assert 1 - rho > info.omega_mixture(q, ell, rho, rho)
    for rho in (0.0, hi):
        assert 1 - rho <= info.omega_mixture(q, ell, rho, rho) + TOL


def test_default_eta_is_feasible():
    for q, ell in [(3, 1), (5, 2), (7, 3), (16, 4)]:
        for rho in np.linspace(0, 1 - ell / q, 12)[1:-1]:
            assert info.eta_feasible(q, ell, rho, info.default_eta(q, ell, rho))
