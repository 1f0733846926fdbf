import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.errors import DivisionByZero, FieldTooLarge, LengthMismatch, NotPrime
from listrec.gf import (
    GF, field_new, field_of_order, is_irreducible_bruteforce, is_irreducible_rabin, matvec,
    nullspace_basis, rank, rref, smallest_irreducible, span_dimension, span_elements,
)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)]


def test_prime_field_has_no_modulus_arithmetic():
    F = field_new(5, 1)
    assert F.q == 5 and F.m == 1
    assert F.add(3, 4) == 2
    assert F.mul(3, 4) == 2


def test_f4_modulus_and_reduction():
    F = field_new(2, 2)
    assert F.modulus == (1, 1, 1)
    x = 2
    assert F.add(1, 1) == 0
    assert F.mul(x, x) == 3  # x^2 = x + 1


def _monic_without_roots(p):
    # lowest-coefficient-first, ordered by sum c_i p^i
    for code in range(p * p):
        c0, c1 = code % p, code // p
        if all((r * r + c1 * r + c0) % p for r in range(p)):
            return (c0, c1, 1)


def test_f9_modulus_is_smallest_rootless_quadratic():
    assert field_new(3, 2).modulus == _monic_without_roots(3) == (1, 0, 1)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (5, 2)])
def test_rabin_agrees_with_bruteforce(p, m):
    for tail in itertools.product(range(p), repeat=m):
        f = tuple(tail) + (1,)
        assert is_irreducible_rabin(f, p) == is_irreducible_bruteforce(f, p)


def test_smallest_irreducible_large_degree_is_irreducible():
    f = smallest_irreducible(2, 16)
    assert len(f) == 17 and is_irreducible_rabin(f, 2)


def test_constructor_errors():
    with pytest.raises(NotPrime):
        field_new(6, 1)
    with pytest.raises(FieldTooLarge):
        field_new(2, 17)
    with pytest.raises(NotPrime):
        field_of_order(12)
    with pytest.raises(DivisionByZero):
        GF(7).inv(0)


@pytest.mark.parametrize("p,m", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 16])
def test_field_axioms_exhaustive(p, m):
    F = field_new(p, m)
    a, b, c = np.meshgrid(np.arange(F.q), np.arange(F.q), np.arange(F.q), indexing="ij")
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    nz = np.arange(1, F.q)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(np.arange(F.q), F.neg(np.arange(F.q))) == 0)


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_characteristic(p, m):
    F = field_new(p, m)
    acc = np.zeros(F.q, dtype=np.int64)
    for _ in range(p):
        acc = F.add(acc, np.arange(F.q))
    assert not acc.any()


def test_large_field_roundtrip():
    F = field_new(2, 16)
    rng = np.random.default_rng(0)
    a = rng.integers(1, F.q, 200)
    b = rng.integers(1, F.q, 200)
    assert np.array_equal(F.mul(F.div(a, b), b), a)
    assert np.array_equal(F.mul(a, F.inv(a)), np.ones(200, dtype=np.int64))


def test_subfields():
    assert sorted(field_new(2, 2).subfield(1)) == [0, 1]
    assert sorted(field_new(3, 2).subfield(1)) == [0, 1, 2]
    assert len(field_new(2, 4).subfield(2)) == 4


def test_nullspace_examples():
    F2 = GF(2)
    assert len(nullspace_basis(F2, np.zeros((1, 3), dtype=np.int64))) == 3
    assert nullspace_basis(F2, np.eye(3, dtype=np.int64)) == []
    F3 = GF(3)
    rng = np.random.default_rng(1)
    while True:
        H = F3.random_matrix(rng, 2, 4)
        if rank(F3, H) == 2:
            break
    basis = nullspace_basis(F3, H)
    assert len(basis) == 2
    for v in basis:
        assert not matvec(F3, H, v).any()


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)])
def test_rank_nullity(p, m):
    F = field_new(p, m)
    rng = np.random.default_rng(p * 10 + m)
    for _ in range(200):
        r, c = rng.integers(1, 7, size=2)
        H = F.random_matrix(rng, int(r), int(c))
        basis = nullspace_basis(F, H)
        assert len(basis) + rank(F, H) == c
        for v in basis:
            assert not matvec(F, H, v).any()


def test_rref_pivots_are_leftmost():
    F = GF(5)
    R, piv = rref(F, np.array([[0, 2, 4], [0, 1, 2], [3, 0, 1]]))
    assert piv == [0, 1]
    assert R[0, 0] == 1 and R[1, 1] == 1


def test_span_dimension_examples():
    F = GF(5)
    assert span_dimension(F, []) == 0
    v = np.array([1, 2, 3])
    assert span_dimension(F, [v, F.mul(2, v)]) == 1
    with pytest.raises(LengthMismatch):
        span_dimension(F, [np.array([1, 2]), np.array([1, 2, 3])])


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1)]),
    st.integers(1, 3),
    st.integers(1, 5),
    st.integers(0, 2**32 - 1),
)
def test_span_dimension_matches_enumeration(field, b, n, seed):
    F = field_new(*field)
    rng = np.random.default_rng(seed)
    vecs = [F.random_vector(rng, n) for _ in range(b)]
    size = len(span_elements(F, vecs))
    assert F.q ** span_dimension(F, vecs) == size


def test_fields_pickle():
    import pickle

    F = field_new(3, 2)
    G = pickle.loads(pickle.dumps(F))
    assert G == F and G.mul(2, 5) == F.mul(2, 5)
