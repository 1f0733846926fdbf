"""Arithmetic in F_q for prime and prime-power q, plus linear algebra over it.

Elements are plain integers in ``[0, q)``.  The integer ``sum(c_i * p**i)``
stands for the polynomial ``sum(c_i * x**i)`` modulo the field's modulus, so
for prime fields the encoding is the usual residue.  Vectors and matrices are
numpy integer arrays; every arithmetic method accepts scalars or arrays and
broadcasts like numpy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    FieldTooLarge,
    LengthMismatch,
    NoIrreducibleFound,
    NotPrime,
)

DEFAULT_MAX_ORDER = 2**16
TABLE_MAX_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low -> high ----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_mod(e: int, f: list[int], p: int) -> list[int]:
    result, base = [1], _pmod([0, 1], f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _sub_x(a: list[int], p: int) -> list[int]:
    a = list(a) + [0] * max(0, 2 - len(a))
    a[1] = (a[1] - 1) % p
    return _trim(a)


def is_irreducible_rabin(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial given low -> high."""
    f = list(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if _sub_x(_x_pow_mod(p**m, f, p), p):
        return False
    for r in prime_factors(m):
        g = _pgcd(f, _sub_x(_x_pow_mod(p ** (m // r), f, p), p), p)
        if len(g) > 1:
            return False
    return True


def is_irreducible_bruteforce(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    f = list(f)
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(f, list(low) + [1], p):
                return False
    return m >= 1


def _irreducible(f: Sequence[int], p: int) -> bool:
    if len(f) - 1 <= 4:
        return is_irreducible_bruteforce(f, p)
    return is_irreducible_rabin(f, p)


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m whose lower coefficients, read as the
    base-p integer sum(c_i p^i), are smallest."""
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        f = low + [1]
        if low[0] != 0 and _irreducible(f, p):
            return tuple(f)
    raise NoIrreducibleFound(f"no irreducible of degree {m} over F_{p}")


# -- the field ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Field:
    """F_q with q = p**m.  Build with :func:`field_new` or ``GF(p, m)``."""

    p: int
    m: int = 1
    modulus: tuple[int, ...] = ()
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)
        object.__setattr__(self, "_pw", np.array([self.p**i for i in range(self.m)], dtype=np.int64))
        object.__setattr__(self, "_tables", None)
        if self.m > 1 and self.q <= TABLE_MAX_ORDER:
            object.__setattr__(self, "_tables", _build_tables(self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (field_new, (self.p, self.m))

    @property
    def is_prime(self) -> bool:
        return self.m == 1

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.q

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # digits <-> index
    def digits(self, a) -> np.ndarray:
        """Base-p coordinates of ``a`` along a new trailing axis."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pw

    # arithmetic
    def add(self, a, b):
        if self.m == 1:
            return _out((np.asarray(a, dtype=np.int64) + b) % self.p)
        if self._tables is not None:
            return _out(self._tables[0][a, b])
        return _out(self.from_digits(self.digits(a) + self.digits(b)))

    def neg(self, a):
        if self.m == 1:
            return _out((-np.asarray(a, dtype=np.int64)) % self.p)
        if self._tables is not None:
            return _out(self._tables[2][a])
        return _out(self.from_digits(-self.digits(a)))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return _out((np.asarray(a, dtype=np.int64) * b) % self.p)
        if self._tables is not None:
            return _out(self._tables[1][a, b])
        return _out(_poly_mul_idx(self, np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)))

    def inv(self, a):
        arr = np.asarray(a, dtype=np.int64)
        if np.any(arr == 0):
            raise DivisionByZero("0 has no multiplicative inverse")
        if self.m == 1:
            return _out(_prime_inverses(self.p)[arr])
        if self._tables is not None:
            return _out(self._tables[3][arr])
        # a^(q-2) by square-and-multiply on the whole array
        result, base, e = np.ones_like(arr), arr, self.q - 2
        while e:
            if e & 1:
                result = np.asarray(self.mul(result, base))
            base = np.asarray(self.mul(base, base))
            e >>= 1
        return _out(result)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            e >>= 1
        return result

    def subfield(self, s: int) -> list[int]:
        """Elements of the subfield F_{p^s}, i.e. roots of x^{p^s} - x."""
        if s <= 0 or self.m % s:
            raise ValueError(f"F_{self.p}^{s} is not a subfield of {self!r}")
        return [a for a in self.elements() if self.pow(a, self.p**s) == a]

    def signed(self, a: int) -> int:
        """Representative of a prime-field element in [-(q-1)/2, (q-1)/2]."""
        a = int(a) % self.q
        return a - self.q if a > (self.q - 1) // 2 else a

    # random objects
    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.q, size=n, dtype=np.int64)

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)


def _out(x):
    x = np.asarray(x, dtype=np.int64)
    return int(x) if x.ndim == 0 else x


def _poly_mul_idx(F: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(a, b)
    da, db = F.digits(a), F.digits(b)
    m, p = F.m, F.p
    prod = np.zeros(a.shape + (2 * m - 1,), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            prod[..., i + j] += da[..., i] * db[..., j]
    prod %= p
    low = np.array(F.modulus[:m], dtype=np.int64)
    for deg in range(2 * m - 2, m - 1, -1):
        c = prod[..., deg].copy()
        prod[..., deg] = 0
        # x^m = -(low part of modulus)
        prod[..., deg - m: deg] = (prod[..., deg - m: deg] - c[..., None] * low) % p
    return F.from_digits(prod[..., :m])


def _build_tables(p: int, m: int, modulus: tuple[int, ...]):
    F = Field.__new__(Field)
    object.__setattr__(F, "p", p)
    object.__setattr__(F, "m", m)
    object.__setattr__(F, "modulus", modulus)
    object.__setattr__(F, "q", p**m)
    object.__setattr__(F, "_pw", np.array([p**i for i in range(m)], dtype=np.int64))
    q = p**m
    idx = np.arange(q, dtype=np.int64)
    A, B = np.meshgrid(idx, idx, indexing="ij")
    add = F.from_digits(F.digits(A) + F.digits(B))
    mul = _poly_mul_idx(F, A, B)
    neg = F.from_digits(-F.digits(idx))
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return add, mul, neg, inv


@lru_cache(maxsize=None)
def _prime_inverses(p: int) -> np.ndarray:
    t = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
    t.setflags(write=False)
    return t


@lru_cache(maxsize=None)
def _field_cached(p: int, m: int) -> Field:
    modulus = smallest_irreducible(p, m) if m > 1 else ()
    return Field(p, m, modulus)


def field_new(p: int, m: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    """Return F_{p^m} with a deterministic modulus."""
    if not is_prime(p):
        raise NotPrime(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError("degree must be positive")
    if p**m > max_order:
        raise FieldTooLarge(f"q = {p}^{m} exceeds the maximum order {max_order}")
    return _field_cached(p, m)


GF = field_new


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    for p in prime_factors(q)[:1]:
        m = 0
        r = q
        while r % p == 0:
            r //= p
            m += 1
        if r == 1:
            return field_new(p, m, max_order)
    raise NotPrime(f"{q} is not a prime power")


# -- linear algebra -----------------------------------------------------------

def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M[None, :]
    return M


def rref(F: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Columns are scanned left to right; within a column the first row (top to
    bottom) with a nonzero entry becomes the pivot.
    """
    R = as_matrix(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = F.mul(F.inv(int(R[r, c])), R[r])
        f = R[:, c].copy()
        f[r] = 0
        if np.any(f):
            R = F.sub(R, F.mul(f[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: Field, M) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace_basis(F: Field, H) -> list[np.ndarray]:
    """Basis of {x : Hx = 0}; one vector per free column of rref(H)."""
    H = np.asarray(H, dtype=np.int64)
    if H.ndim != 2:
        raise ValueError("H must be two-dimensional")
    cols = H.shape[1]
    if H.shape[0] == 0:
        return [np.eye(cols, dtype=np.int64)[i] for i in range(cols)]
    R, pivots = rref(F, H)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = F.neg(int(R[row, f]))
        basis.append(v)
    return basis


def span_dimension(F: Field, vectors: Sequence) -> int:
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vectors:
        return 0
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise LengthMismatch("vectors must share a length")
    return rank(F, np.stack(vectors))


def matvec(F: Field, H, x) -> np.ndarray:
    """H @ x over F_q; ``x`` may be a vector or a stack of column vectors."""
    H = np.asarray(H, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    if F.is_prime:
        return (H @ x) % F.p
    if x.ndim == 1:
        return _field_sum(F, F.mul(H, x[None, :]), axis=-1)
    return _field_sum(F, F.mul(H[:, :, None], x[None, :, :]), axis=-2)


def _field_sum(F: Field, terms: np.ndarray, axis: int) -> np.ndarray:
    """Sum of field elements along an axis (digit-wise addition mod p)."""
    if F.is_prime:
        return terms.sum(axis=axis) % F.p
    return F.from_digits(F.digits(terms).sum(axis=axis if axis >= 0 else axis - 1))


def field_sum(F: Field, terms, axis: int = -1):
    return _out(_field_sum(F, np.asarray(terms, dtype=np.int64), axis))


def span_elements(F: Field, vectors: Sequence) -> set[tuple[int, ...]]:
    """All q^b linear combinations; only for small oracles."""
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vectors:
        return set()
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=len(vectors)):
        acc = np.zeros_like(vectors[0])
        for c, v in zip(coeffs, vectors):
            acc = F.add(acc, F.mul(c, v))
        out.add(tuple(int(t) for t in acc))
    return out
