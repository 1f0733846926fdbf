"""Random linear codes given by a uniformly random parity-check matrix.

Counting codewords inside rectangles and balls is exact.  Three strategies
exist for rectangles: enumerate the code, enumerate the rectangle, or a
meet-in-the-middle split of the rectangle's coordinates that matches
partial syndromes.  Subfield-coset rectangles over extension fields are
counted without enumeration by solving the linearised system over F_p.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .balls import ListRecoveryBall, Rectangle
from .errors import BadDegree, NotExtensionField, TooLarge
from .gf import Field, field_new, matvec, nullspace_basis, rank, span_dimension
from .mixing import SubsetOfField

DEFAULT_COUNT_CAP = 2**26
_CHUNK = 2**16


@dataclass(frozen=True, eq=False)
class LinearCode:
    field: Field
    n: int
    H: np.ndarray
    generator: np.ndarray
    design_rate: Fraction

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def redundancy(self) -> int:
        return self.H.shape[0]

    def size(self) -> int:
        return self.field.q**self.k


def code_from_parity_check(F: Field, H, design_rate: Fraction | float | None = None) -> LinearCode:
    H = np.asarray(H, dtype=np.int64).reshape(-1, np.shape(H)[-1])
    n = H.shape[1]
    basis = nullspace_basis(F, H)
    G = np.stack(basis) if basis else np.zeros((0, n), dtype=np.int64)
    if design_rate is None:
        design_rate = Fraction(n - H.shape[0], n)
    H.setflags(write=False)
    G.setflags(write=False)
    return LinearCode(F, n, H, G, Fraction(design_rate).limit_denominator(10**6))


def redundancy_for(n: int, R: Fraction | float) -> int:
    """round((1 - R) n), rounding halves up."""
    return int(math.floor((1 - Fraction(R).limit_denominator(10**9)) * n + Fraction(1, 2)))


def sample_rlc(F: Field, n: int, R: Fraction | float, rng: np.random.Generator) -> LinearCode:
    """Kernel of a uniformly random ((1-R)n) x n matrix."""
    rows = redundancy_for(n, R)
    if not 0 <= rows <= n:
        raise ValueError(f"rate {R} gives {rows} parity checks for n = {n}")
    H = F.random_matrix(rng, rows, n)
    return code_from_parity_check(F, H, Fraction(R).limit_denominator(10**6))


def contains(code: LinearCode, x) -> bool:
    x = np.asarray(x, dtype=np.int64)
    if code.redundancy == 0:
        return True
    return not np.any(matvec(code.field, code.H, x))


def span_table(F: Field, vectors: np.ndarray) -> np.ndarray:
    """All q^b combinations of the given rows, as a (q^b, n) array."""
    vectors = np.asarray(vectors, dtype=np.int64)
    n = vectors.shape[1] if vectors.ndim == 2 else 0
    words = np.zeros((1, n), dtype=np.int64)
    scalars = np.arange(F.q)
    for g in vectors:
        multiples = F.mul(scalars[:, None], g[None, :])  # (q, n)
        words = F.add(words[:, None, :], multiples[None, :, :]).reshape(-1, n)
    return words


def iter_codewords(code: LinearCode, chunk: int = _CHUNK):
    """Yield blocks of codewords covering the whole code exactly once.

    The inner block is the span of the last few basis vectors; each outer
    combination adds a fixed offset, so one codeword costs O(n).
    """
    F, G = code.field, code.generator
    k = code.k
    inner_k = 0
    while inner_k < k and F.q ** (inner_k + 1) <= chunk:
        inner_k += 1
    inner = span_table(F, G[k - inner_k:])
    outer = G[: k - inner_k]
    for coeffs in itertools.product(range(F.q), repeat=k - inner_k):
        offset = np.zeros(code.n, dtype=np.int64)
        for c, g in zip(coeffs, outer):
            if c:
                offset = F.add(offset, F.mul(c, g))
        yield F.add(inner, offset[None, :])


def codewords(code: LinearCode, cap: int = DEFAULT_COUNT_CAP) -> np.ndarray:
    if code.size() > cap:
        raise TooLarge(f"code has {code.size()} codewords, cap is {cap}")
    return np.concatenate(list(iter_codewords(code)), axis=0)


# -- span probability -----------------------------------------------------------

@dataclass
class SpanCheck:
    trials: int
    hits: int
    predicted: float
    dimension: int
    redundancy: int

    @property
    def empirical(self) -> float:
        return self.hits / self.trials

    @property
    def sigma(self) -> float:
        p = self.predicted
        return math.sqrt(p * (1 - p) / self.trials)

    def within(self, k_sigma: float = 3.0) -> bool:
        # a predicted probability of 1 or 0 has zero variance; demand exact agreement then
        return abs(self.empirical - self.predicted) <= k_sigma * self.sigma + 1e-15


def span_probability_check(
    F: Field, n: int, R, vectors: Sequence, trials: int, rng: np.random.Generator
) -> SpanCheck:
    """Fraction of sampled codes containing every vector vs q^{-rows * dim span}."""
    rows = redundancy_for(n, R)
    V = np.asarray([np.asarray(v, dtype=np.int64) for v in vectors], dtype=np.int64).reshape(-1, n)
    dim = span_dimension(F, list(V)) if len(V) else 0
    hits = 0
    done = 0
    while done < trials:
        batch = min(4096, trials - done)
        H = rng.integers(0, F.q, size=(batch, rows, n), dtype=np.int64)
        if len(V) == 0 or rows == 0:
            hits += batch
        else:
            prod = F.mul(H[:, :, :, None], V.T[None, None, :, :])  # (batch, rows, n, b)
            if F.is_prime:
                syn = prod.sum(axis=2) % F.p
            else:
                syn = F.from_digits(F.digits(prod).sum(axis=2))
            hits += int(np.all(syn.reshape(batch, -1) == 0, axis=1).sum())
        done += batch
    return SpanCheck(trials, hits, float(F.q) ** (-rows * dim), dim, rows)


# -- counting in rectangles -------------------------------------------------------

def _syndrome_digits(code: LinearCode) -> np.ndarray:
    """contrib[i, v] = digits of v * H[:, i], flattened to length rows*m."""
    F, H = code.field, code.H
    vals = F.mul(H.T[:, None, :], np.arange(F.q)[None, :, None])  # (n, q, rows)
    return F.digits(vals).reshape(code.n, F.q, -1)


def _partial_syndromes(F: Field, contrib: np.ndarray, coords: Sequence[int], sides: Sequence[SubsetOfField]) -> np.ndarray:
    D = contrib.shape[2]
    acc = np.zeros((1, D), dtype=np.int64)
    for i in coords:
        vals = contrib[i, list(sides[i].elements)]  # (ell_i, D)
        acc = ((acc[:, None, :] + vals[None, :, :]) % F.p).reshape(-1, D)
    return acc


def _keys(F: Field, digits: np.ndarray) -> np.ndarray:
    D = digits.shape[1]
    if D == 0:
        return np.zeros(len(digits), dtype=np.int64)
    if D * math.log2(F.p) < 62:
        return digits @ (F.p ** np.arange(D, dtype=np.int64))
    packed = np.ascontiguousarray(digits.astype(np.int16))
    return packed.view(np.dtype((np.void, packed.dtype.itemsize * D))).ravel()


def _balanced_split(sizes: Sequence[int]) -> tuple[list[int], list[int]]:
    left, right, lw, rw = [], [], 0.0, 0.0
    for i in sorted(range(len(sizes)), key=lambda i: -sizes[i]):
        w = math.log(sizes[i])
        if lw <= rw:
            left.append(i)
            lw += w
        else:
            right.append(i)
            rw += w
    return sorted(left), sorted(right)


def rectangle_costs(code: LinearCode, rect: Rectangle) -> dict[str, int]:
    left, right = _balanced_split(rect.side_sizes)
    sizes = rect.side_sizes
    return {
        "codewords": code.size(),
        "rectangle": rect.size,
        "mitm": math.prod(sizes[i] for i in left) + math.prod(sizes[i] for i in right),
    }


def count_in_rectangle(
    code: LinearCode, rect: Rectangle, cap: int = DEFAULT_COUNT_CAP, strategy: str = "auto"
) -> int:
    """Exact |C ∩ (T_1 x ... x T_n)|."""
    if rect.n != code.n or rect.field != code.field:
        raise ValueError("rectangle and code disagree on field or length")
    costs = rectangle_costs(code, rect)
    if strategy == "auto":
        strategy = min(costs, key=costs.get)
    if costs[strategy] > cap:
        raise TooLarge(f"strategy {strategy!r} needs {costs[strategy]} steps, cap is {cap}")
    if strategy == "codewords":
        return sum(int((~rect.escapes(block).any(axis=1)).sum()) for block in iter_codewords(code))
    F = code.field
    if code.redundancy == 0:
        return rect.size
    contrib = _syndrome_digits(code)
    if strategy == "rectangle":
        total = 0
        lead = list(range(code.n))
        # enumerate in blocks: the first coordinates index blocks, the rest are vectorised
        split = code.n
        while split > 0 and math.prod(rect.side_sizes[split - 1:]) <= _CHUNK:
            split -= 1
        tail = _partial_syndromes(F, contrib, lead[split:], rect.sides)
        for head in itertools.product(*[rect.sides[i].elements for i in range(split)]):
            off = np.zeros(contrib.shape[2], dtype=np.int64)
            for i, v in enumerate(head):
                off = off + contrib[i, v]
            total += int(np.all((tail + off) % F.p == 0, axis=1).sum())
        return total
    if strategy == "mitm":
        left, right = _balanced_split(rect.side_sizes)
        SL = _partial_syndromes(F, contrib, left, rect.sides)
        SR = _partial_syndromes(F, contrib, right, rect.sides)
        kl = _keys(F, SL)
        kr = _keys(F, (-SR) % F.p)
        ul, cl = np.unique(kl, return_counts=True)
        ur, cr = np.unique(kr, return_counts=True)
        _, il, ir = np.intersect1d(ul, ur, assume_unique=True, return_indices=True)
        return int((cl[il].astype(object) * cr[ir].astype(object)).sum()) if len(il) else 0
    raise ValueError(f"unknown strategy {strategy!r}")


# -- subfield cosets ------------------------------------------------------------------

def subfield_basis(F: Field, s: int) -> list[int]:
    """An F_p-basis of the subfield F_{p^s}."""
    basis: list[int] = []
    prime = _prime_field(F)
    for a in F.subfield(s):
        if a and rank(prime, F.digits(basis + [a])) > len(basis):
            basis.append(a)
        if len(basis) == s:
            break
    return basis


def _prime_field(F: Field) -> Field:
    return field_new(F.p, 1)


def coset_rectangle(F: Field, gammas: Sequence[int], s: int) -> Rectangle:
    sub = np.array(F.subfield(s))
    return Rectangle(F, tuple(SubsetOfField(F, tuple(F.mul(int(g), sub))) for g in gammas))


def linearized_system(code: LinearCode, gammas: Sequence[int], s: int, free=None) -> np.ndarray:
    """F_p matrix whose kernel parametrises codewords x with x_i in gamma_i F_{p^s}.

    Column (j, t) holds the F_p digits of H[:, j] * gamma_j * u_t where u_t
    runs over an F_p-basis of the subfield.  Coordinates flagged in ``free``
    range over the whole field and get the columns H[:, j] * x^t instead.
    """
    F = code.field
    if F.m == 1:
        raise NotExtensionField(f"{F!r} has no proper subfield structure to linearise")
    if s < 1 or F.m % s:
        raise BadDegree(f"subfield degree {s} does not divide {F.m}")
    gammas = np.asarray(gammas, dtype=np.int64)
    free = np.zeros(code.n, dtype=bool) if free is None else np.asarray(free, dtype=bool)
    if gammas.shape != (code.n,) or np.any((gammas == 0) & ~free):
        raise ValueError("need n nonzero multipliers")
    u = np.array(subfield_basis(F, s))
    whole = F.p ** np.arange(F.m)
    blocks = []
    for j in range(code.n):
        scaled = whole if free[j] else F.mul(int(gammas[j]), u)
        cols = F.mul(code.H[:, j][:, None], scaled[None, :])  # (rows, b)
        blocks.append(F.digits(cols).transpose(0, 2, 1).reshape(code.redundancy * F.m, len(scaled)))
    return np.concatenate(blocks, axis=1)


def count_in_subfield_coset_rectangle(code: LinearCode, gammas: Sequence[int], s: int, free=None) -> int:
    """|{x in C : x_i in gamma_i F_{p^s}}| = p^(nullity of the linearised system)."""
    A = linearized_system(code, gammas, s, free)
    nullity = A.shape[1] - (rank(_prime_field(code.field), A) if A.shape[0] else 0)
    return code.field.p**nullity


# -- counting in balls ----------------------------------------------------------------

def count_in_ball(code: LinearCode, ball: ListRecoveryBall, cap: int = DEFAULT_COUNT_CAP, strategy: str = "auto") -> int:
    """Exact |C ∩ B_rho(T_1 x ... x T_n)|.

    ``codewords`` scans the code; ``ball`` sums rectangle counts over every
    escape pattern of size <= r (each pattern is itself a rectangle).
    """
    rect = ball.center
    if strategy == "auto":
        strategy = "codewords" if code.size() <= cap else "ball"
    if strategy == "codewords":
        if code.size() > cap:
            raise TooLarge(f"code has {code.size()} codewords, cap is {cap}")
        r = ball.radius_count
        return sum(int((rect.escapes(block).sum(axis=1) <= r).sum()) for block in iter_codewords(code))
    if strategy == "ball":
        total = 0
        comps = [s.complement() if s.size < code.field.q else None for s in rect.sides]
        for j in range(ball.radius_count + 1):
            for J in itertools.combinations(range(code.n), j):
                if any(comps[i] is None for i in J):
                    continue
                sides = list(rect.sides)
                for i in J:
                    sides[i] = comps[i]
                total += count_in_rectangle(code, Rectangle(code.field, tuple(sides)), cap)
        return total
    raise ValueError(f"unknown strategy {strategy!r}")
