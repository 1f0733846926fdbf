"""Exact worst-case mixing of subsets of F_q and of product rectangles.

Every probability here is an exact :class:`fractions.Fraction`; exponents are
floats derived from them.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldMismatch, NotPrime, OutOfRange
from .gf import Field, is_prime


@dataclass(frozen=True)
class SubsetOfField:
    field: Field
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        if not elems:
            raise ValueError("subset must be nonempty")
        if elems[0] < 0 or elems[-1] >= self.field.q:
            raise ValueError(f"elements must lie in [0, {self.field.q})")
        object.__setattr__(self, "elements", elems)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def indicator(self) -> np.ndarray:
        v = np.zeros(self.field.q, dtype=np.int64)
        v[list(self.elements)] = 1
        return v

    def complement(self) -> "SubsetOfField":
        return SubsetOfField(self.field, tuple(x for x in self.field.elements() if x not in self._set))

    def shift(self, g: int) -> "SubsetOfField":
        return SubsetOfField(self.field, tuple(self.field.add(np.array(self.elements), g)))

    def scale(self, a: int) -> "SubsetOfField":
        return SubsetOfField(self.field, tuple(self.field.mul(np.array(self.elements), a)))


def subset(F: Field, elements: Iterable[int]) -> SubsetOfField:
    """Build a subset; negative integers are read as signed residues (prime fields)."""
    return SubsetOfField(F, tuple(int(e) % F.q if F.is_prime else int(e) for e in elements))


@dataclass(frozen=True)
class CenteredInterval:
    """[-alpha, alpha + shape] inside a prime field."""

    field: Field
    alpha: int
    shape: int

    def __post_init__(self):
        if not self.field.is_prime:
            raise NotPrime("centered intervals live in prime fields")
        if self.shape not in (-1, 0, 1) or not 0 <= self.alpha <= (self.field.q - 1) // 2:
            raise ValueError("need alpha in [0,(q-1)/2] and shape in {-1,0,1}")
        if self.size < 1 or self.size > self.field.q:
            raise ValueError("interval size out of range")

    @property
    def size(self) -> int:
        return 2 * self.alpha + 1 + self.shape

    def as_subset(self) -> SubsetOfField:
        return subset(self.field, range(-self.alpha, self.alpha + self.shape + 1))


def centered_intervals(F: Field, size: int) -> list[CenteredInterval]:
    """All centered intervals of a given size: one for odd sizes, two for even."""
    out = []
    for shape in (-1, 0, 1):
        twice = size - 1 - shape
        if twice % 2 == 0 and 0 <= twice // 2 <= (F.q - 1) // 2:
            out.append(CenteredInterval(F, twice // 2, shape))
    return out


@dataclass
class MixingCertificate:
    subsets: tuple[SubsetOfField, ...]
    probability: Fraction
    witnesses: list[tuple[int, int, int]] = dc_field(default_factory=list)

    @property
    def delta(self) -> float:
        q = self.subsets[0].field.q
        return -math.log(self.probability) / math.log(q)

    def recheck(self) -> bool:
        T = self.subsets[0]
        return all(combination_hit_probability(T, a, b, g) == self.probability for a, b, g in self.witnesses)


def _check_same_field(*sets: SubsetOfField) -> Field:
    F = sets[0].field
    if any(s.field != F for s in sets[1:]):
        raise FieldMismatch("subsets live in different fields")
    return F


def sum_counts(T1: SubsetOfField, T2: SubsetOfField) -> np.ndarray:
    """Histogram z -> #{(x1, x2) in T1 x T2 : x1 + x2 = z}."""
    F = _check_same_field(T1, T2)
    sums = F.add(np.array(T1.elements)[:, None], np.array(T2.elements)[None, :])
    return np.bincount(np.ravel(sums), minlength=F.q)


def sum_hit_probability(T1: SubsetOfField, T2: SubsetOfField, T3: SubsetOfField) -> Fraction:
    """Pr[X1 + X2 in T3] for X1 ~ T1, X2 ~ T2 independent."""
    _check_same_field(T1, T2, T3)
    hits = int(sum_counts(T1, T2)[list(T3.elements)].sum())
    return Fraction(hits, T1.size * T2.size)


def combination_hit_probability(T: SubsetOfField, a: int, b: int, g: int) -> Fraction:
    """Pr[a X + b X' in T + g] for X, X' ~ T independent."""
    return sum_hit_probability(T.scale(a), T.scale(b), T.shift(g))


def worst_case_mixing(T: SubsetOfField) -> MixingCertificate:
    """Maximise Pr[aX + bX' in T + g] over a, b nonzero and all shifts g.

    Every maximising triple is returned as a witness, in lexicographic order.
    """
    F = T.field
    elems = np.array(T.elements)
    # shift_hits[g, z] = 1 iff z in T + g
    shifted = F.add(np.arange(F.q)[:, None], elems[None, :])
    member = np.zeros((F.q, F.q), dtype=np.int64)
    np.put_along_axis(member, shifted, 1, axis=1)
    best, witnesses = -1, []
    for a in F.nonzero():
        aT = F.mul(elems, a)
        for b in F.nonzero():
            vals = F.add(aT[:, None], F.mul(elems, b)[None, :])
            hist = np.bincount(np.ravel(vals), minlength=F.q)
            hits = member @ hist
            top = int(hits.max())
            if top > best:
                best, witnesses = top, []
            if top == best:
                witnesses.extend((a, b, int(g)) for g in np.nonzero(hits == top)[0])
    return MixingCertificate((T,), Fraction(best, T.size**2), witnesses)


def lev_extremal_bound(q: int, ell: int) -> Fraction:
    """Largest possible Pr[X1 + X2 in T3] over ell-subsets of a prime field."""
    if not is_prime(q) or q < 3:
        raise NotPrime(f"q must be an odd prime, got {q}")
    if not 1 <= ell <= q - 1:
        raise OutOfRange(f"need 1 <= ell <= q-1, got ell={ell}")
    base = Fraction(3, 4)
    if ell % 2:
        extra = 1 + max(0, 3 * ell - 2 * q - 1) * (3 * ell - 2 * q + 1)
    else:
        extra = max(0, 3 * ell - 2 * q) ** 2
    return base + Fraction(extra, 4 * ell * ell)


def prime_mixing_delta(q: int, ell: int) -> float:
    """Guaranteed mixing exponent of any ell-subset of a prime field.

    For ell = 1 the second branch is negative, i.e. vacuous; singletons are
    0-mixing and nothing better can be said.
    """
    if not is_prime(q) or q < 3:
        raise NotPrime(f"q must be an odd prime, got {q}")
    if not 1 <= ell <= q - 1:
        raise OutOfRange(f"need 1 <= ell <= q-1, got ell={ell}")
    if 2 <= ell <= 2 * q / 3:
        return math.log(16 / 13) / math.log(q)
    return math.log(ell * ell / (q * q - 3 * ell * (q - ell))) / math.log(q)


def product_mixing_delta(deltas: Sequence[float]) -> float:
    """Mixing exponent of a product set: the mean of the coordinate exponents."""
    if len(deltas) == 0:
        raise ValueError("need at least one coordinate")
    return float(sum(deltas)) / len(deltas)


def rectangle_mixing_probability(rect, a: int, b: int, shift) -> Fraction:
    """Pr[aX + bX' in rect + shift] for X, X' uniform on the rectangle.

    Coordinates of a uniform rectangle sample are independent, so this is a
    product of per-coordinate probabilities.
    """
    F = rect.field
    if a % F.q == 0 or b % F.q == 0:
        raise ValueError("multipliers must be nonzero")
    shift = np.asarray(shift, dtype=np.int64)
    if len(shift) != len(rect.sides):
        raise ValueError("shift length must equal the rectangle length")
    out = Fraction(1)
    for T, z in zip(rect.sides, shift):
        out *= combination_hit_probability(T, a, b, int(z))
    return out


# -- exhaustive scans ---------------------------------------------------------

def all_subsets(F: Field, ell: int) -> list[SubsetOfField]:
    return [SubsetOfField(F, c) for c in itertools.combinations(range(F.q), ell)]


def _indicator_matrix(F: Field, ell: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    combos = list(itertools.combinations(range(F.q), ell))
    M = np.zeros((len(combos), F.q), dtype=np.int64)
    for i, c in enumerate(combos):
        M[i, list(c)] = 1
    return combos, M


def exhaustive_sum_hit_max(F: Field, ell: int) -> tuple[Fraction, tuple]:
    """Exact max of Pr[X1 + X2 in T3] over all triples of ell-subsets.

    Returns the maximum and one lexicographically first maximising triple.
    """
    combos, M = _indicator_matrix(F, ell)
    q = F.q
    # shifted[j, a, z] = M[j, z - a]
    diff = F.sub(np.arange(q)[None, :], np.arange(q)[:, None])  # diff[a, z] = z - a
    shifted = M[:, diff]
    best, arg = -1, None
    for i in range(len(combos)):
        hist = np.einsum("a,jaz->jz", M[i], shifted)  # pair (i, j) sum histogram
        hits = hist @ M.T  # (j, k)
        top = int(hits.max())
        if top > best:
            j, k = np.unravel_index(int(hits.argmax()), hits.shape)
            best, arg = top, (combos[i], combos[j], combos[k])
    return Fraction(best, ell * ell), arg


def random_subset_indicators(F: Field, ell: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, q) 0/1 rows, each the indicator of a uniform ell-subset."""
    order = np.argsort(rng.random((count, F.q)), axis=1)[:, :ell]
    M = np.zeros((count, F.q), dtype=np.int64)
    np.put_along_axis(M, order, 1, axis=1)
    return M


def sum_hit_counts(F: Field, M1: np.ndarray, M2: np.ndarray, M3: np.ndarray) -> np.ndarray:
    """Row-wise #{(x1, x2) in T1 x T2 : x1 + x2 in T3} for stacked indicators."""
    q = F.q
    diff = F.sub(np.arange(q)[None, :], np.arange(q)[:, None])  # diff[a, z] = z - a
    hist = np.einsum("ba,baz->bz", M1, M2[:, diff])
    return (hist * M3).sum(axis=1)


def sampled_sum_hit_counts(F: Field, ell: int, trials: int, rng: np.random.Generator, batch: int = 4096) -> np.ndarray:
    """Hit counts (out of ell^2) for ``trials`` independent random triples."""
    out = []
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        M1, M2, M3 = (random_subset_indicators(F, ell, b, rng) for _ in range(3))
        out.append(sum_hit_counts(F, M1, M2, M3))
        done += b
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def sampled_sum_hit_max(F: Field, ell: int, trials: int, rng: np.random.Generator) -> tuple[Fraction, int]:
    """Max of Pr[X1 + X2 in T3] over random triples, and how many trials were run."""
    hits = sampled_sum_hit_counts(F, ell, trials, rng)
    return Fraction(int(hits.max()), ell * ell), trials


def interval_sum_hit(F: Field, sizes: tuple[int, int, int], shapes: tuple[int, int, int]) -> Fraction | None:
    """Pr[I1 + I2 in I3] for centered intervals of given sizes and shapes (None if impossible)."""
    ivs = []
    for s, d in zip(sizes, shapes):
        match = [iv for iv in centered_intervals(F, s) if iv.shape == d]
        if not match:
            return None
        ivs.append(match[0].as_subset())
    return sum_hit_probability(*ivs)


def lev_interval_bound(F: Field, sizes: tuple[int, int, int], shapes: tuple[int, int]) -> Fraction:
    """Interval value for given summand shapes, maximised over the target's shapes."""
    vals = [interval_sum_hit(F, sizes, shapes + (d,)) for d in (-1, 0, 1)]
    return max(v for v in vals if v is not None)


def compatible_shapes(F: Field, s1: int, s2: int) -> list[tuple[int, int]]:
    """Shape pairs (d1, d2) of centered intervals with |d1 + d2| <= 1."""
    d1s = [iv.shape for iv in centered_intervals(F, s1)]
    d2s = [iv.shape for iv in centered_intervals(F, s2)]
    return [(a, b) for a in d1s for b in d2s if abs(a + b) <= 1]
