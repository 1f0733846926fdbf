"""Combinatorial rectangles, list-recovery balls and their mixing behaviour."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import info
from .errors import EtaInfeasible, FieldMismatch, OmegaOutOfRange, SizeMismatch, TooLarge
from .gf import Field
from .mixing import SubsetOfField, sum_counts

DEFAULT_ENUM_CAP = 2**22


@dataclass(frozen=True)
class Rectangle:
    field: Field
    sides: tuple[SubsetOfField, ...]

    def __post_init__(self):
        sides = tuple(self.sides)
        if not sides:
            raise ValueError("a rectangle needs at least one coordinate")
        if any(s.field != self.field for s in sides):
            raise FieldMismatch("all sides must live in the rectangle's field")
        object.__setattr__(self, "sides", sides)
        ind = np.zeros((len(sides), self.field.q), dtype=bool)
        for i, s in enumerate(sides):
            ind[i, list(s.elements)] = True
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def side_sizes(self) -> list[int]:
        return [s.size for s in self.sides]

    @property
    def size(self) -> int:
        return math.prod(self.side_sizes)

    def contains(self, x) -> bool:
        return rect_distance(x, self) == 0

    def escapes(self, X) -> np.ndarray:
        """Boolean array marking coordinates with x_i outside T_i (works on stacks)."""
        X = np.asarray(X, dtype=np.int64)
        return ~self.indicator[np.arange(self.n), X]

    def points(self) -> np.ndarray:
        return np.array(list(itertools.product(*[s.elements for s in self.sides])), dtype=np.int64).reshape(-1, self.n)


def rectangle(F: Field, sides: Sequence) -> Rectangle:
    return Rectangle(F, tuple(s if isinstance(s, SubsetOfField) else SubsetOfField(F, tuple(s)) for s in sides))


def random_rectangle(F: Field, n: int, ell: int, rng: np.random.Generator) -> Rectangle:
    return Rectangle(F, tuple(SubsetOfField(F, tuple(rng.choice(F.q, ell, replace=False))) for _ in range(n)))


def rect_distance(x, rect: Rectangle) -> int:
    """Number of coordinates i with x_i outside T_i."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (rect.n,):
        raise ValueError(f"vector length {x.shape} does not match n = {rect.n}")
    return int(rect.escapes(x).sum())


@dataclass(frozen=True)
class ListRecoveryBall:
    center: Rectangle
    radius_count: int

    def __post_init__(self):
        if not 0 <= self.radius_count <= self.center.n:
            raise ValueError(f"radius count must lie in [0, n], got {self.radius_count}")

    @classmethod
    def from_radius(cls, center: Rectangle, rho: float) -> "ListRecoveryBall":
        if not 0 <= rho <= 1:
            raise ValueError(f"rho must lie in [0, 1], got {rho}")
        return cls(center, math.floor(rho * center.n + 1e-9))

    @property
    def n(self) -> int:
        return self.center.n

    @property
    def rho(self) -> float:
        return self.radius_count / self.n

    def contains(self, x) -> bool:
        return rect_distance(x, self.center) <= self.radius_count

    def contains_many(self, X) -> np.ndarray:
        return self.center.escapes(X).sum(axis=-1) <= self.radius_count

    def members(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All members, by scanning F_q^n; only for small oracles."""
        F = self.center.field
        total = F.q**self.n
        if total > cap:
            raise TooLarge(f"scanning {total} vectors exceeds the cap {cap}")
        grid = np.array(list(itertools.product(range(F.q), repeat=self.n)), dtype=np.int64).reshape(-1, self.n)
        return grid[self.contains_many(grid)]


def ball_size_exact(ball: ListRecoveryBall) -> int:
    """|B| = sum over escape patterns of size <= r of prod(q - l_i) prod(l_i)."""
    q = ball.center.field.q
    r = ball.radius_count
    poly = [1]
    for ell in ball.center.side_sizes:
        nxt = [0] * (min(len(poly), r + 1) + 1)
        for j, c in enumerate(poly[: r + 1]):
            nxt[j] += c * ell
            nxt[j + 1] += c * (q - ell)
        poly = nxt
    return sum(poly[: r + 1])


def ball_size_uniform(q: int, ell: int, n: int, r: int) -> int:
    """Closed form sum_j C(n, j) (q-ell)^j ell^(n-j) for equal side sizes."""
    return sum(math.comb(n, j) * (q - ell) ** j * ell ** (n - j) for j in range(r + 1))


# -- convolutions -------------------------------------------------------------

def convolution(A: SubsetOfField, B: SubsetOfField, z: int) -> Fraction:
    """(1_A * 1_B)(z) = E_{y in F_q}[1_A(y) 1_B(z - y)]."""
    F = A.field
    if B.field != F:
        raise FieldMismatch("A and B live in different fields")
    ys = np.array(A.elements)
    partners = F.sub(z, ys)
    count = sum(1 for t in np.atleast_1d(partners) if int(t) in B)
    return Fraction(count, F.q)


def convolution_hit(A: SubsetOfField, B: SubsetOfField, z: int) -> Fraction:
    """Pr[X + Y = z] for X ~ A, Y ~ B, via q/(|A||B|) (1_A * 1_B)(z)."""
    return Fraction(A.field.q, A.size * B.size) * convolution(A, B, z)


def _hit(A: SubsetOfField, B: SubsetOfField, T: SubsetOfField) -> Fraction:
    return Fraction(int(sum_counts(A, B)[list(T.elements)].sum()), A.size * B.size)


def mixture_probabilities(A: SubsetOfField, B: SubsetOfField, T: SubsetOfField) -> tuple[Fraction, ...]:
    """Exact Pr[X1+X2 in T], Pr[X1+Y2 in T], Pr[Y1+X2 in T], Pr[Y1+Y2 in T]."""
    Ac, Bc = A.complement(), B.complement()
    return _hit(A, B, T), _hit(A, Bc, T), _hit(Ac, B, T), _hit(Ac, Bc, T)


def mixture_bound_rhs(q: int, ell: int, w1: float, w2: float) -> float:
    return info.omega_mixture(q, ell, w1, w2)


def mixture_bound_lhs(A: SubsetOfField, B: SubsetOfField, T: SubsetOfField, w1: float, w2: float) -> float:
    """Weighted four-term hit probability; bounded by :func:`mixture_bound_rhs`."""
    ell = A.size
    if B.size != ell or T.size != ell:
        raise SizeMismatch("A, B and T must have the same size")
    q = A.field.q
    hi = 1 - ell / q
    if not (0 < w1 < hi and 0 < w2 < hi):
        raise OmegaOutOfRange(f"omegas must lie in (0, 1-ell/q) = (0, {hi:.6g})")
    p_xx, p_xy, p_yx, p_yy = mixture_probabilities(A, B, T)
    return float(
        (1 - w1) * (1 - w2) * p_xx
        + w1 * (1 - w2) * p_xy
        + w2 * (1 - w1) * p_yx
        + w1 * w2 * p_yy
    )


# -- ball mixing ----------------------------------------------------------------

def ball_mixing_bound(p: info.ErrorParams, n: int, eta: float | None = None) -> float:
    """Two-term upper bound on Pr[aX + bX' in y + B] for X, X' uniform on a ball."""
    q, ell, rho = p.q, p.ell, p.rho
    if eta is None:
        eta = info.default_eta(q, ell, rho)
    if not 0 <= eta <= rho:
        raise EtaInfeasible(f"eta must lie in [0, rho], got {eta}")
    target = info.omega_mixture(q, ell, rho - eta, rho - eta)
    if not 1 - rho > target:
        raise EtaInfeasible(
            f"eta={eta} violates 1-rho > (1-rho+eta)^2 + (rho-eta)^2 ell/(q-ell)"
        )
    h_gap = info.entropy_ql(q, ell, rho - eta) - info.entropy_ql(q, ell, rho)
    first = 2 * math.sqrt(2 * n) * q ** (n * h_gap)
    second = 2 * n * q ** (-n * info.divergence_q(q, 1 - rho, target))
    return first + second


def coordinate_escape_counts(T: SubsetOfField, a: int, b: int, s: int) -> np.ndarray:
    """c[o1, o2, o3] = #{(x, x') : [x notin T], [x' notin T], [a x + b x' - s notin T]}."""
    F = T.field
    ind = T.indicator().astype(bool)
    xs = np.arange(F.q)
    comb = F.sub(F.add(F.mul(a, xs)[:, None], F.mul(b, xs)[None, :]), s)
    o1 = np.broadcast_to(~ind[:, None], comb.shape)
    o2 = np.broadcast_to(~ind[None, :], comb.shape)
    o3 = ~ind[comb]
    c = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(c, (o1.astype(int), o2.astype(int), o3.astype(int)), 1)
    return c


def ball_mixing_exact(
    ball: ListRecoveryBall, a: int, b: int, shift, cap: int = DEFAULT_ENUM_CAP
) -> Fraction:
    """Exact Pr[aX + bX' in shift + B] for X, X' uniform on the ball B.

    Dynamic program over coordinates whose state is the triple of escape
    counts of X, X' and aX + bX' - shift; states beyond the radius are dropped.
    """
    F = ball.center.field
    if a % F.q == 0 or b % F.q == 0:
        raise ValueError("multipliers must be nonzero")
    size = ball_size_exact(ball)
    if size > cap:
        raise TooLarge(f"ball of size {size} exceeds the cap {cap}")
    shift = np.asarray(shift, dtype=np.int64)
    if shift.shape != (ball.n,):
        raise ValueError("shift length must equal n")
    r = ball.radius_count
    state = np.zeros((r + 1,) * 3, dtype=object)
    state[0, 0, 0] = 1
    for T, s in zip(ball.center.sides, shift):
        c = coordinate_escape_counts(T, a, b, int(s))
        nxt = np.zeros_like(state)
        for o1, o2, o3 in itertools.product((0, 1), repeat=3):
            w = int(c[o1, o2, o3])
            if w:
                nxt[o1:, o2:, o3:] += w * state[: r + 1 - o1, : r + 1 - o2, : r + 1 - o3]
        state = nxt
    return Fraction(int(state.sum()), size * size)


def ball_mixing_enumerate(ball: ListRecoveryBall, a: int, b: int, shift, cap: int = 4 * 10**6) -> Fraction:
    """Same probability by enumerating all member pairs (oracle, small balls only)."""
    F = ball.center.field
    M = ball.members()
    if len(M) ** 2 > cap:
        raise TooLarge(f"{len(M)}^2 pairs exceed the cap {cap}")
    shift = np.asarray(shift, dtype=np.int64)
    bM = F.mul(b, M)
    hits = 0
    for x in M:
        comb = F.sub(F.add(F.mul(a, x)[None, :], bM), shift[None, :])
        hits += int(ball.contains_many(comb).sum())
    return Fraction(hits, len(M) ** 2)
