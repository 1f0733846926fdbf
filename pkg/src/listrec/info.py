"""Entropies, capacities, divergences and tail bounds used by the list-recovery bounds.

All functions are plain float formulas with ``0 * log 0 = 0``.  Logarithms are
base ``q`` unless the name says otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfDomain

TOL = 1e-9


def _xlogy(x: float, y: float, q: float) -> float:
    """x * log_q(y), with the convention 0 * log(anything) = 0."""
    if x == 0:
        return 0.0
    return x * math.log(y) / math.log(q)


@dataclass(frozen=True)
class ErasureParams:
    q: int
    ell: int
    alpha: float

    def __post_init__(self):
        if not 1 <= self.ell <= self.q:
            raise OutOfDomain(f"need 1 <= ell <= q, got ell={self.ell}, q={self.q}")
        if not 0 <= self.alpha < 1:
            raise OutOfDomain(f"alpha must lie in [0, 1), got {self.alpha}")


@dataclass(frozen=True)
class ErrorParams:
    q: int
    ell: int
    rho: float

    def __post_init__(self):
        if not 1 <= self.ell < self.q:
            raise OutOfDomain(f"need 1 <= ell < q, got ell={self.ell}, q={self.q}")
        hi = 1 - self.ell / self.q
        if not 0 < self.rho < hi:
            raise OutOfDomain(f"rho must lie in (0, 1-ell/q) = (0, {hi:.6g}), got {self.rho}")


def entropy_ql(q: int, ell: int, x: float) -> float:
    """(q, ell)-entropy: x log_q((q-ell)/x) + (1-x) log_q(ell/(1-x))."""
    hi = 1 - ell / q
    if not (-TOL <= x <= hi + TOL) or not 1 <= ell <= q:
        raise OutOfDomain(f"x must lie in [0, 1-ell/q] = [0, {hi:.6g}], got {x}")
    x = min(max(x, 0.0), hi)
    if x == hi:
        return 1.0
    out = 0.0
    if x > 0:
        out += _xlogy(x, (q - ell) / x, q)
    out += _xlogy(1 - x, ell / (1 - x), q)
    return out


def entropy_q(q: int, x: float) -> float:
    """Classical q-ary entropy, written out independently of entropy_ql."""
    if not 0 <= x <= 1:
        raise OutOfDomain(f"x must lie in [0, 1], got {x}")
    return _xlogy(x, q - 1, q) - _xlogy(x, x, q) - _xlogy(1 - x, 1 - x, q)


def binary_entropy(x: float) -> float:
    return -_xlogy(x, x, 2) - _xlogy(1 - x, 1 - x, 2)


def capacity_erasures(p: ErasureParams) -> float:
    return 1 - p.alpha - (1 - p.alpha) * math.log(p.ell) / math.log(p.q)


def capacity_errors(p: ErrorParams) -> float:
    return 1 - entropy_ql(p.q, p.ell, p.rho)


def capacity_errors_at(q: int, ell: int, rho: float) -> float:
    """1 - h_{q,ell}(rho) on the closed domain [0, 1-ell/q] (limits included)."""
    return 1 - entropy_ql(q, ell, rho)


def divergence(x: float, y: float) -> float:
    """Binary KL divergence in nats."""
    if not (0 <= x <= 1 and 0 < y < 1):
        raise OutOfDomain(f"divergence needs x in [0,1], y in (0,1); got {x}, {y}")
    out = 0.0
    if x > 0:
        out += x * math.log(x / y)
    if x < 1:
        out += (1 - x) * math.log((1 - x) / (1 - y))
    return out


def divergence_q(q: int, x: float, y: float) -> float:
    """D_q(x || y) = D(x || y) / ln q."""
    return divergence(x, y) / math.log(q)


def binomial_tail_bound(n: int, p: float, p_prime: float, q: int = 2) -> float:
    """Upper bound q^{-n D_q(p' || p)} on Pr[Bin(n, p) >= p' n]; independent of q."""
    if not 0 < p < p_prime < 1:
        raise OutOfDomain(f"need 0 < p < p' < 1, got p={p}, p'={p_prime}")
    return q ** (-n * divergence_q(q, p_prime, p))


def binomial_floor(n: int, p: float | None = None) -> float:
    """Lower bound 1/sqrt(2n) on Pr[Bin(n, p) = pn] when pn is integral."""
    if p is not None:
        pn = p * n
        if not 0 < p < 1 or abs(pn - round(pn)) > TOL:
            raise OutOfDomain(f"p*n must be an integer with 0 < p < 1, got p={p}, n={n}")
    return 1 / math.sqrt(2 * n)


def entropy_gap_lower_bound(p: ErrorParams | tuple, eta: float) -> float:
    """eta * log_q((q-ell)(1-rho)/(ell rho)), a lower bound on h(rho) - h(rho-eta).

    Accepts ``(q, ell, rho)`` as a tuple so the closed endpoint rho = 1-ell/q
    can be evaluated as well.
    """
    q, ell, rho = (p.q, p.ell, p.rho) if isinstance(p, ErrorParams) else p
    if not 0 <= eta <= rho:
        raise OutOfDomain(f"eta must lie in [0, rho], got {eta}")
    return eta * math.log((q - ell) * (1 - rho) / (ell * rho)) / math.log(q)


def entropy_gap(q: int, ell: int, rho: float, eta: float) -> float:
    return entropy_ql(q, ell, rho) - entropy_ql(q, ell, rho - eta)


def delta_error_mixing(p: ErrorParams | tuple) -> float:
    """Mixing exponent of a list-recovery ball of radius rho.

    log_q((q-ell)(1-rho)/(rho ell)) * rho^4 (1-ell/q-rho)^2 / (16 log2 q).
    """
    q, ell, rho = (p.q, p.ell, p.rho) if isinstance(p, ErrorParams) else p
    hi = 1 - ell / q
    if not 0 < rho < hi:
        raise OutOfDomain(f"rho must lie in (0, 1-ell/q) = (0, {hi:.6g}), got {rho}")
    lead = math.log((q - ell) * (1 - rho) / (rho * ell)) / math.log(q)
    return lead * rho**4 * (hi - rho) ** 2 / (16 * math.log2(q))


def omega_mixture(q: int, ell: int, w1: float, w2: float) -> float:
    """(1-w1)(1-w2) + w1 w2 ell/(q-ell): the per-coordinate hit bound."""
    return (1 - w1) * (1 - w2) + w1 * w2 * ell / (q - ell)


def eta_feasible(q: int, ell: int, rho: float, eta: float) -> bool:
    """1 - rho > (1-rho+eta)^2 + (rho-eta)^2 ell/(q-ell)."""
    return 1 - rho > omega_mixture(q, ell, rho - eta, rho - eta)


def default_eta(q: int, ell: int, rho: float) -> float:
    return rho * (1 - ell / q - rho) / 3
