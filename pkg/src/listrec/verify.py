"""Self-contained verification suites: exact oracles against closed-form claims.

Each suite returns a :class:`SuiteResult`; the CLI ``verify`` command and the
acceptance tests both run them.  Parameters default to the full battery.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import info
from .balls import (
    ListRecoveryBall, Rectangle, ball_mixing_enumerate, ball_mixing_exact, ball_size_exact,
    ball_size_uniform, random_rectangle,
)
from .chains import find_shift_chain
from .codes import span_probability_check
from .gf import GF, field_new, span_dimension
from .mixing import (
    SubsetOfField, _indicator_matrix, exhaustive_sum_hit_max, lev_extremal_bound,
    sampled_sum_hit_counts, worst_case_mixing,
)


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.checks > 0 and not self.failures

    def check(self, ok: bool, what) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": [str(f) for f in self.failures[:20]],
            "failure_count": len(self.failures),
            "details": self.details,
        }


def lev_tightness(primes=(3, 5, 7)) -> SuiteResult:
    """Exhaustive max of Pr[X1+X2 in T3] equals the extremal formula for every ell."""
    res = SuiteResult("lev-tightness")
    for q in primes:
        F = GF(q)
        for ell in range(1, q):
            best, arg = exhaustive_sum_hit_max(F, ell)
            want = lev_extremal_bound(q, ell)
            res.details[f"q={q},ell={ell}"] = f"{best} (formula {want})"
            res.check(best == want, (q, ell, best, want, arg))
    return res


def lev_sampled(primes=(11, 13), trials: int = 10**4, seed: int = 0) -> SuiteResult:
    """Random triples never beat the extremal formula (one-sided)."""
    res = SuiteResult("lev-sampled")
    rng = np.random.default_rng(seed)
    for q in primes:
        F = GF(q)
        for ell in range(1, q):
            hits = sampled_sum_hit_counts(F, ell, trials, rng)
            bound = lev_extremal_bound(q, ell)
            worst = Fraction(int(hits.max()), ell * ell)
            res.details[f"q={q},ell={ell}"] = f"max {worst} <= {bound}"
            violations = int((hits * bound.denominator > bound.numerator * ell * ell).sum())
            res.check(violations == 0, (q, ell, violations))
    return res


def subfield_nonmixing(cases=((2, 2, 1), (3, 2, 1))) -> SuiteResult:
    """A proper subfield T = F_{p^s} of F_{p^m} has T + T = T, so the hit probability is 1."""
    res = SuiteResult("subfield-nonmixing")
    for p, m, s in cases:
        F = GF(p, m)
        T = SubsetOfField(F, tuple(F.subfield(s)))
        cert = worst_case_mixing(T)
        res.details[f"F_{p**s} in F_{F.q}"] = str(cert.probability)
        res.check(cert.probability == 1 and (1, 1, 0) in cert.witnesses, (p, m, s))
    return res


def ball_sandwich(qs=(3, 4, 5), ells=(1, 2), ns=range(4, 13), rel_tol: float = 1e-9) -> SuiteResult:
    """q^{n h(rho)} / sqrt(2n) <= |B| <= q^{n h(rho)} for every admissible radius."""
    res = SuiteResult("ball-sandwich")
    for q, ell, n in itertools.product(qs, ells, ns):
        F = GF(q) if q in (3, 5) else field_new(2, 2)
        rect = Rectangle(F, tuple(SubsetOfField(F, tuple(range(ell))) for _ in range(n)))
        for r in range(1, n):
            rho = r / n
            if not rho < 1 - ell / q:
                continue
            size = ball_size_exact(ListRecoveryBall(rect, r))
            if size != ball_size_uniform(q, ell, n, r):
                res.check(False, ("closed form", q, ell, n, r))
                continue
            log_hi = n * info.entropy_ql(q, ell, rho) * math.log(q)
            log_size = math.log(size)
            ok_hi = log_size <= log_hi + rel_tol
            ok_lo = log_size >= log_hi - 0.5 * math.log(2 * n) - rel_tol
            res.check(ok_hi and ok_lo, (q, ell, n, r, size))
    return res


def _pair_hit_counts(F, MA, MB, MT) -> np.ndarray:
    """hits[a, b, t] = #{(x, y) in A_a x B_b : x + y in T_t}."""
    q = F.q
    diff = F.sub(np.arange(q)[None, :], np.arange(q)[:, None])
    hist = np.einsum("ax,bxz->abz", MA, MB[:, diff])
    return hist @ MT.T


def mixture_inequality(cases=((4, 2), (5, 2), (7, 2), (7, 3)), step: float = 0.05, tol: float = 1e-12) -> SuiteResult:
    """Weighted four-term hit probability never exceeds (1-w1)(1-w2) + w1 w2 ell/(q-ell)."""
    res = SuiteResult("mixture-inequality")
    for q, ell in cases:
        F = GF(q) if q != 4 else field_new(2, 2)
        _, M = _indicator_matrix(F, ell)
        Mc = 1 - M
        nx, ny = ell, q - ell
        p_xx = _pair_hit_counts(F, M, M, M) / (nx * nx)
        p_xy = _pair_hit_counts(F, M, Mc, M) / (nx * ny)
        p_yx = _pair_hit_counts(F, Mc, M, M) / (ny * nx)
        p_yy = _pair_hit_counts(F, Mc, Mc, M) / (ny * ny)
        hi = 1 - ell / q
        grid = [w for w in np.arange(1, 200) * step if w < hi - 1e-12]
        worst = -math.inf
        for w1, w2 in itertools.product(grid, grid):
            lhs = (1 - w1) * (1 - w2) * p_xx + w1 * (1 - w2) * p_xy + w2 * (1 - w1) * p_yx + w1 * w2 * p_yy
            gap = float(lhs.max()) - info.omega_mixture(q, ell, w1, w2)
            worst = max(worst, gap)
            res.check(gap <= tol, (q, ell, round(w1, 4), round(w2, 4), gap))
        res.details[f"q={q},ell={ell}"] = f"max lhs - rhs = {worst:.3e} over {len(grid) ** 2} weight pairs"
    return res


def omega_inequalities(samples: int = 10**4, seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    """1-rho > (1-rho)^2 + rho^2 ell/(q-ell), and g(rho-eta, rho-eta) > g(w1, w2) off the corner."""
    res = SuiteResult("omega-inequalities")
    rng = np.random.default_rng(seed)
    qs = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32]
    for _ in range(samples):
        q = int(rng.choice(qs))
        ell = int(rng.integers(1, q))
        hi = 1 - ell / q
        rho = float(rng.uniform(0, hi))
        if not 0 < rho < hi:
            continue
        eta = float(rng.uniform(0, rho))
        w1, w2 = rng.uniform(rho - eta, rho, size=2)
        first = (1 - rho) - info.omega_mixture(q, ell, rho, rho)
        second = info.omega_mixture(q, ell, rho - eta, rho - eta) - info.omega_mixture(q, ell, w1, w2)
        corner = w1 == w2 == rho - eta
        res.check(first > 0 and (second > 0 or corner), (q, ell, rho, eta, w1, w2, first, second))
    # both ends of the radius range give equality in the first inequality
    for q in qs:
        for ell in range(1, q):
            for rho in (0.0, 1 - ell / q):
                gap = (1 - rho) - info.omega_mixture(q, ell, rho, rho)
                res.check(abs(gap) <= tol, ("boundary", q, ell, rho, gap))
    return res


def ball_mixing_dp(instances: int = 50, seed: int = 0, max_n: int = 8, pair_cap: int = 4 * 10**6) -> SuiteResult:
    """Dynamic program equals brute-force pair enumeration on random small balls."""
    res = SuiteResult("ball-mixing-dp")
    rng = np.random.default_rng(seed)
    fields = {3: GF(3), 4: field_new(2, 2)}
    done = 0
    while done < instances:
        q = int(rng.choice([3, 4]))
        ell = int(rng.choice([1, 2]))
        n = int(rng.integers(2, max_n + 1))
        F = fields[q]
        r = int(rng.integers(0, n + 1))
        rect = random_rectangle(F, n, ell, rng)
        ball = ListRecoveryBall(rect, r)
        if ball_size_exact(ball) ** 2 > pair_cap:
            continue
        a, b = (int(x) for x in rng.integers(1, q, size=2))
        shift = rng.integers(0, q, size=n)
        dp = ball_mixing_exact(ball, a, b, shift)
        brute = ball_mixing_enumerate(ball, a, b, shift, cap=pair_cap)
        res.check(dp == brute, (q, ell, n, r, a, b, tuple(shift), dp, brute))
        done += 1
    return res


def chain_bound(cases=((2, 8), (3, 5), (4, 4)), per_case: int = 1000, c: int = 2, max_size: int = 32, seed: int = 0) -> SuiteResult:
    """find_shift_chain reaches the guaranteed c-increasing chain length."""
    res = SuiteResult("chain-bound")
    rng = np.random.default_rng(seed)
    escalated = 0
    for q, dim in cases:
        F = GF(q) if q != 4 else field_new(2, 2)
        for _ in range(per_case):
            L = int(rng.integers(1, max_size + 1))
            S = rng.integers(0, q, size=(L, dim))
            cert = find_shift_chain(F, S, c, rng=rng)
            escalated += cert.exact_length is not None
            res.check(cert.meets_bound and cert.chain.is_valid(), (q, dim, S.tolist()))
    res.details["exact-search escalations"] = escalated
    return res


def _battery(F, n: int, rng) -> list[tuple[int, list]]:
    """Vector sets with span dimension 0, 1 and 2."""
    while True:
        v, w = F.random_vector(rng, n), F.random_vector(rng, n)
        if span_dimension(F, [v, w]) == 2:
            break
    two_v = F.mul(F.p - 1 if F.q > 2 else 1, v)
    return [
        (0, [np.zeros(n, dtype=np.int64)]),
        (1, [v, two_v]),
        (2, [v, w, F.add(v, w)]),
    ]


def span_probability(cases=((2, 8, 0.5), (4, 8, 0.5), (5, 8, 0.4)), trials: int = 10**4, seed: int = 0, k_sigma: float = 3.0) -> SuiteResult:
    """Containment frequency of a vector set in a random code vs q^{-rows * dim}."""
    res = SuiteResult("span-probability")
    rng = np.random.default_rng(seed)
    for p_or_q, n, R in cases:
        F = field_new(2, 2) if p_or_q == 4 else GF(p_or_q)
        for dim, vecs in _battery(F, n, rng):
            chk = span_probability_check(F, n, R, vecs, trials, rng)
            res.details[f"q={F.q},n={n},R={R},dim={dim}"] = (
                f"{chk.empirical:.5f} vs {chk.predicted:.5f} (3 sigma {k_sigma * chk.sigma:.5f})"
            )
            res.check(chk.dimension == dim and chk.within(k_sigma), (F.q, n, R, dim, chk.empirical, chk.predicted))
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "lev-tightness": lev_tightness,
    "lev-tightness-q3": lambda: lev_tightness((3,)),
    "lev-tightness-q5": lambda: lev_tightness((5,)),
    "lev-tightness-q7": lambda: lev_tightness((7,)),
    "lev-sampled": lev_sampled,
    "subfield-nonmixing": subfield_nonmixing,
    "ball-sandwich": ball_sandwich,
    "mixture-inequality": mixture_inequality,
    "omega-inequalities": omega_inequalities,
    "ball-mixing-dp": ball_mixing_dp,
    "chain-bound": chain_bound,
    "span-probability": span_probability,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    result = SUITES[name]()
    result.name = name
    return result
