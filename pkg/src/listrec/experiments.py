"""Seeded Monte Carlo list-size experiments for random linear codes.

Each code trial owns an RNG stream derived from (master seed, stream tag,
trial index), so results do not depend on how trials are scheduled across
worker processes.  Reports hold only exact integer counts and values derived
from them; wall-clock time is left out so reruns serialise byte-identically.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from . import info
from .balls import ListRecoveryBall
from .codes import (
    DEFAULT_COUNT_CAP, codewords, count_in_rectangle, count_in_subfield_coset_rectangle, sample_rlc,
)
from .errors import ConfigInfeasible, OutOfDomain, TooLarge
from .gf import field_new, is_prime
from .samplers import RectangleSampler, check_sampler, erasure_mask

CSV_COLUMNS = ("seed_index", "code_index", "sampler", "count", "realized_rate", "eps", "realized_eps")


@dataclass(frozen=True)
class ExperimentConfig:
    p: int
    m: int
    ell: int
    n: int
    eps: float
    mode: str = "erasures"
    alpha: float = 0.0
    rho: float | None = None
    sampler: str = "uniform-subsets"
    code_trials: int = 10
    rectangles_per_code: int = 100
    seed: int = 0
    cap: int = DEFAULT_COUNT_CAP
    adaptive_every: int = 8

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def capacity(self) -> float:
        if self.mode == "erasures":
            return info.capacity_erasures(info.ErasureParams(self.q, self.ell, self.alpha))
        return info.capacity_errors(info.ErrorParams(self.q, self.ell, self.rho))

    @property
    def design_rate(self) -> float:
        return self.capacity - self.eps

    @property
    def k(self) -> int:
        return math.floor(self.design_rate * self.n + 0.5)

    @property
    def realized_eps(self) -> float:
        return self.capacity - self.k / self.n

    def validate(self) -> "ExperimentConfig":
        if not is_prime(self.p) or self.m < 1:
            raise ConfigInfeasible(f"field order must be a prime power, got p={self.p}, m={self.m}")
        if self.n < 1 or self.code_trials < 0 or self.rectangles_per_code < 1:
            raise ConfigInfeasible("need n >= 1, code_trials >= 0 and rectangles_per_code >= 1")
        if self.mode not in ("erasures", "errors"):
            raise ConfigInfeasible(f"mode must be 'erasures' or 'errors', got {self.mode!r}")
        if self.mode == "errors" and self.rho is None:
            raise ConfigInfeasible("errors mode needs rho")
        try:
            cap = self.capacity
        except OutOfDomain as e:
            raise ConfigInfeasible(str(e)) from None
        if not 0 < self.eps < 1:
            raise ConfigInfeasible(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < cap - self.eps < 1:
            raise ConfigInfeasible(f"rate {cap - self.eps:.6g} = capacity - eps must lie in (0, 1)")
        if self.k < 1:
            raise ConfigInfeasible(f"rate {self.design_rate:.6g} rounds to k = 0 at n = {self.n}")
        check_sampler(field_new(self.p, self.m), self.ell, self.sampler)
        return self

    def with_(self, **kw) -> "ExperimentConfig":
        return ExperimentConfig(**{**asdict(self), **kw})


@dataclass
class TrialResult:
    code_index: int
    k: int
    counts: list[int]

    @property
    def max_count(self) -> int:
        return max(self.counts)


@dataclass
class ExperimentReport:
    config: dict
    stream: int
    per_code_max: list[int]
    realized_rates: list[float]
    max: int
    mean: float
    p50: float
    p90: float
    p99: float
    histogram: list[list[int]]
    design_rate: float
    capacity: float
    realized_eps: float
    predicted_log10_L: float
    regime: str
    rng: str

    @property
    def total_rectangles(self) -> int:
        return sum(c for _, c in self.histogram)

    def rows(self, seed_index: int = 0) -> list[dict]:
        return [
            {
                "seed_index": seed_index,
                "code_index": i,
                "sampler": self.config["sampler"],
                "count": mx,
                "realized_rate": rate,
                "eps": self.config["eps"],
                "realized_eps": self.capacity - rate,
            }
            for i, (mx, rate) in enumerate(zip(self.per_code_max, self.realized_rates))
        ]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trials"] = self.rows()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def predicted_list_bound(mode: str, params, eps: float, C: float) -> float:
    """Predicted list size L = C_{params} / eps for a chosen universal constant C.

    Erasures: C_{q,ell,alpha} = q^{C log2 q ((1-alpha) ell + 1)}.
    Errors:   C_{rho,ell,q}   = q^{ell (log2 q / (rho (1 - ell/q - rho)))^C}.
    Returns inf when the value overflows a double.
    """
    return _pow10(predicted_log10_bound(mode, params, eps, C))


def predicted_log10_bound(mode: str, params, eps: float, C: float) -> float:
    if not 0 < eps:
        raise OutOfDomain(f"eps must be positive, got {eps}")
    if mode == "erasures":
        q, ell, alpha = params.q, params.ell, params.alpha
        exponent = C * math.log2(q) * ((1 - alpha) * ell + 1)
    elif mode == "errors":
        q, ell, rho = params.q, params.ell, params.rho
        exponent = ell * (math.log2(q) / (rho * (1 - ell / q - rho))) ** C
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return exponent * math.log10(q) - math.log10(eps)


def _pow10(x: float) -> float:
    return math.inf if x > 308 else 10.0**x


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed % 2**64, stream, trial]))


def run_trial(cfg: ExperimentConfig, stream: int, trial: int) -> TrialResult:
    """One code and its rectangles (or balls); a pure function of its arguments."""
    rng = trial_rng(cfg.seed, stream, trial)
    F = field_new(cfg.p, cfg.m)
    code = sample_rlc(F, cfg.n, Fraction(cfg.k, cfg.n), rng)
    sampler = RectangleSampler(code, cfg.ell, cfg.sampler, cfg.adaptive_every)
    counts = []
    try:
        if cfg.mode == "erasures":
            for j in range(cfg.rectangles_per_code):
                free = erasure_mask(cfg.n, cfg.alpha, rng)
                if cfg.sampler == "subfield-cosets":
                    g = sampler.gammas(j, free, rng)
                    counts.append(count_in_subfield_coset_rectangle(code, g, sampler.s, free))
                else:
                    counts.append(count_in_rectangle(code, sampler.rectangle(j, free, rng), cfg.cap))
        else:
            words = codewords(code, cfg.cap)
            free = np.zeros(cfg.n, dtype=bool)
            for j in range(cfg.rectangles_per_code):
                ball = ListRecoveryBall.from_radius(sampler.rectangle(j, free, rng), cfg.rho)
                counts.append(int(ball.contains_many(words).sum()))
    except TooLarge as e:
        raise TooLarge(f"trial {trial} (stream {stream}): {e}") from None
    return TrialResult(trial, code.k, counts)


def _run_trials(cfg: ExperimentConfig, stream: int, threads: int) -> list[TrialResult]:
    idx = range(cfg.code_trials)
    if threads <= 1 or cfg.code_trials <= 1:
        return [run_trial(cfg, stream, t) for t in idx]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_trial, [cfg] * len(idx), [stream] * len(idx), idx))


def summarize(cfg: ExperimentConfig, stream: int, trials: list[TrialResult]) -> ExperimentReport:
    all_counts = np.array([c for t in trials for c in t.counts], dtype=np.int64)
    if len(all_counts) == 0:
        raise ConfigInfeasible("no trials to summarise")
    values, freq = np.unique(all_counts, return_counts=True)
    if cfg.mode == "erasures":
        params = info.ErasureParams(cfg.q, cfg.ell, cfg.alpha)
    else:
        params = info.ErrorParams(cfg.q, cfg.ell, cfg.rho)
    log10_L = predicted_log10_bound(cfg.mode, params, cfg.eps, 1.0)
    return ExperimentReport(
        config=asdict(cfg),
        stream=stream,
        per_code_max=[t.max_count for t in trials],
        realized_rates=[t.k / cfg.n for t in trials],
        max=int(all_counts.max()),
        mean=float(all_counts.mean()),
        p50=float(np.percentile(all_counts, 50)),
        p90=float(np.percentile(all_counts, 90)),
        p99=float(np.percentile(all_counts, 99)),
        histogram=[[int(v), int(f)] for v, f in zip(values, freq)],
        design_rate=cfg.k / cfg.n,
        capacity=cfg.capacity,
        realized_eps=cfg.realized_eps,
        predicted_log10_L=log10_L,
        regime="n >= L" if math.log10(cfg.n) >= log10_L else "pre-asymptotic (n < L)",
        rng=f"SeedSequence([{cfg.seed}, {stream}, trial])",
    )


def run_erasure_experiment(cfg: ExperimentConfig, threads: int = 1, stream: int = 0) -> ExperimentReport:
    cfg.validate()
    if cfg.mode != "erasures":
        raise ConfigInfeasible("run_erasure_experiment needs mode='erasures'")
    return summarize(cfg, stream, _run_trials(cfg, stream, threads))


def run_error_experiment(cfg: ExperimentConfig, threads: int = 1, stream: int = 0) -> ExperimentReport:
    cfg.validate()
    if cfg.mode != "errors":
        raise ConfigInfeasible("run_error_experiment needs mode='errors'")
    if cfg.q**cfg.k > cfg.cap:
        raise TooLarge(f"q^k = {cfg.q}^{cfg.k} exceeds the cap {cfg.cap}")
    return summarize(cfg, stream, _run_trials(cfg, stream, threads))


def run_experiment(cfg: ExperimentConfig, threads: int = 1, stream: int = 0) -> ExperimentReport:
    runner = run_erasure_experiment if cfg.mode == "erasures" else run_error_experiment
    return runner(cfg, threads, stream)


# -- separation ----------------------------------------------------------------------

@dataclass
class SeparationReport:
    extension_maxima: list[int]
    prime_maxima: list[int]
    dominance_fraction: float
    ties: int
    extension_p90: float
    prime_p90: float
    p90_ratio: float
    capacity_mismatch: float
    extension: ExperimentReport
    prime: ExperimentReport

    @property
    def pairs(self) -> int:
        return len(self.extension_maxima)

    def untied_fraction(self) -> float:
        """Share of untied pairs won by the extension side."""
        wins = sum(a > b for a, b in zip(self.extension_maxima, self.prime_maxima))
        untied = self.pairs - self.ties
        if untied == 0:
            raise ConfigInfeasible("every pair is tied")
        return wins / untied

    def to_dict(self) -> dict:
        d = asdict(self)
        d["extension"] = self.extension.to_dict()
        d["prime"] = self.prime.to_dict()
        d["trials"] = self.rows()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def rows(self) -> list[dict]:
        return self.extension.rows(seed_index=0) + self.prime.rows(seed_index=1)


def next_prime_at_least(x: int) -> int:
    while not is_prime(x):
        x += 1
    return x


def separation_configs(
    ell: int, n: int, eps: float, rectangles: int, seed: int, m: int = 2, **kw
) -> tuple[ExperimentConfig, ExperimentConfig]:
    """F_{ell^m} with subfield cosets against the nearest prime >= ell^m with the adversarial scan."""
    base = next((b for b in range(2, ell + 1) if ell % b == 0), None)
    s = round(math.log(ell, base)) if base else 0
    if base is None or base**s != ell:
        raise ConfigInfeasible(f"ell must be a prime power, got {ell}")
    ext = ExperimentConfig(p=base, m=s * m, ell=ell, n=n, eps=eps, sampler="subfield-cosets",
                           rectangles_per_code=rectangles, seed=seed, **kw)
    prime = ExperimentConfig(p=next_prime_at_least(ell**m), m=1, ell=ell, n=n, eps=eps,
                             sampler="adversarial-scan", rectangles_per_code=rectangles, seed=seed, **kw)
    return ext, prime


def run_separation(
    ext_cfg: ExperimentConfig, prime_cfg: ExperimentConfig, pairs: int, threads: int = 1,
    streams: tuple[int, int] = (0, 1),
) -> SeparationReport:
    """Pair code trial i of each side; both sides share the master seed, streams differ."""
    if pairs < 1:
        raise ConfigInfeasible("need at least one pair; the dominance fraction is undefined otherwise")
    if ext_cfg.n != prime_cfg.n or ext_cfg.eps != prime_cfg.eps:
        raise ConfigInfeasible("both sides need the same n and eps")
    ext_cfg = ext_cfg.with_(code_trials=pairs)
    prime_cfg = prime_cfg.with_(code_trials=pairs, seed=ext_cfg.seed)
    a = run_experiment(ext_cfg, threads, streams[0])
    b = run_experiment(prime_cfg, threads, streams[1])
    wins = sum(x > y for x, y in zip(a.per_code_max, b.per_code_max))
    ties = sum(x == y for x, y in zip(a.per_code_max, b.per_code_max))
    pa = float(np.percentile(a.per_code_max, 90))
    pb = float(np.percentile(b.per_code_max, 90))
    return SeparationReport(
        extension_maxima=a.per_code_max,
        prime_maxima=b.per_code_max,
        dominance_fraction=wins / pairs,
        ties=ties,
        extension_p90=pa,
        prime_p90=pb,
        p90_ratio=pa / pb if pb else math.inf,
        capacity_mismatch=a.capacity - b.capacity,
        extension=a,
        prime=b,
    )


# -- serialisation -------------------------------------------------------------------

def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in CSV_COLUMNS})
    return buf.getvalue()


def _fmt(v: Any) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def csv_to_rows(text: str) -> list[dict]:
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({
            "seed_index": int(r["seed_index"]),
            "code_index": int(r["code_index"]),
            "sampler": r["sampler"],
            "count": int(r["count"]),
            "realized_rate": float(r["realized_rate"]),
            "eps": float(r["eps"]),
            "realized_eps": float(r["realized_eps"]),
        })
    return out
