"""c-increasing chains: verification, greedy extraction and shift search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .gf import Field

EXHAUSTIVE_SHIFT_LIMIT = 2**20


@dataclass(frozen=True)
class Chain:
    c: int
    vectors: tuple[tuple[int, ...], ...] = ()

    def __len__(self) -> int:
        return len(self.vectors)

    def is_valid(self) -> bool:
        return is_c_increasing(self.vectors, self.c)


@dataclass
class ChainCertificate:
    shift: tuple[int, ...]
    chain: Chain
    guaranteed_length: float
    greedy_length: int
    exact_length: int | None = None
    shifts_scanned: int = 0
    exhaustive: bool = True

    @property
    def required_length(self) -> int:
        return max(0, math.ceil(self.guaranteed_length - 1e-12))

    @property
    def meets_bound(self) -> bool:
        return len(self.chain) >= self.required_length


def is_c_increasing(vectors: Sequence, c: int) -> bool:
    """Every vector must add at least c coordinates outside the earlier supports."""
    covered: set[int] = set()
    for v in vectors:
        supp = {i for i, x in enumerate(v) if x != 0}
        if len(supp - covered) < c:
            return False
        covered |= supp
    return True


def chain_length_bound(q: int, L: int, dim: int, c: int) -> float:
    """(1/c) log_q(L/2) - (1 - 1/c) log_q((q-1) dim)."""
    return math.log(L / 2, q) / c - (1 - 1 / c) * math.log((q - 1) * dim, q)


def _lex_codes(V: np.ndarray, q: int) -> np.ndarray:
    """Integer codes whose order is lexicographic order of the rows."""
    dim = V.shape[-1]
    weights = q ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    return V @ weights


def greedy_chain(S: Sequence, c: int) -> Chain:
    """Repeatedly take the vector adding the most new support (lexicographic ties)."""
    V = np.asarray([tuple(v) for v in S], dtype=np.int64)
    if V.size == 0:
        return Chain(c)
    order = np.argsort(_lex_codes(V, int(V.max()) + 2), kind="stable")
    V = V[order]
    supp = V != 0
    covered = np.zeros(V.shape[1], dtype=bool)
    picked = []
    while True:
        gains = (supp & ~covered).sum(axis=1)
        i = int(gains.argmax())
        if gains[i] < c:
            break
        picked.append(tuple(int(x) for x in V[i]))
        covered |= supp[i]
    return Chain(c, tuple(picked))


def _greedy_lengths_all_shifts(F: Field, S: np.ndarray, shifts: np.ndarray, c: int) -> np.ndarray:
    """Greedy chain length for every shift at once (same rule as greedy_chain)."""
    shifted = F.add(S[None, :, :], shifts[:, None, :])  # (W, L, dim)
    supp = shifted != 0
    covered = np.zeros((len(shifts), S.shape[1]), dtype=bool)
    lengths = np.zeros(len(shifts), dtype=np.int64)
    alive = np.ones(len(shifts), dtype=bool)
    # max gain is order-independent among ties, so lengths need no tie-breaking here
    while alive.any():
        gains = (supp & ~covered[:, None, :]).sum(axis=2)
        best = gains.argmax(axis=1)
        ok = alive & (gains[np.arange(len(shifts)), best] >= c)
        covered[ok] |= supp[ok, best[ok]]
        lengths[ok] += 1
        alive = ok
    return lengths


def max_chain_length(S: Sequence, c: int) -> int:
    """Longest c-increasing chain drawn from S, by exhaustive branch and bound."""
    supports = list({frozenset(i for i, x in enumerate(v) if x != 0) for v in S})
    dim = len(S[0]) if len(S) else 0
    best = 0

    def dfs(covered: frozenset, length: int):
        nonlocal best
        best = max(best, length)
        if length + (dim - len(covered)) // c <= best:
            return
        for s in supports:
            if len(s - covered) >= c:
                dfs(covered | s, length + 1)

    dfs(frozenset(), 0)
    return best


def _exact_chain(S: np.ndarray, c: int) -> Chain:
    supports = [frozenset(np.nonzero(v)[0].tolist()) for v in S]
    dim = S.shape[1]
    best: list[int] = []

    def dfs(covered: frozenset, path: list[int]):
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        if len(path) + (dim - len(covered)) // c <= len(best):
            return
        for i, s in enumerate(supports):
            if len(s - covered) >= c:
                path.append(i)
                dfs(covered | s, path)
                path.pop()

    dfs(frozenset(), [])
    return Chain(c, tuple(tuple(int(x) for x in S[i]) for i in best))


def find_shift_chain(
    F: Field,
    S: Sequence,
    c: int,
    budget: int = 4096,
    rng: np.random.Generator | None = None,
    exact_dim_limit: int = 4,
) -> ChainCertificate:
    """Search shifts w for a long greedy chain in S + w.

    Shifts are scanned exhaustively when q^dim <= 2^20, otherwise ``budget``
    random shifts are tried.  The winner maximises (length, -lexicographic w).
    If greedy falls short of the guaranteed length and dim is small, an exact
    maximum-chain search over all scanned shifts is run as well.
    """
    S_arr = np.unique(np.asarray([tuple(v) for v in S], dtype=np.int64), axis=0)
    L, dim = S_arr.shape
    bound = chain_length_bound(F.q, L, dim, c)
    exhaustive = F.q**dim <= EXHAUSTIVE_SHIFT_LIMIT
    if exhaustive:
        shifts = np.array(list(itertools.product(range(F.q), repeat=dim)), dtype=np.int64)
    else:
        rng = rng or np.random.default_rng(0)
        shifts = rng.integers(0, F.q, size=(budget, dim))
        shifts = shifts[np.argsort(_lex_codes(shifts, F.q), kind="stable")]
    lengths = np.concatenate([
        _greedy_lengths_all_shifts(F, S_arr, shifts[i: i + 4096], c) for i in range(0, len(shifts), 4096)
    ])
    w = shifts[int(lengths.argmax())]  # argmax returns the lexicographically first shift
    chain = greedy_chain(F.add(S_arr, w[None, :]), c)
    cert = ChainCertificate(
        tuple(int(x) for x in w), chain, bound, len(chain), None, len(shifts), exhaustive
    )
    if not cert.meets_bound and dim <= exact_dim_limit:
        best_len, best_w, best_chain = -1, None, None
        for w2 in shifts:
            ch = _exact_chain(F.add(S_arr, w2[None, :]), c)
            if len(ch) > best_len:
                best_len, best_w, best_chain = len(ch), w2, ch
        cert.exact_length = best_len
        if best_len > len(cert.chain):
            cert.shift, cert.chain = tuple(int(x) for x in best_w), best_chain
    if not exhaustive and not cert.meets_bound:
        raise BudgetExceeded(
            f"{len(shifts)} sampled shifts gave length {len(cert.chain)} < {cert.required_length}"
        )
    return cert
