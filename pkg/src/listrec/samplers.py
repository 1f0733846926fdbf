"""Rectangle samplers for the list-size experiments.

Random samplers draw each side independently.  The pinned searches are
adaptive: they pick a low-weight codeword, pin the sides on its support so
that it lies inside the rectangle, restrict to the codewords that stay
compatible, and repeat until nothing new can be added.  Over an extension
field the compatible set is an F_p-subspace and is tracked by its basis;
over a prime field it is not closed under addition, so a pool of codewords
is enumerated and filtered instead.
"""
from __future__ import annotations

import math

import numpy as np

from .balls import Rectangle
from .codes import LinearCode, span_table, subfield_basis
from .errors import ConfigInfeasible
from .gf import Field, field_new, nullspace_basis, rank, rref
from .mixing import SubsetOfField, centered_intervals

SAMPLERS = ("uniform-subsets", "centered-intervals", "subfield-cosets", "adversarial-scan")


def subfield_degree_for(F: Field, ell: int) -> int:
    """s with p^s = ell and s a proper divisor of m, else ConfigInfeasible."""
    if F.m == 1:
        raise ConfigInfeasible("subfield-cosets needs an extension field (m > 1)")
    s = round(math.log(ell, F.p))
    if F.p**s != ell or F.m % s or s >= F.m:
        raise ConfigInfeasible(f"ell={ell} is not the order of a proper subfield of F_{F.q}")
    return s


def check_sampler(F: Field, ell: int, kind: str) -> None:
    if kind not in SAMPLERS:
        raise ConfigInfeasible(f"unknown sampler {kind!r}; choose from {', '.join(SAMPLERS)}")
    if kind == "subfield-cosets":
        subfield_degree_for(F, ell)
    if kind in ("centered-intervals", "adversarial-scan") and F.m != 1:
        raise ConfigInfeasible(f"{kind} needs a prime field")


# -- random sides ---------------------------------------------------------------

def uniform_side(F: Field, ell: int, rng) -> SubsetOfField:
    return SubsetOfField(F, tuple(rng.choice(F.q, ell, replace=False)))


def interval_side(F: Field, ell: int, rng, shifted: bool = True) -> SubsetOfField:
    """gamma * I + shift for a centered interval I of size ell."""
    ivs = centered_intervals(F, ell)
    iv = ivs[int(rng.integers(len(ivs)))].as_subset()
    g = int(rng.integers(1, F.q))
    z = int(rng.integers(F.q)) if shifted else 0
    return iv.scale(g).shift(z)


def coset_side(F: Field, sub: np.ndarray, gamma: int) -> SubsetOfField:
    return SubsetOfField(F, tuple(F.mul(int(gamma), sub)))


def full_side(F: Field) -> SubsetOfField:
    return SubsetOfField(F, tuple(range(F.q)))


# -- F_p-linear helpers ------------------------------------------------------------

def fp_span(F: Field, rows: np.ndarray) -> np.ndarray:
    """All F_p-combinations of the rows."""
    n = rows.shape[1]
    words = np.zeros((1, n), dtype=np.int64)
    scalars = np.arange(F.p)
    for g in rows:
        words = F.add(words[:, None, :], F.mul(scalars[:, None], g[None, :])[None]).reshape(-1, n)
    return words


def fp_basis_of_code(code: LinearCode) -> np.ndarray:
    """F_p-basis {g * x^t} of the code, with g over the F_q-basis."""
    F = code.field
    return np.concatenate([F.mul(code.generator, F.p**t) for t in range(F.m)])


def quotient_projection(F: Field, s: int) -> np.ndarray:
    """(m-s) x m F_p matrix whose kernel on digit vectors is the subfield F_{p^s}."""
    prime = field_new(F.p)
    basis = list(subfield_basis(F, s))
    for a in range(1, F.q):
        if len(basis) == F.m:
            break
        if rank(prime, F.digits(np.array(basis + [a]))) > len(basis):
            basis.append(a)
    M = F.digits(np.array(basis)).T
    R, _ = rref(prime, np.hstack([M, np.eye(F.m, dtype=np.int64)]))
    return R[:, F.m:][s:]


def restrict(F: Field, rows: np.ndarray, conditions: np.ndarray) -> np.ndarray:
    """Basis of the combinations sum c_j rows_j with c^T conditions = 0."""
    if conditions.shape[1] == 0 or len(rows) == 0:
        return rows
    lam = nullspace_basis(field_new(F.p), conditions.T % F.p)
    if not lam:
        return rows[:0]
    L = np.array(lam)
    scaled = F.mul(L[:, :, None], rows[None, :, :])  # (r, d, n)
    if F.is_prime:
        return scaled.sum(axis=1) % F.p
    return F.from_digits(F.digits(scaled).sum(axis=1) % F.p)


def _pin_conditions(F: Field, rows: np.ndarray, coords: np.ndarray, gam: np.ndarray, P: np.ndarray) -> np.ndarray:
    invg = np.asarray(F.inv(gam[coords]), dtype=np.int64)
    dig = F.digits(F.mul(rows[:, coords], invg[None, :]))  # (d, c, m)
    return (np.einsum("dcm,km->dck", dig, P) % F.p).reshape(len(rows), -1)


def _vanish_conditions(F: Field, rows: np.ndarray, coords: np.ndarray) -> np.ndarray:
    return F.digits(rows[:, coords]).reshape(len(rows), -1)


# -- adaptive searches ---------------------------------------------------------------

def pinned_coset_search(
    code: LinearCode, s: int, rng, free: np.ndarray | None = None, enum_dim: int = 12, candidates: int = 16
) -> np.ndarray:
    """Multipliers gamma for a subfield-coset rectangle holding many codewords.

    ``free`` marks coordinates whose side is the whole field; they are never
    pinned.  Returns gamma with random values where nothing was pinned.
    """
    F, n = code.field, code.n
    P = quotient_projection(F, s)
    free = np.zeros(n, dtype=bool) if free is None else np.asarray(free, dtype=bool)
    W = fp_basis_of_code(code)
    gam = np.zeros(n, dtype=np.int64)
    while len(W):
        open_ = (gam == 0) & ~free
        live = (W[:, open_] != 0).any(axis=1)
        if not live.any():
            break
        sub = W
        if len(sub) > enum_dim:
            # enumerate a subspace that vanishes on a few random open coordinates
            cand = np.nonzero(open_)[0]
            rng.shuffle(cand)
            used = 0
            while len(sub) > enum_dim and used < len(cand):
                step = max(1, math.ceil((len(sub) - enum_dim) / F.m))
                sub = restrict(F, sub, _vanish_conditions(F, sub, cand[used: used + step]))
                used += step
        E = fp_span(F, sub)
        weight = ((E != 0) & open_[None, :]).sum(axis=1)
        ok = np.nonzero(weight)[0]
        if len(ok):
            # score the lightest candidates by the dimension that survives pinning them
            ok = ok[np.lexsort((rng.random(len(ok)), weight[ok]))][:candidates]
            best_dim, best = -1, None
            for x in E[ok]:
                newc = np.nonzero(open_ & (x != 0))[0]
                trial = gam.copy()
                trial[newc] = x[newc]
                W2 = restrict(F, W, _pin_conditions(F, W, newc, trial, P))
                if len(W2) > best_dim:
                    best_dim, best = len(W2), (trial, W2)
            gam, W = best
        else:
            x = W[int(np.nonzero(live)[0][0])]
            newc = np.nonzero(open_ & (x != 0))[0]
            gam[newc] = x[newc]
            W = restrict(F, W, _pin_conditions(F, W, newc, gam, P))
    unset = gam == 0
    gam[unset] = rng.integers(1, F.q, int(unset.sum()))
    return gam


def pinned_interval_search(
    code: LinearCode, ell: int, rng, free: np.ndarray | None = None,
    pool_cap: int = 4096, candidates: int = 16,
) -> list[SubsetOfField]:
    """Sides x_i * I (I a centered interval containing 0 and 1) grown around codewords.

    Works from a pool of codewords vanishing on a random coordinate set so
    that the pool has at most ``pool_cap`` elements.
    """
    F, n, k = code.field, code.n, code.k
    free = np.zeros(n, dtype=bool) if free is None else np.asarray(free, dtype=bool)
    base = next(iv for iv in centered_intervals(F, ell) if iv.alpha + iv.shape >= 1).as_subset()
    in_base = base.indicator().astype(bool)
    inv = np.array([0] + [int(F.inv(a)) for a in range(1, F.q)])
    z_min = 0
    while F.q ** (k - z_min) > pool_cap:
        z_min += 1
    z = int(rng.integers(z_min, max(z_min + 1, min(z_min + 3, k))))
    Z = rng.choice(n, z, replace=False)
    E = np.zeros((z, n), dtype=np.int64)
    E[np.arange(z), Z] = 1
    B = nullspace_basis(F, np.vstack([code.H, E])) if z else list(code.generator)
    B = B[: max(0, int(math.log(pool_cap, F.q) + 1e-9))]
    W = span_table(F, np.array(B, dtype=np.int64).reshape(-1, n))
    gam = np.zeros(n, dtype=np.int64)
    while True:
        new = (W != 0) & ((gam == 0) & ~free)[None, :]
        weight = new.sum(axis=1)
        idx = np.nonzero(weight)[0]
        if len(idx) == 0:
            break
        idx = idx[np.lexsort((rng.random(len(idx)), weight[idx]))][:candidates]
        X = W[idx]
        ratio = F.mul(W[None, :, :], inv[X][:, None, :])
        survive = (in_base[ratio] | ~new[idx][:, None, :]).all(axis=2)
        j = int(survive.sum(axis=1).argmax())
        m = new[idx[j]]
        gam[m] = X[j][m]
        W = W[survive[j]]
    sides = []
    for i in range(n):
        if free[i]:
            sides.append(full_side(F))
        else:
            g = int(gam[i]) or int(rng.integers(1, F.q))
            sides.append(base.scale(g))
    return sides


# -- the sampler front end ---------------------------------------------------------------

class RectangleSampler:
    """Draws rectangles for one code; index j decides the variant for mixed samplers.

    Every ``adaptive_every``-th rectangle of the subfield-cosets and
    adversarial-scan samplers comes from a pinned search; the others are random.
    """

    def __init__(self, code: LinearCode, ell: int, kind: str, adaptive_every: int = 8):
        check_sampler(code.field, ell, kind)
        self.code, self.ell, self.kind = code, ell, kind
        self.adaptive_every = adaptive_every
        F = code.field
        if kind == "subfield-cosets":
            self.s = subfield_degree_for(F, ell)
            self.sub = np.array(F.subfield(self.s))

    def adaptive(self, j: int) -> bool:
        return (
            self.kind in ("subfield-cosets", "adversarial-scan")
            and self.adaptive_every > 0
            and j % self.adaptive_every == 0
        )

    def gammas(self, j: int, free: np.ndarray, rng) -> np.ndarray:
        """Coset multipliers (subfield-cosets only)."""
        if self.adaptive(j):
            return pinned_coset_search(self.code, self.s, rng, free)
        return rng.integers(1, self.code.field.q, self.code.n)

    def sides(self, j: int, free: np.ndarray, rng) -> list[SubsetOfField]:
        F, ell = self.code.field, self.ell
        if self.kind == "subfield-cosets":
            g = self.gammas(j, free, rng)
            return [full_side(F) if free[i] else coset_side(F, self.sub, g[i]) for i in range(self.code.n)]
        if self.kind == "adversarial-scan" and self.adaptive(j):
            return pinned_interval_search(self.code, ell, rng, free)
        if self.kind == "uniform-subsets":
            variant = "uniform"
        elif self.kind == "centered-intervals":
            variant = "shifted"
        else:
            variant = ("shifted", "dilated", "uniform")[j % 3]
        out = []
        for i in range(self.code.n):
            if free[i]:
                out.append(full_side(F))
            elif variant == "uniform":
                out.append(uniform_side(F, ell, rng))
            else:
                out.append(interval_side(F, ell, rng, shifted=variant == "shifted"))
        return out

    def rectangle(self, j: int, free: np.ndarray, rng) -> Rectangle:
        return Rectangle(self.code.field, tuple(self.sides(j, free, rng)))


def erasure_mask(n: int, alpha: float, rng) -> np.ndarray:
    """floor(alpha n) uniformly chosen coordinates get the whole field."""
    mask = np.zeros(n, dtype=bool)
    e = math.floor(alpha * n + 1e-9)
    if e:
        mask[rng.choice(n, e, replace=False)] = True
    return mask
