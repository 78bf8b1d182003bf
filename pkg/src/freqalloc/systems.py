"""Frequency-set families ("F-systems") and the three built-in constructions.

An F-system assigns to each (side, t, k) with 0 <= k <= t a finite frequency
set.  The two defining properties checked elsewhere are a size floor
(|F(c,t,k)| >= k) and cross-side disjointness whenever k + k' <= max(t, t');
a family is r-competitive when the union of all sets up to level t never
exceeds r*t + lambda frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .frequencies import (
    FrequencySet,
    PoolTag,
    Side,
    pool_prefix,
    private_pool,
    shared_pool,
    union_all,
)
from .golden import GoldenNumber, floor_linear

Generator = Callable[[Side, int, int], FrequencySet]
RowUnion = Callable[[Side, int], FrequencySet]
RowSizes = Callable[[Side, int], Sequence[int]]


@dataclass(frozen=True)
class FSystemSpec:
    """An F-system oracle plus its claimed competitive ratio and constant.

    ``generator`` must be deterministic: the same (side, t, k) always yields
    a structurally identical set.  ``row_union_fn`` optionally provides the
    union of a whole level, union over k <= t of F(side, t, k); when absent
    it is computed by folding the generator, which any system supports but
    costs t generator calls.
    """

    name: str
    claimed_ratio: GoldenNumber
    claimed_lambda: int
    generator: Generator
    row_union_fn: Optional[RowUnion] = None
    row_sizes_fn: Optional[RowSizes] = None
    pools: Optional[frozenset[PoolTag]] = None

    def sets(self, side: Side, t: int, k: int) -> FrequencySet:
        if t < 1:
            raise ValueError(f"level must be >= 1, got t={t}")
        if not 0 <= k <= t:
            raise ValueError(f"need 0 <= k <= t, got k={k}, t={t}")
        return self.generator(side, t, k)

    def row_union(self, side: Side, t: int) -> FrequencySet:
        """Union over 1 <= k <= t of the level-t sets for one side."""
        if self.row_union_fn is not None:
            return self.row_union_fn(side, t)
        return union_all(self.sets(side, t, k) for k in range(1, t + 1))

    def row_sizes(self, side: Side, t: int) -> Sequence[int]:
        """Cardinalities of the level-t sets for k = 1..t."""
        if self.row_sizes_fn is not None:
            return self.row_sizes_fn(side, t)
        return [len(self.sets(side, t, k)) for k in range(1, t + 1)]


def trivial_system() -> FSystemSpec:
    """Private pools only: the level-(t,k) set is the first k private
    frequencies of the request's side.  2-competitive with no additive slack.
    """

    @lru_cache(maxsize=1 << 16)
    def gen(side: Side, t: int, k: int) -> FrequencySet:
        return pool_prefix(private_pool(side), k)

    return FSystemSpec(
        name="trivial",
        claimed_ratio=GoldenNumber(2),
        claimed_lambda=0,
        generator=gen,
        # sets grow with k, so the top of the row is the whole row union
        row_union_fn=lambda side, t: gen(side, t, t),
        row_sizes_fn=lambda side, t: range(1, t + 1),
        pools=frozenset({PoolTag.PRIVATE_A, PoolTag.PRIVATE_B}),
    )


def half_system() -> FSystemSpec:
    """Private prefix of length floor(t/2)+1 plus, for large k, a tail of
    symmetric-shared frequencies with indices in (t-k, floor(t/2)].
    1.5-competitive with additive constant 2.
    """

    @lru_cache(maxsize=1 << 16)
    def gen(side: Side, t: int, k: int) -> FrequencySet:
        bands = [(private_pool(side), 1, t // 2 + 2)]
        lo, hi = max(0, t - k), t // 2
        if hi > lo:
            bands.append((PoolTag.SYMMETRIC, lo + 1, hi + 1))
        # private rank precedes symmetric: already normalized
        return FrequencySet._raw(tuple(bands))

    def sizes(side: Side, t: int) -> list[int]:
        half_t = t // 2
        return [half_t + 1 + max(0, half_t - (t - k)) for k in range(1, t + 1)]

    return FSystemSpec(
        name="half",
        claimed_ratio=GoldenNumber(Fraction(3, 2)),
        claimed_lambda=2,
        generator=gen,
        # the shared band widens as k grows; k = t covers the row
        row_union_fn=lambda side, t: gen(side, t, t),
        row_sizes_fn=sizes,
        pools=frozenset(
            {PoolTag.PRIVATE_A, PoolTag.PRIVATE_B, PoolTag.SYMMETRIC}
        ),
    )


# Boundaries of the golden construction, as floor((u + v*sqrt5)/22) of
# integer coefficients.  With phi the golden ratio and the growth rates
# alpha = (7-sqrt5)/11, beta = alpha/2, rho = beta/phi, the products
# reduce to: phi*beta = (1+3*sqrt5)/22, phi*rho = beta, rho*phi*k = beta*k,
# and rho*t = (-6t+4t*sqrt5)/22.


def _phi_k_le_t(k: int, t: int) -> bool:
    # phi*k <= t  <=>  k*sqrt5 <= 2t - k; both sides nonnegative for k <= t
    d = 2 * t - k
    return 5 * k * k <= d * d


# float sqrt plus integer correction is exact while 5v^2 fits the mantissa
_VEC_LIMIT = 3 * 10**7


def _floor_linear_vec(u: np.ndarray, v: np.ndarray, w: int) -> np.ndarray:
    """floor((u + v*sqrt5)/w) elementwise on int64 arrays; exact."""
    x = 5 * v * v
    m = np.sqrt(x.astype(np.float64)).astype(np.int64)
    m -= m * m > x
    m += (m + 1) * (m + 1) <= x
    n = np.where(v >= 0, (u + m) // w, (u - m - 1) // w)
    # the seed is within one of the floor, always from below
    d = w * (n + 1) - u
    up = np.where(
        d <= 0,
        (v >= 0) | (d * d >= x),
        (v > 0) & (d * d <= x),
    )
    return n + up


def _band_widths(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.maximum(0, np.maximum(hi, 0) - np.maximum(lo, 0))


def golden_system() -> FSystemSpec:
    """The four-pool construction with golden-ratio band boundaries.

    The level-(t,k) set takes a private prefix of length floor(alpha*t + 4),
    an own-side shared band (beta*(t-k), beta*min(t, phi*k)], a borrowed
    band from the other side's shared pool (phi*beta*(t-k), beta*k], and a
    symmetric band (phi*rho*(t-k), rho*min(t, phi*k)].  Competitive ratio
    (18-sqrt5)/11 with additive constant 8.
    """

    @lru_cache(maxsize=1 << 16)
    def gen(side: Side, t: int, k: int) -> FrequencySet:
        own = shared_pool(side)
        other = shared_pool(side.other)
        tk = t - k
        p_hi = floor_linear(14 * t + 88, -2 * t, 22)  # alpha*t + 4
        if _phi_k_le_t(k, t):
            s_own_hi = floor_linear(k, 3 * k, 22)  # phi*beta*k
            q_hi = floor_linear(7 * k, -k, 22)  # rho*phi*k = beta*k
        else:
            s_own_hi = floor_linear(7 * t, -t, 22)  # beta*t
            q_hi = floor_linear(-6 * t, 4 * t, 22)  # rho*t
        s_own_lo = floor_linear(7 * tk, -tk, 22)  # beta*(t-k)
        s_oth_lo = floor_linear(tk, 3 * tk, 22)  # phi*beta*(t-k)
        s_oth_hi = floor_linear(7 * k, -k, 22)  # beta*k
        q_lo = s_own_lo  # phi*rho*(t-k) = beta*(t-k)

        shared = [
            (own, s_own_lo, s_own_hi),
            (other, s_oth_lo, s_oth_hi),
        ]
        if own.rank > other.rank:
            shared.reverse()
        bands = []
        if p_hi >= 1:
            bands.append((private_pool(side), 1, p_hi + 1))
        for pool, lo, hi in (*shared, (PoolTag.SYMMETRIC, q_lo, q_hi)):
            lo = max(lo, 0)
            if hi > lo:
                bands.append((pool, lo + 1, hi + 1))
        # one band per pool, appended in rank order: already normalized
        return FrequencySet._raw(tuple(bands))

    def sizes(side: Side, t: int) -> np.ndarray:
        if t > _VEC_LIMIT:
            return np.array(
                [len(gen(side, t, k)) for k in range(1, t + 1)], dtype=object
            )
        k = np.arange(1, t + 1, dtype=np.int64)
        tk = t - k
        case = 5 * k * k <= (2 * t - k) ** 2  # phi*k <= t
        beta_k = _floor_linear_vec(7 * k, -k, 22)
        s_own_hi = np.where(
            case,
            _floor_linear_vec(k, 3 * k, 22),  # phi*beta*k
            floor_linear(7 * t, -t, 22),  # beta*t
        )
        q_hi = np.where(case, beta_k, floor_linear(-6 * t, 4 * t, 22))
        s_own_lo = _floor_linear_vec(7 * tk, -tk, 22)  # beta*(t-k)
        s_oth_lo = _floor_linear_vec(tk, 3 * tk, 22)  # phi*beta*(t-k)
        p_hi = max(0, floor_linear(14 * t + 88, -2 * t, 22))
        return (
            p_hi
            + _band_widths(s_own_lo, s_own_hi)
            + _band_widths(s_oth_lo, beta_k)
            + _band_widths(s_own_lo, q_hi)
        )

    return FSystemSpec(
        name="golden",
        claimed_ratio=GoldenNumber(Fraction(18, 11), Fraction(-1, 11)),
        claimed_lambda=8,
        generator=gen,
        # every band's lower end falls and upper end rises with k, so the
        # level sets are nested and k = t covers the row
        row_union_fn=lambda side, t: gen(side, t, t),
        row_sizes_fn=sizes,
        pools=frozenset(
            {
                PoolTag.PRIVATE_A,
                PoolTag.PRIVATE_B,
                PoolTag.SHARED_A,
                PoolTag.SHARED_B,
                PoolTag.SYMMETRIC,
            }
        ),
    )


BUILTIN_SYSTEMS = {
    "trivial": trivial_system,
    "half": half_system,
    "golden": golden_system,
}
