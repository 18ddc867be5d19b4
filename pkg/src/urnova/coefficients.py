"""Rational coefficient tables for urn-model conditional calculus.

Everything here is a pure function of the total weight alpha(A), the
replacement constant c and integer indices.  All tables are invariant under
simultaneous scaling (alpha, c) -> (t*alpha, t*c), so caching keys on the
ratio c/alpha(A) alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import binomial, falling, prod, star_binomial
from .errors import DegenerateAssumption, ZeroDenominator


def phi_coeff(n: int, m: int, r: int, p: int, alpha_total, c) -> Fraction:
    """Weight of a p-step promotion when conditioning m coordinates, r of
    them shared, against an n-coordinate target.

    Empty products are 1 and c**0 is 1 even at c = 0.
    """
    if not (1 <= m <= n and 0 <= r <= m and 0 <= p <= m - r):
        raise ValueError(f"bad indices n={n} m={m} r={r} p={p}")
    den = prod(alpha_total + c * (n + s - 1) for s in range(1, m - r + 1))
    if den == 0:
        raise ZeroDenominator("vanishing denominator in coefficient table")
    num = c**p * falling(m - r, p)
    num *= prod(alpha_total + c * (r + p + s - 1) for s in range(1, m - (r + p) + 1))
    return num / den


def psi_coeff(M: int, q: int, n: int, m: int, alpha_total, c) -> Fraction:
    """Aggregated promotion weight over all placements of an m-set against
    a fixed n-set, grouped by the size-q surviving argument set.

    q = 0 is the constant term of the aggregation.
    """
    if not (0 <= q <= m <= n <= M):
        raise ValueError(f"bad indices M={M} q={q} n={n} m={m}")
    total = Fraction(0)
    for r in range(q + 1):
        count = binomial(q, r) * star_binomial(M - n, m - r)
        if count == 0:
            continue
        total += count * phi_coeff(n, m, r, q - r, alpha_total, c)
    return total


def gamma_coeff(M: int, k: int, alpha_total, c) -> Fraction:
    pivot = psi_coeff(M, k, k, k, alpha_total, c)
    if pivot == 0:
        raise DegenerateAssumption(f"pivot at (q={k}, n={k}) vanishes")
    return 1 / pivot


def assumption_check(M: int, alpha_total, c) -> tuple:
    """All (q, n) pairs whose pivot vanishes; empty means the coefficient
    recursion is well posed.  Always empty when c >= 0."""
    bad = []
    for n in range(1, M + 1):
        for q in range(1, n + 1):
            if psi_coeff(M, q, n, q, alpha_total, c) == 0:
                bad.append((q, n))
    return tuple(bad)


@dataclass(frozen=True)
class CoefficientTable:
    """All constants needed to decompose statistics at one horizon."""

    M: int
    alpha_total: Fraction
    c: Fraction
    phi: dict
    psi: dict
    gamma: dict
    theta: dict
    theta_star: dict


def _compute_maps(M: int, alpha_total, c):
    """Uncached construction of the five coefficient maps."""
    bad = assumption_check(M, alpha_total, c)
    if bad:
        raise DegenerateAssumption(f"vanishing pivots at (q, n) pairs {bad}")
    phi = {}
    for n in range(1, M + 1):
        for m in range(1, n + 1):
            for r in range(m + 1):
                for p in range(m - r + 1):
                    phi[(n, m, r, p)] = phi_coeff(n, m, r, p, alpha_total, c)
    psi = {}
    for n in range(1, M + 1):
        for m in range(1, n + 1):
            for q in range(m + 1):
                psi[(q, n, m)] = psi_coeff(M, q, n, m, alpha_total, c)
    gamma = {k: 1 / psi[(k, k, k)] for k in range(1, M + 1)}

    # Levels k = 1..M-1 are solved one at a time.  Within a level, the
    # aggregation identity couples theta(k, q) only to theta(k, j) with
    # j >= q, so back-substitution from q = k-1 downward needs just the
    # pivot psi[(q, k, q)].
    theta = {}
    for k in range(1, M):
        theta[(k, k)] = gamma[k]
        for q in range(k - 1, 0, -1):
            acc = Fraction(0)
            for i in range(q, k):
                for j in range(q, i + 1):
                    acc += theta[(i, j)] * psi[(q, k, j)]
            for j in range(q + 1, k + 1):
                acc += theta[(k, j)] * psi[(q, k, j)]
            theta[(k, q)] = -acc / psi[(q, k, q)]
    # The top level balances all lower ones exactly.
    for a in range(1, M):
        theta[(M, a)] = -sum(
            (theta[(s, a)] for s in range(a, M)), Fraction(0)
        )
    theta[(M, M)] = Fraction(1)

    theta_star = {
        (k, a): v / binomial(M - a, k - a) for (k, a), v in theta.items()
    }
    return phi, psi, gamma, theta, theta_star


@lru_cache(maxsize=None)
def _maps_by_rate(M: int, rate: Fraction):
    return _compute_maps(M, Fraction(1), rate)


def theta_table(M: int, alpha_total, c) -> CoefficientTable:
    """Coefficient table for horizon M; cached up to joint rescaling of
    (alpha_total, c)."""
    alpha_total = Fraction(alpha_total)
    c = Fraction(c)
    maps = _maps_by_rate(M, c / alpha_total)
    return CoefficientTable(M, alpha_total, c, *maps)


def pair_covariance_factor(n: int, r: int, alpha_total, c) -> Fraction:
    """Multiplier turning E[T*V] on one coordinate block into the covariance
    of T and V placed on blocks sharing r of their n coordinates."""
    if not (0 <= r <= n):
        raise ValueError(f"bad overlap r={r} for arity {n}")
    den = prod(alpha_total + c * (n + l - 1) for l in range(1, n - r + 1))
    if den == 0:
        raise ZeroDenominator("vanishing denominator in covariance factor")
    return c ** (n - r) * falling(n - r, n - r) / den


def level_weight(M: int, s: int, alpha_total, c) -> Fraction:
    """Total weight of level s in the covariance of two horizon-M
    statistics: the number of block pairs at each overlap times the
    pair covariance factor."""
    total = Fraction(0)
    for p in range(s + 1):
        count = binomial(s, p) * star_binomial(M - s, s - p)
        if count == 0:
            continue
        total += count * pair_covariance_factor(s, p, alpha_total, c)
    return binomial(M, s) * total
