"""Exact conditional expectations of symmetric statistics.

Two routes are provided and tested against each other.  The oracle route
conditions by enumerating the posterior law of the unobserved coordinates.
The expansion routes rewrite the same conditionals as rational-coefficient
combinations of the statistic's diagonal conditionals, which is where all
the structure of the decomposition lives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coefficients import phi_coeff, psi_coeff
from .combinatorics import binomial, prod
from .errors import ArityMismatch, HorizonTooShort, IndexOutOfRange
from .kernels import SymmetricKernel
from .models import check_horizon


def cond_expectation(model, statistic: SymmetricKernel, common, extra=()) -> Fraction:
    """E[statistic(common + fresh) | common and extra observed].

    ``common`` holds the observed values that are arguments of the
    statistic; ``extra`` holds observed values that are not.  The extra
    block enters only through the posterior update.
    """
    common = tuple(common)
    extra = tuple(extra)
    draws = statistic.arity - len(common)
    if draws < 0:
        raise ArityMismatch("more common values than the statistic has arguments")
    check_horizon(model, statistic.arity + len(extra))
    if draws == 0:
        # fully determined; further conditioning cannot move a constant
        return statistic.value(common)
    observed = model.alphabet.canon(common + extra)
    total = Fraction(0)
    for ext, weight in model.extension_law(observed, draws).items():
        if weight == 0:
            continue
        total += weight * statistic.value(common + ext)
    return total


@dataclass(frozen=True)
class DiagonalFamily:
    """The conditionals of a statistic given q of its own coordinates,
    q = 0 .. arity, tabulated on the model's support multisets."""

    model: object
    statistic: SymmetricKernel
    levels: tuple  # levels[q] = {multiset: value}

    def value(self, labels) -> Fraction:
        key = self.model.alphabet.canon(labels)
        return self.levels[len(key)][key]

    @property
    def mean(self) -> Fraction:
        return self.levels[0][()]


@lru_cache(maxsize=None)
def diagonal_family(model, statistic: SymmetricKernel) -> DiagonalFamily:
    """Tabulate all diagonal conditionals of a statistic; cached per
    (model, statistic) pair."""
    check_horizon(model, statistic.arity)
    levels = []
    for q in range(statistic.arity + 1):
        table = {}
        for ms in model.support_multisets(q):
            table[ms] = cond_expectation(model, statistic, ms)
        levels.append(table)
    return DiagonalFamily(model, statistic, tuple(levels))


def expand_conditional(model, statistic: SymmetricKernel, common, extra) -> Fraction:
    """Conditional of the statistic with partial overlap, rebuilt from the
    diagonal family alone (no fresh enumeration).

    The observed block has r = len(common) shared values and len(extra)
    outside ones; the result is a two-block polynomial identity in the
    replacement constant, exact for every urn model.
    """
    common = tuple(common)
    extra = tuple(extra)
    n = statistic.arity
    r = len(common)
    m = r + len(extra)
    if m > n:
        raise ArityMismatch("conditioning block larger than the statistic")
    check_horizon(model, n + len(extra))
    a, c = model.alpha_total, model.c
    fam = diagonal_family(model, statistic)
    den = prod(a + c * (n + l - 1) for l in range(1, m - r + 1))
    total = Fraction(0)
    for q in range(r, m + 1):
        lead = c ** (q - r) * prod(
            Fraction(n - r - l + 1) for l in range(1, q - r + 1)
        )
        if lead == 0:
            continue
        beta = Fraction(1) if q == m else prod(a + c * t for t in range(q, m))
        if beta == 0:
            continue
        inner = sum(
            (fam.value(common + tuple(extra[i] for i in pick))
             for pick in itertools.combinations(range(len(extra)), q - r)),
            Fraction(0),
        )
        total += lead * beta * inner / den
    return total


def nested_conditional(model, statistic: SymmetricKernel, m: int, overlap: int,
                       conditioning) -> Fraction:
    """E[ diag_m(one m-block) | an n-block of observed values ] where the two
    blocks share `overlap` coordinates.

    ``conditioning`` carries the n observed values with the shared ones
    first; by exchangeability only the overlap matters, so this canonical
    layout loses nothing.
    """
    conditioning = tuple(conditioning)
    n = len(conditioning)
    M = statistic.arity
    r = overlap
    if not (1 <= m <= n <= M and 0 <= r <= m):
        raise IndexOutOfRange(f"bad sizes m={m}, n={n}, M={M}, overlap={r}")
    check_horizon(model, n + m - r)
    fam = diagonal_family(model, statistic)
    shared = conditioning[:r]
    outside = conditioning[r:]
    total = Fraction(0)
    for p in range(m - r + 1):
        coef = phi_coeff(n, m, r, p, model.alpha_total, model.c)
        if coef == 0:
            continue
        inner = sum(
            (fam.value(shared + pick)
             for pick in itertools.combinations(outside, p)),
            Fraction(0),
        )
        total += coef * inner
    return total


def nested_conditional_at(model, statistic: SymmetricKernel, block, observed_block,
                          values) -> Fraction:
    """Index-tuple form of :func:`nested_conditional`.

    ``block`` is the m-tuple of coordinates the diagonal conditional sits
    on, ``observed_block`` the n-tuple being conditioned on, ``values`` the
    observed values parallel to ``observed_block``.  Canonicalizes to the
    overlap form.
    """
    block = tuple(block)
    observed_block = tuple(observed_block)
    M = statistic.arity
    for idx in (*block, *observed_block):
        if not (1 <= idx <= M):
            raise IndexOutOfRange(f"coordinate {idx} outside 1..{M}")
    if len(set(block)) != len(block) or len(set(observed_block)) != len(observed_block):
        raise IndexOutOfRange("index tuples must have distinct entries")
    inside = set(block)
    shared = [v for idx, v in zip(observed_block, values) if idx in inside]
    outside = [v for idx, v in zip(observed_block, values) if idx not in inside]
    return nested_conditional(
        model, statistic, len(block), len(shared), tuple(shared) + tuple(outside)
    )


def nested_conditional_sum(model, statistic: SymmetricKernel, m: int,
                           conditioning) -> Fraction:
    """Sum of :func:`nested_conditional` over every m-subset of the horizon,
    collapsed to the aggregated coefficient table."""
    conditioning = tuple(conditioning)
    n = len(conditioning)
    M = statistic.arity
    if not (1 <= m <= n <= M):
        raise IndexOutOfRange(f"bad sizes m={m}, n={n}, M={M}")
    fam = diagonal_family(model, statistic)
    total = Fraction(0)
    for q in range(m + 1):
        coef = psi_coeff(M, q, n, m, model.alpha_total, model.c)
        if coef == 0:
            continue
        inner = sum(
            (fam.value(pick)
             for pick in itertools.combinations(conditioning, q)),
            Fraction(0),
        )
        total += coef * inner
    return total


def symmetrized_offdiagonal(model, statistic: SymmetricKernel, overlap: int) -> SymmetricKernel:
    """Average the overlap-r conditional of the statistic over all block
    assignments of its n-1 observed values; zero off the model's support."""
    n = statistic.arity
    r = overlap
    if not (0 <= r <= n - 1):
        raise IndexOutOfRange(f"overlap {r} outside 0..{n - 1}")
    if model.length is not None and 2 * n - r - 1 > model.length:
        raise HorizonTooShort(
            f"needs {2 * n - r - 1} coordinates, model allows {model.length}"
        )
    alphabet = model.alphabet
    support = set(model.support_multisets(n - 1))
    norm = Fraction(1, binomial(n - 1, r))
    entries = []
    for ms in alphabet.multisets(n - 1):
        if ms not in support:
            entries.append((ms, Fraction(0)))
            continue
        acc = Fraction(0)
        for pick in itertools.combinations(range(n - 1), r):
            chosen = set(pick)
            common = tuple(ms[i] for i in pick)
            extra = tuple(ms[i] for i in range(n - 1) if i not in chosen)
            acc += cond_expectation(model, statistic, common, extra)
        entries.append((ms, norm * acc))
    return SymmetricKernel(n - 1, alphabet, tuple(entries))
