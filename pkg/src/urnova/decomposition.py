"""Orthogonal decomposition of symmetric urn statistics into degenerate
U-statistic layers, plus the covariance identities the layers satisfy.

A centered statistic T of the first M draws splits as a sum over levels
s = 1..M of U-statistics with completely degenerate kernels; both the level
projections and the extracted kernels are rational-coefficient combinations
of T's diagonal conditionals, with coefficients from the theta recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coefficients import (
    gamma_coeff,
    level_weight,
    pair_covariance_factor,
    theta_table,
)
from .combinatorics import binomial, index_subsets
from .conditional import cond_expectation, diagonal_family
from .errors import (
    ArityMismatch,
    DegeneracyViolated,
    IndexOutOfRange,
    ValidationError,
    ZeroDenominator,
)
from .kernels import SymmetricKernel, expectation, ustatistic
from .models import check_horizon


@dataclass(frozen=True)
class HoeffdingDecomposition:
    """Mean plus one completely degenerate kernel per level."""

    model: object
    statistic: SymmetricKernel
    horizon: int
    mean: Fraction
    kernels: tuple  # kernels[s-1] has arity s

    def reconstruction_value(self, labels) -> Fraction:
        """mean + sum over levels and index subsets; equals the statistic."""
        x = self.model.alphabet.canon(labels)
        if len(x) != self.horizon:
            raise ArityMismatch(f"need {self.horizon} labels")
        total = self.mean
        for s, kernel in enumerate(self.kernels, start=1):
            total += sum(
                (kernel.value(tuple(x[i] for i in pick))
                 for pick in index_subsets(self.horizon, s)),
                Fraction(0),
            )
        return total

    def level_projection(self, s: int) -> SymmetricKernel:
        """The level-s summand as a horizon-arity statistic (U-statistic of
        the extracted kernel); an independent route to project_level."""
        return ustatistic(self.kernels[s - 1], self.horizon)


def _centered_or_raise(model, statistic):
    if expectation(model, statistic) != 0:
        raise ValidationError("statistic must be centered (subtract its mean)")


def project_level(model, statistic: SymmetricKernel, horizon: int, s: int) -> SymmetricKernel:
    """Level-s component of a centered statistic, as a statistic of all
    `horizon` coordinates, built directly from the theta coefficients."""
    if statistic.arity != horizon:
        raise ArityMismatch("statistic arity must equal the horizon")
    if not (1 <= s <= horizon):
        raise IndexOutOfRange(f"level {s} outside 1..{horizon}")
    check_horizon(model, horizon)
    _centered_or_raise(model, statistic)
    table = theta_table(horizon, model.alpha_total, model.c)
    fam = diagonal_family(model, statistic)
    support = set(model.support_multisets(horizon))
    entries = []
    for ms in model.alphabet.multisets(horizon):
        if ms not in support:
            entries.append((ms, Fraction(0)))
            continue
        value = Fraction(0)
        for a in range(1, s + 1):
            coef = table.theta[(s, a)]
            if coef == 0:
                continue
            value += coef * sum(
                (fam.value(tuple(ms[i] for i in pick))
                 for pick in index_subsets(horizon, a)),
                Fraction(0),
            )
        entries.append((ms, value))
    return SymmetricKernel(horizon, model.alphabet, tuple(entries))


def extract_kernel(model, statistic: SymmetricKernel, horizon: int, s: int) -> SymmetricKernel:
    """The degenerate arity-s kernel whose U-statistic is the level-s
    component; star-scaled theta coefficients over the kernel's own
    coordinate subsets."""
    if statistic.arity != horizon:
        raise ArityMismatch("statistic arity must equal the horizon")
    if not (1 <= s <= horizon):
        raise IndexOutOfRange(f"level {s} outside 1..{horizon}")
    check_horizon(model, horizon)
    _centered_or_raise(model, statistic)
    table = theta_table(horizon, model.alpha_total, model.c)
    fam = diagonal_family(model, statistic)
    support = set(model.support_multisets(s))
    entries = []
    for ms in model.alphabet.multisets(s):
        if ms not in support:
            entries.append((ms, Fraction(0)))
            continue
        value = Fraction(0)
        for a in range(1, s + 1):
            coef = table.theta_star[(s, a)]
            if coef == 0:
                continue
            value += coef * sum(
                (fam.value(tuple(ms[i] for i in pick))
                 for pick in index_subsets(s, a)),
                Fraction(0),
            )
        entries.append((ms, value))
    return SymmetricKernel(s, model.alphabet, tuple(entries))


def decompose(model, statistic: SymmetricKernel, horizon: int) -> HoeffdingDecomposition:
    """Full decomposition: record the mean, center, extract every level."""
    if statistic.arity != horizon:
        raise ArityMismatch("statistic arity must equal the horizon")
    check_horizon(model, horizon)
    mean = expectation(model, statistic)
    centered = statistic.shift(-mean)
    kernels = tuple(
        extract_kernel(model, centered, horizon, s) for s in range(1, horizon + 1)
    )
    return HoeffdingDecomposition(model, statistic, horizon, mean, kernels)


def is_degenerate(model, kernel: SymmetricKernel) -> bool:
    """True when conditioning on all but one of the kernel's coordinates
    kills it on the model's support."""
    for ms in model.support_multisets(kernel.arity - 1):
        if cond_expectation(model, kernel, ms) != 0:
            return False
    return True


def project_degenerate_ustat(model, kernel: SymmetricKernel, horizon: int) -> SymmetricKernel:
    """Level projection shortcut for a U-statistic built from an already
    degenerate kernel: a single gamma-weighted diagonal term.  Must agree
    with project_level and leave every other level empty."""
    if not is_degenerate(model, kernel):
        raise DegeneracyViolated("kernel is not completely degenerate")
    n = kernel.arity
    stat = ustatistic(kernel, horizon)
    fam = diagonal_family(model, stat)
    g = gamma_coeff(horizon, n, model.alpha_total, model.c)
    support = set(model.support_multisets(horizon))
    entries = []
    for ms in model.alphabet.multisets(horizon):
        if ms not in support:
            entries.append((ms, Fraction(0)))
            continue
        value = g * sum(
            (fam.value(tuple(ms[i] for i in pick))
             for pick in index_subsets(horizon, n)),
            Fraction(0),
        )
        entries.append((ms, value))
    return SymmetricKernel(horizon, model.alphabet, tuple(entries))


def degenerate_cov(model, left: SymmetricKernel, right: SymmetricKernel,
                   overlap: int) -> Fraction:
    """Covariance of two degenerate kernels placed on coordinate blocks
    sharing `overlap` positions: a closed-form multiple of their same-block
    product moment."""
    if left.arity != right.arity:
        raise ArityMismatch("kernels must share an arity")
    n = left.arity
    check_horizon(model, 2 * n - overlap)
    if not (is_degenerate(model, left) and is_degenerate(model, right)):
        raise DegeneracyViolated("both kernels must be completely degenerate")
    factor = pair_covariance_factor(n, overlap, model.alpha_total, model.c)
    return factor * expectation(model, left.pointwise_product(right))


def covariance_levels(model, left: SymmetricKernel, right: SymmetricKernel,
                      horizon: int):
    """Per-level contributions to E[left*right] for centered statistics,
    plus their total.  Each level term is the level weight times the product
    moment of the two extracted kernels on one block."""
    _centered_or_raise(model, left)
    _centered_or_raise(model, right)
    dl = decompose(model, left, horizon)
    dr = decompose(model, right, horizon)
    levels = []
    for s in range(1, horizon + 1):
        weight = level_weight(horizon, s, model.alpha_total, model.c)
        moment = expectation(
            model, dl.kernels[s - 1].pointwise_product(dr.kernels[s - 1])
        )
        levels.append(weight * moment)
    return tuple(levels), sum(levels, Fraction(0))


def ustat_square_norm(model, kernel: SymmetricKernel, size: int) -> Fraction:
    """E[(sum of the kernel over all index subsets of `size` coordinates)^2]."""
    u = ustatistic(kernel, size)
    return expectation(model, u.pointwise_product(u))


def ustat_norm_lower_constant(N: int, n: int, i: int) -> Fraction:
    """Law-free constant k with E[(U-statistic)^2] >= k * E[kernel^2] for
    every exchangeable model extendible to 2(N-1) coordinates."""
    if not (1 <= i <= n <= N - 1):
        raise IndexOutOfRange(f"need 1 <= i <= n <= N-1, got N={N} n={n} i={i}")
    candidates = [Fraction(binomial(n, i) ** 2)]
    for s in range(1, i + 1):
        num = binomial(n - s, i - s) ** 2 * binomial(2 * N - 2 - n, s) * binomial(n, s)
        den = binomial(2 * N - 2 - s, s) * binomial(i, s) ** 2
        candidates.append(Fraction(num, den))
    return min(candidates)


def wor_level_variance_printed(population: int, sample: int, level: int,
                               g_norm) -> Fraction:
    """Classical closed form, exactly as printed in its source, for the
    squared norm of a level projection under sampling without replacement.

    Kept verbatim for comparison; acceptance rests on the enumeration
    route, and disagreements are reported, never patched here.
    """
    if population - sample < level:
        return Fraction(0)
    den = binomial(population - level, level)
    if den == 0:
        raise ZeroDenominator("vanishing binomial in printed variance formula")
    num = binomial(sample, level) * binomial(population - sample, population - level)
    return Fraction(num, den) * Fraction(g_norm)


def wor_level_variance_derived(population: int, sample: int, level: int) -> Fraction:
    """Same constant derived from the pairwise covariance identity: count
    block pairs at each overlap inside the sample."""
    return level_weight(sample, level, Fraction(population), Fraction(-1))
