"""Tilted copies of Polya-type urn laws that keep all small marginals.

For a model with positive replacement constant, the directing random
measure has exactly computable mixed moments, so tilting the law by
1 + scale * (degenerate polynomial of the directing measure) is a purely
rational operation: every finite marginal of the tilted law is the base
marginal plus a finite sum of moment terms.  Degeneracy of the tilt kernel
makes every marginal of dimension <= k coincide with the base, while the
(k+1)-marginals move.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .combinatorics import permutation_count, prod
from .decomposition import decompose
from .errors import (
    ArityMismatch,
    LengthExceeded,
    RequiresPositiveC,
    ValidationError,
    ZeroProjection,
)
from .kernels import SymmetricKernel
from .models import UrnModel


def _rising(x: Fraction, m: int) -> Fraction:
    return prod(x + t for t in range(m))


def dirichlet_moment(model: UrnModel, exponents) -> Fraction:
    """Mixed moment E[prod_a D(a)^m_a] of the directing measure of a
    positive-replacement urn: a ratio of rising factorials of the
    normalized weights."""
    if model.c <= 0:
        raise RequiresPositiveC("directing-measure moments need c > 0")
    ms = model.alphabet.canon(exponents)
    cnt = Counter(ms)
    num = prod(_rising(model.alpha_of(label) / model.c, k) for label, k in cnt.items())
    den = _rising(model.alpha_total / model.c, len(ms))
    return num / den


@dataclass(frozen=True)
class TiltedModel:
    """Base law reweighted by 1 + scale * tilt polynomial of the directing
    measure; immutable once built."""

    base: UrnModel
    level: int  # marginals up to this length match the base
    tilt: SymmetricKernel  # arity level + 1, completely degenerate
    scale: Fraction
    eta: Fraction  # requested sup-norm budget for the density tilt

    @cached_property
    def coefficient_bound(self) -> Fraction:
        """Sum of absolute monomial coefficients of the tilt polynomial;
        every monomial is at most 1 on the simplex, so this certifies the
        sup norm."""
        return sum(
            (permutation_count(ms) * abs(v) for ms, v in self.tilt.entries),
            Fraction(0),
        )

    @property
    def certified_density_bound(self) -> Fraction:
        return self.scale * self.coefficient_bound

    def marginal_pmf(self, seq) -> Fraction:
        """Exact probability of an ordered sequence under the tilted law."""
        seq = tuple(seq)
        if len(seq) > self.base.length:
            raise LengthExceeded("sequence longer than the base horizon")
        correction = Fraction(0)
        if self.scale != 0:
            for ms, v in self.tilt.entries:
                if v == 0:
                    continue
                correction += (
                    permutation_count(ms)
                    * v
                    * dirichlet_moment(self.base, tuple(seq) + ms)
                )
        return self.base.joint_pmf(seq) + self.scale * correction


def build_weak_copy(base: UrnModel, level: int, seed_statistic: SymmetricKernel,
                    eta) -> TiltedModel:
    """Tilt the base law with the top extracted kernel of a seed statistic.

    The seed must have arity level + 1; its top-level kernel is completely
    degenerate, which is exactly what keeps the small marginals fixed.  The
    scale is set to half the sup-norm budget divided by the certified
    coefficient bound, so the density stays within eta.
    """
    eta = Fraction(eta)
    if not (0 < eta < 1):
        raise ValidationError("eta must lie in (0, 1)")
    if base.c <= 0:
        raise RequiresPositiveC("weak copies are built on c > 0 bases")
    arity = level + 1
    if seed_statistic.arity != arity:
        raise ArityMismatch(f"seed statistic must have arity {arity}")
    if base.length < arity:
        raise LengthExceeded("base horizon too short to extract the tilt")
    tilt = decompose(base, seed_statistic, arity).kernels[arity - 1]
    if tilt.is_zero():
        raise ZeroProjection(
            "top-level projection of the seed statistic vanishes; pick another seed"
        )
    bound = sum(
        (permutation_count(ms) * abs(v) for ms, v in tilt.entries), Fraction(0)
    )
    scale = eta / (2 * bound)
    return TiltedModel(base, level, tilt, scale, eta)


@dataclass(frozen=True)
class WeakCopyReport:
    level: int
    checked_length: int
    small_marginals_match: bool
    exchangeable: bool
    normalized: bool
    discrepancy: tuple  # (sequence, base pmf, tilted pmf) or () if none
    degenerate_copy: bool  # scale 0 reproduces the base law exactly
    density_bound: Fraction
    density_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.small_marginals_match
            and self.exchangeable
            and self.normalized
            and self.density_ok
            and (self.degenerate_copy or bool(self.discrepancy))
        )


def verify_weak_copy(tilted: TiltedModel) -> WeakCopyReport:
    """Exhaustive exact checks of the tilted law's finite marginals.

    Verifies: marginals of length <= level equal the base; marginal tables
    up to level + 2 (horizon permitting) are permutation-invariant and sum
    to one; some (level+1)-marginal moves unless the scale is zero; the
    certified density bound stays below eta.
    """
    base = tilted.base
    labels = base.alphabet.labels
    k = tilted.level
    top = min(k + 2, base.length)
    small_ok = True
    exchangeable = True
    normalized = True
    discrepancy = ()
    for length in range(top + 1):
        total = Fraction(0)
        by_multiset = {}
        for seq in itertools.product(labels, repeat=length):
            p = tilted.marginal_pmf(seq)
            total += p
            key = base.alphabet.canon(seq)
            if by_multiset.setdefault(key, p) != p:
                exchangeable = False
            if length <= k and p != base.joint_pmf(seq):
                small_ok = False
            if length == k + 1 and not discrepancy:
                base_p = base.joint_pmf(seq)
                if p != base_p:
                    discrepancy = (seq, base_p, p)
        if length and total != 1:
            normalized = False
    return WeakCopyReport(
        level=k,
        checked_length=top,
        small_marginals_match=small_ok,
        exchangeable=exchangeable,
        normalized=normalized,
        discrepancy=discrepancy,
        degenerate_copy=(tilted.scale == 0),
        density_bound=tilted.certified_density_bound,
        density_ok=tilted.certified_density_bound < tilted.eta,
    )
