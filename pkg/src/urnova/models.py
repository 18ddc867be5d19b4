"""Exchangeable models over finite alphabets with exact rational laws.

Two families are provided:

* ``UrnModel`` -- sequential draws where each observed symbol has its weight
  bumped by a constant ``c`` before the next draw.  ``c = 0`` is i.i.d.
  sampling, ``c = -1`` with integer weights is sampling without replacement,
  ``c > 0`` is a Polya urn.
* ``MixtureModel`` -- binary trials that are i.i.d. Bernoulli(Y) given a
  success rate Y drawn uniformly from (0, epsilon).

All probabilities are ``fractions.Fraction``; floats never enter the law.
Models are immutable and hashable, so downstream caches can key on them.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

from .combinatorics import binomial, multisets, permutation_count
from .errors import (
    EmptyMeasure,
    ExhaustedUrn,
    ExtendibilityViolated,
    LengthExceeded,
    NonNumericAlphabet,
    UnknownSymbol,
    ValidationError,
)

#: identifier of the sampling generator, recorded in report metadata:
#: Mersenne twister driving an exact 64-bit inverse-CDF walk.
RNG_ALGORITHM = "mt19937-cdf64"


def as_fraction(value) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValidationError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Symbol:
    """One alphabet point; ``value`` is only needed by order statistics."""

    label: str
    value: Optional[Fraction] = None


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        labels = [s.label for s in self.symbols]
        if len(set(labels)) != len(labels):
            raise ValidationError("alphabet labels must be pairwise distinct")
        if not labels:
            raise ValidationError("alphabet must not be empty")

    @cached_property
    def labels(self) -> tuple:
        return tuple(s.label for s in self.symbols)

    @cached_property
    def _index(self):
        return {s.label: i for i, s in enumerate(self.symbols)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {label!r}") from None

    def value(self, label: str) -> Fraction:
        v = self.symbols[self.index(label)].value
        if v is None:
            raise NonNumericAlphabet(f"symbol {label!r} has no numeric value")
        return v

    def is_numeric(self) -> bool:
        return all(s.value is not None for s in self.symbols)

    def canon(self, labels) -> tuple:
        """Canonical multiset key: labels sorted in alphabet order."""
        return tuple(sorted(labels, key=self.index))

    def multisets(self, size: int):
        return multisets(self.labels, size)


def _draw_from_cumulative(cumulative, u: int) -> str:
    # u is uniform on [0, 2**64); pick first label with u/2**64 < cum.
    for label, num_shifted, den in cumulative:
        if u * den < num_shifted:
            return label
    return cumulative[-1][0]


@lru_cache(maxsize=None)
def _cumulative_law(model, observed: tuple):
    cum = Fraction(0)
    out = []
    for label, p in model.predictive(observed).items():
        if p == 0:
            continue
        cum += p
        out.append((label, cum.numerator << 64, cum.denominator))
    return tuple(out)


@dataclass(frozen=True)
class UrnModel:
    """Law of ``length`` sequential draws with replacement increment ``c``.

    ``alpha`` is kept as a tuple of (label, weight) pairs in alphabet order
    so the model is hashable; ``alpha_of`` gives dictionary-style access.
    """

    alphabet: Alphabet
    alpha: tuple
    c: Fraction
    length: int

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise ValidationError("length must be a positive integer")
        seen = {label for label, _ in self.alpha}
        if seen != set(self.alphabet.labels):
            raise ValidationError("alpha must assign a weight to every symbol")
        for label, w in self.alpha:
            if w < 0:
                raise ValidationError(f"alpha({label!r}) must be >= 0")
        total = self.alpha_total
        if total == 0:
            raise EmptyMeasure("total alpha mass must be positive")
        if self.c < 0:
            step = -self.c
            for label, w in self.alpha:
                if (w / step).denominator != 1:
                    raise ExhaustedUrn(
                        f"alpha({label!r}) must be an integer multiple of |c| "
                        "when c < 0, else a replacement factor turns negative"
                    )
        if total + self.c * (self.length - 1) <= 0:
            raise ExhaustedUrn(
                "a predictive denominator reaches zero within the horizon"
            )

    @cached_property
    def _alpha_map(self):
        return dict(self.alpha)

    @cached_property
    def alpha_total(self) -> Fraction:
        return sum((w for _, w in self.alpha), Fraction(0))

    def alpha_of(self, label: str) -> Fraction:
        try:
            return self._alpha_map[label]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {label!r}") from None

    @property
    def rate(self) -> Fraction:
        """Replacement rate c / alpha(A); the decomposition constants depend
        on the law only through this ratio."""
        return self.c / self.alpha_total

    @property
    def is_double_extendible(self) -> bool:
        """Whether the law extends to twice the horizon.  Uniqueness and
        norm lower bounds for U-statistic representations are only
        guaranteed on models with this property; the law itself exists
        without it."""
        return self.alpha_total + 2 * self.c * self.length >= 0

    # -- law -----------------------------------------------------------------

    def joint_pmf(self, seq) -> Fraction:
        """Probability of an ordered sequence of labels."""
        seq = tuple(seq)
        if len(seq) > self.length:
            raise LengthExceeded(f"sequence longer than horizon {self.length}")
        out = Fraction(1)
        seen = Counter()
        for i, label in enumerate(seq):
            num = self.alpha_of(label) + self.c * seen[label]
            if num == 0:
                return Fraction(0)
            out *= num / (self.alpha_total + self.c * i)
            seen[label] += 1
        return out

    def predictive(self, observed=()) -> dict:
        """Law of the next draw given an observed multiset of labels."""
        ms = self.alphabet.canon(observed)
        if len(ms) >= self.length:
            raise LengthExceeded("no draws left within the horizon")
        cnt = Counter(ms)
        den = self.alpha_total + self.c * len(ms)
        return {
            label: (self.alpha_of(label) + self.c * cnt[label]) / den
            for label in self.alphabet.labels
        }

    def posterior(self, observed) -> "UrnModel":
        """Model of the remaining draws after observing a multiset."""
        ms = self.alphabet.canon(observed)
        if not ms:
            return self
        if len(ms) >= self.length:
            raise LengthExceeded("posterior would have an empty horizon")
        cnt = Counter(ms)
        alpha = tuple(
            (label, w + self.c * cnt[label]) for label, w in self.alpha
        )
        return UrnModel(self.alphabet, alpha, self.c, self.length - len(ms))

    def multiset_weight(self, ms) -> Fraction:
        """Probability of an unordered outcome: ordered pmf times the number
        of distinct orderings."""
        ms = self.alphabet.canon(ms)
        return permutation_count(ms) * self.joint_pmf(ms)

    def support_multisets(self, size: int):
        for ms in self.alphabet.multisets(size):
            if self.multiset_weight(ms) > 0:
                yield ms

    def extension_law(self, observed, k: int) -> dict:
        """Conditional law of the multiset of the next k draws."""
        ms = self.alphabet.canon(observed)
        if len(ms) + k > self.length:
            raise LengthExceeded("extension exceeds the horizon")
        if k == 0:
            return {(): Fraction(1)}
        post = self.posterior(ms)
        return {ext: post.multiset_weight(ext) for ext in self.alphabet.multisets(k)}

    # -- sampling --------------------------------------------------------------

    def sample(self, n: int, seed: int) -> tuple:
        """Draw n labels sequentially; deterministic for a given 64-bit seed."""
        if n > self.length:
            raise LengthExceeded(f"cannot draw {n} > length {self.length}")
        rng = random.Random(seed)
        out = []
        for _ in range(n):
            cum = _cumulative_law(self, self.alphabet.canon(out))
            out.append(_draw_from_cumulative(cum, rng.getrandbits(64)))
        return tuple(out)


def urn_model(symbols, alpha, c, length) -> UrnModel:
    """Convenience builder accepting labels, (label, value) pairs and loose
    rational types."""
    syms = []
    for s in symbols:
        if isinstance(s, Symbol):
            syms.append(s)
        elif isinstance(s, tuple):
            label, value = s
            syms.append(Symbol(label, as_fraction(value)))
        else:
            syms.append(Symbol(s))
    alphabet = Alphabet(tuple(syms))
    for label in alpha:
        alphabet.index(label)  # reject unknown keys
    pairs = tuple(
        (label, as_fraction(alpha.get(label, 0))) for label in alphabet.labels
    )
    return UrnModel(alphabet, pairs, as_fraction(c), int(length))


MIXTURE_ALPHABET = Alphabet((Symbol("0", Fraction(0)), Symbol("1", Fraction(1))))


@dataclass(frozen=True)
class MixtureModel:
    """Binary exchangeable trials driven by a uniform rate on (0, epsilon).

    The ordered pmf of a sequence with k successes among n trials is the
    exact polynomial (1/eps) * integral_0^eps x^k (1-x)^(n-k) dx, expanded
    binomially so every value is rational in epsilon.
    """

    epsilon: Fraction

    def __post_init__(self):
        if not (0 < self.epsilon <= 1):
            raise ValidationError("epsilon must lie in (0, 1]")

    @property
    def alphabet(self) -> Alphabet:
        return MIXTURE_ALPHABET

    #: unlimited horizon; the sequence extends indefinitely
    length = None

    def joint_pmf(self, seq) -> Fraction:
        seq = tuple(seq)
        for e in seq:
            if e not in ("0", "1"):
                raise UnknownSymbol(f"mixture sequences are over '0'/'1': {e!r}")
        n = len(seq)
        k = sum(1 for e in seq if e == "1")
        out = Fraction(0)
        eps = self.epsilon
        for j in range(n - k + 1):
            out += Fraction((-1) ** j) * binomial(n - k, j) * eps ** (k + j) / (k + j + 1)
        return out

    def multiset_weight(self, ms) -> Fraction:
        ms = self.alphabet.canon(ms)
        return permutation_count(ms) * self.joint_pmf(ms)

    def support_multisets(self, size: int):
        yield from self.alphabet.multisets(size)

    def predictive(self, observed=()) -> dict:
        ms = self.alphabet.canon(observed)
        base = self.joint_pmf(ms)
        return {
            label: self.joint_pmf(ms + (label,)) / base
            for label in self.alphabet.labels
        }

    def extension_law(self, observed, k: int) -> dict:
        ms = self.alphabet.canon(observed)
        if k == 0:
            return {(): Fraction(1)}
        base = self.joint_pmf(ms)
        out = {}
        for ext in self.alphabet.multisets(k):
            out[ext] = (
                permutation_count(ext) * self.joint_pmf(ms + ext) / base
            )
        return out


def check_horizon(model, needed: int):
    """Raise LengthExceeded unless the model supports `needed` coordinates."""
    if model.length is not None and needed > model.length:
        raise LengthExceeded(
            f"needs {needed} coordinates, model allows {model.length}"
        )


def require_double_extendible(model: UrnModel):
    """Gate for results that are only guaranteed on doubly extendible laws."""
    if not model.is_double_extendible:
        raise ExtendibilityViolated(
            "alpha_total + 2*c*length < 0: the law does not extend to twice "
            "its horizon, so uniqueness and norm bounds are not guaranteed"
        )
