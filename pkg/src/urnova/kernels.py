"""Symmetric statistics stored exactly on multisets.

A kernel of arity n is a total rational-valued table on the multisets of
size n over a fixed alphabet; evaluating it on a tuple only ever consults
the tuple's multiset, so symmetry holds by construction.  Dense tables keep
the linear algebra on kernels (null spaces, projections) direct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial

from .combinatorics import (
    binomial,
    elementary_symmetric,
    index_subsets,
    permutation_count,
    prod,
)
from .errors import (
    ArityMismatch,
    DuplicateMultiset,
    MissingMultiset,
    NonNumericAlphabet,
)
from .models import Alphabet, as_fraction, check_horizon


@dataclass(frozen=True)
class SymmetricKernel:
    arity: int
    alphabet: Alphabet
    entries: tuple  # ((multiset, Fraction), ...) in canonical multiset order

    @cached_property
    def table(self) -> dict:
        return dict(self.entries)

    def value(self, labels) -> Fraction:
        """Evaluate on a tuple or multiset of labels."""
        if len(labels) != self.arity:
            raise ArityMismatch(
                f"kernel of arity {self.arity} evaluated on {len(labels)} labels"
            )
        return self.table[self.alphabet.canon(labels)]

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.entries)

    def _with_values(self, fn):
        return SymmetricKernel(
            self.arity,
            self.alphabet,
            tuple((ms, fn(ms, v)) for ms, v in self.entries),
        )

    def __add__(self, other: "SymmetricKernel") -> "SymmetricKernel":
        return self._with_values(lambda ms, v: v + other.table[ms])

    def __sub__(self, other: "SymmetricKernel") -> "SymmetricKernel":
        return self._with_values(lambda ms, v: v - other.table[ms])

    def __neg__(self) -> "SymmetricKernel":
        return self._with_values(lambda ms, v: -v)

    def scale(self, factor) -> "SymmetricKernel":
        factor = as_fraction(factor)
        return self._with_values(lambda ms, v: factor * v)

    def shift(self, constant) -> "SymmetricKernel":
        constant = as_fraction(constant)
        return self._with_values(lambda ms, v: v + constant)

    def pointwise_product(self, other: "SymmetricKernel") -> "SymmetricKernel":
        return self._with_values(lambda ms, v: v * other.table[ms])


def from_table(alphabet: Alphabet, arity: int, mapping) -> SymmetricKernel:
    """Build a kernel from {labels: value}; every multiset must appear once."""
    if hasattr(mapping, "items"):
        items = mapping.items()
    else:
        items = mapping
    seen = {}
    for labels, value in items:
        key = alphabet.canon(labels)
        if len(key) != arity:
            raise ArityMismatch(f"entry {labels!r} has size {len(key)}, not {arity}")
        if key in seen:
            raise DuplicateMultiset(f"multiset {key!r} specified twice")
        seen[key] = as_fraction(value)
    entries = []
    for ms in alphabet.multisets(arity):
        if ms not in seen:
            raise MissingMultiset(f"no value for multiset {ms!r}")
        entries.append((ms, seen[ms]))
    return SymmetricKernel(arity, alphabet, tuple(entries))


def constant_kernel(alphabet: Alphabet, arity: int, value) -> SymmetricKernel:
    value = as_fraction(value)
    return SymmetricKernel(
        arity,
        alphabet,
        tuple((ms, value) for ms in alphabet.multisets(arity)),
    )


def zero_kernel(alphabet: Alphabet, arity: int) -> SymmetricKernel:
    return constant_kernel(alphabet, arity, 0)


def indicator_kernel(alphabet: Alphabet, target) -> SymmetricKernel:
    """1 on one multiset, 0 elsewhere."""
    key = alphabet.canon(target)
    return SymmetricKernel(
        alphabet=alphabet,
        arity=len(key),
        entries=tuple(
            (ms, Fraction(1 if ms == key else 0))
            for ms in alphabet.multisets(len(key))
        ),
    )


def symmetrize(alphabet: Alphabet, arity: int, fn) -> SymmetricKernel:
    """Average a function of ordered tuples over all orderings.

    The average runs over all arity! permutations, so a function that is
    already symmetric comes back unchanged (the map is a projection).
    """
    entries = []
    norm = Fraction(1, factorial(arity))
    for ms in alphabet.multisets(arity):
        total = sum((as_fraction(fn(p)) for p in itertools.permutations(ms)), Fraction(0))
        entries.append((ms, norm * total))
    return SymmetricKernel(arity, alphabet, tuple(entries))


def builtin_kernel(alphabet: Alphabet, arity: int, name: str, target=None) -> SymmetricKernel:
    """Named kernels: max, min, mean (numeric alphabets) and indicator."""
    if name == "indicator":
        if target is None:
            raise MissingMultiset("indicator kernel needs a target multiset")
        kernel = indicator_kernel(alphabet, target)
        if kernel.arity != arity:
            raise ArityMismatch(
                f"indicator target has size {kernel.arity}, requested arity {arity}"
            )
        return kernel
    if name not in ("max", "min", "mean"):
        raise ValueError(f"unknown builtin kernel {name!r}")
    if not alphabet.is_numeric():
        raise NonNumericAlphabet(f"builtin {name!r} needs numeric symbol values")
    def evaluate(ms):
        values = [alphabet.value(label) for label in ms]
        if name == "max":
            return max(values)
        if name == "min":
            return min(values)
        return sum(values, Fraction(0)) / len(values)
    return SymmetricKernel(
        arity,
        alphabet,
        tuple((ms, evaluate(ms)) for ms in alphabet.multisets(arity)),
    )


def ustatistic(kernel: SymmetricKernel, size: int) -> SymmetricKernel:
    """Arity-`size` statistic summing the kernel over all index subsets."""
    if size < kernel.arity:
        raise ArityMismatch("u-statistic size below kernel arity")
    entries = []
    for ms in kernel.alphabet.multisets(size):
        total = sum(
            (kernel.value(tuple(ms[i] for i in pick))
             for pick in index_subsets(size, kernel.arity)),
            Fraction(0),
        )
        entries.append((ms, total))
    return SymmetricKernel(size, kernel.alphabet, tuple(entries))


def expectation(model, kernel: SymmetricKernel) -> Fraction:
    """E[T] by multiset enumeration; exact."""
    check_horizon(model, kernel.arity)
    total = Fraction(0)
    for ms, value in kernel.entries:
        if value == 0:
            continue
        total += model.multiset_weight(ms) * value
    return total


# -- closed forms for the maximum of a real-valued urn sequence ---------------

def _raw_max_integral(model, free: int, fixed_values) -> Fraction:
    """Integral of max(x_1..x_free, fixed...) against the raw product weight
    measure; the weights are alpha products, not probabilities."""
    alphabet = model.alphabet
    total = Fraction(0)
    for ms in alphabet.multisets(free):
        weight = prod(model.alpha_of(label) for label in ms)
        if weight == 0:
            continue
        weight *= permutation_count(ms)
        values = [alphabet.value(label) for label in ms]
        total += weight * max(list(fixed_values) + values)
    return total


def _tie_constants(model, draws: int, occupied: int):
    """Coefficients c^k e_k(1..draws-1) / prod of denominators for a run of
    `draws` extractions whose measure already carries `occupied` increments."""
    a, c = model.alpha_total, model.c
    den = prod(a + c * (occupied + t - 1) for t in range(1, draws + 1))
    out = []
    for k in range(draws):
        out.append(c**k * elementary_symmetric(draws - 1, k) / den)
    return out


def max_mean_closed_form(model, horizon: int) -> Fraction:
    """E[max of the first `horizon` draws] without enumerating sequences.

    Ties between draws collapse the maximum onto fewer fresh coordinates;
    the tie pattern count gives elementary symmetric sums and the fresh
    coordinates integrate against raw alpha products.
    """
    check_horizon(model, horizon)
    if not model.alphabet.is_numeric():
        raise NonNumericAlphabet("max needs numeric symbol values")
    coeffs = _tie_constants(model, horizon, occupied=0)
    total = Fraction(0)
    for k, n_k in enumerate(coeffs):
        if n_k == 0:
            continue
        total += n_k * _raw_max_integral(model, horizon - k, ())
    return total


def max_cond_closed_form(model, horizon: int, level: int, args) -> Fraction:
    """Conditional expectation of the horizon maximum given `level` observed
    values (level 1 or 2), via the same tie-collapse coefficients.

    Conditioning shortens the run to horizon - level draws and adds one
    weight increment per observed value; expanding the shifted measure
    yields binomially weighted raw integrals with the observed values glued
    into the max.
    """
    if level not in (1, 2):
        raise ValueError("only 1- and 2-point conditioning is supported")
    if len(args) != level:
        raise ArityMismatch(f"level {level} needs exactly {level} arguments")
    check_horizon(model, horizon)
    if not model.alphabet.is_numeric():
        raise NonNumericAlphabet("max needs numeric symbol values")
    values = [model.alphabet.value(label) for label in args]
    free = horizon - level
    if free < 0:
        raise ArityMismatch("more conditioning values than draws")
    if free == 0:
        return max(values)
    c = model.c
    coeffs = _tie_constants(model, free, occupied=level)
    total = Fraction(0)
    for k, n_k in enumerate(coeffs):
        if n_k == 0:
            continue
        inner = Fraction(0)
        for j in range(free - k + 1):
            atom = (level * c) ** (free - k - j)
            if atom == 0:
                continue
            inner += binomial(free - k, j) * atom * _raw_max_integral(model, j, values)
        total += n_k * inner
    return total
