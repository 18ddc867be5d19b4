"""Shared test utilities: seeded random kernels, a grid of models covering
every replacement regime, and independent projection oracles (Gram matrix,
i.i.d. inclusion-exclusion) used to cross-check the decomposition."""

from fractions import Fraction as F
from itertools import combinations

from urnova import (
    constant_kernel,
    degenerate_basis,
    expectation,
    from_table,
    indicator_kernel,
    urn_model,
    ustatistic,
)
from urnova.combinatorics import permutation_count, prod
from urnova.linalg import solve_consistent

LABELED = [("u", 0), ("v", 1), ("w", 2), ("x", 3)]


def random_kernel(rng, alphabet, arity, span=9):
    return from_table(
        alphabet,
        arity,
        {ms: F(rng.randint(-span, span), rng.randint(1, span))
         for ms in alphabet.multisets(arity)},
    )


def random_centered(rng, model, arity):
    k = random_kernel(rng, model.alphabet, arity)
    return k.shift(-expectation(model, k))


def random_degenerate(rng, model, arity, tries=20):
    """Random nonzero element of the degenerate class at this arity."""
    basis = degenerate_basis(model, arity)
    for _ in range(tries):
        combo = None
        for b in basis:
            piece = b.scale(F(rng.randint(-4, 4), rng.randint(1, 4)))
            combo = piece if combo is None else combo + piece
        if combo is not None and not combo.is_zero():
            return combo
    raise AssertionError("could not draw a nonzero degenerate kernel")


def model_grid(size, length):
    """One model per replacement regime over a `size`-letter alphabet."""
    symbols = LABELED[:size]
    labels = [s for s, _ in symbols]
    wor_each = -(-2 * length // size)  # enough copies for double extendibility
    return [
        urn_model(symbols, {l: i + 1 for i, l in enumerate(labels)}, F(1), length),
        urn_model(symbols, {l: F(i + 1, 2) for i, l in enumerate(labels)}, F(0), length),
        urn_model(symbols, {l: wor_each for l in labels}, F(-1), length),
        urn_model(symbols, {l: F(2 * i + 1, 3) for i, l in enumerate(labels)}, F(1, 3), length),
    ]


def values_agree(model, left, right, size):
    """Pointwise equality on the support (the a.s. notion of equality)."""
    return all(left.value(ms) == right.value(ms) for ms in model.support_multisets(size))


# -- independent oracles -------------------------------------------------------

def gram_projection(model, statistic, level):
    """Projection of an arity-M statistic onto the span of U-statistics with
    arity-`level` kernels, by exact normal equations on the Gram matrix.
    Level 0 projects onto constants."""
    size = statistic.arity
    weights = {ms: model.multiset_weight(ms) for ms in model.alphabet.multisets(size)}

    def inner(f, g):
        return sum(
            (w * f.value(ms) * g.value(ms) for ms, w in weights.items() if w),
            F(0),
        )

    if level == 0:
        return constant_kernel(model.alphabet, size, expectation(model, statistic))
    basis = [
        ustatistic(indicator_kernel(model.alphabet, ms), size)
        for ms in model.alphabet.multisets(level)
    ]
    basis.append(constant_kernel(model.alphabet, size, 1))
    gram = [[inner(u, v) for v in basis] for u in basis]
    rhs = [inner(u, statistic) for u in basis]
    coeffs = solve_consistent(gram, rhs)
    out = constant_kernel(model.alphabet, size, 0)
    for coef, u in zip(coeffs, basis):
        if coef:
            out = out + u.scale(coef)
    return out


def gram_level(model, statistic, level):
    """Orthogonal layer: projection onto span(level) minus span(level - 1)."""
    hi = gram_projection(model, statistic, level)
    lo = gram_projection(model, statistic, level - 1)
    return hi - lo


def iid_level_kernels(model, statistic):
    """Classical inclusion-exclusion kernels for an i.i.d. model (c = 0),
    written directly against product weights -- independent of the package's
    conditional machinery."""
    assert model.c == 0
    size = statistic.arity
    marginal = {label: model.alpha_of(label) / model.alpha_total
                for label in model.alphabet.labels}

    def fill_in(fixed, free):
        total = F(0)
        for ms in model.alphabet.multisets(free):
            w = permutation_count(ms) * prod(marginal[l] for l in ms)
            total += w * statistic.value(tuple(fixed) + ms)
        return total

    g = [
        {ms: fill_in(ms, size - a) for ms in model.alphabet.multisets(a)}
        for a in range(size + 1)
    ]
    kernels = []
    for s in range(1, size + 1):
        entries = []
        for ms in model.alphabet.multisets(s):
            value = F(0)
            for a in range(s + 1):
                sign = (-1) ** (s - a)
                for pick in combinations(range(s), a):
                    value += sign * g[a][model.alphabet.canon(ms[i] for i in pick)]
            entries.append((ms, value))
        kernels.append(from_table(model.alphabet, s, dict(entries)))
    return kernels
