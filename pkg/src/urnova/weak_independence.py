"""Decide, by exact linear algebra, whether full-overlap degeneracy of
symmetric kernels forces all partial-overlap symmetrized conditionals to
vanish -- the property that makes a model's statistics split into
orthogonal degenerate layers.

The decision at level n: compute a basis of the kernels killed by one-step
prediction, then evaluate every admissible partial-overlap conditional of
every basis kernel and collect nonzero witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .conditional import cond_expectation, symmetrized_offdiagonal
from .errors import HorizonTooShort, ValidationError
from .kernels import SymmetricKernel, from_table
from .linalg import nullspace
from .models import MixtureModel


def degenerate_basis(model, n: int):
    """Basis of arity-n kernels with vanishing one-step predictive average.

    The constraint map sends a kernel phi to the function
    x -> sum_a P(next = a | x) * phi(x + a) on observed (n-1)-multisets;
    rows run over the support, columns over every size-n multiset, and the
    null space comes out of exact row reduction with deterministic
    ordering (pivots scaled so each basis vector leads with 1).
    """
    if n < 1:
        raise ValidationError("level must be at least 1")
    if model.length is not None and n > model.length:
        raise HorizonTooShort(f"level {n} needs {n} coordinates")
    alphabet = model.alphabet
    columns = list(alphabet.multisets(n))
    col_index = {ms: i for i, ms in enumerate(columns)}
    rows = []
    for observed in model.support_multisets(n - 1):
        law = model.predictive(observed)
        row = [Fraction(0)] * len(columns)
        for label, p in law.items():
            if p == 0:
                continue
            row[col_index[alphabet.canon(observed + (label,))]] += p
        rows.append(row)
    basis = []
    for vec in nullspace(rows, ncols=len(columns)):
        entries = tuple((ms, vec[i]) for i, ms in enumerate(columns))
        basis.append(SymmetricKernel(n, alphabet, entries))
    return basis


@dataclass(frozen=True)
class Violation:
    basis_index: int
    overlap: int
    witness: tuple
    value: Fraction


@dataclass(frozen=True)
class DegeneracyReport:
    level: int
    basis: tuple
    violations: tuple
    unchecked_overlaps: tuple  # overlaps whose conditional needs more horizon

    @property
    def passed(self) -> bool:
        return not self.violations


def check_weak_independence(model, n: int) -> DegeneracyReport:
    """Evaluate every admissible partial-overlap symmetrized conditional of
    every degenerate basis kernel.  Exact zeros everywhere mean the model
    passes at this level (within its horizon); overlaps that would need
    coordinates beyond the horizon are reported as unchecked, never skipped
    silently."""
    basis = degenerate_basis(model, n)
    violations = []
    unchecked = []
    for r in range(n):
        if model.length is not None and 2 * n - r - 1 > model.length:
            unchecked.append(r)
            continue
        for b, kernel in enumerate(basis):
            tilde = symmetrized_offdiagonal(model, kernel, r)
            for ms in model.support_multisets(n - 1):
                value = tilde.value(ms)
                if value != 0:
                    violations.append(Violation(b, r, ms, value))
    return DegeneracyReport(n, tuple(basis), tuple(violations), tuple(unchecked))


# -- the two-point mixture family that fails the check -------------------------

def witness_kernel(epsilon) -> SymmetricKernel:
    """Arity-2 kernel on {0,1} whose one-coordinate conditionals vanish
    under the mixture law while a disjoint-coordinate conditional does not.

    Off-diagonal entries are 1; the diagonal entries are chosen to cancel
    the one-coordinate conditionals exactly.
    """
    epsilon = Fraction(epsilon)
    if not (0 < epsilon < 1):
        raise ValidationError("epsilon must lie strictly inside (0, 1)")
    phi_11 = 1 - Fraction(3, 2) / epsilon
    phi_00 = (epsilon**2 - Fraction(3, 2) * epsilon) / (3 - 3 * epsilon + epsilon**2)
    mix = MixtureModel(epsilon)
    return from_table(
        mix.alphabet,
        2,
        {("0", "0"): phi_00, ("0", "1"): Fraction(1), ("1", "1"): phi_11},
    )


def witness_conditional_closed_form(epsilon) -> Fraction:
    """Value of the disjoint-coordinate conditional at observed 0; negative
    for every epsilon in (0, 1) and vanishing as epsilon -> 1."""
    epsilon = Fraction(epsilon)
    num = epsilon**3 * (epsilon - 1)
    den = (3 - 3 * epsilon + epsilon**2) * (epsilon - epsilon**2 / 2)
    return Fraction(1, 8) * num / den


@dataclass(frozen=True)
class WitnessReport:
    epsilon: Fraction
    given_second_zero: Fraction
    given_second_one: Fraction
    given_third_zero: Fraction
    closed_form: Fraction

    @property
    def passed(self) -> bool:
        return (
            self.given_second_zero == 0
            and self.given_second_one == 0
            and self.given_third_zero == self.closed_form
            and self.given_third_zero < 0
        )


def witness_report(epsilon) -> WitnessReport:
    """Exact Bayes evaluation of the witness kernel's conditionals under
    the mixture law, next to the closed form they must reproduce."""
    epsilon = Fraction(epsilon)
    mix = MixtureModel(epsilon)
    kernel = witness_kernel(epsilon)
    return WitnessReport(
        epsilon=epsilon,
        given_second_zero=cond_expectation(mix, kernel, common=("0",)),
        given_second_one=cond_expectation(mix, kernel, common=("1",)),
        given_third_zero=cond_expectation(mix, kernel, common=(), extra=("0",)),
        closed_form=witness_conditional_closed_form(epsilon),
    )
