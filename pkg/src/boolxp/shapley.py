"""Exact Shapley values under the uniform input distribution.

For a fixed instance ``v`` and coalition ``S`` the value function is the
mean of the classifier over the points that agree with ``v`` on ``S``.
All arithmetic is exact: counts are integers, results are ``Fraction``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .lattice import axis_of, popcounts, subset_sum
from .model import ExplanationProblem, evaluate

BRUTE_MAX_ARITY = 12


@dataclass(frozen=True)
class PhiTable:
    """``sums[S]`` counts the 1-points among those agreeing with the instance on S."""

    problem: ExplanationProblem
    sums: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.problem.n

    def phi(self, mask: int) -> Fraction:
        free = self.n - bin(mask).count("1")
        return Fraction(int(self.sums[mask]), 1 << free)


def phi_table(problem: ExplanationProblem) -> PhiTable:
    n = problem.n
    v = problem.instance.index
    # reindex by disagreement d = x ^ v; agreeing on S means d avoids S,
    # i.e. d is a subset of the complement of S
    disagree = problem.function.table[np.arange(1 << n) ^ v].astype(np.int32)
    below = subset_sum(disagree, n)
    sums = below[::-1].copy()  # complement of S is full - S, reversal maps S -> full ^ S
    sums.setflags(write=False)
    return PhiTable(problem, sums)


@lru_cache(maxsize=None)
def _coalition_weights(n: int) -> tuple[int, ...]:
    """``k! (n-k-1)! 2^k``: the weight numerators over the common denominator n! 2^n."""
    return tuple(factorial(k) * factorial(n - k - 1) << k for k in range(n))


def _sv_from_table(table: PhiTable, i: int) -> Fraction:
    n = table.n
    axis = axis_of(i - 1, n)
    shaped = table.sums.reshape((2,) * n)
    without = np.take(shaped, 0, axis=axis).reshape(-1).astype(np.int64)
    with_i = np.take(shaped, 1, axis=axis).reshape(-1).astype(np.int64)
    sizes = np.take(popcounts(n).reshape((2,) * n), 0, axis=axis).reshape(-1)
    # phi(S+i) - phi(S) = (2 sums[S+i] - sums[S]) / 2^(n-|S|)
    diff = 2 * with_i - without
    # float64 bincount is exact here: every partial sum is an integer below
    # 2^(n+1) * 2^(n-1) <= 2^48 for n <= 24
    by_size = np.bincount(sizes, weights=diff, minlength=n)
    weights = _coalition_weights(n)
    numerator = sum(w * int(round(c)) for w, c in zip(weights, by_size.tolist()))
    return Fraction(numerator, factorial(n) << n)


def shapley_value(problem: ExplanationProblem, i: int, table: PhiTable | None = None) -> Fraction:
    if not 1 <= i <= problem.n:
        raise IndexError(f"feature {i} out of range 1..{problem.n}")
    if table is None:
        table = phi_table(problem)
    return _sv_from_table(table, i)


def shapley_all(problem: ExplanationProblem, table: PhiTable | None = None) -> list[Fraction]:
    if table is None:
        table = phi_table(problem)
    return [_sv_from_table(table, i) for i in range(1, problem.n + 1)]


# --- test oracle -------------------------------------------------------------

def _phi_brute(problem: ExplanationProblem, fixed: frozenset[int]) -> Fraction:
    f, v, n = problem.function, problem.instance.point, problem.n
    free = [j for j in range(n) if j not in fixed]
    total = 0
    for values in itertools.product((0, 1), repeat=len(free)):
        x = list(v)
        for j, b in zip(free, values):
            x[j] = b
        total += evaluate(f, x)
    return Fraction(total, 2 ** len(free))


def shapley_brute(problem: ExplanationProblem, i: int) -> Fraction:
    """Direct double enumeration over coalitions and points.  Slow; tests only."""
    n = problem.n
    if n > BRUTE_MAX_ARITY:
        raise ValueError(f"brute-force oracle limited to n <= {BRUTE_MAX_ARITY}")
    if not 1 <= i <= n:
        raise IndexError(f"feature {i} out of range 1..{n}")
    target = i - 1
    others = [j for j in range(n) if j != target]
    total = Fraction(0)
    for k in range(n):
        weight = Fraction(factorial(k) * factorial(n - k - 1), factorial(n))
        for subset in itertools.combinations(others, k):
            s = frozenset(subset)
            total += weight * (_phi_brute(problem, s | {target}) - _phi_brute(problem, s))
    return total


def phi_brute(problem: ExplanationProblem, mask: int) -> Fraction:
    return _phi_brute(problem, frozenset(j for j in range(problem.n) if mask >> j & 1))


def count_agreeing_ones(problem: ExplanationProblem, mask: int) -> int:
    """Ones of the classifier among points agreeing with the instance on ``mask``."""
    f, v = problem.function, problem.instance.index
    n = problem.n
    return sum(
        int(f.table[x]) for x in range(1 << n) if (x ^ v) & mask == 0
    )

