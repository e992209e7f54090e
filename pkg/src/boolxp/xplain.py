"""Abductive and contrastive explanations over a full truth table.

A set S of features is a weak abductive explanation (WAXp) when fixing the
features in S to their instance values forces the prediction, and a weak
contrastive explanation (WCXp) when freeing the features in S allows the
prediction to change.  The subset-minimal ones are AXp's and CXp's.
Feature sets are masks with feature 1 in bit 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .lattice import minimal_hitting_sets, minimal_true, subset_all
from .model import ExplanationProblem, evaluate, mask_to_features


class Relevancy(str, Enum):
    NECESSARY = "necessary"
    RELEVANT = "relevant"
    IRRELEVANT = "irrelevant"


@dataclass(frozen=True)
class WaxpMap:
    problem: ExplanationProblem
    fixed_ok: np.ndarray = field(repr=False)

    def __getitem__(self, mask: int) -> bool:
        return bool(self.fixed_ok[mask])


def waxp_map(problem: ExplanationProblem) -> WaxpMap:
    n = problem.n
    v = problem.instance.index
    c = problem.instance.prediction
    # same disagreement reindexing as the value-function fold
    keeps = problem.function.table[np.arange(1 << n) ^ v] == c
    ok = subset_all(keeps, n)[::-1].copy()
    ok.setflags(write=False)
    return WaxpMap(problem, ok)


def is_waxp(problem: ExplanationProblem, mask: int, wmap: WaxpMap | None = None) -> bool:
    if wmap is None:
        wmap = waxp_map(problem)
    return wmap[mask]


def is_wcxp(problem: ExplanationProblem, mask: int, wmap: WaxpMap | None = None) -> bool:
    if wmap is None:
        wmap = waxp_map(problem)
    return not wmap[problem.full_mask ^ mask]


def enumerate_axps(problem: ExplanationProblem, wmap: WaxpMap | None = None) -> list[int]:
    if wmap is None:
        wmap = waxp_map(problem)
    return [int(s) for s in minimal_true(wmap.fixed_ok, problem.n)]


def enumerate_cxps(problem: ExplanationProblem, wmap: WaxpMap | None = None) -> list[int]:
    if wmap is None:
        wmap = waxp_map(problem)
    wcxp = ~wmap.fixed_ok[::-1]
    return [int(s) for s in minimal_true(wcxp, problem.n)]


def _union(family: list[int]) -> int:
    out = 0
    for s in family:
        out |= s
    return out


def classify_features(problem: ExplanationProblem, axps: list[int] | None = None) -> list[Relevancy]:
    """Per-feature label, index 0 for feature 1."""
    if axps is None:
        axps = enumerate_axps(problem)
    some = _union(axps)
    every = problem.full_mask
    for s in axps:
        every &= s
    labels = []
    for j in range(problem.n):
        bit = 1 << j
        if every & bit:
            labels.append(Relevancy.NECESSARY)
        elif some & bit:
            labels.append(Relevancy.RELEVANT)
        else:
            labels.append(Relevancy.IRRELEVANT)
    return labels


def is_relevant(label: Relevancy) -> bool:
    return label is not Relevancy.IRRELEVANT


def is_irrelevant(label: Relevancy) -> bool:
    return label is Relevancy.IRRELEVANT


@dataclass(frozen=True)
class ExplanationSets:
    axps: list[int]
    cxps: list[int]
    relevancy: list[Relevancy]

    def axp_features(self) -> list[tuple[int, ...]]:
        return [mask_to_features(s) for s in self.axps]

    def cxp_features(self) -> list[tuple[int, ...]]:
        return [mask_to_features(s) for s in self.cxps]

    def relevant(self, i: int) -> bool:
        return is_relevant(self.relevancy[i - 1])

    def irrelevant(self, i: int) -> bool:
        return is_irrelevant(self.relevancy[i - 1])


def explain(problem: ExplanationProblem) -> ExplanationSets:
    wmap = waxp_map(problem)
    axps = enumerate_axps(problem, wmap)
    cxps = enumerate_cxps(problem, wmap)
    return ExplanationSets(axps, cxps, classify_features(problem, axps))


def check_duality(problem: ExplanationProblem, sets: ExplanationSets | None = None) -> bool:
    """Unions agree and each family is the minimal hitting sets of the other."""
    if sets is None:
        sets = explain(problem)
    n = problem.n
    return (
        _union(sets.axps) == _union(sets.cxps)
        and minimal_hitting_sets(sets.axps, n) == sets.cxps
        and minimal_hitting_sets(sets.cxps, n) == sets.axps
    )


# --- brute-force oracles -------------------------------------------------------

def waxp_brute(problem: ExplanationProblem, mask: int) -> bool:
    """Check the weak abductive predicate point by point."""
    f, v, c, n = problem.function, problem.instance.point, problem.instance.prediction, problem.n
    for x in itertools.product((0, 1), repeat=n):
        if all(x[j] == v[j] for j in range(n) if mask >> j & 1) and evaluate(f, x) != c:
            return False
    return True


def wcxp_brute(problem: ExplanationProblem, mask: int) -> bool:
    """Is there a point agreeing with the instance outside ``mask`` with another class?"""
    f, v, c, n = problem.function, problem.instance.point, problem.instance.prediction, problem.n
    for x in itertools.product((0, 1), repeat=n):
        if all(x[j] == v[j] for j in range(n) if not mask >> j & 1) and evaluate(f, x) != c:
            return True
    return False


def minimal_by_all_subsets(pred, n: int) -> list[int]:
    """Masks satisfying ``pred`` with no proper subset satisfying it."""
    good = [s for s in range(1 << n) if pred(s)]
    good_set = set(good)
    out = []
    for s in good:
        sub = (s - 1) & s
        minimal = True
        while True:
            if sub != s and sub in good_set:
                minimal = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & s
        if minimal:
            out.append(s)
    return out
