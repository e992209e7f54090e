"""Detection of the five ways Shapley values can misrepresent feature relevancy.

I1  an irrelevant feature with a non-zero Shapley value
I2  an irrelevant feature with larger |Sv| than some relevant feature
I3  a relevant feature with a zero Shapley value
I4  I1 and I3 at once (an irrelevant non-zero and a relevant zero feature)
I5  an irrelevant feature with strictly the largest |Sv| of all features

The reported witness is the lowest qualifying feature index (pairs in
lexicographic order); all qualifying candidates are kept alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import ExplanationProblem
from .shapley import phi_table, shapley_all
from .xplain import ExplanationSets, Relevancy, explain, is_irrelevant, is_relevant

ISSUES = ("I1", "I2", "I3", "I4", "I5")


@dataclass(frozen=True)
class IssueReport:
    shapley: tuple[Fraction, ...]
    relevancy: tuple[Relevancy, ...]
    witnesses: dict[str, int | tuple[int, int] | None] = field(default_factory=dict)
    # every qualifying feature (or pair) per issue, ascending
    candidates: dict[str, list] = field(default_factory=dict)

    @property
    def flags(self) -> dict[str, bool]:
        return {name: self.witnesses.get(name) is not None for name in ISSUES}

    def has(self, issue: str) -> bool:
        return self.witnesses.get(issue.upper()) is not None

    def fired(self) -> list[str]:
        return [name for name in ISSUES if self.has(name)]


def _singles(sv, irr, pred):
    return [i for i in range(1, len(sv) + 1) if pred(i, sv, irr)]


def _pairs(sv, irr, pred):
    n = len(sv)
    return [
        (a, b)
        for a in range(1, n + 1)
        for b in range(1, n + 1)
        if a != b and pred(a, b, sv, irr)
    ]


def _is_i1(i, sv, irr):
    return irr[i - 1] and sv[i - 1] != 0


def _is_i3(i, sv, irr):
    return not irr[i - 1] and sv[i - 1] == 0


def _is_i2(a, b, sv, irr):
    return irr[a - 1] and not irr[b - 1] and abs(sv[a - 1]) > abs(sv[b - 1])


def _is_i4(a, b, sv, irr):
    return _is_i1(a, sv, irr) and _is_i3(b, sv, irr)


def _is_i5(i, sv, irr):
    top = abs(sv[i - 1])
    # top > 0 only matters for n = 1, where "all others" is empty
    return irr[i - 1] and top > 0 and all(abs(s) < top for j, s in enumerate(sv) if j != i - 1)


def classify_issues(shapley, relevancy) -> IssueReport:
    """Evaluate the issue predicates on a given Sv vector and relevancy labels."""
    sv = tuple(Fraction(s) for s in shapley)
    labels = tuple(relevancy)
    if len(sv) != len(labels):
        raise ValueError("shapley and relevancy lengths differ")
    irr = [is_irrelevant(label) for label in labels]
    candidates = {
        "I1": _singles(sv, irr, _is_i1),
        "I2": _pairs(sv, irr, _is_i2),
        "I3": _singles(sv, irr, _is_i3),
        "I4": _pairs(sv, irr, _is_i4),
        "I5": _singles(sv, irr, _is_i5),
    }
    witnesses = {name: (found[0] if found else None) for name, found in candidates.items()}
    return IssueReport(sv, labels, witnesses, candidates)


def detect(problem: ExplanationProblem, sets: ExplanationSets | None = None) -> IssueReport:
    if sets is None:
        sets = explain(problem)
    sv = shapley_all(problem, phi_table(problem))
    return classify_issues(sv, sets.relevancy)


def implies_i2(report: IssueReport) -> bool:
    """I5 implies I2; False flags a detector defect."""
    return not report.has("I5") or report.has("I2")


def witness_sound(report: IssueReport) -> bool:
    """Re-check every stored witness against the report's own Sv and labels."""
    sv = report.shapley
    rel = [is_relevant(label) for label in report.relevancy]
    w = report.witnesses
    checks = []
    if w.get("I1") is not None:
        i = w["I1"]
        checks.append(not rel[i - 1] and sv[i - 1] != 0)
    if w.get("I2") is not None:
        a, b = w["I2"]
        checks.append(not rel[a - 1] and rel[b - 1] and abs(sv[a - 1]) > abs(sv[b - 1]))
    if w.get("I3") is not None:
        i = w["I3"]
        checks.append(rel[i - 1] and sv[i - 1] == 0)
    if w.get("I4") is not None:
        a, b = w["I4"]
        checks.append(a != b and not rel[a - 1] and sv[a - 1] != 0 and rel[b - 1] and sv[b - 1] == 0)
    if w.get("I5") is not None:
        i = w["I5"]
        checks.append(
            not rel[i - 1]
            and sv[i - 1] != 0
            and all(abs(sv[j]) < abs(sv[i - 1]) for j in range(len(sv)) if j != i - 1)
        )
    return all(checks)
