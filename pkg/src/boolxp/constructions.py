"""Families of functions that exhibit each Shapley-value issue at any size.

Each builder starts from one or more seed functions on ``m`` features,
appends the new features last, and picks the lexicographically smallest
qualifying instance (points compared as ``(x1, ..., xm)`` tuples).  The
result records which features should witness the target issue so that
:func:`verify` can check the construction with the exact engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .issues import IssueReport, detect
from .model import (
    BooleanFunction,
    ExplanationProblem,
    Instance,
    entails,
    extend,
    gate,
    index_to_point,
    is_constant,
    point_to_index,
    shift_vars,
)

SEED_KINDS = (
    "conjunction",
    "disjunction",
    "projection",
    "exactly_one_zero",
    "point_indicator",
    "hamming_ball",
)


class ConstructionError(ValueError):
    """A construction's preconditions do not hold."""


@dataclass(frozen=True)
class SeedKind:
    tag: str
    arity: int
    center: tuple[int, ...] | None = None
    radius: int = 1
    include_center: bool = True

    def __post_init__(self):
        if self.tag not in SEED_KINDS:
            raise ConstructionError(f"unknown seed kind {self.tag!r}")
        if self.arity < 1:
            raise ConstructionError("seed arity must be >= 1")
        if self.tag == "exactly_one_zero" and self.arity < 3:
            raise ConstructionError("exactly_one_zero needs arity >= 3")
        if self.tag == "hamming_ball" and self.radius not in (1, 2):
            raise ConstructionError("hamming_ball radius must be 1 or 2")
        if self.center is not None and len(self.center) != self.arity:
            raise ConstructionError("center length must equal the seed arity")


def _distance_from(center: Sequence[int], m: int) -> np.ndarray:
    """Hamming distance of every table index to ``center``."""
    diff = np.arange(1 << m) ^ point_to_index(center)
    dist = np.zeros(1 << m, dtype=np.int8)
    for j in range(m):
        dist += ((diff >> j) & 1).astype(np.int8)
    return dist


def seed(kind: SeedKind) -> BooleanFunction:
    m = kind.arity
    center = kind.center
    if kind.tag == "conjunction":
        table = np.zeros(1 << m, dtype=np.uint8)
        table[-1] = 1
    elif kind.tag == "disjunction":
        table = np.ones(1 << m, dtype=np.uint8)
        table[0] = 0
    elif kind.tag == "projection":
        # x1: the low bit of the index
        table = (np.arange(1 << m) & 1).astype(np.uint8)
    elif kind.tag == "exactly_one_zero":
        table = (_distance_from((1,) * m, m) == 1).astype(np.uint8)
    elif kind.tag == "point_indicator":
        table = np.zeros(1 << m, dtype=np.uint8)
        table[point_to_index(center if center is not None else (0,) * m)] = 1
    else:
        dist = _distance_from(center if center is not None else (0,) * m, m)
        lo = 0 if kind.include_center else 1
        table = ((dist >= lo) & (dist <= kind.radius)).astype(np.uint8)
    return BooleanFunction(m, table)


def conjunction(m: int) -> BooleanFunction:
    return seed(SeedKind("conjunction", m))


def disjunction(m: int) -> BooleanFunction:
    return seed(SeedKind("disjunction", m))


def projection(m: int) -> BooleanFunction:
    return seed(SeedKind("projection", m))


def exactly_one_zero(m: int) -> BooleanFunction:
    return seed(SeedKind("exactly_one_zero", m))


def point_indicator(m: int, center: Sequence[int] | None = None) -> BooleanFunction:
    return seed(SeedKind("point_indicator", m, tuple(center) if center is not None else None))


def hamming_ball(
    m: int, center: Sequence[int] | None = None, radius: int = 1, include_center: bool = True
) -> BooleanFunction:
    c = tuple(center) if center is not None else None
    return seed(SeedKind("hamming_ball", m, c, radius, include_center))


def first_point(f: BooleanFunction, value: int) -> tuple[int, ...] | None:
    """Lexicographically smallest ``(x1, ..., xm)`` with ``f(x) == value``."""
    hits = np.flatnonzero(f.table == value)
    if hits.size == 0:
        return None
    # lexicographic order puts x1 first, i.e. compares bit-reversed indices
    key = np.zeros(hits.size, dtype=np.int64)
    for j in range(f.arity):
        key |= ((hits >> j) & 1) << (f.arity - 1 - j)
    return index_to_point(int(hits[np.argmin(key)]), f.arity)


@dataclass(frozen=True)
class ConstructionResult:
    function: BooleanFunction
    instance: Instance
    target_issue: str
    # feature (or pair) that should witness the target issue
    expected_witness: int | tuple[int, int]
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.function.arity

    @property
    def problem(self) -> ExplanationProblem:
        return ExplanationProblem(self.function, self.instance)


def _require_nonconstant(f: BooleanFunction, name: str) -> None:
    if is_constant(f):
        raise ConstructionError(f"{name} must be non-constant")


def build_i1(k1: BooleanFunction, k2: BooleanFunction) -> ConstructionResult:
    """Gate ``k1`` (selector 0) against a strictly weaker ``k2`` (selector 1)."""
    if k1.arity != k2.arity:
        raise ConstructionError(f"seed arities differ: {k1.arity} vs {k2.arity}")
    if k1.arity < 2:
        raise ConstructionError("seed arity must be >= 2")
    _require_nonconstant(k1, "k1")
    _require_nonconstant(k2, "k2")
    if not entails(k1, k2):
        raise ConstructionError("k1 must entail k2")
    if k1 == k2:
        raise ConstructionError("k1 and k2 must differ")
    u = first_point(k2, 0)
    if u is None:
        raise ConstructionError("k2 has no zero point")
    f = gate(k1, k2)
    n = f.arity
    return ConstructionResult(
        f,
        Instance(u + (1,), 0),
        "I1",
        n,
        {"builder": "build_i1", "m": k1.arity, "k1": k1, "k2": k2},
    )


def build_i3(k1: BooleanFunction) -> ConstructionResult:
    """Gate ``k1`` against a renamed copy of itself on fresh features."""
    _require_nonconstant(k1, "k1")
    m = k1.arity
    f = gate(extend(k1, m), shift_vars(k1, m))
    u = first_point(k1, 1)
    if u is None:
        raise ConstructionError("k1 has no one point")
    return ConstructionResult(
        f,
        Instance(u + u + (1,), 1),
        "I3",
        f.arity,
        {"builder": "build_i3", "m": m, "k1": k1},
    )


def build_i4(k1: BooleanFunction) -> ConstructionResult:
    """Three branches over ``k1`` and its renamed copy, selected by two new features.

    x_{n-1} = 0            -> k1 and copy
    x_{n-1} = 1, x_n = 0   -> k1
    x_{n-1} = 1, x_n = 1   -> copy
    """
    _require_nonconstant(k1, "k1")
    m = k1.arity
    left = extend(k1, m)
    right = shift_vars(k1, m)
    both = left & right
    f = gate(gate(both, left), gate(both, right))
    u = first_point(k1, 0)
    if u is None:
        raise ConstructionError("k1 has no zero point")
    n = f.arity
    return ConstructionResult(
        f,
        Instance(u + u + (1, 1), 0),
        "I4",
        (n - 1, n),
        {"builder": "build_i4", "m": m, "k1": k1},
    )


def build_i5(m: int, center: Sequence[int] | None = None) -> ConstructionResult:
    """Zero when the new feature is 0, else the radius-1 Hamming sphere around ``center``."""
    if m < 3:
        raise ConstructionError("build_i5 needs m >= 3")
    c = tuple(center) if center is not None else (1,) * m
    if len(c) != m:
        raise ConstructionError(f"center must have length {m}")
    sphere = hamming_ball(m, c, radius=1, include_center=False)
    f = gate(BooleanFunction.constant(m, 0), sphere)
    return ConstructionResult(
        f,
        Instance(c + (1,), 0),
        "I5",
        f.arity,
        {"builder": "build_i5", "m": m, "center": c},
    )


def i5_closed_form(m: int) -> Fraction:
    """Shapley value of the new feature in :func:`build_i5`."""
    return Fraction(1, m + 1) * Fraction((1 << (m + 1)) - m - 2, 1 << (m + 1))


def build_i2(
    m: int = 2,
    k1: BooleanFunction | None = None,
    radius: int = 1,
    center: Sequence[int] | None = None,
) -> ConstructionResult:
    """Three branches over ``k1``, a point indicator and a punctured Hamming ball.

    x_{n-1} = 0            -> k1
    x_{n-1} = 1, x_n = 0   -> k1 or indicator(center)
    x_{n-1} = 1, x_n = 1   -> k1 or ball(center, radius) minus center
    """
    if radius not in (1, 2):
        raise ConstructionError("radius must be 1 or 2")
    if radius == 1 and m < 2:
        raise ConstructionError("radius 1 needs m >= 2")
    if radius == 2 and m < 5:
        raise ConstructionError("radius 2 needs m >= 5")
    c = tuple(center) if center is not None else (0,) * m
    if len(c) != m:
        raise ConstructionError(f"center must have length {m}")
    if k1 is None:
        k1 = BooleanFunction.constant(m, 0)
    if k1.arity != m:
        raise ConstructionError(f"k1 arity {k1.arity} does not match m={m}")
    k2 = point_indicator(m, c)
    k3 = hamming_ball(m, c, radius=radius, include_center=False)
    if np.any(k1.table & k2.table):
        raise ConstructionError("k1 and the point indicator must be disjoint")
    if np.any(k1.table & k3.table):
        raise ConstructionError("k1 and the Hamming ball must be disjoint")
    if np.all(k1.table | k2.table) or np.all(k1.table | k3.table):
        raise ConstructionError("k1 or k2 / k1 or k3 must not be constant 1")
    f = gate(gate(k1, k1 | k2), gate(k1, k1 | k3))
    n = f.arity
    return ConstructionResult(
        f,
        Instance(c + (1, 1), 0),
        "I2",
        (n - 1, n),
        {"builder": "build_i2", "m": m, "radius": radius, "center": c, "k1": k1},
    )


def verify(result: ConstructionResult) -> tuple[bool, IssueReport]:
    """Run the exact detector and check the target issue at the expected witness."""
    report = detect(result.problem)
    issue = result.target_issue
    ok = report.has(issue) and result.expected_witness in report.candidates[issue]
    if ok and issue == "I2" and result.provenance.get("radius") == 2:
        n = result.n
        sv = report.shapley
        ok = sv[n - 2] > sv[n - 1] > 0
    if ok and issue == "I1":
        ok = report.shapley[result.n - 1] > 0
    return ok, report


# --- lower bounds on the number of issue-exhibiting functions ----------------

def bound_exponent(issue: str, n: int) -> int:
    """Exponent e such that lower_bound(issue, n) is about 2^e."""
    issue = issue.upper()
    if issue == "I1":
        if n < 3:
            raise ValueError("I1 bound needs n >= 3")
        return 1 << (n - 1)
    if issue == "I3":
        if n < 3 or n % 2 == 0:
            raise ValueError("I3 bound needs odd n >= 3")
        return 1 << ((n - 1) // 2)
    if issue == "I4":
        if n < 4 or n % 2 == 1:
            raise ValueError("I4 bound needs even n >= 4")
        return 1 << ((n - 2) // 2)
    if issue == "I2":
        if n < 4:
            raise ValueError("I2 bound needs n >= 4")
        return (1 << (n - 2)) - (n - 2) - 1
    raise ValueError(f"no lower bound for issue {issue!r}")


def lower_bound(issue: str, n: int) -> int:
    e = bound_exponent(issue, n)
    issue = issue.upper()
    if issue == "I1":
        return (1 << e) - n - 3
    if issue in ("I3", "I4"):
        return (1 << e) - 2
    return (1 << e) - 1


def n_for(issue: str, m: int) -> int:
    """Arity of the constructed function for seed arity ``m``."""
    issue = issue.upper()
    return {"I1": m + 1, "I3": 2 * m + 1, "I4": 2 * m + 2, "I5": m + 1, "I2": m + 2}[issue]


def m_for(issue: str, n: int) -> int:
    """Seed arity for a target arity ``n``; raises on parity or range violations."""
    issue = issue.upper()
    if issue == "I1":
        if n < 3:
            raise ConstructionError("I1 constructions need n >= 3")
        return n - 1
    if issue == "I3":
        if n < 3 or n % 2 == 0:
            raise ConstructionError("I3 constructions need odd n >= 3")
        return (n - 1) // 2
    if issue == "I4":
        if n < 4 or n % 2 == 1:
            raise ConstructionError("I4 constructions need even n >= 4")
        return (n - 2) // 2
    if issue == "I5":
        if n < 4:
            raise ConstructionError("I5 constructions need n >= 4")
        return n - 1
    if issue == "I2":
        if n < 4:
            raise ConstructionError("I2 constructions need n >= 4")
        return n - 2
    raise ConstructionError(f"unknown issue {issue!r}")


def build_default(issue: str, n: int, radius: int = 1, seed_kind: str | None = None) -> ConstructionResult:
    """Construct with the default seeds for a target arity ``n``."""
    issue = issue.upper()
    m = m_for(issue, n)
    if issue == "I1":
        k1 = seed(SeedKind(seed_kind or "conjunction", m))
        for k2 in (projection(m), disjunction(m)):
            if k2 != k1 and entails(k1, k2):
                return build_i1(k1, k2)
        raise ConstructionError(f"no default k2 strictly weaker than the {seed_kind} seed")
    if issue == "I3":
        return build_i3(seed(SeedKind(seed_kind or "conjunction", m)))
    if issue == "I4":
        return build_i4(seed(SeedKind(seed_kind or "conjunction", m)))
    if issue == "I5":
        return build_i5(m)
    if seed_kind is not None:
        raise ConstructionError("I2 takes no seed kind; its k1 defaults to constant 0")
    return build_i2(m, radius=radius)

