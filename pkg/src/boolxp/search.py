"""Exhaustive and sampled surveys over all Boolean functions of small arity.

Functions are numbered by their table read as a little-endian bit string:
function ``k`` has ``table[idx] = (k >> idx) & 1``.  The survey analyses
every (function, instance) pair in batches: value-function sums and WAXp
maps are folded over the subset lattice for a whole block of functions at
once, and Shapley values are kept as integer numerators over the shared
denominator ``m! 2^m`` so that every comparison stays exact.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import factorial

import numpy as np

from .constructions import ConstructionResult
from .issues import ISSUES, detect
from .lattice import popcounts
from .model import BooleanFunction, ExplanationProblem, Instance, index_to_point
from .xplain import check_duality, explain

EXHAUSTIVE_MAX_M = 4
SAMPLED_MAX_M = 8
WORKERS_ENV = "BOOLXP_WORKERS"


class SurveyScaleError(ValueError):
    """Exhaustive survey requested above the cap without sampling."""


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def function_tables(lo: int, hi: int, m: int) -> np.ndarray:
    """Tables of functions ``lo .. hi-1`` as a (count, 2^m) uint8 array."""
    ks = np.arange(lo, hi, dtype=np.uint64)[:, None]
    shifts = np.arange(1 << m, dtype=np.uint64)[None, :]
    return ((ks >> shifts) & np.uint64(1)).astype(np.uint8)


def _fold(arr: np.ndarray, m: int, op) -> np.ndarray:
    """Subset fold along the last axis, which holds 2^m mask entries."""
    lead = arr.shape[:-1]
    out = arr.reshape(lead + (2,) * m)
    k = len(lead)
    for axis in range(k, k + m):
        lo = [slice(None)] * (k + m)
        hi = [slice(None)] * (k + m)
        lo[axis] = 0
        hi[axis] = 1
        op(out[tuple(hi)], out[tuple(lo)], out=out[tuple(hi)])
    return out.reshape(arr.shape)


def _weights(m: int) -> np.ndarray:
    """Per-mask integer weight k! (m-k-1)! 2^k, with k the mask size."""
    per_size = np.array(
        [factorial(k) * factorial(m - k - 1) << k for k in range(m)] + [0], dtype=np.int64
    )
    return per_size[popcounts(m)]


def analyze_batch(tables: np.ndarray, m: int) -> np.ndarray:
    """Issue flags for every (function, instance) pair.

    Returns a bool array of shape (count, 2^m, 5) with columns I1..I5.
    """
    count, size = tables.shape
    idx = np.arange(size)
    # disagreement reindexing: [f, v, d] -> table[f, v ^ d]
    gathered = tables[:, idx[:, None] ^ idx[None, :]]
    pred = tables[:, :, None]

    sums = _fold(gathered.astype(np.int32), m, np.add)[:, :, ::-1]
    ok = _fold(gathered == pred, m, np.logical_and)[:, :, ::-1]

    # subset-minimal WAXp masks, then relevancy per feature
    minimal = ok.copy()
    sums_sv = np.empty((count, size, m), dtype=np.int64)
    relevant = np.empty((count, size, m), dtype=bool)
    weights = _weights(m)
    shaped_ok = ok.reshape(count, size, *(2,) * m)
    shaped_min = minimal.reshape(count, size, *(2,) * m)
    for j in range(m):
        axis = 2 + (m - 1 - j)
        hi = [slice(None)] * (m + 2)
        lo = [slice(None)] * (m + 2)
        hi[axis] = 1
        lo[axis] = 0
        shaped_min[tuple(hi)] &= ~shaped_ok[tuple(lo)]
    bits = (idx[None, :] >> np.arange(m)[:, None]) & 1  # (m, size)
    for j in range(m):
        relevant[:, :, j] = np.any(minimal & bits[j].astype(bool), axis=2)
        without = (idx & (1 << j)) == 0
        lo_masks = idx[without]
        hi_masks = lo_masks | (1 << j)
        diff = 2 * sums[:, :, hi_masks].astype(np.int64) - sums[:, :, lo_masks]
        sums_sv[:, :, j] = diff @ weights[lo_masks]

    mag = np.abs(sums_sv)
    irr = ~relevant
    nonzero = sums_sv != 0
    i1 = np.any(irr & nonzero, axis=2)
    i3 = np.any(relevant & ~nonzero, axis=2)
    big = np.iinfo(np.int64).max
    irr_max = np.where(irr, mag, -1).max(axis=2)
    rel_min = np.where(relevant, mag, big).min(axis=2)
    i2 = irr_max > rel_min
    i4 = i1 & i3
    top = mag.max(axis=2)
    unique_top = (mag == top[:, :, None]).sum(axis=2) == 1
    arg = mag.argmax(axis=2)
    top_irr = np.take_along_axis(irr, arg[:, :, None], axis=2)[:, :, 0]
    i5 = unique_top & top_irr & (top > 0)
    return np.stack([i1, i2, i3, i4, i5], axis=2)


@dataclass
class SurveyResult:
    m: int
    functions_scanned: int
    pairs_scanned: int
    function_counts: dict[str, int]
    pair_counts: dict[str, int]
    implication_violations: int = 0
    sample: int | None = None
    seed: int | None = None
    duality_checked: int = 0
    duality_failures: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = True) -> dict:
        out = asdict(self)
        if not timing:
            out.pop("elapsed")
        return out


def _empty_counts() -> dict[str, int]:
    return {name: 0 for name in ISSUES}


def _scan_tables(tables: np.ndarray, m: int, with_duality: bool) -> dict:
    nonconst = tables.min(axis=1) != tables.max(axis=1)
    live = tables[nonconst]
    fn_counts = _empty_counts()
    pair_counts = _empty_counts()
    violations = 0
    checked = failures = 0
    if live.shape[0]:
        flags = analyze_batch(live, m)
        per_fn = flags.any(axis=1)
        for col, name in enumerate(ISSUES):
            fn_counts[name] = int(per_fn[:, col].sum())
            pair_counts[name] = int(flags[:, :, col].sum())
        i1, i2, i3, i4, i5 = (flags[:, :, c] for c in range(5))
        violations = int(np.sum((i5 & ~i2) | (i4 & ~(i1 & i3))))
    if with_duality:
        for row in tables:
            f = BooleanFunction(m, row)
            for v in range(1 << m):
                checked += 1
                if not check_duality(ExplanationProblem.at(f, index_to_point(v, m))):
                    failures += 1
    return {
        "functions": int(tables.shape[0]),
        "fn_counts": fn_counts,
        "pair_counts": pair_counts,
        "violations": violations,
        "checked": checked,
        "failures": failures,
    }


def _scan_range(args) -> dict:
    m, lo, hi, with_duality = args
    return _scan_tables(function_tables(lo, hi, m), m, with_duality)


def _scan_block(args) -> dict:
    m, tables, with_duality = args
    return _scan_tables(tables, m, with_duality)


def _chunk_bounds(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def _chunk_size(m: int) -> int:
    # keep the (count, 2^m, 2^m) working arrays around a few MB
    return max(1, (1 << 16) >> (2 * m))


def sample_tables(m: int, sample: int, seed: int | None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(sample, 1 << m), dtype=np.uint8)


def survey(
    m: int,
    sample: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
    check_duality: bool = False,
) -> SurveyResult:
    """Count functions and (function, instance) pairs exhibiting each issue."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if sample is None and m > EXHAUSTIVE_MAX_M:
        raise SurveyScaleError(
            f"exhaustive survey is capped at m={EXHAUSTIVE_MAX_M} "
            f"(2^{1 << m} functions at m={m}); pass a sample size"
        )
    if sample is not None and m > SAMPLED_MAX_M:
        raise SurveyScaleError(f"sampled survey is capped at m={SAMPLED_MAX_M}")
    if sample is not None and sample < 1:
        raise ValueError("sample size must be >= 1")
    workers = default_workers() if workers is None else max(1, workers)
    start = time.perf_counter()
    chunk = _chunk_size(m)
    if sample is None:
        total = 1 << (1 << m)
        tasks = [(m, lo, hi, check_duality) for lo, hi in _chunk_bounds(total, chunk)]
        fn = _scan_range
    else:
        tables = sample_tables(m, sample, seed)
        tasks = [(m, tables[lo:hi], check_duality) for lo, hi in _chunk_bounds(sample, chunk)]
        fn = _scan_block
    if workers == 1 or len(tasks) == 1:
        parts = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, tasks))
    fn_counts = _empty_counts()
    pair_counts = _empty_counts()
    scanned = violations = checked = failures = 0
    for part in parts:
        scanned += part["functions"]
        violations += part["violations"]
        checked += part["checked"]
        failures += part["failures"]
        for name in ISSUES:
            fn_counts[name] += part["fn_counts"][name]
            pair_counts[name] += part["pair_counts"][name]
    return SurveyResult(
        m=m,
        functions_scanned=scanned,
        pairs_scanned=scanned << m,
        function_counts=fn_counts,
        pair_counts=pair_counts,
        implication_violations=violations,
        sample=sample,
        seed=seed,
        duality_checked=checked,
        duality_failures=failures,
        elapsed=time.perf_counter() - start,
    )


def find_first(m: int, issue: str) -> ConstructionResult | None:
    """First function (by table bit string) and instance (by index) exhibiting ``issue``."""
    if not 1 <= m <= EXHAUSTIVE_MAX_M:
        raise SurveyScaleError(f"find_first supports 1 <= m <= {EXHAUSTIVE_MAX_M}")
    issue = issue.upper()
    col = ISSUES.index(issue)
    total = 1 << (1 << m)
    for lo, hi in _chunk_bounds(total, _chunk_size(m)):
        # rank r spells its bit string with entry 0 as the most significant bit
        tables = np.ascontiguousarray(function_tables(lo, hi, m)[:, ::-1])
        flags = analyze_batch(tables, m)[:, :, col]
        hits = np.argwhere(flags)
        if hits.size:
            k, v = (int(x) for x in hits[0])
            f = BooleanFunction(m, tables[k])
            point = index_to_point(v, m)
            problem = ExplanationProblem.at(f, point)
            report = detect(problem, explain(problem))
            return ConstructionResult(
                f,
                Instance(point, problem.instance.prediction),
                issue,
                report.witnesses[issue],
                {
                    "builder": "find_first",
                    "m": m,
                    "rank": lo + k,
                    "function_number": int(tables[k].astype(np.int64) @ (1 << np.arange(1 << m))),
                    "instance_index": v,
                },
            )
    return None
