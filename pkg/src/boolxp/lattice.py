"""Folds over the subset lattice of an n-bit mask space.

Arrays here are indexed by masks with feature 1 in bit 0.  Reshaping a
length-2^n array to ``(2,) * n`` in C order puts bit ``j`` on axis
``n - 1 - j``, so one pass per axis visits every (mask, mask | bit) pair.
"""

from __future__ import annotations

import numpy as np


def axis_of(bit: int, n: int) -> int:
    return n - 1 - bit


def subset_sum(values: np.ndarray, n: int) -> np.ndarray:
    """Return ``out[T] = sum(values[d] for d subset of T)`` in O(n 2^n)."""
    out = np.array(values, copy=True).reshape((2,) * n)
    for axis in range(n):
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[axis] = 0
        hi[axis] = 1
        out[tuple(hi)] += out[tuple(lo)]
    return out.reshape(-1)


def subset_all(values: np.ndarray, n: int) -> np.ndarray:
    """Return ``out[T] = all(values[d] for d subset of T)`` for a boolean array."""
    out = np.array(values, dtype=bool, copy=True).reshape((2,) * n)
    for axis in range(n):
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[axis] = 0
        hi[axis] = 1
        out[tuple(hi)] &= out[tuple(lo)]
    return out.reshape(-1)


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcounts(n: int) -> np.ndarray:
    """Read-only popcount of every mask in [0, 2^n)."""
    pc = _POPCOUNT_CACHE.get(n)
    if pc is None:
        pc = np.zeros(1, dtype=np.int8)
        for _ in range(n):
            pc = np.concatenate([pc, pc + 1])
        pc.setflags(write=False)
        _POPCOUNT_CACHE[n] = pc
    return pc


def minimal_true(pred: np.ndarray, n: int) -> np.ndarray:
    """Masks where ``pred`` holds and fails after removing any single member.

    For an upward-closed predicate these are exactly the subset-minimal masks.
    """
    view = np.asarray(pred, dtype=bool).reshape((2,) * n)
    out = view.copy()
    for axis in range(n):
        hi = [slice(None)] * n
        lo = [slice(None)] * n
        hi[axis] = 1
        lo[axis] = 0
        out[tuple(hi)] &= ~view[tuple(lo)]
    return np.flatnonzero(out.reshape(-1))


def hitting_map(family: list[int], n: int) -> np.ndarray:
    """Boolean map over masks: True iff the mask intersects every set in ``family``."""
    masks = np.arange(1 << n, dtype=np.int64)
    hits = np.ones(1 << n, dtype=bool)
    for s in family:
        hits &= (masks & s) != 0
    return hits


def minimal_hitting_sets(family: list[int], n: int) -> list[int]:
    """All subset-minimal hitting sets of ``family``, ascending by mask.

    A family containing the empty set has no hitting set; an empty family is
    hit by the empty set alone.
    """
    return [int(s) for s in minimal_true(hitting_map(family, n), n)]
