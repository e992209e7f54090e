"""Boolean classifiers as explicit truth tables.

Point encoding is global: feature 1 is the least-significant bit of the
table index, feature ``j`` is bit ``j - 1``.  So for ``m = 3`` the table
index ``5 = 0b101`` is the point ``(x1, x2, x3) = (1, 0, 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_ARITY = 24


class DimensionError(ValueError):
    """Arity or point-length mismatch."""


class CapacityError(ValueError):
    """Requested arity above the configured cap."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _check_arity(m: int, cap: int = MAX_ARITY) -> None:
    if m < 1:
        raise DimensionError(f"arity must be >= 1, got {m}")
    if m > cap:
        raise CapacityError(f"arity {m} exceeds cap {cap}")


def point_to_index(point: Sequence[int]) -> int:
    idx = 0
    for j, bit in enumerate(point):
        if bit not in (0, 1):
            raise ValueError(f"point entries must be 0/1, got {bit!r}")
        idx |= int(bit) << j
    return idx


def index_to_point(idx: int, m: int) -> tuple[int, ...]:
    return tuple((idx >> j) & 1 for j in range(m))


def mask_to_features(mask: int) -> tuple[int, ...]:
    """1-based feature indices of a mask, ascending."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j + 1)
        mask >>= 1
        j += 1
    return tuple(out)


def features_to_mask(features: Iterable[int]) -> int:
    mask = 0
    for i in features:
        if i < 1:
            raise ValueError(f"features are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """A map B^m -> B stored as a read-only uint8 table of length 2^m."""

    arity: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_arity(self.arity)
        table = np.ascontiguousarray(self.table, dtype=np.uint8)
        if table.shape != (1 << self.arity,):
            raise DimensionError(
                f"table length {table.size} does not match 2^{self.arity}"
            )
        if table.size and table.max() > 1:
            raise ValueError("table entries must be 0 or 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | str) -> "BooleanFunction":
        if isinstance(bits, str):
            bits = [int(c) for c in bits]
        size = len(bits)
        m = size.bit_length() - 1
        if size < 2 or (1 << m) != size:
            raise DimensionError(f"table length {size} is not a power of two >= 2")
        return cls(m, np.asarray(bits, dtype=np.uint8))

    @classmethod
    def from_callable(cls, m: int, fn) -> "BooleanFunction":
        """Tabulate ``fn(point) -> bool`` over all 2^m points."""
        _check_arity(m)
        table = np.fromiter(
            (1 if fn(index_to_point(idx, m)) else 0 for idx in range(1 << m)),
            dtype=np.uint8,
            count=1 << m,
        )
        return cls(m, table)

    @classmethod
    def constant(cls, m: int, value: int = 0) -> "BooleanFunction":
        _check_arity(m)
        return cls(m, np.full(1 << m, 1 if value else 0, dtype=np.uint8))

    @property
    def size(self) -> int:
        return 1 << self.arity

    def __call__(self, *point: int) -> int:
        if len(point) == 1 and not isinstance(point[0], (int, np.integer)):
            point = tuple(point[0])
        return evaluate(self, point)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.arity == other.arity and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.arity, self.table.tobytes()))

    def __repr__(self):
        if self.arity <= 6:
            return f"BooleanFunction({self.arity}, {self.bitstring()!r})"
        return f"BooleanFunction({self.arity}, ones={int(self.table.sum())})"

    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.table.tolist())

    def ones(self) -> list[tuple[int, ...]]:
        return [index_to_point(int(i), self.arity) for i in np.flatnonzero(self.table)]

    def __and__(self, other):
        return pointwise("and", self, other)

    def __or__(self, other):
        return pointwise("or", self, other)

    def __invert__(self):
        return BooleanFunction(self.arity, 1 - self.table)


def evaluate(f: BooleanFunction, point: Sequence[int]) -> int:
    if len(point) != f.arity:
        raise DimensionError(f"point has length {len(point)}, function arity is {f.arity}")
    return int(f.table[point_to_index(point)])


def is_constant(f: BooleanFunction) -> bool:
    t = f.table
    return bool(t.min() == t.max())


def gate(f0: BooleanFunction, f1: BooleanFunction) -> BooleanFunction:
    """Add a selector as the new last feature: f0 where it is 0, f1 where it is 1."""
    if f0.arity != f1.arity:
        raise DimensionError(f"gate arity mismatch: {f0.arity} vs {f1.arity}")
    _check_arity(f0.arity + 1)
    # the new feature is the top bit, so the two halves are simply concatenated
    return BooleanFunction(f0.arity + 1, np.concatenate([f0.table, f1.table]))


def extend(f: BooleanFunction, extra: int) -> BooleanFunction:
    """Append ``extra`` ignored features after the existing ones."""
    if extra < 0:
        raise ValueError("extra must be >= 0")
    if extra == 0:
        return f
    _check_arity(f.arity + extra)
    return BooleanFunction(f.arity + extra, np.tile(f.table, 1 << extra))


def shift_vars(f: BooleanFunction, offset: int) -> BooleanFunction:
    """Rename x_i to x_{offset+i}; the first ``offset`` features are ignored."""
    if offset < 0:
        raise ValueError("offset must be >= 0")
    if offset == 0:
        return f
    _check_arity(f.arity + offset)
    return BooleanFunction(f.arity + offset, np.repeat(f.table, 1 << offset))


def pointwise(op: str, f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    if f.arity != g.arity:
        raise DimensionError(f"pointwise arity mismatch: {f.arity} vs {g.arity}")
    if op == "and":
        table = f.table & g.table
    elif op == "or":
        table = f.table | g.table
    elif op == "xor":
        table = f.table ^ g.table
    else:
        raise ValueError(f"unknown pointwise op {op!r}")
    return BooleanFunction(f.arity, table)


def entails(f: BooleanFunction, g: BooleanFunction) -> bool:
    """True iff f(x) -> g(x) for every point."""
    if f.arity != g.arity:
        raise DimensionError(f"entails arity mismatch: {f.arity} vs {g.arity}")
    return not bool(np.any(f.table & (1 - g.table)))


@dataclass(frozen=True)
class Instance:
    point: tuple[int, ...]
    prediction: int

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(int(b) for b in self.point))
        if any(b not in (0, 1) for b in self.point):
            raise ValueError("instance point must be a 0/1 vector")
        if self.prediction not in (0, 1):
            raise ValueError("prediction must be 0 or 1")

    @property
    def index(self) -> int:
        return point_to_index(self.point)

    def bits(self) -> str:
        """Feature 1 first, as typed on the command line."""
        return "".join(str(b) for b in self.point)


@dataclass(frozen=True)
class ExplanationProblem:
    function: BooleanFunction
    instance: Instance

    def __post_init__(self):
        got = evaluate(self.function, self.instance.point)
        if got != self.instance.prediction:
            raise ValueError(
                f"instance class {self.instance.prediction} disagrees with "
                f"f{self.instance.point} = {got}"
            )

    @classmethod
    def at(cls, f: BooleanFunction, point: Sequence[int]) -> "ExplanationProblem":
        return cls(f, Instance(tuple(point), evaluate(f, point)))

    @property
    def n(self) -> int:
        return self.function.arity

    @property
    def full_mask(self) -> int:
        return (1 << self.function.arity) - 1


# --- .btt text format -------------------------------------------------------

_BITS_RE = re.compile(r"[01]*")
_HEX_RE = re.compile(r"[0-9a-fA-F]*")


def parse_function(text: str) -> BooleanFunction:
    """Parse ``.btt`` text: ``#`` comments, a decimal arity line, a table line.

    The table line is either ``2^m`` characters from ``{0,1}`` in index order,
    or ``x`` followed by the table packed LSB-first into bytes, each byte
    written as two hex digits (high nibble first).  The packed form needs
    ``m >= 3``.
    """
    lines = [
        (no, raw.strip())
        for no, raw in enumerate(text.splitlines(), 1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty input, expected arity line", 1)
    no, header = lines[0]
    if not header.isdigit():
        raise ParseError(f"bad header {header!r}, expected decimal arity", no)
    m = int(header)
    if m < 1:
        raise ParseError("arity must be >= 1", no)
    if m > MAX_ARITY:
        raise CapacityError(f"arity {m} exceeds cap {MAX_ARITY}")
    if len(lines) < 2:
        raise ParseError("missing table line", no + 1)
    if len(lines) > 2:
        raise ParseError("unexpected content after table line", lines[2][0])
    no, body = lines[1]
    size = 1 << m
    if body.startswith(("x", "X")):
        digits = body[1:]
        bad = _HEX_RE.match(digits).end()
        if bad != len(digits):
            raise ParseError(f"illegal character {digits[bad]!r} in hex table", no, bad + 2)
        if m < 3:
            raise ParseError("hex-packed table needs arity >= 3", no)
        if len(digits) != size // 4:
            raise ParseError(f"expected {size // 4} hex digits, got {len(digits)}", no)
        packed = np.frombuffer(bytes.fromhex(digits), dtype=np.uint8)
        table = np.unpackbits(packed, bitorder="little")
    else:
        bad = _BITS_RE.match(body).end()
        if bad != len(body):
            raise ParseError(f"illegal character {body[bad]!r} in table", no, bad + 1)
        if len(body) != size:
            raise ParseError(f"expected {size} table bits for arity {m}, got {len(body)}", no)
        table = np.frombuffer(body.encode("ascii"), dtype=np.uint8) - ord("0")
    return BooleanFunction(m, table)


def serialize_function(f: BooleanFunction, packed: bool | None = None) -> str:
    """Inverse of :func:`parse_function`.  Packs to hex above 2^12 entries by default."""
    if packed is None:
        packed = f.arity > 12
    if packed:
        if f.arity < 3:
            raise DimensionError("hex-packed table needs arity >= 3")
        body = "x" + np.packbits(f.table, bitorder="little").tobytes().hex()
    else:
        body = (f.table + ord("0")).tobytes().decode("ascii")
    return f"{f.arity}\n{body}\n"


def read_function(path) -> BooleanFunction:
    with open(path, encoding="utf-8") as fh:
        return parse_function(fh.read())


def write_function(f: BooleanFunction, path, comment: str | None = None) -> None:
    text = serialize_function(f)
    if comment:
        text = "".join(f"# {line}\n" for line in comment.splitlines()) + text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
