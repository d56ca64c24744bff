"""Representation-function sieves for positive definite quadratic forms.

Tables hold r(n) for 0 <= n <= x_max. Two families of descriptors are
supported: sums of m squares and integral binary forms ax^2 + bxy + cy^2.
Power partial sums S_k(x) = sum_{1 <= n <= x} r(n)^k are kept exact by
splitting r(n)^k into 32-bit limbs and prefix-summing each limb in int64.
"""

from __future__ import annotations

import functools
import hashlib
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError

MAX_TABLE_LENGTH = 10**8 + 1
MAX_POWER = 8
# rows of lattice points accumulated before each bincount flush
_FLUSH_POINTS = 1 << 22


@dataclass(frozen=True)
class FormDescriptor:
    """Either a sum of ``m`` squares or the binary form ``(a, b, c)``."""

    kind: str
    m: int = 0
    abc: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if self.kind == "squares":
            if self.m < 2:
                raise DomainError(f"sum of squares needs m >= 2, got {self.m}")
        elif self.kind == "binary":
            a, b, c = self.abc
            if a <= 0 or 4 * a * c - b * b <= 0:
                raise DomainError(f"form {self.abc} is not positive definite")
        else:
            raise DomainError(f"unknown descriptor kind {self.kind!r}")

    @classmethod
    def squares(cls, m: int) -> "FormDescriptor":
        return cls("squares", m=m)

    @classmethod
    def binary(cls, a: int, b: int, c: int) -> "FormDescriptor":
        return cls("binary", abc=(int(a), int(b), int(c)))

    def label(self) -> str:
        if self.kind == "squares":
            return f"squares{self.m}"
        a, b, c = self.abc
        return f"form{a}_{b}_{c}"


@dataclass(frozen=True, eq=False)
class RepTable:
    descriptor: FormDescriptor
    x_max: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.x_max + 1:
            raise ValueError("values must have length x_max + 1")
        self.values.setflags(write=False)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def support_count(self, x: int) -> int:
        """Number of 1 <= n <= x with r(n) > 0."""
        return int(np.count_nonzero(self.values[1 : x + 1]))

    def checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.values, dtype="<u4").tobytes()).hexdigest()


def _check_length(x_max: int) -> None:
    if x_max < 1:
        raise DomainError(f"x_max must be positive, got {x_max}")
    if x_max + 1 > MAX_TABLE_LENGTH:
        raise CapacityError(f"x_max={x_max} exceeds table capacity {MAX_TABLE_LENGTH - 1}")


def _narrow(counts: np.ndarray) -> np.ndarray:
    if counts.size and counts.max() >= 2**32:
        return counts.astype(np.int64)
    return counts.astype(np.uint32)


def sieve_sum_of_squares(m: int, x_max: int) -> RepTable:
    """r_m(n) for n <= x_max by m - 1 convolutions with the one-square indicator."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    _check_length(x_max)
    if m == 2:
        table = sieve_binary_form(1, 0, 1, x_max)
        return RepTable(FormDescriptor.squares(2), x_max, table.values)
    root = math.isqrt(x_max)
    squares = [j * j for j in range(1, root + 1)]
    # r_1: 1 at 0, 2 at every positive square
    acc = np.zeros(x_max + 1, dtype=np.int64)
    acc[0] = 1
    acc[squares] = 2
    for _ in range(m - 1):
        nxt = acc.copy()
        for sq in squares:
            nxt[sq:] += 2 * acc[: x_max + 1 - sq]
        acc = nxt
    return RepTable(FormDescriptor.squares(m), x_max, _narrow(acc))


def _form_rows(a: int, b: int, c: int, x_max: int, ys: Sequence[int]):
    """Yield Q(x, y) values for lattice points in the half plane with Q <= x_max.

    The half plane is y > 0, or y == 0 and x > 0; negation covers the rest.
    """
    disc = 4 * a * c - b * b
    for y in ys:
        # a*(x + b*y/(2a))^2 + disc*y^2/(4a) <= x_max
        rem = 4 * a * x_max - disc * y * y
        if rem < 0:
            continue
        centre = -b * y / (2 * a)
        half = math.sqrt(rem) / (2 * a)
        lo = math.floor(centre - half) - 1
        hi = math.ceil(centre + half) + 1
        if y == 0:
            lo = 1
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        q = a * xs * xs + (b * y) * xs + c * y * y
        yield q[q <= x_max]


def _count_rows(a, b, c, x_max, ys) -> np.ndarray:
    counts = np.zeros(x_max + 1, dtype=np.int64)
    buf: list[np.ndarray] = []
    pending = 0
    for q in _form_rows(a, b, c, x_max, ys):
        buf.append(q)
        pending += q.size
        if pending >= _FLUSH_POINTS:
            counts += np.bincount(np.concatenate(buf), minlength=x_max + 1)
            buf, pending = [], 0
    if buf:
        counts += np.bincount(np.concatenate(buf), minlength=x_max + 1)
    return counts


def sieve_binary_form(a: int, b: int, c: int, x_max: int, workers: int = 1) -> RepTable:
    """r_Q(n) for Q = ax^2 + bxy + cy^2 and n <= x_max.

    Every lattice point with 0 < Q <= x_max is visited once in the half plane
    and counted twice; ``workers`` partitions the y-rows, merged by exact sums.
    """
    desc = FormDescriptor.binary(a, b, c)
    _check_length(x_max)
    disc = 4 * a * c - b * b
    y_max = math.isqrt(4 * a * x_max // disc) + 1
    ys = list(range(0, y_max + 1))
    if workers <= 1:
        half = _count_rows(a, b, c, x_max, ys)
    else:
        parts = [ys[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda p: _count_rows(a, b, c, x_max, p), parts))
        half = sum(results[1:], results[0])
    counts = 2 * half
    counts[0] = 1
    return RepTable(desc, x_max, _narrow(counts))


def sieve(descriptor: FormDescriptor, x_max: int, workers: int = 1) -> RepTable:
    if descriptor.kind == "squares":
        return sieve_sum_of_squares(descriptor.m, x_max)
    return sieve_binary_form(*descriptor.abc, x_max, workers=workers)


def brute_force_rep(descriptor: FormDescriptor, n: int) -> int:
    """Count integer vectors on the level set Q = n directly.

    For each y the equation in x is solved exactly with an integer square
    root; nothing is shared with the sieves.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if descriptor.kind == "squares":
        return _brute_squares(descriptor.m, n)
    a, b, c = descriptor.abc
    disc = 4 * a * c - b * b
    ybound = math.isqrt(4 * a * n // disc) + 1
    total = 0
    for y in range(-ybound, ybound + 1):
        # a x^2 + (b y) x + (c y^2 - n) = 0
        delta = (b * y) ** 2 - 4 * a * (c * y * y - n)
        if delta < 0:
            continue
        root = math.isqrt(delta)
        if root * root != delta:
            continue
        xs = {(-b * y + root), (-b * y - root)}
        total += sum(1 for num in xs if num % (2 * a) == 0)
    return total


@functools.lru_cache(maxsize=1 << 16)
def _brute_squares(m: int, n: int) -> int:
    if n < 0:
        return 0
    if m == 1:
        if n == 0:
            return 1
        root = math.isqrt(n)
        return 2 if root * root == n else 0
    root = math.isqrt(n)
    return sum(_brute_squares(m - 1, n - x * x) for x in range(-root, root + 1))


class PowerSums:
    """Exact prefix sums S_k(x) = sum_{1<=n<=x} r(n)^k for 0 <= x <= x_max.

    Stored as int64 prefix sums of 32-bit limbs of r(n)^k; indexing returns
    Python ints. ``S[0] == 0``.
    """

    def __init__(self, table: RepTable, k: int):
        if k < 0 or k > MAX_POWER:
            raise DomainError(f"power k must lie in [0, {MAX_POWER}], got {k}")
        self.k = k
        self.x_max = table.x_max
        r = np.asarray(table.values, dtype=np.int64).copy()
        r[0] = 0
        if k == 0:
            limbs = [(r > 0).astype(np.int64)]
        else:
            distinct, inverse = np.unique(r, return_inverse=True)
            powers = [int(v) ** k for v in distinct.tolist()]
            top = max(powers).bit_length()
            nlimbs = max(1, -(-top // 32))
            limbs = []
            for j in range(nlimbs):
                lut = np.array([(p >> (32 * j)) & 0xFFFFFFFF for p in powers], dtype=np.int64)
                limbs.append(lut[inverse])
        self._limbs = [np.cumsum(limb) for limb in limbs]

    def __len__(self):
        return self.x_max + 1

    def __getitem__(self, x: int) -> int:
        x = int(x)
        if x < 0 or x > self.x_max:
            raise IndexError(f"x={x} outside [0, {self.x_max}]")
        return sum(int(limb[x]) << (32 * j) for j, limb in enumerate(self._limbs))

    def at(self, xs: Iterable[int]) -> list[int]:
        return [self[x] for x in xs]

    def as_float(self) -> np.ndarray:
        out = np.zeros(self.x_max + 1)
        for j, limb in enumerate(self._limbs):
            out += limb.astype(np.float64) * float(2 ** (32 * j))
        return out


def power_partial_sums(table: RepTable, k: int) -> PowerSums:
    """S_k(x) for x = 0..x_max; k = 0 counts n with r(n) > 0 (0^0 taken as 0)."""
    return PowerSums(table, k)


# --- RPT1 binary format -------------------------------------------------------
#
# magic  b"RPT1"
# u32    format version (1)
# u32    descriptor kind: 0 = squares, 1 = binary form
# i64 x3 m, 0, 0  or  a, b, c
# u64    x_max
# then x_max + 1 little-endian u32 counts
RPT_MAGIC = b"RPT1"
RPT_VERSION = 1
_HEADER = struct.Struct("<4sII3qQ")


def dump_table(table: RepTable, path) -> None:
    if table.values.size and int(table.values.max()) >= 2**32:
        raise CapacityError("table values exceed 32-bit range, cannot write RPT1")
    d = table.descriptor
    kind, params = (0, (d.m, 0, 0)) if d.kind == "squares" else (1, d.abc)
    header = _HEADER.pack(RPT_MAGIC, RPT_VERSION, kind, *params, table.x_max)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(table.values, dtype="<u4").tobytes())


def load_table(path) -> RepTable:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated RPT1 header")
    magic, version, kind, p0, p1, p2, x_max = _HEADER.unpack_from(raw)
    if magic != RPT_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != RPT_VERSION:
        raise ValueError(f"{path}: unsupported RPT1 version {version}")
    desc = FormDescriptor.squares(p0) if kind == 0 else FormDescriptor.binary(p0, p1, p2)
    body = np.frombuffer(raw, dtype="<u4", offset=_HEADER.size)
    if body.size != x_max + 1:
        raise ValueError(f"{path}: expected {x_max + 1} counts, found {body.size}")
    return RepTable(desc, x_max, body.astype(np.uint32))
