"""Enumerate or sample balanced mappings and aggregate capacity statistics.

A balanced mapping assigns each of the b levels to exactly 4^k / b windows, so
the space is the set of distinct arrangements of a fixed level multiset.
Exact mode walks all of them in lexicographic order; sampled mode draws
uniform arrangements.  Statistics reduce with exact arithmetic (fraction sums,
float min/max), so results are bit-identical for any worker count: chunk
boundaries depend only on the totals, never on the pool size.
"""

from __future__ import annotations

import math
import multiprocessing
import random
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .capacity import capacity_spectral
from .channel import Mapping
from .errors import EnumerationCapError, PorecapError

DEFAULT_ENUMERATION_CAP = 10**8
_CHUNKS = 256
_SPECTRAL_TOL = 1e-10


@dataclass(frozen=True)
class CapacityStats:
    """Min, mean, and max capacity over a stream of balanced mappings."""

    k: int
    b: int
    mode: str
    count: int
    min_capacity: float
    mean_capacity: float
    max_capacity: float


def _check_divides(k: int, b: int) -> int:
    if k < 1:
        raise PorecapError(f"k must be >= 1, got {k}")
    if b < 1:
        raise PorecapError(f"b must be >= 1, got {b}")
    size = 4**k
    if size % b:
        raise PorecapError(
            f"no balanced mapping exists for b={b} at k={k}; b must divide 4^k"
        )
    return size


def balanced_count(k: int, b: int) -> int:
    """Number of balanced mappings: (4^k)! / ((4^k/b)!)^b, exactly."""
    size = _check_divides(k, b)
    return math.factorial(size) // math.factorial(size // b) ** b


def _base_multiset(size: int, b: int) -> list[int]:
    per = size // b
    out: list[int] = []
    for level in range(b):
        out.extend([level] * per)
    return out


def _next_permutation(arr: list[int]) -> bool:
    i = len(arr) - 2
    while i >= 0 and arr[i] >= arr[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(arr) - 1
    while arr[j] <= arr[i]:
        j -= 1
    arr[i], arr[j] = arr[j], arr[i]
    arr[i + 1 :] = arr[: i : -1]
    return True


def _unrank_balanced(k: int, b: int, rank: int) -> list[int]:
    """The rank-th balanced level table in lexicographic order."""
    size = _check_divides(k, b)
    counts = [size // b] * b
    total = balanced_count(k, b)
    if not 0 <= rank < total:
        raise PorecapError(f"rank {rank} out of range for {total} mappings")
    out: list[int] = []
    remaining = size
    for _ in range(size):
        for level in range(b):
            if not counts[level]:
                continue
            sub = total * counts[level] // remaining
            if rank < sub:
                out.append(level)
                counts[level] -= 1
                total = sub
                break
            rank -= sub
        remaining -= 1
    return out


def enumerate_balanced(
    k: int, b: int, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Mapping]:
    """Every balanced mapping exactly once, tables in lexicographic order."""
    total = balanced_count(k, b)
    if total > cap:
        raise EnumerationCapError(
            f"{total} balanced mappings exceed the enumeration cap of {cap}; "
            "use sample_balanced"
        )
    size = 4**k
    arr = _base_multiset(size, b)
    while True:
        yield Mapping(k=k, b=b, table=tuple(arr))
        if not _next_permutation(arr):
            return


def _sampled_table(base: list[int], seed: int, index: int) -> list[int]:
    # Per-index generator so sample i is the same no matter which worker
    # draws it; string seeding is stable across processes and runs.
    rng = random.Random(f"{seed}:{index}")
    arr = list(base)
    rng.shuffle(arr)
    return arr


def sample_balanced(k: int, b: int, n: int, seed: int) -> Iterator[Mapping]:
    """n independent uniform draws of balanced mappings, reproducible by seed."""
    size = _check_divides(k, b)
    if n < 0:
        raise PorecapError(f"sample count must be >= 0, got {n}")
    base = _base_multiset(size, b)
    for i in range(n):
        yield Mapping(k=k, b=b, table=tuple(_sampled_table(base, seed, i)))


def _chunk_ranges(total: int) -> list[tuple[int, int]]:
    n_chunks = min(_CHUNKS, total)
    if n_chunks <= 0:
        return []
    base, extra = divmod(total, n_chunks)
    ranges = []
    start = 0
    for i in range(n_chunks):
        length = base + (1 if i < extra else 0)
        ranges.append((start, start + length))
        start += length
    return ranges


def _fold_capacity(
    acc: tuple[float, float, Fraction], value: float
) -> tuple[float, float, Fraction]:
    lo, hi, total = acc
    return (min(lo, value), max(hi, value), total + Fraction(value))


def _exact_chunk(args: tuple[int, int, int, int]) -> tuple[float, float, Fraction]:
    k, b, start, stop = args
    arr = _unrank_balanced(k, b, start)
    acc = (math.inf, -math.inf, Fraction(0))
    for idx in range(start, stop):
        if idx > start:
            _next_permutation(arr)
        f = Mapping(k=k, b=b, table=tuple(arr))
        c = capacity_spectral(f, tol=_SPECTRAL_TOL).capacity_bits_per_base
        acc = _fold_capacity(acc, c)
    return acc


def _sampled_chunk(args: tuple[int, int, int, int, int]) -> tuple[float, float, Fraction]:
    k, b, seed, start, stop = args
    base = _base_multiset(4**k, b)
    acc = (math.inf, -math.inf, Fraction(0))
    for idx in range(start, stop):
        f = Mapping(k=k, b=b, table=tuple(_sampled_table(base, seed, idx)))
        c = capacity_spectral(f, tol=_SPECTRAL_TOL).capacity_bits_per_base
        acc = _fold_capacity(acc, c)
    return acc


def _run_chunks(worker, jobs: list, workers: int) -> list[tuple[float, float, Fraction]]:
    if workers <= 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=workers) as pool:
        return pool.map(worker, jobs, chunksize=1)


def capacity_stats(
    k: int,
    b: int,
    *,
    samples: int | None = None,
    seed: int = 0,
    workers: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CapacityStats:
    """Capacity min/mean/max over balanced mappings; exact or sampled.

    Exact mode (samples None) walks the full space and refuses counts over the
    enumeration cap.  Sampled mode draws uniformly with per-index seeding.
    Either way the result is bit-identical for every worker count.
    """
    _check_divides(k, b)
    if samples is None:
        total = balanced_count(k, b)
        if total > cap:
            raise EnumerationCapError(
                f"{total} balanced mappings exceed the enumeration cap of {cap}; "
                "use sampled mode"
            )
        mode = "exact"
        jobs = [(k, b, start, stop) for start, stop in _chunk_ranges(total)]
        parts = _run_chunks(_exact_chunk, jobs, workers)
    else:
        if samples < 1:
            raise PorecapError(f"sample count must be >= 1, got {samples}")
        total = samples
        mode = "sampled"
        jobs = [(k, b, seed, start, stop) for start, stop in _chunk_ranges(total)]
        parts = _run_chunks(_sampled_chunk, jobs, workers)
    lo = math.inf
    hi = -math.inf
    grand = Fraction(0)
    for part_lo, part_hi, part_sum in parts:
        lo = min(lo, part_lo)
        hi = max(hi, part_hi)
        grand += part_sum
    return CapacityStats(
        k=k,
        b=b,
        mode=mode,
        count=total,
        min_capacity=lo,
        mean_capacity=float(grand / total),
        max_capacity=hi,
    )
