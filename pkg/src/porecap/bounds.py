"""Capacity bounds for balanced mappings and the constructions that attain them.

For a balanced mapping on b levels:
  - no capacity exceeds min(log2 b, 2), and the first-symbol construction
    attains it for b in {2, 4};
  - every capacity is at least log2(b) / k (non-overlapping blocks already
    achieve that rate);
  - when b <= 2^k, merging the strand alphabet down to {A, G} caps capacity
    at 1 bit per base, so the worst balanced mapping sits at or below 1.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .channel import Mapping
from .errors import MappingFormatError, PorecapError


@dataclass(frozen=True)
class CapacityBounds:
    """Bounds on capacities of balanced mappings at a given k and b.

    max_capacity bounds every mapping from above; min_lower and min_upper
    bracket the worst balanced mapping.  min_upper is None when the
    alphabet-merging construction does not apply (b > 2^k).
    """

    k: int
    b: int
    max_capacity: float
    min_lower: float
    min_upper: float | None


def bounds(k: int, b: int) -> CapacityBounds:
    if k < 1:
        raise PorecapError(f"k must be >= 1, got {k}")
    if b < 1:
        raise PorecapError(f"b must be >= 1, got {b}")
    if 4**k % b:
        raise PorecapError(
            f"no balanced mapping exists for b={b} at k={k}; b must divide 4^k"
        )
    max_capacity = min(math.log2(b), 2.0)
    min_lower = math.log2(b) / k
    min_upper = min(1.0, max_capacity) if b <= 2**k else None
    return CapacityBounds(
        k=k,
        b=b,
        max_capacity=max_capacity,
        min_lower=min_lower,
        min_upper=min_upper,
    )


def build_first_symbol_mapping(k: int, b: int) -> Mapping:
    """Balanced mapping whose level depends on the window's first base.

    The b=2 mapping splits {A,C} from {G,T}.  For b a multiple of 4 the first
    base picks one of 4 groups and the remaining k-1 bases refine the group
    into b/4 sublevels of equal size.  Capacity is min(log2 b, 2) and the
    mapping is universal for b in {2, 4}.
    """
    if k < 1:
        raise PorecapError(f"k must be >= 1, got {k}")
    if not (b == 1 or b == 2 or (b % 4 == 0 and 4**k % b == 0)):
        raise PorecapError(
            f"first-symbol construction needs b=1, b=2, or a multiple of 4 "
            f"dividing 4^k, got b={b} at k={k}"
        )
    size = 4**k
    rest_size = size // 4
    table = []
    if b == 1:
        table = [0] * size
    elif b == 2:
        for idx in range(size):
            first = idx // rest_size
            table.append(1 if first >= 2 else 0)
    else:
        per_group = b // 4
        bucket = rest_size // per_group
        for idx in range(size):
            first, rest = divmod(idx, rest_size)
            table.append(first * per_group + rest // bucket)
    return Mapping(k=k, b=b, table=tuple(table))


def merged_strand_index(idx: int, k: int) -> int:
    """Index of the {A,G}^k strand obtained by substituting C->A and T->G."""
    bits = 0
    for shift in range(k - 1, -1, -1):
        digit = (idx >> (2 * shift)) & 3
        bits = bits * 2 + (1 if digit >= 2 else 0)
    return bits


def build_merged_mapping(k: int, b: int, binary_levels: Sequence[int]) -> Mapping:
    """Mapping that first merges C into A and T into G, then applies a binary map.

    binary_levels assigns a level to each window over {A, G}, indexed with
    A=0, G=1 big-endian.  The result reads through the merged alphabet, so its
    readouts are those of a two-letter channel and capacity is at most 1.
    """
    if k < 1:
        raise PorecapError(f"k must be >= 1, got {k}")
    if b < 1:
        raise PorecapError(f"b must be >= 1, got {b}")
    expected = 2**k
    levels = list(binary_levels)
    if len(levels) != expected:
        raise MappingFormatError(
            f"binary table has {len(levels)} entries, expected {expected} for k={k}"
        )
    for i, level in enumerate(levels):
        if not isinstance(level, int) or isinstance(level, bool):
            raise MappingFormatError(f"level {level!r} is not an integer")
        if not 0 <= level < b:
            raise MappingFormatError(
                f"level {level} out of range for b={b} at binary index {i}"
            )
    size = 4**k
    table = tuple(levels[merged_strand_index(idx, k)] for idx in range(size))
    return Mapping(k=k, b=b, table=table)
