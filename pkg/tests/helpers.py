"""Shared builders and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import random

from porecap import Mapping, apply_channel

BASES = "ACGT"


def first_base_mapping(k: int = 2) -> Mapping:
    """Level 1 when the window starts with G or T, else 0."""
    rest = 4 ** (k - 1)
    return Mapping(k=k, b=2, table=tuple(1 if i // rest >= 2 else 0 for i in range(4**k)))


def last_base_mapping(k: int = 2) -> Mapping:
    """Level 1 when the window ends with G or T, else 0."""
    return Mapping(k=k, b=2, table=tuple(1 if i % 4 >= 2 else 0 for i in range(4**k)))


def constant_mapping(k: int = 2, b: int = 2) -> Mapping:
    return Mapping(k=k, b=b, table=(0,) * 4**k)


def random_balanced_table(k: int, b: int, rng: random.Random) -> list[int]:
    per = 4**k // b
    arr = [level for level in range(b) for _ in range(per)]
    rng.shuffle(arr)
    return arr


def random_balanced_mapping(k: int, b: int, rng: random.Random) -> Mapping:
    return Mapping(k=k, b=b, table=tuple(random_balanced_table(k, b, rng)))


def random_mapping(k: int, b: int, rng: random.Random) -> Mapping:
    """Uniform random table; surjectivity and balance are not guaranteed."""
    return Mapping(k=k, b=b, table=tuple(rng.randrange(b) for _ in range(4**k)))


def all_strands(length: int):
    for combo in itertools.product(BASES, repeat=length):
        yield "".join(combo)


def brute_readouts(f: Mapping, m: int) -> set[tuple[int, ...]]:
    """Every readout of length m, by running all strands through the channel."""
    if m == 0:
        return {()}
    return {apply_channel(f, s) for s in all_strands(m + f.k - 1)}
