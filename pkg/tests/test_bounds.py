"""Capacity bounds and the first-symbol and merged constructions."""

import math
import random

import pytest

from porecap import (
    MappingFormatError,
    PorecapError,
    bounds,
    build_first_symbol_mapping,
    build_merged_mapping,
    build_nfa,
    capacity_spectral,
    determinize,
    is_universal,
    merged_strand_index,
)


def test_bounds_grid():
    got = bounds(2, 2)
    assert got.max_capacity == 1.0
    assert got.min_lower == 0.5
    assert got.min_upper == 1.0
    got = bounds(2, 4)
    assert got.max_capacity == 2.0
    assert got.min_lower == 1.0
    assert got.min_upper == 1.0
    got = bounds(3, 8)
    assert got.max_capacity == 2.0
    assert got.min_lower == 1.0
    assert got.min_upper == 1.0


def test_bounds_edges():
    got = bounds(2, 1)
    assert got.max_capacity == 0.0 and got.min_lower == 0.0 and got.min_upper == 0.0
    # b = 4^k saturates both letters of the bound
    got = bounds(2, 16)
    assert got.max_capacity == 2.0
    assert got.min_lower == 2.0
    assert got.min_upper is None
    # b just above 2^k loses the merged construction
    got = bounds(2, 8)
    assert got.min_upper is None


def test_bounds_relations():
    for k in (1, 2, 3):
        for exp in range(2 * k + 1):
            got = bounds(k, 2**exp)
            assert got.max_capacity == min(math.log2(got.b), 2.0)
            assert got.min_lower <= got.max_capacity + 1e-12
            if got.min_upper is not None:
                assert got.min_lower <= got.min_upper <= got.max_capacity + 1e-12


def test_bounds_validation():
    with pytest.raises(PorecapError, match="divide 4\\^k"):
        bounds(2, 3)
    with pytest.raises(PorecapError, match="divide 4\\^k"):
        bounds(1, 8)
    with pytest.raises(PorecapError, match="k must be >= 1"):
        bounds(0, 2)
    with pytest.raises(PorecapError, match="b must be >= 1"):
        bounds(2, 0)


def test_first_symbol_mapping_balanced_and_extremal():
    for k, b in ((2, 2), (2, 4), (3, 4), (2, 8), (3, 16), (1, 4)):
        f = build_first_symbol_mapping(k, b)
        assert f.is_balanced()
        c = capacity_spectral(f).capacity_bits_per_base
        assert abs(c - min(math.log2(b), 2.0)) < 1e-9


def test_first_symbol_mapping_universal_for_small_b():
    for k, b in ((2, 2), (2, 4), (3, 4)):
        f = build_first_symbol_mapping(k, b)
        assert is_universal(determinize(build_nfa(f)))


def test_first_symbol_group_structure():
    # the first base alone selects the level's group of size b/4
    for k, b in ((2, 4), (2, 8), (3, 16)):
        f = build_first_symbol_mapping(k, b)
        rest_size = 4 ** (k - 1)
        per_group = b // 4
        for idx, level in enumerate(f.table):
            assert level // per_group == idx // rest_size
    f = build_first_symbol_mapping(3, 2)
    for idx, level in enumerate(f.table):
        assert level == (1 if idx // 16 >= 2 else 0)


def test_first_symbol_constant():
    f = build_first_symbol_mapping(2, 1)
    assert set(f.table) == {0}
    assert capacity_spectral(f).capacity_bits_per_base == 0.0


def test_first_symbol_validation():
    with pytest.raises(PorecapError, match="first-symbol construction"):
        build_first_symbol_mapping(2, 3)
    with pytest.raises(PorecapError, match="first-symbol construction"):
        build_first_symbol_mapping(1, 16)
    with pytest.raises(PorecapError, match="first-symbol construction"):
        build_first_symbol_mapping(2, 12)
    with pytest.raises(PorecapError, match="k must be >= 1"):
        build_first_symbol_mapping(0, 2)


def test_merged_strand_index_values():
    # k=2: first base's bit is the high bit
    assert merged_strand_index(0, 2) == 0  # AA
    assert merged_strand_index(1, 2) == 0  # AC merges to AA
    assert merged_strand_index(2, 2) == 1  # AG
    assert merged_strand_index(11, 2) == 3  # GT merges to GG
    assert merged_strand_index(7, 2) == 1  # CT merges to AG
    assert merged_strand_index(63, 3) == 7  # TTT


def test_merged_strand_index_ignores_merge_partner():
    rng = random.Random(2)
    for _ in range(50):
        k = rng.choice((1, 2, 3))
        idx = rng.randrange(4**k)
        pos = rng.randrange(k)
        digit = (idx >> (2 * (k - 1 - pos))) & 3
        partner = digit ^ 1  # A<->C, G<->T
        swapped = idx + (partner - digit) * 4 ** (k - 1 - pos)
        assert merged_strand_index(idx, k) == merged_strand_index(swapped, k)


def test_merged_mapping_structure():
    levels = [0, 1, 1, 0]
    f = build_merged_mapping(2, 2, levels)
    assert f.k == 2 and f.b == 2
    for idx, level in enumerate(f.table):
        assert level == levels[merged_strand_index(idx, 2)]
    assert f.level("AA") == 0 and f.level("CC") == 0
    assert f.level("AG") == 1 and f.level("CT") == 1


def test_merged_mapping_capacity_at_most_one():
    rng = random.Random(8)
    for _ in range(10):
        k = rng.choice((2, 3))
        levels = [rng.randrange(2) for _ in range(2**k)]
        if len(set(levels)) < 2:
            levels[0] = 1 - levels[0]
        f = build_merged_mapping(k, 2, levels)
        assert capacity_spectral(f).capacity_bits_per_base <= 1.0 + 1e-9


def test_merged_mapping_validation():
    with pytest.raises(MappingFormatError, match="expected 4 for k=2"):
        build_merged_mapping(2, 2, [0, 1])
    with pytest.raises(MappingFormatError, match="not an integer"):
        build_merged_mapping(2, 2, [0, 1, "x", 0])
    with pytest.raises(MappingFormatError, match="out of range"):
        build_merged_mapping(2, 2, [0, 1, 2, 0])
    with pytest.raises(PorecapError, match="k must be >= 1"):
        build_merged_mapping(0, 2, [])
