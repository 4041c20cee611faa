"""Acceptance gate: one test per criterion, each printing a pass or fail line.

Criteria 1, 2, and 10 run through the command line exactly as a user would,
twice with different worker counts; criterion 11 byte-compares those reruns.
Reference statistics are pinned at the tolerances the project committed to.
"""

import contextlib
import io
import math
import random

import pytest

from porecap import (
    DimensionCapError,
    apply_channel,
    block_decode,
    block_encode,
    build_codebook,
    build_first_symbol_mapping,
    build_greedy_scheme,
    build_merged_mapping,
    build_nfa,
    capacity_charpoly,
    capacity_spectral,
    choose_block_length,
    count_readouts,
    determinize,
    enumerate_balanced,
    fixed_length_capacity,
    greedy_decode,
    greedy_encode,
    greedy_max_prefix,
    is_universal,
)
from porecap.cli import main as cli_main

from helpers import brute_readouts, first_base_mapping, random_balanced_mapping, random_mapping

EXACT_B2_REF = {"min": 0.961914, "mean": 0.999929, "max": 1.0}
SAMPLED_REF = {
    4: {"min": 1.0, "mean": 1.837082, "max": 2.0},
    8: {"min": 1.771553, "mean": 1.989641, "max": 2.0},
}
STATS_HEADER = "k,b,mode,count,min,mean,max"


def _run_cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(argv)
    assert code == 0, f"cli exited {code} for {argv}"
    return buf.getvalue()


def _stats_rows(text):
    lines = text.strip().splitlines()
    assert lines[0] == STATS_HEADER
    rows = []
    for line in lines[1:]:
        k, b, mode, count, lo, mean, hi = line.split(",")
        rows.append(
            {
                "k": int(k),
                "b": int(b),
                "mode": mode,
                "count": int(count),
                "min": float(lo),
                "mean": float(mean),
                "max": float(hi),
            }
        )
    return rows


@contextlib.contextmanager
def _reporting(capsys, number, description):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"criterion {number}: FAIL {description}")
        raise
    with capsys.disabled():
        print(f"criterion {number}: PASS {description}")


@pytest.fixture(scope="module")
def exact_stats_pair():
    args = ["figures", "fig2", "--k", "2", "--exact-b", "2"]
    return [_run_cli(args + ["--workers", w]) for w in ("1", "2")]


@pytest.fixture(scope="module")
def sampled_stats_pair():
    args = [
        "figures", "fig2", "--k", "2", "--sample-b", "4,8",
        "--samples", "100000", "--seed", "7",
    ]
    return [_run_cli(args + ["--workers", w]) for w in ("4", "2")]


@pytest.fixture(scope="module")
def montecarlo_pair():
    args = [
        "greedy", "montecarlo", "--k", "6", "--ell", "4",
        "--trials", "10000", "--seed", "7",
    ]
    return [_run_cli(args + ["--workers", w]) for w in ("1", "3")]


def test_criterion_01(capsys, exact_stats_pair):
    desc = "exact k=2 b=2 statistics match the reference values within 1e-4"
    with _reporting(capsys, 1, desc):
        row = _stats_rows(exact_stats_pair[0])[0]
        assert row["mode"] == "exact"
        assert row["count"] == 12870
        for field in ("min", "mean", "max"):
            assert abs(row[field] - EXACT_B2_REF[field]) <= 1e-4, field


def test_criterion_02(capsys, sampled_stats_pair):
    desc = "sampled k=2 statistics for b=4 and b=8 sit within the reference brackets"
    with _reporting(capsys, 2, desc):
        rows = {row["b"]: row for row in _stats_rows(sampled_stats_pair[0])}
        assert set(rows) == {4, 8}
        for b, ref in SAMPLED_REF.items():
            row = rows[b]
            assert row["mode"] == "sampled" and row["count"] == 100000
            assert abs(row["mean"] - ref["mean"]) <= 0.01, b
            assert row["min"] >= ref["min"] - 1e-4, b
            assert row["max"] <= ref["max"] + 1e-4, b


def test_criterion_03(capsys):
    desc = "first-symbol mappings attain min(log2 b, 2) and are universal"
    with _reporting(capsys, 3, desc):
        for k, b in ((2, 2), (2, 4), (3, 4), (6, 4)):
            f = build_first_symbol_mapping(k, b)
            c = capacity_spectral(f).capacity_bits_per_base
            assert abs(c - min(math.log2(b), 2.0)) <= 1e-9, (k, b)
            assert is_universal(determinize(build_nfa(f))), (k, b)


def test_criterion_04(capsys):
    desc = "merged mappings from balanced binary tables stay at or below 1 bit per base"
    with _reporting(capsys, 4, desc):
        rng = random.Random(100)
        for k in (2, 3):
            for b in (2, 4):
                base = []
                for level in range(b):
                    base.extend([level] * (2**k // b))
                for _ in range(50):
                    levels = list(base)
                    rng.shuffle(levels)
                    f = build_merged_mapping(k, b, levels)
                    c = capacity_spectral(f).capacity_bits_per_base
                    assert c <= 1.0 + 1e-9, (k, b, tuple(levels))


def test_criterion_05(capsys):
    desc = "over all 12870 k=2 b=2 balanced mappings, universality equals capacity 1"
    with _reporting(capsys, 5, desc):
        counterexamples = 0
        for f in enumerate_balanced(2, 2):
            universal = is_universal(determinize(build_nfa(f)))
            at_one = abs(capacity_spectral(f).capacity_bits_per_base - 1.0) <= 1e-9
            if universal != at_one:
                counterexamples += 1
        assert counterexamples == 0


def test_criterion_06(capsys):
    desc = "spectral and exact-root capacities agree to 1e-9 on random balanced mappings"
    with _reporting(capsys, 6, desc):
        rng = random.Random(200)
        compared = 0
        for k in (2, 3):
            for b in (2, 4):
                for _ in range(25):
                    f = random_balanced_mapping(k, b, rng)
                    spectral = capacity_spectral(f).capacity_bits_per_base
                    try:
                        exact = capacity_charpoly(f).capacity_bits_per_base
                    except DimensionCapError:
                        continue
                    assert abs(spectral - exact) <= 1e-9, (k, b)
                    compared += 1
        assert compared >= 30, compared


def test_criterion_07(capsys):
    desc = "count_readouts equals brute-force readout counts for all m up to 5"
    with _reporting(capsys, 7, desc):
        rng = random.Random(300)
        for _ in range(20):
            k = rng.choice((1, 2, 3))
            b = rng.choice((2, 3, 4))
            f = random_mapping(k, b, rng)
            for m in range(6):
                assert count_readouts(f, m) == len(brute_readouts(f, m)), (k, b, m)


def test_criterion_08(capsys):
    desc = "block worked example: epsilon 0.1 gives block length 10, rate 0.9, 512 strands"
    with _reporting(capsys, 8, desc):
        f = first_base_mapping(2)
        assert choose_block_length(f, 0.1) == 10
        assert fixed_length_capacity(f, 10) == 0.9
        assert len(build_codebook(f, 10).strands) == 512


def test_criterion_09(capsys):
    desc = "10^4 fuzzed messages roundtrip through each codec over 10 random mappings"
    with _reporting(capsys, 9, desc):
        rng = random.Random(400)
        mappings = 0
        while mappings < 10:
            k = rng.choice((1, 2, 3))
            b = rng.choice((2, 3, 4))
            f = random_mapping(k, b, rng)
            length = rng.randint(k, k + 3)
            cb = build_codebook(f, length)
            if len(cb.strands) < 2:
                continue
            mappings += 1
            for i in range(1000):
                bits = "".join(rng.choice("01") for _ in range(rng.randint(1, 30)))
                if i % 2:
                    strand = block_encode(cb, bits)
                    padded = len(bits) % cb.bits_per_block != 0
                    got = block_decode(
                        cb, apply_channel(f, strand), strip_pad=padded
                    )
                else:
                    strand = block_encode(cb, bits, mode="radix")
                    got = block_decode(cb, apply_channel(f, strand), mode="radix")
                assert got == bits

        schemes = 0
        while schemes < 10:
            k = rng.choice((2, 3))
            f = random_mapping(k, 2, rng)
            best = greedy_max_prefix(f)
            if best is None:
                continue
            schemes += 1
            gs = build_greedy_scheme(f, rng.randint(1, best))
            for _ in range(1000):
                bits = "".join(rng.choice("01") for _ in range(rng.randint(1, 30)))
                got = greedy_decode(gs, apply_channel(f, greedy_encode(gs, bits)))
                assert got == bits


def test_criterion_10(capsys, montecarlo_pair):
    desc = "greedy feasibility at k=6 ell=4 meets the 0.98 floor over 10^4 trials"
    with _reporting(capsys, 10, desc):
        lines = montecarlo_pair[0].strip().splitlines()
        assert lines[0] == "k,ell,trials,seed,feasible,rate,bound"
        k, ell, trials, seed, feasible, rate, bound = lines[1].split(",")
        assert (k, ell, trials, seed) == ("6", "4", "10000", "7")
        assert abs(float(bound) - 0.9921875) <= 1e-6
        assert int(feasible) / int(trials) >= 0.98


def test_criterion_11(capsys, exact_stats_pair, sampled_stats_pair, montecarlo_pair):
    desc = "worker-count reruns of the statistics and Monte Carlo CSVs are byte-identical"
    with _reporting(capsys, 11, desc):
        assert exact_stats_pair[0] == exact_stats_pair[1]
        assert sampled_stats_pair[0] == sampled_stats_pair[1]
        assert montecarlo_pair[0] == montecarlo_pair[1]
