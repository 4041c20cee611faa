"""Greedy coding for two-level mappings: one bit per k-ell bases.

A scheme at prefix length ell exists when every length-ell prefix starts at
least one level-0 window and at least one level-1 window.  Encoding keeps the
last ell bases as context, descends the trie of the next bit's preimage along
that context, and extends with the least completion; each bit then sits at a
fixed stride in the readout, so decoding is plain extraction.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from .channel import Mapping, kmer_from_index
from .errors import CodecError

_TRIALS_PER_CHUNK = 256

Trie = dict[str, "Trie"]


def _check_scheme_args(f: Mapping, prefix_len: int) -> None:
    if f.b != 2:
        raise CodecError(f"greedy coding needs b=2, got b={f.b}")
    if not 1 <= prefix_len < f.k:
        raise CodecError(
            f"prefix length must satisfy 1 <= ell < k; got ell={prefix_len}, k={f.k}"
        )


def greedy_feasible(f: Mapping, prefix_len: int) -> bool:
    """True when every length-ell prefix starts windows of both levels."""
    _check_scheme_args(f, prefix_len)
    suffix_count = 4 ** (f.k - prefix_len)
    seen0 = bytearray(4**prefix_len)
    seen1 = bytearray(4**prefix_len)
    for idx, level in enumerate(f.table):
        prefix = idx // suffix_count
        if level:
            seen1[prefix] = 1
        else:
            seen0[prefix] = 1
    return all(seen0) and all(seen1)


def greedy_max_prefix(f: Mapping) -> int | None:
    """Largest feasible prefix length in 1..k-1, or None when none works."""
    if f.b != 2:
        raise CodecError(f"greedy coding needs b=2, got b={f.b}")
    best = None
    for prefix_len in range(1, f.k):
        if greedy_feasible(f, prefix_len):
            best = prefix_len
    return best


def _insert(trie: Trie, word: str) -> None:
    node = trie
    for ch in word:
        node = node.setdefault(ch, {})


def _least_completion(node: Trie, out: list[str]) -> None:
    while node:
        ch = min(node)
        out.append(ch)
        node = node[ch]


@dataclass(frozen=True)
class GreedyScheme:
    """Tries over both preimages plus the prefix length that links them."""

    f: Mapping
    prefix_len: int
    tries: tuple[Trie, Trie] = field(repr=False)

    @property
    def rate(self) -> float:
        return 1.0 / (self.f.k - self.prefix_len)


def build_greedy_scheme(f: Mapping, prefix_len: int) -> GreedyScheme:
    _check_scheme_args(f, prefix_len)
    if not greedy_feasible(f, prefix_len):
        raise CodecError(
            f"the prefix property fails at ell={prefix_len}; no greedy scheme exists"
        )
    trie0: Trie = {}
    trie1: Trie = {}
    for idx, level in enumerate(f.table):
        _insert(trie1 if level else trie0, kmer_from_index(idx, f.k))
    return GreedyScheme(f=f, prefix_len=prefix_len, tries=(trie0, trie1))


def greedy_encode(gs: GreedyScheme, bits: str) -> str:
    """Strand of length k + (len(bits)-1)(k-ell) whose strided readings are bits."""
    if not bits:
        raise CodecError("bits must be non-empty")
    if any(ch not in "01" for ch in bits):
        raise CodecError("bits must contain only '0' and '1'")
    k = gs.f.k
    ell = gs.prefix_len
    out: list[str] = []
    _least_completion(gs.tries[int(bits[0])], out)
    for bit in bits[1:]:
        node = gs.tries[int(bit)]
        for ch in out[-ell:]:
            node = node[ch]
        _least_completion(node, out)
    return "".join(out)


def greedy_decode(gs: GreedyScheme, readout: tuple[int, ...]) -> str:
    """Bits are the readings at stride k-ell, starting from reading 0."""
    stride = gs.f.k - gs.prefix_len
    if len(readout) < 1 or (len(readout) - 1) % stride:
        raise CodecError(
            f"readout length {len(readout)} does not match stride {stride}"
        )
    return "".join(str(readout[i]) for i in range(0, len(readout), stride))


def greedy_success_bound(k: int, prefix_len: int) -> float:
    """Lower bound on the chance a uniform random mapping is feasible at ell."""
    if not 1 <= prefix_len < k:
        raise CodecError(
            f"prefix length must satisfy 1 <= ell < k; got ell={prefix_len}, k={k}"
        )
    return max(0.0, 1.0 - 4**prefix_len * 2.0 * 0.5 ** (4 ** (k - prefix_len)))


@dataclass(frozen=True)
class FeasibilityResult:
    """Monte Carlo feasibility of greedy coding over uniform random mappings."""

    k: int
    prefix_len: int
    trials: int
    feasible: int
    bound: float

    @property
    def rate(self) -> float:
        return self.feasible / self.trials


def _feasible_chunk(args: tuple[int, int, int, int, int]) -> int:
    k, prefix_len, seed, chunk_idx, count = args
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_idx,)))
    )
    tables = rng.integers(0, 2, size=(count, 4**k), dtype=np.int8)
    grouped = tables.reshape(count, 4**prefix_len, 4 ** (k - prefix_len))
    ok = (grouped.min(axis=2) == 0).all(axis=1) & (grouped.max(axis=2) == 1).all(axis=1)
    return int(ok.sum())


def feasibility_rate(
    k: int, prefix_len: int, trials: int, seed: int, *, workers: int = 1
) -> FeasibilityResult:
    """Fraction of uniform random b=2 mappings feasible at ell, reproducibly.

    Trials are drawn in fixed-size chunks with per-chunk seed streams, so the
    count is identical for every worker count.
    """
    if not 1 <= prefix_len < k:
        raise CodecError(
            f"prefix length must satisfy 1 <= ell < k; got ell={prefix_len}, k={k}"
        )
    if trials < 1:
        raise CodecError(f"trials must be >= 1, got {trials}")
    jobs = []
    done = 0
    while done < trials:
        count = min(_TRIALS_PER_CHUNK, trials - done)
        jobs.append((k, prefix_len, seed, len(jobs), count))
        done += count
    if workers <= 1 or len(jobs) <= 1:
        parts = [_feasible_chunk(job) for job in jobs]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=workers) as pool:
            parts = pool.map(_feasible_chunk, jobs, chunksize=1)
    return FeasibilityResult(
        k=k,
        prefix_len=prefix_len,
        trials=trials,
        feasible=sum(parts),
        bound=greedy_success_bound(k, prefix_len),
    )
