"""Block coding: a codebook of strands on which the channel readout is injective.

The codebook for block length L keeps one strand per achievable readout of
length L-k+1, always the lexicographically least preimage, ordered by strand.
Messages map to codebook indices either in fixed-size bit chunks (default,
linear time) or by whole-message radix conversion (exact rate, superlinear).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .automata import build_nfa, determinize
from .capacity import capacity_spectral
from .channel import Mapping, apply_channel, kmer_from_index, parse_mapping, serialize_mapping
from .errors import CodecError

DEFAULT_ENUMERATION_CAP = 4**13
DEFAULT_BLOCK_LENGTH_CAP = 200
CODEBOOK_FORMAT = "porecap-block-codebook"
CODEBOOK_VERSION = 1
_MODES = ("chunked", "radix")


@dataclass(frozen=True)
class BlockCodebook:
    """Forward strand table and inverse readout lookup for one block length."""

    f: Mapping
    block_length: int
    strands: tuple[str, ...]
    index: dict[tuple[int, ...], int] = field(repr=False)
    bits_per_block: int


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise CodecError(f"unknown codec mode {mode!r}; expected one of {_MODES}")


def _brute_pairs(f: Mapping, block_length: int) -> dict[int, int]:
    """Min strand code per achievable readout code, by full enumeration."""
    m = block_length - f.k + 1
    table = np.array(f.table, dtype=np.int64)
    window_mask = 4**f.k - 1
    total = 4**block_length
    best: dict[int, int] = {}
    chunk = 1 << 18
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        rcodes = np.zeros(len(codes), dtype=np.int64)
        for j in range(m):
            shift = 2 * (block_length - f.k - j)
            rcodes = rcodes * f.b + table[(codes >> shift) & window_mask]
        uniq, first = np.unique(rcodes, return_index=True)
        for rc, sc in zip(uniq.tolist(), codes[first].tolist()):
            prev = best.get(rc)
            if prev is None or sc < prev:
                best[rc] = sc
    return best


def _readout_tuple(code: int, length: int, b: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        code, out[i] = divmod(code, b)
    return tuple(out)


def _dfs_pairs(f: Mapping, block_length: int) -> list[tuple[int, tuple[int, ...]]]:
    """Same codebook as brute enumeration, walking readouts instead of strands.

    Tracks, per overlap state, the least strand prefix emitting the current
    readout prefix; cost scales with achievable readouts, not 4^L.
    """
    nfa = build_nfa(f)
    size = nfa.state_count
    m = block_length - f.k + 1
    table = f.table
    pairs: list[tuple[int, tuple[int, ...]]] = []
    path: list[int] = []

    def descend(min_prefix: dict[int, int], depth: int) -> None:
        if depth == m:
            pairs.append((min(min_prefix.values()), tuple(path)))
            return
        for level in range(f.b):
            nxt: dict[int, int] = {}
            for q, pref in min_prefix.items():
                row = q * 4
                for a in range(4):
                    if table[row + a] != level:
                        continue
                    v = (row + a) % size
                    cand = pref * 4 + a
                    cur = nxt.get(v)
                    if cur is None or cand < cur:
                        nxt[v] = cand
            if nxt:
                path.append(level)
                descend(nxt, depth + 1)
                path.pop()

    descend({q: q for q in range(size)}, 0)
    return pairs


def build_codebook(
    f: Mapping, block_length: int, *, enumeration_cap: int = DEFAULT_ENUMERATION_CAP
) -> BlockCodebook:
    """Codebook of the lexicographically least strand per achievable readout.

    Full strand enumeration under the cap, a readout-trie walk above it; both
    yield identical codebooks.
    """
    if block_length < f.k:
        raise CodecError(
            f"block length {block_length} is shorter than the window size k={f.k}"
        )
    m = block_length - f.k + 1
    packable = f.b**m <= 2**62
    if 4**block_length <= enumeration_cap and packable:
        best = _brute_pairs(f, block_length)
        pairs = [(sc, _readout_tuple(rc, m, f.b)) for rc, sc in best.items()]
    else:
        pairs = _dfs_pairs(f, block_length)
    pairs.sort(key=lambda item: item[0])
    strands = tuple(kmer_from_index(sc, block_length) for sc, _ in pairs)
    index = {readout: i for i, (_, readout) in enumerate(pairs)}
    return BlockCodebook(
        f=f,
        block_length=block_length,
        strands=strands,
        index=index,
        bits_per_block=len(strands).bit_length() - 1,
    )


def choose_block_length(
    f: Mapping, epsilon: float, *, max_block_length: int = DEFAULT_BLOCK_LENGTH_CAP
) -> int:
    """Smallest block length whose fixed-length capacity is within epsilon of C_f."""
    if epsilon <= 0:
        raise CodecError(f"epsilon must be > 0, got {epsilon}")
    target = capacity_spectral(f).capacity_bits_per_base - epsilon
    dfa = determinize(build_nfa(f))
    n = len(dfa.states)
    vec = [0] * n
    vec[0] = 1
    best_length = f.k
    best_value = -math.inf
    for length in range(f.k, max_block_length + 1):
        nxt = [0] * n
        for i, row in enumerate(dfa.transitions):
            vi = vec[i]
            if not vi:
                continue
            for j in row:
                if j >= 0:
                    nxt[j] += vi
        vec = nxt
        value = math.log2(sum(vec)) / length
        if value >= target:
            return length
        if value > best_value:
            best_value = value
            best_length = length
    raise CodecError(
        f"no block length up to {max_block_length} comes within {epsilon} of "
        f"capacity; best was {best_length} at {best_value:.9f} bits per base"
    )


def block_encode(cb: BlockCodebook, message: str, *, mode: str = "chunked") -> str:
    """Encode a bit string into a strand of whole blocks.

    Chunked mode maps each bits_per_block-bit group to one strand, appending a
    1-then-zeros pad only when the length does not divide evenly; stripping
    that pad on decode needs out-of-band knowledge that it was added.  Radix
    mode converts the whole message (with a leading sentinel 1 bit) to base
    codebook-size.
    """
    _check_mode(mode)
    if any(ch not in "01" for ch in message):
        raise CodecError("message must contain only '0' and '1'")
    n = len(cb.strands)
    if mode == "chunked":
        bpb = cb.bits_per_block
        if bpb < 1:
            raise CodecError(
                "codebook holds a single readout and cannot carry bits in chunked mode"
            )
        bits = message
        if len(bits) % bpb:
            bits += "1" + "0" * ((-len(bits) - 1) % bpb)
        return "".join(
            cb.strands[int(bits[i : i + bpb], 2)] for i in range(0, len(bits), bpb)
        )
    if n < 2:
        raise CodecError("codebook needs at least two strands for radix mode")
    value = int("1" + message, 2)
    digits = []
    while value:
        value, d = divmod(value, n)
        digits.append(d)
    return "".join(cb.strands[d] for d in reversed(digits))


def block_decode(
    cb: BlockCodebook,
    readout: tuple[int, ...],
    *,
    mode: str = "chunked",
    strip_pad: bool = False,
) -> str:
    """Decode a whole-strand readout back to bits.

    Looks up the first block_length-k+1 readings of each block and skips the
    k-1 readings straddling adjacent blocks.  strip_pad removes a chunked-mode
    1-then-zeros pad and applies only when the encoder actually padded.
    """
    _check_mode(mode)
    length = cb.block_length
    k = cb.f.k
    m = length - k + 1
    if len(readout) < m or (len(readout) + k - 1) % length:
        raise CodecError(
            f"readout length {len(readout)} does not come from a whole number "
            f"of length-{length} blocks"
        )
    blocks = (len(readout) + k - 1) // length
    indices = []
    for j in range(blocks):
        key = tuple(readout[j * length : j * length + m])
        idx = cb.index.get(key)
        if idx is None:
            raise CodecError(
                f"unreachable readout at block {j}; this mapping cannot produce it"
            )
        indices.append(idx)
    if mode == "chunked":
        bpb = cb.bits_per_block
        if bpb < 1:
            raise CodecError(
                "codebook holds a single readout and cannot carry bits in chunked mode"
            )
        parts = []
        for j, idx in enumerate(indices):
            if idx >> bpb:
                raise CodecError(
                    f"block {j} decodes to index {idx}, beyond the {bpb}-bit chunk range"
                )
            parts.append(format(idx, f"0{bpb}b"))
        bits = "".join(parts)
        if strip_pad:
            cut = bits.rfind("1")
            if cut < 0:
                raise CodecError("padded message has no pad marker to strip")
            bits = bits[:cut]
        return bits
    value = 0
    for idx in indices:
        value = value * len(cb.strands) + idx
    if value == 0:
        raise CodecError("radix readout decodes to zero; the sentinel bit is missing")
    return bin(value)[3:]


def codebook_document(cb: BlockCodebook, *, mode: str = "chunked") -> dict:
    _check_mode(mode)
    return {
        "format": CODEBOOK_FORMAT,
        "version": CODEBOOK_VERSION,
        "k": cb.f.k,
        "b": cb.f.b,
        "block_length": cb.block_length,
        "size": len(cb.strands),
        "mode": mode,
        "mapping": json.loads(serialize_mapping(cb.f)),
        "strands": list(cb.strands),
    }


def save_codebook(cb: BlockCodebook, path: str | Path, *, mode: str = "chunked") -> None:
    doc = codebook_document(cb, mode=mode)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_codebook(path: str | Path) -> tuple[BlockCodebook, str]:
    """Read a saved codebook and its stored mode, revalidating consistency."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CodecError(f"cannot read codebook file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != CODEBOOK_FORMAT:
        raise CodecError("not a codebook file")
    if doc.get("version") != CODEBOOK_VERSION:
        raise CodecError(f"unsupported codebook version {doc.get('version')!r}")
    for key in ("k", "b", "block_length", "size", "mode", "mapping", "strands"):
        if key not in doc:
            raise CodecError(f"codebook file is missing field {key!r}")
    mode = doc["mode"]
    _check_mode(mode)
    f = parse_mapping(json.dumps(doc["mapping"]))
    if doc["k"] != f.k or doc["b"] != f.b:
        raise CodecError("codebook header disagrees with its embedded mapping")
    length = doc["block_length"]
    if not isinstance(length, int) or length < f.k:
        raise CodecError(f"invalid block length {length!r} in codebook file")
    strands = doc["strands"]
    if not isinstance(strands, list) or len(strands) != doc["size"]:
        raise CodecError("codebook strand list disagrees with its header size")
    index: dict[tuple[int, ...], int] = {}
    for i, strand in enumerate(strands):
        if not isinstance(strand, str) or len(strand) != length:
            raise CodecError(f"strand {i} has the wrong length for this codebook")
        readout = apply_channel(f, strand)
        if readout in index:
            raise CodecError(f"strand {i} duplicates the readout of an earlier strand")
        index[readout] = i
    cb = BlockCodebook(
        f=f,
        block_length=length,
        strands=tuple(strands),
        index=index,
        bits_per_block=len(strands).bit_length() - 1,
    )
    return cb, mode
