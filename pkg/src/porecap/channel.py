"""DNA strands, current readouts, and the window-to-level mapping defining the channel.

A mapping assigns one of ``b`` current levels to every DNA window of ``k``
bases.  Passing a strand through the channel slides the window one base at a
time and reports the level of each position, so a strand of length ``n``
produces a readout of length ``n - k + 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ChannelError, MappingFormatError

BASES = "ACGT"
_BASE_INDEX = {base: i for i, base in enumerate(BASES)}


def kmer_index(kmer: str) -> int:
    """Base-4 value of a window string, A=0 C=1 G=2 T=3, leftmost base most significant."""
    value = 0
    for ch in kmer:
        code = _BASE_INDEX.get(ch)
        if code is None:
            raise ChannelError(f"invalid base {ch!r}; strands use uppercase ACGT only")
        value = value * 4 + code
    return value


def kmer_from_index(value: int, length: int) -> str:
    """Inverse of :func:`kmer_index` for a window of the given length."""
    if not 0 <= value < 4**length:
        raise ChannelError(f"index {value} out of range for length {length}")
    out = []
    for _ in range(length):
        out.append(BASES[value & 3])
        value >>= 2
    return "".join(reversed(out))


@dataclass(frozen=True)
class Mapping:
    """A window-to-level table: ``table[i]`` is the level of the window with index ``i``.

    Invariants checked on construction: ``k >= 1``, ``b >= 1``, the table has
    exactly ``4**k`` entries and every entry lies in ``range(b)``.
    """

    k: int
    b: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise MappingFormatError("k must be >= 1")
        if self.b < 1:
            raise MappingFormatError("b must be >= 1")
        if len(self.table) != 4**self.k:
            raise MappingFormatError(
                f"table has {len(self.table)} entries, expected {4 ** self.k} for k={self.k}"
            )
        for i, level in enumerate(self.table):
            if not isinstance(level, int) or isinstance(level, bool):
                raise MappingFormatError(f"level for k-mer {kmer_from_index(i, self.k)} is not an integer")
            if not 0 <= level < self.b:
                raise MappingFormatError(
                    f"level {level} out of range for b={self.b} at k-mer {kmer_from_index(i, self.k)}"
                )

    def level(self, kmer: str) -> int:
        """Level assigned to a single window given as a string of k bases."""
        if len(kmer) != self.k:
            raise ChannelError(f"window {kmer!r} does not have length k={self.k}")
        return self.table[kmer_index(kmer)]

    def preimage_sizes(self) -> list[int]:
        """Number of windows mapped to each level, indexed by level."""
        sizes = [0] * self.b
        for level in self.table:
            sizes[level] += 1
        return sizes

    def is_surjective(self) -> bool:
        return all(size > 0 for size in self.preimage_sizes())

    def is_balanced(self) -> bool:
        """True when every level has exactly ``4**k / b`` preimage windows."""
        if 4**self.k % self.b != 0:
            return False
        share = 4**self.k // self.b
        return all(size == share for size in self.preimage_sizes())


def apply_channel(f: Mapping, strand: str) -> tuple[int, ...]:
    """Slide the k-wide window over the strand and report one level per position.

    Args:
        f: the window-to-level mapping.
        strand: uppercase ACGT string of length at least ``f.k``.

    Returns:
        Tuple of ``len(strand) - f.k + 1`` levels.
    """
    if len(strand) < f.k:
        raise ChannelError(f"strand of length {len(strand)} too short for window size k={f.k}")
    roll = 4 ** (f.k - 1)
    table = f.table
    idx = kmer_index(strand[: f.k])
    out = [table[idx]]
    for ch in strand[f.k :]:
        code = _BASE_INDEX.get(ch)
        if code is None:
            raise ChannelError(f"invalid base {ch!r}; strands use uppercase ACGT only")
        idx = (idx % roll) * 4 + code
        out.append(table[idx])
    return tuple(out)


def parse_strand(text: str) -> str:
    """Read a strand file body: one line of uppercase ACGT, optional trailing newline."""
    strand = text[:-1] if text.endswith("\n") else text
    for ch in strand:
        if ch not in _BASE_INDEX:
            raise ChannelError(f"invalid base {ch!r}; strands use uppercase ACGT only")
    return strand


def format_strand(strand: str) -> str:
    return strand + "\n"


def parse_readout(text: str) -> tuple[int, ...]:
    """Read a readout file body: comma-separated decimal levels on one line."""
    body = text[:-1] if text.endswith("\n") else text
    if body == "":
        return ()
    levels = []
    for field in body.split(","):
        field = field.strip()
        if not field or not field.lstrip("-").isdigit():
            raise ChannelError(f"invalid readout field {field!r}; expected a decimal level")
        levels.append(int(field))
    return tuple(levels)


def format_readout(readout: tuple[int, ...]) -> str:
    return ",".join(str(level) for level in readout) + "\n"


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            if set(key) <= set(BASES):
                raise MappingFormatError(f"duplicate k-mer: {key}")
            raise MappingFormatError(f"duplicate key: {key!r}")
        seen[key] = value
    return seen


def parse_mapping(text: str) -> Mapping:
    """Parse a mapping JSON document ``{"k": int, "b": int, "table": {kmer: level}}``.

    The table must contain exactly ``4**k`` k-mer keys.  Missing k-mers,
    duplicate k-mers, out-of-range levels, and malformed JSON each raise
    :class:`MappingFormatError` with a distinct message.
    """
    try:
        obj = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MappingFormatError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MappingFormatError("mapping document must be a JSON object")
    for field in ("k", "b", "table"):
        if field not in obj:
            raise MappingFormatError(f"missing field {field!r}")
    extra = set(obj) - {"k", "b", "table"}
    if extra:
        raise MappingFormatError(f"unexpected field {sorted(extra)[0]!r}")
    k, b, table = obj["k"], obj["b"], obj["table"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise MappingFormatError("k must be a positive integer")
    if not isinstance(b, int) or isinstance(b, bool) or b < 1:
        raise MappingFormatError("b must be a positive integer")
    if not isinstance(table, dict):
        raise MappingFormatError("table must be a JSON object of k-mer to level")
    levels: list[int | None] = [None] * 4**k
    for kmer, level in table.items():
        if len(kmer) != k or not set(kmer) <= set(BASES):
            raise MappingFormatError(f"invalid k-mer: {kmer!r}")
        if not isinstance(level, int) or isinstance(level, bool):
            raise MappingFormatError(f"level for k-mer {kmer} is not an integer")
        if not 0 <= level < b:
            raise MappingFormatError(f"level {level} out of range for b={b} at k-mer {kmer}")
        levels[kmer_index(kmer)] = level
    for i, level in enumerate(levels):
        if level is None:
            raise MappingFormatError(f"missing k-mer: {kmer_from_index(i, k)}")
    return Mapping(k, b, tuple(levels))  # type: ignore[arg-type]


def serialize_mapping(f: Mapping) -> str:
    """Serialize a mapping to canonical JSON; ``parse_mapping`` inverts it exactly."""
    table = {kmer_from_index(i, f.k): level for i, level in enumerate(f.table)}
    return json.dumps({"k": f.k, "b": f.b, "table": table})


def load_mapping(path: str) -> Mapping:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_mapping(handle.read())


def save_mapping(f: Mapping, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_mapping(f) + "\n")
