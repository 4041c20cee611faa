"""Deterministic sliding-window channel toolkit.

A mapping assigns one of b levels to every length-k window over ACGT; reading
a strand through the channel emits the level of each window in turn.  This
package computes the capacity of such channels exactly, brackets it with
closed-form bounds and the constructions attaining them, aggregates capacity
statistics over the balanced mapping space, and ships two codecs that realize
the capacity in practice.
"""

from .automata import (
    ChannelDfa,
    ChannelNfa,
    build_nfa,
    determinize,
    dfa_accepts,
    dfa_edge_list,
    is_universal,
    nfa_accepts,
)
from .block_codec import (
    BlockCodebook,
    block_decode,
    block_encode,
    build_codebook,
    choose_block_length,
    load_codebook,
    save_codebook,
)
from .bounds import (
    CapacityBounds,
    bounds,
    build_first_symbol_mapping,
    build_merged_mapping,
    merged_strand_index,
)
from .capacity import (
    CapacityResult,
    TransferMatrix,
    capacity_charpoly,
    capacity_spectral,
    count_readouts,
    fixed_length_capacity,
)
from .channel import (
    Mapping,
    apply_channel,
    format_readout,
    format_strand,
    kmer_from_index,
    kmer_index,
    load_mapping,
    parse_mapping,
    parse_readout,
    parse_strand,
    save_mapping,
    serialize_mapping,
)
from .errors import (
    ChannelError,
    CodecError,
    ConvergenceError,
    DimensionCapError,
    EnumerationCapError,
    MappingFormatError,
    PorecapError,
    StateCapExceededError,
)
from .greedy import (
    FeasibilityResult,
    GreedyScheme,
    build_greedy_scheme,
    feasibility_rate,
    greedy_decode,
    greedy_encode,
    greedy_feasible,
    greedy_max_prefix,
    greedy_success_bound,
)
from .mapping_space import (
    CapacityStats,
    balanced_count,
    capacity_stats,
    enumerate_balanced,
    sample_balanced,
)

__version__ = "0.1.0"

__all__ = [
    "BlockCodebook",
    "CapacityBounds",
    "CapacityResult",
    "CapacityStats",
    "ChannelDfa",
    "ChannelError",
    "ChannelNfa",
    "CodecError",
    "ConvergenceError",
    "DimensionCapError",
    "EnumerationCapError",
    "FeasibilityResult",
    "GreedyScheme",
    "Mapping",
    "MappingFormatError",
    "PorecapError",
    "StateCapExceededError",
    "TransferMatrix",
    "apply_channel",
    "balanced_count",
    "block_decode",
    "block_encode",
    "bounds",
    "build_codebook",
    "build_first_symbol_mapping",
    "build_greedy_scheme",
    "build_merged_mapping",
    "build_nfa",
    "capacity_charpoly",
    "capacity_spectral",
    "capacity_stats",
    "choose_block_length",
    "count_readouts",
    "determinize",
    "dfa_accepts",
    "dfa_edge_list",
    "enumerate_balanced",
    "feasibility_rate",
    "fixed_length_capacity",
    "format_readout",
    "format_strand",
    "greedy_decode",
    "greedy_encode",
    "greedy_feasible",
    "greedy_max_prefix",
    "greedy_success_bound",
    "is_universal",
    "kmer_from_index",
    "kmer_index",
    "load_codebook",
    "load_mapping",
    "merged_strand_index",
    "nfa_accepts",
    "parse_mapping",
    "parse_readout",
    "parse_strand",
    "sample_balanced",
    "save_codebook",
    "save_mapping",
    "serialize_mapping",
    "__version__",
]
