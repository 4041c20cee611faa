"""Readout-language automata: the nondeterministic window automaton and its determinization.

The set of readouts a mapping can produce is a regular language.  Its natural
acceptor is an NFA whose states are the ``4**(k-1)`` possible window overlaps;
reading level ``i`` from overlap ``u`` may move to any overlap ``v`` whose
combined window has level ``i``.  Every state is initial and accepting, so the
full overlap set is the start subset of the determinized automaton.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .channel import Mapping
from .errors import StateCapExceededError

DEFAULT_STATE_CAP = 2**20
STATE_CAP_ENV = "PORECAP_STATE_CAP"


@dataclass(frozen=True)
class ChannelNfa:
    """Nondeterministic acceptor of achievable readouts.

    ``transitions[state][level]`` is a bitmask over successor states.  For
    ``k == 1`` there is a single state carrying one self-loop per achievable
    level (edge multiplicity is not represented).
    """

    k: int
    b: int
    state_count: int
    transitions: tuple[tuple[int, ...], ...]


@dataclass
class ChannelDfa:
    """Deterministic acceptor over reachable overlap subsets.

    ``states[i]`` is the bitmask of NFA states in subset ``i``; index 0 is the
    initial full subset.  ``transitions[i][level]`` is a successor index or -1
    when no strand can continue with that level (the dead subset is implicit).
    All stored states are accepting.
    """

    k: int
    b: int
    states: list[int]
    transitions: list[list[int]]


def build_nfa(f: Mapping) -> ChannelNfa:
    """Build the overlap NFA of a mapping."""
    count = 4 ** (f.k - 1)
    table = f.table
    rows = []
    for state in range(count):
        row = [0] * f.b
        base = state * 4
        for code in range(4):
            level = table[base + code]
            row[level] |= 1 << ((base + code) % count)
        rows.append(tuple(row))
    return ChannelNfa(f.k, f.b, count, tuple(rows))


def _resolve_state_cap(state_cap: int | None) -> int:
    if state_cap is not None:
        return state_cap
    env = os.environ.get(STATE_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_STATE_CAP


def determinize(nfa: ChannelNfa, state_cap: int | None = None) -> ChannelDfa:
    """Subset construction restricted to subsets reachable from the full overlap set.

    Raises :class:`StateCapExceededError` once more than ``state_cap`` subsets
    would be materialized (default ``DEFAULT_STATE_CAP``, overridable through
    the ``PORECAP_STATE_CAP`` environment variable).
    """
    cap = _resolve_state_cap(state_cap)
    trans = nfa.transitions
    full = (1 << nfa.state_count) - 1
    states = [full]
    index = {full: 0}
    rows: list[list[int]] = []
    pos = 0
    while pos < len(states):
        mask = states[pos]
        row = []
        for level in range(nfa.b):
            succ = 0
            rest = mask
            while rest:
                low = rest & -rest
                succ |= trans[low.bit_length() - 1][level]
                rest ^= low
            if succ:
                nxt = index.get(succ)
                if nxt is None:
                    nxt = len(states)
                    if nxt >= cap:
                        raise StateCapExceededError(
                            f"subset construction exceeded the state cap of {cap} states; "
                            f"set {STATE_CAP_ENV} or pass state_cap to raise it"
                        )
                    index[succ] = nxt
                    states.append(succ)
                row.append(nxt)
            else:
                row.append(-1)
        rows.append(row)
        pos += 1
    return ChannelDfa(nfa.k, nfa.b, states, rows)


def is_universal(dfa: ChannelDfa) -> bool:
    """True when every reachable subset has a successor on every level.

    Equivalently, every level sequence is an achievable readout.
    """
    return all(target != -1 for row in dfa.transitions for target in row)


def nfa_accepts(nfa: ChannelNfa, readout: tuple[int, ...]) -> bool:
    """Subset simulation of the NFA on a readout."""
    trans = nfa.transitions
    mask = (1 << nfa.state_count) - 1
    for level in readout:
        if not 0 <= level < nfa.b:
            return False
        succ = 0
        rest = mask
        while rest:
            low = rest & -rest
            succ |= trans[low.bit_length() - 1][level]
            rest ^= low
        if not succ:
            return False
        mask = succ
    return True


def dfa_accepts(dfa: ChannelDfa, readout: tuple[int, ...]) -> bool:
    state = 0
    for level in readout:
        if not 0 <= level < dfa.b:
            return False
        state = dfa.transitions[state][level]
        if state == -1:
            return False
    return True


def dfa_edge_list(dfa: ChannelDfa) -> str:
    """Debug dump: one line per edge, ``subset_hex level subset_hex``."""
    lines = []
    for i, row in enumerate(dfa.transitions):
        for level, j in enumerate(row):
            if j != -1:
                lines.append(f"{dfa.states[i]:x} {level} {dfa.states[j]:x}")
    return "\n".join(lines) + ("\n" if lines else "")
