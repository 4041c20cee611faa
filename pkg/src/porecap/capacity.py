"""Capacity of a mapping: growth rate of its achievable readout language.

Both routes determinize the channel automaton, take the transfer matrix T of
the reachable part (T[i][j] counts levels moving DFA state i to j), and reduce
capacity to the spectral radius: capacity = log2 rho(T).

``capacity_spectral`` bounds rho with a Collatz-Wielandt certified power
iteration run per strongly connected component.  ``capacity_charpoly`` finds
the smallest positive root r of det(I - z*T) exactly and returns -log2(r).
The two are independent cross-checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import intpoly
from .automata import ChannelDfa, build_nfa, determinize
from .channel import Mapping
from .errors import ConvergenceError, DimensionCapError, PorecapError

DENSE_LIMIT = 512
DEFAULT_CHARPOLY_DIM_CAP = 64


@dataclass(frozen=True)
class CapacityResult:
    """Capacity of a mapping along with how it was computed."""

    capacity_bits_per_base: float
    spectral_radius: float
    dfa_states: int
    method: str


@dataclass(frozen=True)
class TransferMatrix:
    """Counts of levels moving one reachable DFA state to another.

    Dense int64 array up to DENSE_LIMIT states, edge list above that.
    """

    dim: int
    dense: np.ndarray | None = None
    src: np.ndarray | None = None
    dst: np.ndarray | None = None
    cnt: np.ndarray | None = None

    @classmethod
    def from_dfa(cls, dfa: ChannelDfa) -> "TransferMatrix":
        n = len(dfa.states)
        if n <= DENSE_LIMIT:
            dense = np.zeros((n, n), dtype=np.int64)
            for i, row in enumerate(dfa.transitions):
                for j in row:
                    if j >= 0:
                        dense[i, j] += 1
            return cls(dim=n, dense=dense)
        counts: dict[tuple[int, int], int] = {}
        for i, row in enumerate(dfa.transitions):
            for j in row:
                if j >= 0:
                    key = (i, j)
                    counts[key] = counts.get(key, 0) + 1
        pairs = sorted(counts)
        src = np.array([p[0] for p in pairs], dtype=np.int64)
        dst = np.array([p[1] for p in pairs], dtype=np.int64)
        cnt = np.array([counts[p] for p in pairs], dtype=np.float64)
        return cls(dim=n, src=src, dst=dst, cnt=cnt)

    def int_rows(self) -> list[list[int]]:
        if self.dense is None:
            raise DimensionCapError(
                f"transfer matrix of dimension {self.dim} exceeds the dense limit "
                f"of {DENSE_LIMIT} states"
            )
        return [[int(v) for v in row] for row in self.dense]

    def neighbors(self) -> list[list[int]]:
        if self.dense is not None:
            return [np.nonzero(row)[0].tolist() for row in self.dense]
        out: list[list[int]] = [[] for _ in range(self.dim)]
        for i, j in zip(self.src.tolist(), self.dst.tolist()):
            out[i].append(j)
        return out


def _sccs(neigh: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan."""
    n = len(neigh)
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        frames: list[list[int]] = [[root, 0]]
        while frames:
            v, ptr = frames[-1]
            if ptr == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            row = neigh[v]
            descended = False
            while ptr < len(row):
                w = row[ptr]
                ptr += 1
                if index[w] == -1:
                    frames[-1][1] = ptr
                    frames.append([w, 0])
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            frames.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if frames:
                parent = frames[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return comps


def _rho_dense_scc(sub: np.ndarray, tol: float, max_iter: int) -> float:
    """Certified spectral radius of an irreducible nonnegative dense block.

    Iterates on M = sub + I so the matrix is primitive; for any positive v the
    ratios (M @ v) / v bracket rho(M), which certifies the returned midpoint
    to tol/2.
    """
    d = sub.shape[0]
    m = sub.astype(np.float64) + np.eye(d)
    squarings = max(3, (d - 1).bit_length() + 1)
    b = m / np.max(m)
    for _ in range(squarings):
        b = b @ b
        b /= np.max(b)
    ones = np.ones(d)
    v = b @ ones
    v /= np.max(v)
    np.maximum(v, 1e-300, out=v)
    lo = hi = 0.0
    for it in range(max_iter):
        w = m @ v
        ratios = w / v
        lo = float(ratios.min())
        hi = float(ratios.max())
        if hi - lo <= tol:
            return 0.5 * (lo + hi) - 1.0
        v = w / np.max(w)
        np.maximum(v, 1e-300, out=v)
        if (it + 1) % 128 == 0 and squarings < 80:
            b = b @ b
            b /= np.max(b)
            squarings += 1
            v = b @ ones
            v /= np.max(v)
            np.maximum(v, 1e-300, out=v)
    raise ConvergenceError(
        f"power iteration stalled: Collatz-Wielandt gap {hi - lo!r} above "
        f"tolerance {tol} after {max_iter} iterations"
    )


def _rho_sparse_scc(
    d: int,
    src: np.ndarray,
    dst: np.ndarray,
    cnt: np.ndarray,
    tol: float,
    max_iter: int,
) -> float:
    v = np.ones(d)
    lo = hi = 0.0
    for _ in range(max_iter):
        w = np.bincount(src, weights=cnt * v[dst], minlength=d) + v
        ratios = w / v
        lo = float(ratios.min())
        hi = float(ratios.max())
        if hi - lo <= tol:
            return 0.5 * (lo + hi) - 1.0
        v = w / np.max(w)
        np.maximum(v, 1e-300, out=v)
    raise ConvergenceError(
        f"power iteration stalled: Collatz-Wielandt gap {hi - lo!r} above "
        f"tolerance {tol} after {max_iter} iterations"
    )


def _spectral_radius(tm: TransferMatrix, tol: float, max_iter: int) -> float:
    comps = _sccs(tm.neighbors())
    rho = 0.0
    if tm.dense is not None:
        for comp in comps:
            if len(comp) == 1:
                q = comp[0]
                rho = max(rho, float(tm.dense[q, q]))
            else:
                sub = tm.dense[np.ix_(comp, comp)]
                rho = max(rho, _rho_dense_scc(sub, tol, max_iter))
        return rho
    src_l = tm.src.tolist()
    dst_l = tm.dst.tolist()
    cnt_l = tm.cnt.tolist()
    comp_of = [0] * tm.dim
    for ci, comp in enumerate(comps):
        for q in comp:
            comp_of[q] = ci
    edges_by_comp: list[list[tuple[int, int, float]]] = [[] for _ in comps]
    for s, t, c in zip(src_l, dst_l, cnt_l):
        if comp_of[s] == comp_of[t]:
            edges_by_comp[comp_of[s]].append((s, t, c))
    for ci, comp in enumerate(comps):
        if len(comp) == 1:
            q = comp[0]
            self_cnt = sum(c for s, t, c in edges_by_comp[ci] if s == q and t == q)
            rho = max(rho, self_cnt)
            continue
        local = {q: i for i, q in enumerate(comp)}
        es = edges_by_comp[ci]
        src = np.array([local[s] for s, _, _ in es], dtype=np.int64)
        dst = np.array([local[t] for _, t, _ in es], dtype=np.int64)
        cnt = np.array([c for _, _, c in es], dtype=np.float64)
        rho = max(rho, _rho_sparse_scc(len(comp), src, dst, cnt, tol, max_iter))
    return rho


def _warn_if_unused_levels(f: Mapping) -> None:
    if not f.is_surjective():
        used = sum(1 for s in f.preimage_sizes() if s)
        warnings.warn(
            f"mapping emits only {used} of its {f.b} levels; capacity reflects "
            "the readouts it can actually produce",
            UserWarning,
            stacklevel=3,
        )


def _reachable_dfa(f: Mapping, state_cap: int | None) -> ChannelDfa:
    return determinize(build_nfa(f), state_cap=state_cap)


def capacity_spectral(
    f: Mapping,
    *,
    tol: float = 1e-10,
    max_iter: int = 20000,
    state_cap: int | None = None,
) -> CapacityResult:
    """Capacity via certified power iteration on the transfer matrix."""
    _warn_if_unused_levels(f)
    dfa = _reachable_dfa(f, state_cap)
    tm = TransferMatrix.from_dfa(dfa)
    rho = _spectral_radius(tm, tol, max_iter)
    if rho < 1.0:
        raise PorecapError(
            f"internal: spectral radius {rho!r} below 1; every reachable state "
            "has at least one outgoing level"
        )
    return CapacityResult(
        capacity_bits_per_base=math.log2(rho),
        spectral_radius=rho,
        dfa_states=tm.dim,
        method="spectral",
    )


def capacity_charpoly(
    f: Mapping,
    *,
    tol: float = 1e-12,
    dim_cap: int = DEFAULT_CHARPOLY_DIM_CAP,
    state_cap: int | None = None,
) -> CapacityResult:
    """Capacity via the smallest positive root of det(I - z*T), exactly.

    The characteristic polynomial is computed in exact integer arithmetic, so
    the matrix dimension is capped (default 64); larger DFAs should use
    capacity_spectral.
    """
    _warn_if_unused_levels(f)
    dfa = _reachable_dfa(f, state_cap)
    tm = TransferMatrix.from_dfa(dfa)
    if tm.dim > dim_cap:
        raise DimensionCapError(
            f"reachable DFA has {tm.dim} states, above the exact-root cap of "
            f"{dim_cap}; use capacity_spectral or raise dim_cap"
        )
    poly = intpoly.det_one_minus_z(tm.int_rows())
    root = intpoly.smallest_positive_root(poly, tol=tol)
    rho = 1.0 / root
    return CapacityResult(
        capacity_bits_per_base=-math.log2(root),
        spectral_radius=rho,
        dfa_states=tm.dim,
        method="charpoly",
    )


def _readout_counts(dfa: ChannelDfa, length: int) -> list[int]:
    """Exact counts of achievable readouts for lengths 0..length, big integers."""
    n = len(dfa.states)
    vec = [0] * n
    vec[0] = 1
    counts = [1]
    for _ in range(length):
        nxt = [0] * n
        for i, row in enumerate(dfa.transitions):
            vi = vec[i]
            if not vi:
                continue
            for j in row:
                if j >= 0:
                    nxt[j] += vi
        vec = nxt
        counts.append(sum(vec))
    return counts


def count_readouts(f: Mapping, m: int, *, state_cap: int | None = None) -> int:
    """Exact number of distinct readouts of length m the mapping can emit."""
    if m < 0:
        raise PorecapError(f"readout length must be >= 0, got {m}")
    dfa = _reachable_dfa(f, state_cap)
    return _readout_counts(dfa, m)[m]


def fixed_length_capacity(
    f: Mapping, block_length: int, *, state_cap: int | None = None
) -> float:
    """log2(number of readouts from strands of block_length) / block_length."""
    if block_length < f.k:
        raise PorecapError(
            f"block length {block_length} is shorter than the window size {f.k}"
        )
    n = count_readouts(f, block_length - f.k + 1, state_cap=state_cap)
    return math.log2(n) / block_length
