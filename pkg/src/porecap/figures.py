"""Report tables and charts: the bounds sweep and balanced-mapping statistics.

CSV is the primary output and is byte-stable for fixed inputs; the chart
renderers draw the same data to PNG files for quick inspection.
"""

from __future__ import annotations

from pathlib import Path

from .bounds import CapacityBounds, bounds
from .errors import PorecapError
from .mapping_space import CapacityStats

BOUNDS_HEADER = "b,max,min_lower,min_upper"
STATS_HEADER = "k,b,mode,count,min,mean,max"


def sweep_levels(k: int, max_b: int) -> list[int]:
    """Powers of two from 1 up to max_b, the level counts a sweep covers."""
    if max_b < 1:
        raise PorecapError(f"sweep limit must be >= 1, got {max_b}")
    if max_b > 4**k:
        raise PorecapError(
            f"sweep limit {max_b} exceeds the largest level count 4^k={4 ** k}"
        )
    out = []
    value = 1
    while value <= max_b:
        out.append(value)
        value *= 2
    return out


def bounds_sweep(k: int, max_b: int) -> list[CapacityBounds]:
    return [bounds(k, b) for b in sweep_levels(k, max_b)]


def bounds_csv(rows: list[CapacityBounds]) -> str:
    lines = [BOUNDS_HEADER]
    for row in rows:
        upper = "" if row.min_upper is None else f"{row.min_upper:.6f}"
        lines.append(f"{row.b},{row.max_capacity:.6f},{row.min_lower:.6f},{upper}")
    return "\n".join(lines) + "\n"


def stats_csv(rows: list[CapacityStats]) -> str:
    lines = [STATS_HEADER]
    for row in rows:
        lines.append(
            f"{row.k},{row.b},{row.mode},{row.count},"
            f"{row.min_capacity:.6f},{row.mean_capacity:.6f},{row.max_capacity:.6f}"
        )
    return "\n".join(lines) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def render_bounds_chart(rows: list[CapacityBounds], path: str | Path) -> None:
    """Draw the bounds sweep: best mapping plus the bracket on the worst one."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    bs = [row.b for row in rows]
    ax.plot(bs, [row.max_capacity for row in rows], "o-", label="max over mappings")
    ax.plot(bs, [row.min_lower for row in rows], "s--", label="worst mapping, lower bound")
    with_upper = [(row.b, row.min_upper) for row in rows if row.min_upper is not None]
    if with_upper:
        ax.plot(
            [p[0] for p in with_upper],
            [p[1] for p in with_upper],
            "^:",
            label="worst mapping, upper bound",
        )
    ax.set_xscale("log", base=2)
    ax.set_xlabel("levels b")
    ax.set_ylabel("capacity (bits per base)")
    ax.set_title(f"Capacity bounds sweep, k={rows[0].k}" if rows else "Capacity bounds sweep")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_stats_chart(rows: list[CapacityStats], path: str | Path) -> None:
    """Draw min/mean/max capacity over balanced mappings per level count."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    bs = [row.b for row in rows]
    ax.plot(bs, [row.min_capacity for row in rows], "v-", label="min")
    ax.plot(bs, [row.mean_capacity for row in rows], "o--", label="mean")
    ax.plot(bs, [row.max_capacity for row in rows], "^-", label="max")
    for row in rows:
        ax.annotate(
            row.mode,
            (row.b, row.min_capacity),
            textcoords="offset points",
            xytext=(0, -12),
            ha="center",
            fontsize=8,
        )
    ax.set_xscale("log", base=2)
    ax.set_xlabel("levels b")
    ax.set_ylabel("capacity (bits per base)")
    ax.set_title(
        f"Balanced-mapping capacity statistics, k={rows[0].k}"
        if rows
        else "Balanced-mapping capacity statistics"
    )
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
