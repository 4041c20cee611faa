"""Command-line entry point.

Subcommands: capacity, bounds, stats, block-codec, greedy, figures.  Primary
results go to stdout as bare numbers or CSV; human-readable notes go to
stderr.  Exit codes: 0 success, 1 usage or input-format error, 2 computation
error.  The environment variable PORECAP_STATE_CAP overrides the automaton
state cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import block_codec, figures, greedy
from .bounds import bounds as capacity_bounds
from .capacity import capacity_charpoly, capacity_spectral, fixed_length_capacity
from .channel import load_mapping, parse_readout
from .errors import ChannelError, MappingFormatError, PorecapError
from .mapping_space import capacity_stats


class _UsageError(Exception):
    """Flag combinations the parser alone cannot reject."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        _note(f"wrote {out}")


def _cmd_capacity(args) -> int:
    f = load_mapping(args.mapping)
    results = []
    if args.method in ("spectral", "both"):
        results.append(capacity_spectral(f))
    if args.method in ("charpoly", "both"):
        results.append(capacity_charpoly(f))
    for res in results:
        print(f"{res.capacity_bits_per_base:.9f}")
        _note(f"{res.method} capacity from a {res.dfa_states}-state automaton")
    if args.block_length is not None:
        value = fixed_length_capacity(f, args.block_length)
        print(f"{value:.9f}")
        _note(f"fixed-length capacity at block length {args.block_length}")
    return 0


def _cmd_bounds(args) -> int:
    if args.sweep_b is not None:
        rows = figures.bounds_sweep(args.k, args.sweep_b)
    else:
        if args.b < 1 or 4**args.k % args.b:
            raise _UsageError(f"--b must divide 4^k={4 ** args.k}, got {args.b}")
        rows = [capacity_bounds(args.k, args.b)]
    _emit(figures.bounds_csv(rows), args.out)
    return 0


def _cmd_stats(args) -> int:
    stats = capacity_stats(
        args.k,
        args.b,
        samples=None if args.exact else args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    _emit(figures.stats_csv([stats]), args.out)
    return 0


def _resolve_codebook(args) -> tuple[block_codec.BlockCodebook, str]:
    if args.codebook:
        if args.mapping or args.block_length is not None:
            raise _UsageError("give either --codebook or --mapping/--block-length, not both")
        cb, stored_mode = block_codec.load_codebook(args.codebook)
        return cb, args.mode or stored_mode
    if not args.mapping or args.block_length is None:
        raise _UsageError("need --codebook, or both --mapping and --block-length")
    cb = block_codec.build_codebook(load_mapping(args.mapping), args.block_length)
    return cb, args.mode or "chunked"


def _cmd_block_build(args) -> int:
    cb = block_codec.build_codebook(load_mapping(args.mapping), args.block_length)
    mode = args.mode or "chunked"
    if args.out:
        block_codec.save_codebook(cb, args.out, mode=mode)
        _note(f"wrote {args.out}")
    else:
        doc = block_codec.codebook_document(cb, mode=mode)
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    _note(
        f"{len(cb.strands)} strands of length {cb.block_length}, "
        f"{cb.bits_per_block} bits per block"
    )
    return 0


def _cmd_block_encode(args) -> int:
    cb, mode = _resolve_codebook(args)
    strand = block_codec.block_encode(cb, args.message, mode=mode)
    print(strand)
    padded = mode == "chunked" and cb.bits_per_block and len(args.message) % cb.bits_per_block
    _note(
        f"{len(args.message)} bits -> {len(strand)} bases in "
        f"{len(strand) // cb.block_length} blocks ({mode} mode)"
        + ("; padded, decode with --strip-pad" if padded else "")
    )
    return 0


def _cmd_block_decode(args) -> int:
    cb, mode = _resolve_codebook(args)
    readout = parse_readout(args.readout)
    bits = block_codec.block_decode(cb, readout, mode=mode, strip_pad=args.strip_pad)
    print(bits)
    _note(f"{len(readout)} readings -> {len(bits)} bits ({mode} mode)")
    return 0


def _cmd_greedy_analyze(args) -> int:
    f = load_mapping(args.mapping)
    best = greedy.greedy_max_prefix(f)
    lines = ["k,max_prefix_len,rate,success_bound"]
    if best is None:
        lines.append(f"{f.k},,,")
        _note("no feasible prefix length; greedy coding does not apply")
    else:
        rate = 1.0 / (f.k - best)
        bound = greedy.greedy_success_bound(f.k, best)
        lines.append(f"{f.k},{best},{rate:.6f},{bound:.6f}")
        _note(f"one bit per {f.k - best} bases at prefix length {best}")
    _emit("\n".join(lines) + "\n", None)
    return 0


def _cmd_greedy_encode(args) -> int:
    f = load_mapping(args.mapping)
    gs = greedy.build_greedy_scheme(f, args.prefix_len)
    strand = greedy.greedy_encode(gs, args.bits)
    print(strand)
    _note(f"{len(args.bits)} bits -> {len(strand)} bases")
    return 0


def _cmd_greedy_decode(args) -> int:
    f = load_mapping(args.mapping)
    gs = greedy.build_greedy_scheme(f, args.prefix_len)
    bits = greedy.greedy_decode(gs, parse_readout(args.readout))
    print(bits)
    return 0


def _cmd_greedy_montecarlo(args) -> int:
    res = greedy.feasibility_rate(
        args.k, args.ell, args.trials, args.seed, workers=args.workers
    )
    text = (
        "k,ell,trials,seed,feasible,rate,bound\n"
        f"{res.k},{res.prefix_len},{res.trials},{args.seed},"
        f"{res.feasible},{res.rate:.6f},{res.bound:.6f}\n"
    )
    _emit(text, args.out)
    if res.rate >= res.bound:
        _note("empirical feasibility meets the bound")
    else:
        _note("empirical feasibility is below the bound")
    return 0


def _cmd_figures(args) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.figure == "fig1":
        rows = figures.bounds_sweep(args.k, args.sweep_b)
        text = figures.bounds_csv(rows)
        sys.stdout.write(text)
        if out_dir:
            (out_dir / "fig1.csv").write_text(text, encoding="utf-8")
            figures.render_bounds_chart(rows, out_dir / "fig1.png")
            _note(f"wrote {out_dir / 'fig1.csv'} and {out_dir / 'fig1.png'}")
        return 0
    if not args.exact_b and not args.sample_b:
        raise _UsageError("give --exact-b and/or --sample-b")
    if args.sample_b and args.samples is None:
        raise _UsageError("--sample-b needs --samples")
    stats = []
    for b in args.exact_b or []:
        stats.append(capacity_stats(args.k, b, workers=args.workers))
    for b in args.sample_b or []:
        stats.append(
            capacity_stats(
                args.k, b, samples=args.samples, seed=args.seed, workers=args.workers
            )
        )
    text = figures.stats_csv(stats)
    sys.stdout.write(text)
    if out_dir:
        (out_dir / "fig2.csv").write_text(text, encoding="utf-8")
        figures.render_stats_chart(stats, out_dir / "fig2.png")
        _note(f"wrote {out_dir / 'fig2.csv'} and {out_dir / 'fig2.png'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="porecap",
        description="Deterministic sliding-window channel toolkit: capacity, "
        "bounds, mapping statistics, and codecs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "capacity",
        help="capacity of one mapping",
        description="Print the capacity of a mapping in bits per base, nine "
        "decimal places, one value per line (method values first, then the "
        "fixed-length value when --block-length is given).",
    )
    p.add_argument("--mapping", required=True, metavar="FILE", help="mapping JSON file")
    p.add_argument(
        "--method",
        choices=["spectral", "charpoly", "both"],
        default="spectral",
        help="numeric route (default spectral)",
    )
    p.add_argument(
        "--block-length",
        type=int,
        metavar="L",
        help="also print the fixed-length capacity at block length L",
    )
    p.set_defaults(handler=_cmd_capacity)

    p = sub.add_parser(
        "bounds",
        help="capacity bounds CSV",
        description="Emit CSV 'b,max,min_lower,min_upper' for one level count "
        "or a sweep over powers of two; min_upper is empty when the merged "
        "construction does not apply.",
    )
    p.add_argument("--k", type=int, required=True, help="window size")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--b", type=int, help="single level count")
    group.add_argument(
        "--sweep-b", type=int, metavar="MAX", help="sweep powers of two up to MAX"
    )
    p.add_argument("--out", metavar="FILE", help="also write the CSV here")
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser(
        "stats",
        help="balanced-mapping capacity statistics",
        description="Emit one CSV row 'k,b,mode,count,min,mean,max' over "
        "balanced mappings, exact or sampled; byte-identical for any "
        "--workers value.",
    )
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--exact", action="store_true", help="walk every balanced mapping")
    group.add_argument("--samples", type=int, metavar="N", help="draw N uniform samples")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", metavar="FILE", help="also write the CSV here")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser(
        "block-codec",
        help="build or run a block codebook",
        description="Codebooks pair each achievable readout with its "
        "lexicographically least strand; files are versioned JSON.",
    )
    bsub = p.add_subparsers(dest="action", required=True, metavar="ACTION")

    q = bsub.add_parser("build", help="build a codebook", description="Build a codebook and print or save it as JSON.")
    q.add_argument("--mapping", required=True, metavar="FILE")
    q.add_argument("--block-length", type=int, required=True, metavar="L")
    q.add_argument("--mode", choices=["chunked", "radix"], help="stored default mode")
    q.add_argument("--out", metavar="FILE", help="write the codebook here instead of stdout")
    q.set_defaults(handler=_cmd_block_build)

    for name, handler in (("encode", _cmd_block_encode), ("decode", _cmd_block_decode)):
        q = bsub.add_parser(
            name,
            help=f"{name} with a codebook",
            description=f"{name.capitalize()} using --codebook, or --mapping "
            "with --block-length to build one on the fly.",
        )
        q.add_argument("--codebook", metavar="FILE")
        q.add_argument("--mapping", metavar="FILE")
        q.add_argument("--block-length", type=int, metavar="L")
        q.add_argument("--mode", choices=["chunked", "radix"], help="override the codec mode")
        if name == "encode":
            q.add_argument("--message", required=True, help="bit string to encode")
        else:
            q.add_argument("--readout", required=True, help="comma-separated levels")
            q.add_argument(
                "--strip-pad",
                action="store_true",
                help="remove the 1-then-zeros pad (only when encode reported padding)",
            )
        q.set_defaults(handler=handler)

    p = sub.add_parser(
        "greedy",
        help="greedy two-level codec",
        description="Greedy coding for b=2 mappings: one bit per k-ell bases "
        "when every length-ell prefix starts windows of both levels.",
    )
    gsub = p.add_subparsers(dest="action", required=True, metavar="ACTION")

    q = gsub.add_parser("analyze", help="best prefix length, rate, and bound")
    q.add_argument("--mapping", required=True, metavar="FILE")
    q.set_defaults(handler=_cmd_greedy_analyze)

    q = gsub.add_parser("encode", help="encode bits")
    q.add_argument("--mapping", required=True, metavar="FILE")
    q.add_argument("--prefix-len", type=int, required=True, metavar="L")
    q.add_argument("--bits", required=True, help="bit string to encode")
    q.set_defaults(handler=_cmd_greedy_encode)

    q = gsub.add_parser("decode", help="decode a readout")
    q.add_argument("--mapping", required=True, metavar="FILE")
    q.add_argument("--prefix-len", type=int, required=True, metavar="L")
    q.add_argument("--readout", required=True, help="comma-separated levels")
    q.set_defaults(handler=_cmd_greedy_decode)

    q = gsub.add_parser(
        "montecarlo",
        help="feasibility rate over random mappings",
        description="Emit CSV 'k,ell,trials,seed,feasible,rate,bound' over "
        "uniform random b=2 mappings; byte-identical for any --workers value.",
    )
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--trials", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out", metavar="FILE", help="also write the CSV here")
    q.set_defaults(handler=_cmd_greedy_montecarlo)

    p = sub.add_parser(
        "figures",
        help="report tables (CSV, optional PNG)",
        description="Regenerate the report tables; with --out-dir, write the "
        "CSV and a rendered PNG chart alongside it.",
    )
    fsub = p.add_subparsers(dest="figure", required=True, metavar="FIGURE")

    q = fsub.add_parser("fig1", help="bounds sweep table and chart")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--sweep-b", type=int, required=True, metavar="MAX")
    q.add_argument("--out-dir", metavar="DIR")
    q.set_defaults(handler=_cmd_figures, figure="fig1")

    q = fsub.add_parser("fig2", help="balanced-mapping statistics table and chart")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--exact-b", type=_int_list, metavar="B[,B...]", help="exact level counts")
    q.add_argument("--sample-b", type=_int_list, metavar="B[,B...]", help="sampled level counts")
    q.add_argument("--samples", type=int, metavar="N", help="samples per sampled level count")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out-dir", metavar="DIR")
    q.set_defaults(handler=_cmd_figures, figure="fig2")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"porecap: error: {exc}", file=sys.stderr)
        return 1
    except (ChannelError, MappingFormatError, OSError) as exc:
        print(f"porecap: error: {exc}", file=sys.stderr)
        return 1
    except PorecapError as exc:
        print(f"porecap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
