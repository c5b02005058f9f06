"""Command-line harness: base generation, verification, benchmark sweeps,
instruction encoding.  Exit codes: 0 success, 1 verification failure,
2 usage error."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import basegen, bench, isa
from .wordmod import MAX_WIDTH, MIN_WIDTH


def _parse_channels(text: str):
    """Accept '8:64:8' range syntax or a comma list like '8,16,24'."""
    if ":" in text:
        parts = [int(t) for t in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 8
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise argparse.ArgumentTypeError(f"bad channel range {text!r}")
        return tuple(range(lo, hi + 1, step))
    return tuple(int(t) for t in text.split(","))


def _width(text: str) -> int:
    w = int(text)
    if not MIN_WIDTH <= w <= MAX_WIDTH:
        raise argparse.ArgumentTypeError(
            f"width {w} outside permitted range {MIN_WIDTH}..{MAX_WIDTH}"
        )
    return w


def _csv_choices(all_values, aliases=None):
    aliases = aliases or {}

    def convert(text: str):
        if text == "all" or text == "both":
            return tuple(all_values)
        out = []
        for tok in text.split(","):
            tok = aliases.get(tok, tok)
            if tok not in all_values:
                raise argparse.ArgumentTypeError(
                    f"unknown value {tok!r}, expected from {sorted(all_values)}"
                )
            out.append(tok)
        return tuple(out)

    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnsmul",
        description="RNS Montgomery multiplication toolbox and benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-base", help="sieve a pseudo-Mersenne base and write it")
    g.add_argument("-n", "--channels", type=int, required=True)
    g.add_argument("-w", "--width", type=_width, default=64)
    g.add_argument("-o", "--out", default=None, help="output path (default stdout)")

    v = sub.add_parser("verify", help="run the self-check suites")
    v.add_argument("--scale", choices=("tiny", "full"), default="tiny")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--base", default=None, help="validate a serialized base file only")

    b = sub.add_parser("bench", help="benchmark sweep, writes CSV")
    b.add_argument("--channels", type=_parse_channels, default=bench.DEFAULT_CHANNELS)
    b.add_argument("-w", "--width", type=_width, default=64)
    b.add_argument(
        "--backend",
        type=_csv_choices(bench.ALL_BACKENDS, {"instruction": "inst"}),
        default=bench.ALL_BACKENDS,
    )
    b.add_argument(
        "--variant",
        type=_csv_choices(bench.ALL_VARIANTS, {"k": "kawamura", "szabo-tanaka": "st"}),
        default=bench.ALL_VARIANTS,
    )
    b.add_argument(
        "--model", type=_csv_choices(("io", "ooo")), default=("io", "ooo")
    )
    b.add_argument(
        "--preset", type=_csv_choices(("default", "long")), default=("default", "long")
    )
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--repetitions", type=int, default=1)
    b.add_argument("--base", default=None, help="take moduli from a base file")
    b.add_argument("--out", required=True, help="CSV output path")

    e = sub.add_parser("encode-instr", help="encode one modular instruction")
    e.add_argument("mnemonic", choices=sorted(isa.FUNCT3))
    e.add_argument("rd", type=int)
    e.add_argument("rs1", type=int)
    e.add_argument("rs2", type=int)
    e.add_argument("rs3", type=int)

    return parser


def cmd_gen_base(args) -> int:
    try:
        base = basegen.build_pm_base(args.channels, args.width)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        basegen.save_base(base, args.out)
        print(f"wrote {base.n} moduli (w={base.w}) to {args.out}")
    else:
        basegen.write_base(base, sys.stdout)
    return 0


def cmd_verify(args) -> int:
    if args.base is not None:
        try:
            base = basegen.load_base(args.base)
        except (OSError, ValueError) as exc:
            print(f"FAIL base file {args.base}: {exc}")
            return 1
        print(f"PASS base file {args.base}: n={base.n}, w={base.w}, all constants verified")
        return 0
    from .verify import run_suites

    results = run_suites(args.scale, args.seed)
    failed = False
    for r in results:
        if r.passed:
            print(f"PASS {r.name}: {r.cases} cases")
        else:
            failed = True
            print(f"FAIL {r.name}: {len(r.failures)} failures in {r.cases} cases")
            for msg in r.failures:
                print(f"  {msg}")
    return 1 if failed else 0


def cmd_bench(args) -> int:
    moduli_pool = None
    if args.base is not None:
        try:
            pool_base = basegen.load_base(args.base)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if pool_base.n % 2:
            print(
                f"error: base file holds {pool_base.n} moduli; an even count "
                f"is required to split into two bases",
                file=sys.stderr,
            )
            return 1
        moduli_pool = pool_base.moduli
        args.channels = (pool_base.n // 2,)
        args.width = pool_base.w
    cfg = bench.BenchConfig(
        channels=tuple(args.channels),
        w=args.width,
        backends=args.backend,
        variants=args.variant,
        models=args.model,
        presets=args.preset,
        seed=args.seed,
        repetitions=args.repetitions,
        moduli_pool=moduli_pool,
    )
    reports, ratios = bench.run_sweep(cfg)
    out = Path(args.out)
    with open(out, "w") as fp:
        bench.write_rows(reports, fp)
    ratios_path = out.with_name(out.stem + "_ratios" + (out.suffix or ".csv"))
    with open(ratios_path, "w") as fp:
        bench.write_ratios(ratios, fp)
    print(f"wrote {len(reports)} rows to {out} and {len(ratios)} ratios to {ratios_path}")
    return 0


def cmd_encode_instr(args) -> int:
    try:
        word = isa.encode(
            isa.ModInstr(args.mnemonic, args.rd, args.rs1, args.rs2, args.rs3)
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"0x{word:08X}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen-base":
        return cmd_gen_base(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "bench":
        return cmd_bench(args)
    if args.command == "encode-instr":
        return cmd_encode_instr(args)
    parser.error(f"unknown command {args.command!r}")
    return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
