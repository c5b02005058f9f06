"""Benchmark sweep: run the multiplication across configurations, weigh
the collected counters with the delay tables, emit plottable CSV."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import IO, List, Optional, Sequence, Tuple

from .basegen import RnsBase, generate_pm_moduli
from .baseext import KawamuraParams
from .costmodel import CostReport, PRESETS, estimate, ratio_report
from .modmul import (
    MontgomeryContext,
    VARIANT_KAWAMURA,
    VARIANT_ST,
    mont_mul,
    mont_pair,
)
from .wordmod import BACKEND_KINDS, make_backend

CSV_HEADER = (
    "n,w,backend,variant,model,preset,"
    "modadd_count,modmul_count,mul_count,alu_count,divmod_count,est_cycles"
)
RATIOS_HEADER = (
    "n,w,model,preset,slow_backend,slow_variant,fast_backend,fast_variant,ratio"
)

DEFAULT_CHANNELS = tuple(range(8, 65, 8))
ALL_BACKENDS = tuple(BACKEND_KINDS)
ALL_VARIANTS = (VARIANT_ST, VARIANT_KAWAMURA)


@dataclass
class BenchConfig:
    channels: Tuple[int, ...] = DEFAULT_CHANNELS
    w: int = 64
    backends: Tuple[str, ...] = ALL_BACKENDS
    variants: Tuple[str, ...] = ALL_VARIANTS
    models: Tuple[str, ...] = ("io", "ooo")
    presets: Tuple[str, ...] = ("default", "long")
    seed: int = 1
    repetitions: int = 1
    moduli_pool: Optional[Tuple[int, ...]] = None  # overrides the sieve

    def __post_init__(self):
        for n in self.channels:
            if n < 2 or n % 2 != 0:
                raise ValueError(f"channel count {n} must be even and >= 2")
        for b in self.backends:
            if b not in BACKEND_KINDS:
                raise ValueError(f"unknown backend {b!r}")


def pick_modulus(n: int, w: int, rng: random.Random, bm: RnsBase, bmp: RnsBase) -> int:
    """Seeded odd modulus p sized well inside the dynamic range.

    Bit length n*w - 2*bits(n+2) - 4 leaves room for both sizing rules;
    rejection keeps p coprime to the base products.
    """
    bits = n * w - 2 * (n + 2).bit_length() - 4
    if bits < 2:
        raise ValueError(f"no room for a modulus at n={n}, w={w}")
    while True:
        p = rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1
        if math.gcd(p, bm.M) == 1 and math.gcd(p, bmp.M) == 1:
            return p


def _split_bases(moduli: Sequence[int], w: int) -> Tuple[RnsBase, RnsBase]:
    # alternate assignment keeps the two products close in magnitude
    return RnsBase(moduli[0::2], w), RnsBase(moduli[1::2], w)


def measure_counters(cfg: BenchConfig) -> List[Tuple[int, str, str, object]]:
    """Run the sweep and collect one counter snapshot per
    (n, backend, variant).  Deterministic in cfg.seed."""
    out = []
    for n in cfg.channels:
        if cfg.moduli_pool is not None:
            if len(cfg.moduli_pool) != 2 * n:
                raise ValueError(
                    f"moduli pool holds {len(cfg.moduli_pool)} entries, "
                    f"need {2 * n} for n={n}"
                )
            pool = list(cfg.moduli_pool)
        else:
            pool = [pm.m for pm in generate_pm_moduli(2 * n, cfg.w)]
        bm, bmp = _split_bases(pool, cfg.w)
        p = pick_modulus(n, cfg.w, random.Random(f"{cfg.seed}:p:{n}"), bm, bmp)
        contexts = {}
        for variant in cfg.variants:
            kparams = (
                KawamuraParams.for_base(bmp) if variant == VARIANT_KAWAMURA else None
            )
            contexts[variant] = MontgomeryContext(p, bm, bmp, variant, kparams)
        for kind in cfg.backends:
            for variant in cfg.variants:
                ctx = contexts[variant]
                backend = make_backend(kind, cfg.w)
                rng = random.Random(f"{cfg.seed}:{n}:{kind}:{variant}")
                for _ in range(cfg.repetitions):
                    x = mont_pair(ctx, rng.randrange(ctx.bound))
                    y = mont_pair(ctx, rng.randrange(ctx.bound))
                    mont_mul(ctx, x, y, backend)
                out.append((n, kind, variant, backend.read_counters()))
    return out


def reports_from_counters(cfg: BenchConfig, measured) -> List[CostReport]:
    reports = []
    for n, kind, variant, counters in measured:
        for preset in cfg.presets:
            delays = PRESETS[preset]()
            for model in cfg.models:
                reports.append(
                    CostReport(
                        backend=kind,
                        variant=variant,
                        n=n,
                        w=cfg.w,
                        model=model,
                        preset=preset,
                        cycles=estimate(counters, delays, model),
                        counters=counters,
                    )
                )
    return reports


def run_sweep(cfg: BenchConfig) -> Tuple[List[CostReport], List[dict]]:
    """All cost reports plus the companion ratio rows, taken at the
    largest measured channel count."""
    reports = reports_from_counters(cfg, measure_counters(cfg))
    n_top = max(cfg.channels)
    top = [r for r in reports if r.n == n_top]
    ratios = ratio_report(top) if len(top) >= 2 else []
    return reports, ratios


def write_rows(reports: Sequence[CostReport], fp: IO[str]) -> None:
    fp.write(CSV_HEADER + "\n")
    for r in reports:
        c = r.counters
        fp.write(
            f"{r.n},{r.w},{r.backend},{r.variant},{r.model},{r.preset},"
            f"{c.modadd + c.modsub},{c.modmul},{c.word_mul},"
            f"{c.word_add + c.word_sub + c.shift + c.mask},{c.div_mod},{r.cycles}\n"
        )


def write_ratios(ratios: Sequence[dict], fp: IO[str]) -> None:
    fp.write(RATIOS_HEADER + "\n")
    for row in ratios:
        fp.write(
            f"{row['n']},{row['w']},{row['model']},{row['preset']},"
            f"{row['slow_backend']},{row['slow_variant']},"
            f"{row['fast_backend']},{row['fast_variant']},{row['ratio']:.4f}\n"
        )


def read_rows(fp: IO[str]) -> List[dict]:
    """Parse a sweep CSV back into dicts (schema round-trip helper)."""
    reader = csv.DictReader(fp)
    if reader.fieldnames != CSV_HEADER.split(","):
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    rows = []
    for raw in reader:
        row = dict(raw)
        for key in (
            "n",
            "w",
            "modadd_count",
            "modmul_count",
            "mul_count",
            "alu_count",
            "divmod_count",
            "est_cycles",
        ):
            row[key] = int(row[key])
        rows.append(row)
    return rows
