"""RNS Montgomery modular multiplication over a pair of coprime bases.

One multiplication computes z = x*y*M^-1 mod p without any big-integer
work: channel products, one approximate extension (Bajard-Imbert) to carry
the Montgomery quotient across, the exact division by M in the second
base, and one correction-quality extension (Szabo-Tanaka or Kawamura) back.

Values in the pipeline are bounded by (n+2)*p rather than the textbook 2p:
the approximate first extension leaves an excess of up to (n-1)*M on the
quotient, which the sizing rules M > (n+2)^2 * p and M' > 2*(n+2)*p absorb,
keeping the bound closed under iteration and the Kawamura step inside its
alpha = 1/2 exactness window.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .basegen import RnsBase, generate_pm_moduli
from .baseext import (
    ExtensionPair,
    KawamuraParams,
    bajard_imbert_vec,
    kawamura_extend_vec,
    st_extend_vec,
)
from .rnscore import RnsInt, from_rns_crt, to_rns
from .wordmod import WordModBackend

VARIANT_ST = "st"
VARIANT_KAWAMURA = "kawamura"
_VARIANT_ALIASES = {
    "st": VARIANT_ST,
    "szabo-tanaka": VARIANT_ST,
    "kawamura": VARIANT_KAWAMURA,
    "k": VARIANT_KAWAMURA,
}


class MontPair(NamedTuple):
    """One value carried on both bases (required by the interleaving)."""

    in_bm: RnsInt
    in_bmp: RnsInt


class MontgomeryContext:
    """Bases, precomputed channel constants and sizing data for one modulus.

    Immutable after construction; pass a per-thread backend to mont_mul.
    """

    def __init__(self, p, bm, bmp, variant, kparams):
        self.p = p
        self.bm = bm
        self.bmp = bmp
        self.n = bm.n
        self.w = bm.w
        self.variant = variant
        self.kparams = kparams
        self.bound = (self.n + 2) * p
        self._check_sizing()
        self.fwd = ExtensionPair(bm, bmp)
        self.bwd = ExtensionPair(bmp, bm)
        self.neg_p_inv_bm = tuple(
            (m - pow(p, -1, m)) % m for m in bm.moduli
        )
        self.p_bmp = tuple(p % m for m in bmp.moduli)
        self.m_inv_bmp = tuple(pow(bm.M % m, -1, m) for m in bmp.moduli)
        self._verify_constants()

    def _check_sizing(self):
        p, bm, bmp, n = self.p, self.bm, self.bmp, self.n
        for name, g in (
            ("p and M", math.gcd(p, bm.M)),
            ("p and M'", math.gcd(p, bmp.M)),
            ("M and M'", math.gcd(bm.M, bmp.M)),
        ):
            if g != 1:
                raise ValueError(f"{name} share factor {g}")
        need_m = (n + 2) * (n + 2) * p
        need_mp = 2 * (n + 2) * p
        if bm.M <= need_m or bmp.M <= need_mp:
            raise ValueError(
                f"dynamic range too small for p of {p.bit_length()} bits: "
                f"need M > (n+2)^2*p ({need_m.bit_length()} bits, have "
                f"{bm.M.bit_length()}) and M' > 2(n+2)*p "
                f"({need_mp.bit_length()} bits, have {bmp.M.bit_length()})"
            )

    def _verify_constants(self):
        p, bm, bmp = self.p, self.bm, self.bmp
        for i, m in enumerate(bm.moduli):
            if self.neg_p_inv_bm[i] * p % m != m - 1:
                raise AssertionError(f"-p^-1 broken in channel {i}")
        for j, m in enumerate(bmp.moduli):
            if self.m_inv_bmp[j] * (bm.M % m) % m != 1:
                raise AssertionError(f"M^-1 broken in channel {j}")
            if self.p_bmp[j] != p % m:
                raise AssertionError(f"p residue broken in channel {j}")


def context_new(
    p: int,
    n: int,
    w: int = 64,
    variant: str = VARIANT_KAWAMURA,
    q: int = 8,
    alpha: Fraction = Fraction(1, 2),
) -> MontgomeryContext:
    """Build a context: 2n sieved moduli split alternately into the two
    bases (keeping their products close), constants precomputed and checked.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"modulus p must be odd and >= 3, got {p}")
    try:
        variant = _VARIANT_ALIASES[variant]
    except KeyError:
        raise ValueError(
            f"unknown variant {variant!r}, expected one of {sorted(set(_VARIANT_ALIASES.values()))}"
        ) from None
    moduli = [pm.m for pm in generate_pm_moduli(2 * n, w)]
    bm = RnsBase(moduli[0::2], w)
    bmp = RnsBase(moduli[1::2], w)
    kparams = None
    if variant == VARIANT_KAWAMURA:
        kparams = KawamuraParams.for_base(bmp, q, alpha)
    return MontgomeryContext(p, bm, bmp, variant, kparams)


def mont_pair(ctx: MontgomeryContext, value: int) -> MontPair:
    """Represent a raw value (< bound) on both bases."""
    if not 0 <= value < ctx.bound:
        raise ValueError(f"value {value} exceeds the domain bound {ctx.bound}")
    return MontPair(to_rns(value, ctx.bm), to_rns(value, ctx.bmp))


def to_mont(ctx: MontgomeryContext, a: int) -> MontPair:
    """Enter the Montgomery domain: the pair representing a*M mod p."""
    if not 0 <= a < ctx.p:
        raise ValueError(f"value {a} not reduced mod p={ctx.p}")
    return mont_pair(ctx, a * ctx.bm.M % ctx.p)


def from_mont(ctx: MontgomeryContext, z: MontPair, backend: WordModBackend) -> int:
    """Leave the Montgomery domain: multiply by the pair of 1 and reduce."""
    one = mont_pair(ctx, 1)
    r = mont_mul(ctx, z, one, backend)
    return from_rns_crt(r.in_bm) % ctx.p


def mont_mul(
    ctx: MontgomeryContext,
    x: MontPair,
    y: MontPair,
    backend: WordModBackend,
    check: bool = False,
) -> MontPair:
    """One Montgomery product: result value is x*y*M^-1 mod p up to a
    multiple of p, below (n+2)*p, represented on both bases.

    check=True re-reads every contract through the big-integer oracle
    (congruence, bound, both halves agreeing, Kawamura window); it is for
    tests only and changes nothing about the computation.
    """
    bm, bmp = ctx.bm, ctx.bmp
    s_m = backend.vec_mul(x.in_bm.residues, y.in_bm.residues, bm)
    s_mp = backend.vec_mul(x.in_bmp.residues, y.in_bmp.residues, bmp)
    t = backend.vec_mul(s_m, ctx.neg_p_inv_bm, bm)
    t_ext = bajard_imbert_vec(t, ctx.fwd, backend)
    u = backend.vec_mul(t_ext, ctx.p_bmp, bmp)
    v = backend.vec_add(s_mp, u, bmp)
    w_mp = backend.vec_mul(v, ctx.m_inv_bmp, bmp)
    if ctx.variant == VARIANT_KAWAMURA:
        w_m = kawamura_extend_vec(w_mp, ctx.bwd, ctx.kparams, backend)
    else:
        w_m = st_extend_vec(w_mp, ctx.bwd, backend)
    result = MontPair(
        RnsInt(tuple(w_m), bm), RnsInt(tuple(w_mp), bmp)
    )
    if check:
        _oracle_check(ctx, x, y, result)
    return result


def _oracle_check(ctx, x, y, result):
    xv = from_rns_crt(x.in_bm)
    yv = from_rns_crt(y.in_bm)
    rv_mp = from_rns_crt(result.in_bmp)
    rv_m = from_rns_crt(result.in_bm)
    if rv_m != rv_mp:
        raise AssertionError(
            f"halves disagree: {rv_m} on Bm vs {rv_mp} on Bm'"
        )
    if rv_m >= ctx.bound:
        raise AssertionError(f"result {rv_m} breaks the bound {ctx.bound}")
    if 2 * rv_mp >= ctx.bmp.M:
        raise AssertionError(
            "step-7 operand left the Kawamura exactness window M'/2"
        )
    m_inv_p = pow(ctx.bm.M, -1, ctx.p)
    if rv_m % ctx.p != xv * yv * m_inv_p % ctx.p:
        raise AssertionError("result incongruent to x*y*M^-1 mod p")


def mont_exp(
    ctx: MontgomeryContext,
    a: int,
    e: int,
    backend: WordModBackend,
    check: bool = False,
) -> int:
    """a^e mod p by square-and-multiply entirely inside the domain."""
    if not 0 <= a < ctx.p:
        raise ValueError(f"base {a} not reduced mod p={ctx.p}")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    acc = to_mont(ctx, 1)
    am = to_mont(ctx, a)
    for bit in bin(e)[2:] if e else "":
        acc = mont_mul(ctx, acc, acc, backend, check=check)
        if bit == "1":
            acc = mont_mul(ctx, acc, am, backend, check=check)
    return from_mont(ctx, acc, backend)
