"""Base extension: re-expressing a residue vector on a second coprime base.

Four algorithms with different cost/exactness trade-offs:

* Szabo-Tanaka       -- exact, via mixed-radix digits, Theta(n^2) word ops
                        with a sequential elimination chain;
* Shenoy-Kumaresan   -- exact, recovers the CRT quotient k through an extra
                        modulus, needs the value's residue there;
* Kawamura (rower)   -- estimates k by fixed-point accumulation of residue
                        high bits, O(n) extra work; exact below (1-alpha)*M;
* Bajard-Imbert      -- skips the k*M correction entirely, leaving an
                        excess of lambda*M with 0 <= lambda <= n-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .basegen import RnsBase
from .rnscore import RnsInt, mrs_digits_vec
from .wordmod import WordModBackend


class ExtensionPair:
    """Precomputed tables for extending from base src to base dst.

    cross_cols[j][i] holds (M_src/m_i) mod m'_j and weight_cols[j][i] the
    mixed-radix weight (m_0*...*m_{i-1}) mod m'_j, both laid out per
    destination channel.  M_mod_dst[j] is M_src mod m'_j.
    """

    def __init__(self, src: RnsBase, dst: RnsBase):
        if src.w != dst.w:
            raise ValueError(f"mixed word sizes: src w={src.w}, dst w={dst.w}")
        g = math.gcd(src.M, dst.M)
        if g != 1:
            raise ValueError(
                f"source and destination bases are not coprime (gcd {g})"
            )
        self.src = src
        self.dst = dst
        self.M_mod_dst = tuple(src.M % mj for mj in dst.moduli)
        self.cross_cols = tuple(
            tuple(mi % mj for mi in src.Mi) for mj in dst.moduli
        )
        weights = []
        prod = 1
        for i in range(src.n):
            weights.append(prod)
            prod *= src.moduli[i]
        self.weight_cols = tuple(
            tuple(wt % mj for wt in weights) for mj in dst.moduli
        )
        self._sk_tables: dict = {}

    def sk_tables(self, m_e: int):
        """Constants for Shenoy-Kumaresan under extra modulus m_e."""
        try:
            return self._sk_tables[m_e]
        except KeyError:
            pass
        src = self.src
        if m_e <= src.n:
            raise ValueError(
                f"extra modulus {m_e} must exceed the channel count {src.n} "
                f"so the CRT quotient stays recoverable"
            )
        if m_e >= (1 << src.w):
            raise ValueError(f"extra modulus {m_e} does not fit in w={src.w} bits")
        g = math.gcd(m_e, src.M)
        if g != 1:
            raise ValueError(f"extra modulus {m_e} shares factor {g} with the base")
        cross_e = tuple(mi % m_e for mi in src.Mi)
        m_inv_e = pow(src.M % m_e, -1, m_e)
        tables = (cross_e, m_inv_e)
        self._sk_tables[m_e] = tables
        return tables


@dataclass(frozen=True)
class KawamuraParams:
    """Fixed-point accumulator configuration for the k estimate.

    alpha_fp is the initial offset in q fractional bits; eps bounds the
    total truncation error n*(2^-q + c_max*2^-w).  Exactness of the
    estimate requires eps <= alpha and input value < (1-alpha)*M.
    """

    base: RnsBase
    q: int
    alpha_fp: int
    eps: Fraction

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha_fp, 1 << self.q)

    @classmethod
    def for_base(
        cls, base: RnsBase, q: int = 8, alpha: Fraction = Fraction(1, 2)
    ) -> "KawamuraParams":
        if not 1 <= q <= base.w:
            raise ValueError(f"accumulator bits q={q} must be in [1, w={base.w}]")
        if not 0 <= alpha < 1:
            raise ValueError(f"offset alpha={alpha} must be in [0, 1)")
        alpha_fp = round(alpha * (1 << q))
        c_max = max((1 << base.w) - m for m in base.moduli)
        eps = Fraction(base.n, 1 << q) + Fraction(base.n * c_max, 1 << base.w)
        params = cls(base, q, alpha_fp, eps)
        params.check()
        return params

    def check(self) -> None:
        if self.eps > self.alpha:
            raise ValueError(
                f"accumulator error bound eps={float(self.eps):.4f} exceeds "
                f"alpha={float(self.alpha):.4f}; k estimate would be unsound"
            )


def _xi_vec(values, base: RnsBase, backend: WordModBackend) -> list:
    """xi_i = x_i * (M/m_i)^-1 mod m_i, the CRT summand coefficients."""
    return backend.vec_mul(values, base.inv_Mi, base)


def _k_accumulate(xi, params: KawamuraParams, backend: WordModBackend) -> int:
    """Count the carries of the fixed-point rower accumulator.

    sigma starts at alpha_fp; each channel adds the top q bits of xi_i;
    every overflow past 2^q is one unit of k.  Plain integer-unit work:
    two shifts, two adds and one mask per channel.
    """
    q = params.q
    sh = params.base.w - q
    qmask = (1 << q) - 1
    cnt = backend.counters
    n = len(xi)
    cnt.shift += 2 * n
    cnt.word_add += 2 * n
    cnt.mask += n
    sigma = params.alpha_fp
    k = 0
    for x in xi:
        sigma += x >> sh
        k += sigma >> q
        sigma &= qmask
    return k


def compute_k_hat(x: RnsInt, params: KawamuraParams, backend: WordModBackend) -> int:
    """Estimated CRT quotient of x; exact when value(x) < (1-alpha)*M."""
    if params.base is not x.base:
        raise ValueError("params were built for a different base")
    params.check()
    xi = _xi_vec(x.residues, x.base, backend)
    return _k_accumulate(xi, params, backend)


# -- vector cores (shared with the Montgomery hot path) ----------------------


def st_extend_vec(values, pair: ExtensionPair, backend: WordModBackend) -> List[int]:
    digits = mrs_digits_vec(values, pair.src, backend)
    dot = backend.dot_mod
    return [
        dot(digits, col, mj)
        for col, mj in zip(pair.weight_cols, pair.dst.moduli)
    ]


def kawamura_extend_vec(
    values, pair: ExtensionPair, params: KawamuraParams, backend: WordModBackend
) -> List[int]:
    xi = _xi_vec(values, pair.src, backend)
    k_hat = _k_accumulate(xi, params, backend)
    dot = backend.dot_mod
    out = []
    for col, mmod, mj in zip(pair.cross_cols, pair.M_mod_dst, pair.dst.moduli):
        acc = dot(xi, col, mj)
        corr = backend.mulmod(backend.redmod(k_hat, mj), mmod, mj)
        out.append(backend.submod(acc, corr, mj))
    return out


def bajard_imbert_vec(values, pair: ExtensionPair, backend: WordModBackend) -> List[int]:
    xi = _xi_vec(values, pair.src, backend)
    dot = backend.dot_mod
    return [
        dot(xi, col, mj)
        for col, mj in zip(pair.cross_cols, pair.dst.moduli)
    ]


# -- public operations --------------------------------------------------------


def _check_operand(x: RnsInt, pair: ExtensionPair, backend: WordModBackend) -> None:
    if x.base is not pair.src:
        raise ValueError("operand does not live on the pair's source base")
    backend.check_base(pair.src)
    backend.check_base(pair.dst)


def extend_szabo_tanaka(
    x: RnsInt, pair: ExtensionPair, backend: WordModBackend
) -> RnsInt:
    """Exact extension through mixed-radix digits."""
    _check_operand(x, pair, backend)
    return RnsInt(tuple(st_extend_vec(x.residues, pair, backend)), pair.dst)


def extend_kawamura(
    x: RnsInt, pair: ExtensionPair, params: KawamuraParams, backend: WordModBackend
) -> RnsInt:
    """Extension with the estimated quotient; exact for values below
    (1-alpha)*M (caller contract, deliberately unchecked at runtime)."""
    _check_operand(x, pair, backend)
    if params.base is not pair.src:
        raise ValueError("params were built for a different base")
    params.check()
    return RnsInt(
        tuple(kawamura_extend_vec(x.residues, pair, params, backend)), pair.dst
    )


def extend_bajard_imbert(
    x: RnsInt, pair: ExtensionPair, backend: WordModBackend
) -> RnsInt:
    """Approximate extension: represents value(x) + lambda*M for some
    0 <= lambda <= n-1 (the k*M correction is skipped)."""
    _check_operand(x, pair, backend)
    return RnsInt(tuple(bajard_imbert_vec(x.residues, pair, backend)), pair.dst)


def extend_shenoy_kumaresan(
    x: RnsInt,
    x_e: int,
    m_e: int,
    pair: ExtensionPair,
    backend: WordModBackend,
) -> RnsInt:
    """Exact extension recovering k through the extra modulus m_e.

    Requires x_e = value(x) mod m_e.  k is recovered from
    k = (sum_i xi_i*(M/m_i) - x) * M^-1 mod m_e, which is exact because
    k < n < m_e; the destination residues then follow as in the other
    correction-based extensions.
    """
    _check_operand(x, pair, backend)
    cross_e, m_inv_e = pair.sk_tables(m_e)
    if not 0 <= x_e < m_e:
        raise ValueError(f"x_e={x_e} is not a residue mod {m_e}")
    xi = _xi_vec(x.residues, pair.src, backend)
    sum_e = backend.dot_mod(xi, cross_e, m_e)
    k = backend.mulmod(backend.submod(sum_e, x_e, m_e), m_inv_e, m_e)
    out = []
    for col, mmod, mj in zip(pair.cross_cols, pair.M_mod_dst, pair.dst.moduli):
        acc = backend.dot_mod(xi, col, mj)
        corr = backend.mulmod(backend.redmod(k, mj), mmod, mj)
        out.append(backend.submod(acc, corr, mj))
    return RnsInt(tuple(out), pair.dst)
