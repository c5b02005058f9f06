"""RNS representation, conversions (CRT and mixed-radix), channel arithmetic.

Residues are kept canonical everywhere: residues[i] < moduli[i].  The CRT
reconstruction is the only big-integer code path and exists for I/O and
oracle checks; runtime arithmetic stays on w-bit words.
"""

from __future__ import annotations

from typing import NamedTuple

from .basegen import RnsBase
from .wordmod import WordModBackend


class RnsInt(NamedTuple):
    """A value as its residue vector on a base (canonical form)."""

    residues: tuple
    base: RnsBase


class MrsDigits(NamedTuple):
    """Mixed-radix digits: value = d0 + d1*m0 + d2*m0*m1 + ..."""

    digits: tuple
    base: RnsBase


def to_rns(x: int, base: RnsBase) -> RnsInt:
    """Forward conversion: one remainder per channel."""
    if not 0 <= x < base.M:
        raise ValueError(
            f"value {x} outside dynamic range [0, {base.M}) of the base"
        )
    return RnsInt(tuple(x % m for m in base.moduli), base)


def from_rns_crt(x: RnsInt) -> int:
    """Backward conversion via the CRT sum, reduced mod M.

    Computes sum_i |x_i * (M/m_i)^-1|_{m_i} * (M/m_i), then one reduction
    realizes the k*M subtraction.  Arbitrary precision; off the hot path.
    """
    base = x.base
    acc = 0
    for r, inv, m, mi in zip(x.residues, base.inv_Mi, base.moduli, base.Mi):
        acc += (r * inv % m) * mi
    return acc % base.M


def mrs_digits_vec(values, base: RnsBase, backend: WordModBackend) -> list:
    """Successive elimination producing mixed-radix digits (list form).

    Digit i is fixed after eliminating digits 0..i-1 from every later
    channel: residue_j <- (residue_j - d_i) * m_i^-1 mod m_j.  Exactly
    n(n-1)/2 submod and n(n-1)/2 mulmod steps.
    """
    n = base.n
    mods = base.moduli
    work = list(values)
    for i in range(n - 1):
        d = work[i]
        inv_row = base.mrs_inv[i]
        tail = backend.submul(d, work[i + 1:], inv_row[i + 1:], mods[i + 1:])
        work[i + 1:] = tail
    return work


def to_mrs(x: RnsInt, backend: WordModBackend) -> MrsDigits:
    backend.check_base(x.base)
    return MrsDigits(tuple(mrs_digits_vec(x.residues, x.base, backend)), x.base)


def mrs_value(d: MrsDigits) -> int:
    """Positional value of mixed-radix digits (Horner, big-integer)."""
    moduli = d.base.moduli
    acc = 0
    for i in range(d.base.n - 1, -1, -1):
        acc = acc * moduli[i] + d.digits[i]
    return acc


_ELEMENTWISE = {
    "add": WordModBackend.vec_add,
    "sub": WordModBackend.vec_sub,
    "mul": WordModBackend.vec_mul,
}


def rns_elementwise(op: str, x: RnsInt, y: RnsInt, backend: WordModBackend) -> RnsInt:
    """Channel-parallel add/sub/mul; congruent to (x op y) mod M."""
    if x.base is not y.base:
        raise ValueError("operands live on different bases")
    try:
        fn = _ELEMENTWISE[op]
    except KeyError:
        raise ValueError(f"unknown elementwise op {op!r}") from None
    return RnsInt(tuple(fn(backend, x.residues, y.residues, x.base)), x.base)
