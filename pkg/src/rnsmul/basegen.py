"""Deterministic pseudo-Mersenne base generation and precomputed constants.

A base is an ordered set of pairwise-coprime w-bit moduli together with
every table the conversions and extensions need.  All tables are computed
with arbitrary-precision arithmetic once, at construction, and verified
against their defining congruences; the hot paths afterwards touch only
w-bit words and double-width products.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import IO, Iterable, List, Sequence

from .wordmod import PmModulus, check_width, pm_modulus


def generate_pm_moduli(n: int, w: int) -> List[PmModulus]:
    """Greedy sieve for n pairwise-coprime moduli of the form 2^w - c.

    Walks c = 1, 3, 5, ... upward and keeps m = 2^w - c whenever it is
    coprime to everything kept so far.  Deterministic, so a given (n, w)
    always names the same base.  Output is sorted by descending modulus.
    """
    check_width(w)
    if n < 2:
        raise ValueError(f"need at least 2 moduli, got n={n}")
    kept: List[PmModulus] = []
    top = 1 << w
    for c in range(1, 1 << (w // 2), 2):
        m = top - c
        if all(math.gcd(m, p.m) == 1 for p in kept):
            kept.append(pm_modulus(m, w))
            if len(kept) == n:
                return kept
    raise ValueError(
        f"exhausted pseudo-Mersenne candidates below 2^{w // 2} "
        f"after {len(kept)} moduli; cannot build a base of n={n} at w={w}"
    )


class RnsBase:
    """An RNS base: moduli plus verified conversion constants.

    Attributes:
        moduli:  the n channel moduli, descending.
        M:       product of the moduli (the dynamic range).
        Mi:      M // m_i per channel.
        Mi_mod:  Mi_mod[i][j] = (M / m_i) mod m_j.
        inv_Mi:  ((M / m_i) mod m_i)^-1 mod m_i per channel.
        mrs_inv: mrs_inv[i][j] = m_i^-1 mod m_j for i < j (mixed-radix
                 elimination constants; entries with j <= i are unused).

    Immutable after construction; safe to share between threads.
    """

    def __init__(self, moduli: Sequence[int], w: int):
        check_width(w)
        moduli = tuple(int(m) for m in moduli)
        if len(moduli) < 2:
            raise ValueError(f"need at least 2 moduli, got {len(moduli)}")
        for m in moduli:
            if not 2 <= m < (1 << w):
                raise ValueError(f"modulus {m} out of range for w={w}")
        for i in range(len(moduli)):
            for j in range(i + 1, len(moduli)):
                g = math.gcd(moduli[i], moduli[j])
                if g != 1:
                    raise ValueError(
                        f"moduli {moduli[i]} and {moduli[j]} are not coprime "
                        f"(share factor {g})"
                    )
        self.w = w
        self.moduli = moduli
        self.n = len(moduli)
        self.M = math.prod(moduli)
        self.Mi = tuple(self.M // m for m in moduli)
        self.Mi_mod = tuple(
            tuple(mi % mj for mj in moduli) for mi in self.Mi
        )
        self.inv_Mi = tuple(
            pow(mi % m, -1, m) for mi, m in zip(self.Mi, moduli)
        )
        # m_i^-1 mod m_j for i < j, row-indexed by i
        self.mrs_inv = tuple(
            tuple(
                pow(moduli[i], -1, moduli[j]) if j > i else 0
                for j in range(self.n)
            )
            for i in range(self.n)
        )
        self._verify()

    def _verify(self) -> None:
        for i, m in enumerate(self.moduli):
            if self.inv_Mi[i] * (self.Mi[i] % m) % m != 1:
                raise AssertionError(f"inv_Mi broken at channel {i}")
            for j, mj in enumerate(self.moduli):
                if self.Mi_mod[i][j] != self.Mi[i] % mj:
                    raise AssertionError(f"Mi_mod broken at ({i},{j})")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.mrs_inv[i][j] * self.moduli[i] % self.moduli[j] != 1:
                    raise AssertionError(f"mrs_inv broken at ({i},{j})")

    @cached_property
    def _pm(self) -> tuple:
        return tuple(pm_modulus(m, self.w) for m in self.moduli)

    def pm_params(self, w: int) -> tuple:
        """Pseudo-Mersenne parameters per channel; error if any channel
        is not PM form at width w."""
        if w != self.w:
            raise ValueError(f"base has w={self.w}, backend expects w={w}")
        return self._pm

    def __repr__(self):
        return f"RnsBase(n={self.n}, w={self.w}, moduli={list(self.moduli)})"


def build_base(moduli: Iterable[int], w: int) -> RnsBase:
    return RnsBase(tuple(moduli), w)


def build_pm_base(n: int, w: int) -> RnsBase:
    return RnsBase(tuple(p.m for p in generate_pm_moduli(n, w)), w)


# -- plain-text serialization: header "w n", one decimal modulus per line --


def write_base(base: RnsBase, fp: IO[str]) -> None:
    fp.write(f"{base.w} {base.n}\n")
    for m in base.moduli:
        fp.write(f"{m}\n")


def save_base(base: RnsBase, path: str) -> None:
    with open(path, "w") as fp:
        write_base(base, fp)


def read_base(fp: IO[str]) -> RnsBase:
    header = fp.readline().split()
    if len(header) != 2:
        raise ValueError("base file: expected header line 'w n'")
    w, n = int(header[0]), int(header[1])
    moduli = []
    for line in fp:
        line = line.strip()
        if line:
            moduli.append(int(line))
    if len(moduli) != n:
        raise ValueError(f"base file: header says n={n}, found {len(moduli)} moduli")
    return RnsBase(moduli, w)


def load_base(path: str) -> RnsBase:
    with open(path) as fp:
        return read_base(fp)
