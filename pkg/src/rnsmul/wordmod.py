"""Word-size modular arithmetic backends with operation counting.

Three interchangeable strategies compute (a op b) mod m on w-bit words:

* ``NaiveModulo``    -- plain remainder, each reduction charged to the
  hardware divide/modulo unit,
* ``PseudoMersenne`` -- division-free folding for moduli m = 2^w - c,
* ``InstructionSim`` -- fused modular instructions, one counter tick per op.

All three return identical values on identical inputs; they only differ in
which operation classes they charge.  Backends own mutable counters, so one
instance must not be shared between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from operator import mul as _mul
from typing import NamedTuple

MIN_WIDTH = 8
MAX_WIDTH = 64


def check_width(w: int) -> int:
    if not MIN_WIDTH <= w <= MAX_WIDTH:
        raise ValueError(f"word width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {w}")
    return w


class PmModulus(NamedTuple):
    """A pseudo-Mersenne modulus m = 2^w - c with small odd c."""

    m: int
    c: int
    w: int
    mask: int


def pm_modulus(m: int, w: int) -> PmModulus:
    """Validate that m has pseudo-Mersenne form and package its parameters.

    Requires m = 2^w - c with c odd and 1 <= c < 2^(w/2).  The bound on c
    keeps the three folding passes of the reduction inside double-width
    intermediates; oddness makes every accepted modulus odd.
    """
    check_width(w)
    c = (1 << w) - m
    if c < 1 or c >= (1 << (w // 2)) or c % 2 == 0:
        raise ValueError(
            f"modulus {m} is not pseudo-Mersenne at w={w}: "
            f"need m = 2^{w} - c with c odd, 1 <= c < 2^{w // 2}"
        )
    return PmModulus(m, c, w, (1 << w) - 1)


@dataclass
class OpCounters:
    """Per-backend tally of executed operation classes.

    word_add/word_sub/word_mul/shift/mask are ordinary integer-unit ops,
    div_mod is the hardware divide/modulo unit, and modadd/modsub/modmul
    are the fused modular instructions.  Counters only grow until reset().
    """

    word_add: int = 0
    word_sub: int = 0
    word_mul: int = 0
    shift: int = 0
    mask: int = 0
    div_mod: int = 0
    modadd: int = 0
    modsub: int = 0
    modmul: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> "OpCounters":
        return OpCounters(**self.as_dict())

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def total(self) -> int:
        return sum(self.as_dict().values())


class WordModBackend:
    """Base class: validation, counters, and generic vector kernels.

    Scalar ops (addmod/submod/mulmod/redmod) enforce the reduced-input
    contract: operands of addmod/submod/mulmod must already be canonical
    residues, anything else signals a caller bug.  redmod is the one entry
    gate accepting an arbitrary w-bit word (it canonicalizes words crossing
    between channels with different moduli).

    The vec_*/dot_mod/submul kernels apply one op per element and tally
    counters in bulk; dot_mod and submul accumulate with deferred reduction,
    which yields the exact same residues as the op-by-op chain.
    """

    kind = "abstract"

    def __init__(self, w: int = 64):
        self.width = check_width(w)
        self.counters = OpCounters()

    # -- validation helpers ------------------------------------------------

    def _check_modulus(self, m: int) -> None:
        if m < 2:
            raise ValueError(f"modulus must be >= 2, got {m}")
        if m >= (1 << self.width):
            raise ValueError(f"modulus {m} does not fit in {self.width} bits")

    def _check_reduced(self, a: int, b: int, m: int) -> None:
        self._check_modulus(m)
        if not (0 <= a < m and 0 <= b < m):
            raise ValueError(
                f"unreduced operand for modulus {m}: a={a}, b={b} (caller bug)"
            )

    # -- scalar operations (implemented by subclasses) ---------------------

    def addmod(self, a: int, b: int, m: int) -> int:
        self._check_reduced(a, b, m)
        return self._addmod(a, b, m)

    def submod(self, a: int, b: int, m: int) -> int:
        self._check_reduced(a, b, m)
        return self._submod(a, b, m)

    def mulmod(self, a: int, b: int, m: int) -> int:
        self._check_reduced(a, b, m)
        return self._mulmod(a, b, m)

    def redmod(self, a: int, m: int) -> int:
        """Canonicalize an arbitrary w-bit word into [0, m)."""
        self._check_modulus(m)
        if not 0 <= a < (1 << self.width):
            raise ValueError(f"redmod operand {a} exceeds {self.width} bits")
        return self._redmod(a, m)

    def _addmod(self, a, b, m):
        raise NotImplementedError

    def _submod(self, a, b, m):
        raise NotImplementedError

    def _mulmod(self, a, b, m):
        raise NotImplementedError

    def _redmod(self, a, m):
        raise NotImplementedError

    # -- counter access -----------------------------------------------------

    def reset_counters(self) -> None:
        self.counters.reset()

    def read_counters(self) -> OpCounters:
        return self.counters.snapshot()

    # -- vector kernels (channel-parallel fast paths) ------------------------

    def check_base(self, base):
        """Validate a base for this backend and return its moduli."""
        return base.moduli

    def vec_mul(self, xs, ys, base):
        mods = self.check_base(base)
        self._tally_mul(len(mods))
        return self._vec_mul(xs, ys, mods)

    def vec_add(self, xs, ys, base):
        mods = self.check_base(base)
        self._tally_add(len(mods))
        return self._vec_add(xs, ys, mods)

    def vec_sub(self, xs, ys, base):
        mods = self.check_base(base)
        self._tally_sub(len(mods))
        return self._vec_sub(xs, ys, mods)

    def dot_mod(self, values, col, m):
        """Sum of products sum_i red(values[i]) * col[i] reduced mod m.

        Semantically: each values[i] enters the channel through redmod, is
        multiplied by col[i] with mulmod, and the products are chained with
        addmod; the tally reflects that op stream.  The value is computed
        with deferred reduction (raw products summed, one final reduction),
        which is congruence-preserving and therefore bit-identical to the
        op-by-op chain.
        """
        self._tally_dot(len(values))
        return sum(map(_mul, values, col)) % m

    def submul(self, d, rs, invs, mods):
        """Per channel j: (rs[j] - red(d)) * invs[j] mod mods[j].

        One redmod + submod + mulmod per element; the mixed-radix digit
        elimination step.  Counted accordingly, computed with deferred
        reduction like dot_mod.
        """
        k = len(mods)
        self._tally_submul(k)
        return [(r - d) % m * inv % m for r, inv, m in zip(rs, invs, mods)]

    def _tally_dot(self, k):
        self._tally_red(k)
        self._tally_mul(k)
        if k > 1:
            self._tally_add(k - 1)

    def _tally_submul(self, k):
        self._tally_red(k)
        self._tally_sub(k)
        self._tally_mul(k)

    # -- bulk counting hooks -------------------------------------------------

    def _tally_add(self, k):
        raise NotImplementedError

    def _tally_sub(self, k):
        raise NotImplementedError

    def _tally_mul(self, k):
        raise NotImplementedError

    def _tally_red(self, k):
        raise NotImplementedError

    def _vec_mul(self, xs, ys, mods):
        raise NotImplementedError

    def _vec_add(self, xs, ys, mods):
        raise NotImplementedError

    def _vec_sub(self, xs, ys, mods):
        raise NotImplementedError


class NaiveModulo(WordModBackend):
    """C-style `%` on every reduction; each one hits the divide unit."""

    kind = "modulo"

    def _addmod(self, a, b, m):
        c = self.counters
        c.word_add += 1
        c.div_mod += 1
        return (a + b) % m

    def _submod(self, a, b, m):
        # portable C form (a + m - b) % m: add, sub, then the remainder
        c = self.counters
        c.word_add += 1
        c.word_sub += 1
        c.div_mod += 1
        return (a + m - b) % m

    def _mulmod(self, a, b, m):
        c = self.counters
        c.word_mul += 1
        c.div_mod += 1
        return a * b % m

    def _redmod(self, a, m):
        self.counters.div_mod += 1
        return a % m

    def _tally_add(self, k):
        c = self.counters
        c.word_add += k
        c.div_mod += k

    def _tally_sub(self, k):
        c = self.counters
        c.word_add += k
        c.word_sub += k
        c.div_mod += k

    def _tally_mul(self, k):
        c = self.counters
        c.word_mul += k
        c.div_mod += k

    def _tally_red(self, k):
        self.counters.div_mod += k

    def _tally_dot(self, k):
        c = self.counters
        c.word_mul += k
        c.word_add += k - 1
        c.div_mod += 3 * k - 1

    def _tally_submul(self, k):
        c = self.counters
        c.word_mul += k
        c.word_add += k
        c.word_sub += k
        c.div_mod += 3 * k

    def _vec_mul(self, xs, ys, mods):
        return [x * y % m for x, y, m in zip(xs, ys, mods)]

    def _vec_add(self, xs, ys, mods):
        return [(x + y) % m for x, y, m in zip(xs, ys, mods)]

    def _vec_sub(self, xs, ys, mods):
        return [(x + m - y) % m for x, y, m in zip(xs, ys, mods)]


class PseudoMersenne(WordModBackend):
    """Folding reduction for pseudo-Mersenne moduli m = 2^w - c.

    mulmod forms the double-width product and folds it with pm_reduce;
    addmod/submod use a single conditional correction, valid because
    every accepted modulus exceeds 2^(w-1).  Using any modulus that is
    not pseudo-Mersenne form is a configuration error.
    """

    kind = "pm"

    def _pm(self, m: int) -> PmModulus:
        return pm_modulus(m, self.width)

    def pm_reduce(self, a: int, pm: PmModulus) -> int:
        """Reduce a double-width value to the canonical residue mod pm.m.

        Three folding passes replace the high part via 2^w = c (mod m);
        each pass costs one multiplication by c plus shift/mask/add.  The
        third pass leaves a value below 2^w + c, so one trailing
        conditional subtraction makes the result canonical.
        """
        w = pm.w
        if not 0 <= a < (1 << (2 * w)):
            raise ValueError(f"pm_reduce operand {a} exceeds {2 * w} bits")
        cnt = self.counters
        cnt.word_mul += 3
        cnt.shift += 3
        cnt.mask += 3
        cnt.word_add += 3
        cnt.word_sub += 1
        c = pm.c
        mask = pm.mask
        t = c * (a >> w)
        t = (a & mask) + (t & mask) + c * (t >> w)
        t = (t & mask) + c * (t >> w)
        return t - pm.m if t >= pm.m else t

    def _addmod(self, a, b, m):
        self._pm(m)
        c = self.counters
        c.word_add += 1
        c.word_sub += 1
        s = a + b
        return s - m if s >= m else s

    def _submod(self, a, b, m):
        self._pm(m)
        c = self.counters
        c.word_sub += 1
        c.word_add += 1
        s = a - b
        return s + m if s < 0 else s

    def _mulmod(self, a, b, m):
        pm = self._pm(m)
        self.counters.word_mul += 1
        return self.pm_reduce(a * b, pm)

    def _redmod(self, a, m):
        # any w-bit word is below 2m because m > 2^(w-1)
        self._pm(m)
        self.counters.word_sub += 1
        return a - m if a >= m else a

    def check_base(self, base):
        base.pm_params(self.width)  # raises if any channel is not PM form
        return base.moduli

    def _tally_add(self, k):
        c = self.counters
        c.word_add += k
        c.word_sub += k

    def _tally_sub(self, k):
        c = self.counters
        c.word_sub += k
        c.word_add += k

    def _tally_mul(self, k):
        c = self.counters
        c.word_mul += 4 * k
        c.shift += 3 * k
        c.mask += 3 * k
        c.word_add += 3 * k
        c.word_sub += k

    def _tally_red(self, k):
        self.counters.word_sub += k

    def _tally_dot(self, k):
        c = self.counters
        c.word_mul += 4 * k
        c.shift += 3 * k
        c.mask += 3 * k
        c.word_add += 4 * k - 1
        c.word_sub += 3 * k - 1

    def _tally_submul(self, k):
        c = self.counters
        c.word_mul += 4 * k
        c.shift += 3 * k
        c.mask += 3 * k
        c.word_add += 4 * k
        c.word_sub += 3 * k

    def _vec_mul(self, xs, ys, mods):
        w = self.width
        mask = (1 << w) - 1
        out = []
        push = out.append
        for x, y, m in zip(xs, ys, mods):
            c = mask + 1 - m
            t = x * y
            f = c * (t >> w)
            f = (t & mask) + (f & mask) + c * (f >> w)
            f = (f & mask) + c * (f >> w)
            push(f - m if f >= m else f)
        return out

    def _vec_add(self, xs, ys, mods):
        out = []
        push = out.append
        for x, y, m in zip(xs, ys, mods):
            s = x + y
            push(s - m if s >= m else s)
        return out

    def _vec_sub(self, xs, ys, mods):
        out = []
        push = out.append
        for x, y, m in zip(xs, ys, mods):
            s = x - y
            push(s + m if s < 0 else s)
        return out


class InstructionSim(WordModBackend):
    """Fused modular instructions: one counter tick per modular op.

    Results are computed with ordinary double-width arithmetic; only the
    accounting differs from the other kinds (timing lives in the cost
    model, not here).  redmod is realized as an addmod with zero.
    """

    kind = "inst"

    def _addmod(self, a, b, m):
        self.counters.modadd += 1
        return (a + b) % m

    def _submod(self, a, b, m):
        self.counters.modsub += 1
        return (a - b) % m

    def _mulmod(self, a, b, m):
        self.counters.modmul += 1
        return a * b % m

    def _redmod(self, a, m):
        self.counters.modadd += 1
        return a % m

    def _tally_add(self, k):
        self.counters.modadd += k

    def _tally_sub(self, k):
        self.counters.modsub += k

    def _tally_mul(self, k):
        self.counters.modmul += k

    def _tally_red(self, k):
        self.counters.modadd += k

    def _tally_dot(self, k):
        c = self.counters
        c.modadd += 2 * k - 1
        c.modmul += k

    def _tally_submul(self, k):
        c = self.counters
        c.modadd += k
        c.modsub += k
        c.modmul += k

    def _vec_mul(self, xs, ys, mods):
        return [x * y % m for x, y, m in zip(xs, ys, mods)]

    def _vec_add(self, xs, ys, mods):
        return [(x + y) % m for x, y, m in zip(xs, ys, mods)]

    def _vec_sub(self, xs, ys, mods):
        return [(x - y) % m for x, y, m in zip(xs, ys, mods)]


BACKEND_KINDS = {
    "modulo": NaiveModulo,
    "pm": PseudoMersenne,
    "inst": InstructionSim,
}


def make_backend(kind: str, w: int = 64) -> WordModBackend:
    try:
        cls = BACKEND_KINDS[kind]
    except KeyError:
        raise ValueError(
            f"unknown backend kind {kind!r}, expected one of {sorted(BACKEND_KINDS)}"
        ) from None
    return cls(w)
