"""Base-extension exactness against the big-integer oracle, the fixed-point
quotient estimate, and the operation-count formulas."""

import math
import random
from fractions import Fraction

import pytest

from rnsmul.basegen import RnsBase, build_base, generate_pm_moduli
from rnsmul.baseext import (
    ExtensionPair,
    KawamuraParams,
    compute_k_hat,
    extend_bajard_imbert,
    extend_kawamura,
    extend_shenoy_kumaresan,
    extend_szabo_tanaka,
)
from rnsmul.rnscore import to_rns
from rnsmul.wordmod import InstructionSim, make_backend


def crt_value(residues, moduli):
    """Independent reconstruction used as the oracle throughout."""
    M = math.prod(moduli)
    acc = 0
    for r, m in zip(residues, moduli):
        mi = M // m
        acc += r * (pow(mi % m, -1, m) * mi)
    return acc % M


def k_true(x, residues, base):
    """Exact CRT quotient: (sum_i xi_i*(M/m_i) - x) / M."""
    coeffs = [
        r * inv % m for r, inv, m in zip(residues, base.inv_Mi, base.moduli)
    ]
    total = sum(c * mi for c, mi in zip(coeffs, base.Mi))
    assert (total - x) % base.M == 0
    return (total - x) // base.M


SRC2 = build_base((251, 247), 8)
DST2 = build_base((239, 233), 8)
PAIR22 = ExtensionPair(SRC2, DST2)


def test_pair_tables():
    assert PAIR22.M_mod_dst == tuple(SRC2.M % m for m in DST2.moduli)
    for j, mj in enumerate(DST2.moduli):
        for i in range(SRC2.n):
            assert PAIR22.cross_cols[j][i] == SRC2.Mi[i] % mj
    assert PAIR22.weight_cols[0][0] == 1
    assert PAIR22.weight_cols[0][1] == 251 % 239


def test_pair_rejects_shared_factor():
    with pytest.raises(ValueError, match="coprime"):
        ExtensionPair(build_base((3, 5), 8), build_base((7, 9), 8))


def test_st_examples():
    be = make_backend("modulo", 8)
    got = extend_szabo_tanaka(to_rns(247, SRC2), PAIR22, be)
    assert got.residues == (247 % 239, 247 % 233) == (8, 14)
    assert extend_szabo_tanaka(to_rns(0, SRC2), PAIR22, be).residues == (0, 0)


def test_st_exhaustive_tiny():
    src = build_base((3, 5), 8)
    dst = build_base((7, 11), 8)
    pair = ExtensionPair(src, dst)
    be = make_backend("inst", 8)
    for x in range(src.M):
        got = extend_szabo_tanaka(to_rns(x, src), pair, be)
        assert got.residues == (x % 7, x % 11)


def test_kawamura_params_defaults():
    params = KawamuraParams.for_base(SRC2)
    assert params.q == 8 and params.alpha_fp == 128
    # eps = n*(2^-q + c_max*2^-w) with c_max = 9
    assert params.eps == Fraction(2, 256) + Fraction(2 * 9, 256)
    assert params.eps <= params.alpha


def test_kawamura_params_config_errors():
    # moduli far from 2^w push the error bound past alpha
    with pytest.raises(ValueError, match="eps"):
        KawamuraParams.for_base(build_base((3, 5), 8))
    with pytest.raises(ValueError, match="q="):
        KawamuraParams.for_base(SRC2, q=9)
    with pytest.raises(ValueError, match="alpha"):
        KawamuraParams.for_base(SRC2, alpha=Fraction(3, 2))


def test_k_hat_zero():
    be = make_backend("inst", 8)
    params = KawamuraParams.for_base(SRC2)
    assert compute_k_hat(to_rns(0, SRC2), params, be) == 0


def test_k_hat_exhaustive_below_half_range():
    be = make_backend("inst", 8)
    params = KawamuraParams.for_base(SRC2)
    for x in range(SRC2.M // 2):
        xi = to_rns(x, SRC2)
        assert compute_k_hat(xi, params, be) == k_true(x, xi.residues, SRC2)


def test_k_hat_boundary():
    be = make_backend("inst", 8)
    params = KawamuraParams.for_base(SRC2)
    x = (SRC2.M - 1) // 2  # largest value below (1 - alpha) * M
    xi = to_rns(x, SRC2)
    assert compute_k_hat(xi, params, be) == k_true(x, xi.residues, SRC2)


def test_kawamura_examples():
    be = make_backend("modulo", 8)
    params = KawamuraParams.for_base(SRC2)
    assert extend_kawamura(to_rns(0, SRC2), PAIR22, params, be).residues == (0, 0)
    got = extend_kawamura(to_rns(1000, SRC2), PAIR22, params, be)
    assert got.residues == (1000 % 239, 1000 % 233) == (44, 68)


def test_kawamura_matches_st_below_half_range():
    be = make_backend("inst", 8)
    params = KawamuraParams.for_base(SRC2)
    for x in range(0, SRC2.M // 2):
        xi = to_rns(x, SRC2)
        assert (
            extend_kawamura(xi, PAIR22, params, be).residues
            == extend_szabo_tanaka(xi, PAIR22, be).residues
            == (x % 239, x % 233)
        )


def test_bajard_imbert_examples():
    src = build_base((3, 5), 8)
    dst = build_base((7, 11), 8)
    pair = ExtensionPair(src, dst)
    be = make_backend("modulo", 8)
    assert extend_bajard_imbert(to_rns(0, src), pair, be).residues == (0, 0)
    got = extend_bajard_imbert(to_rns(7, src), pair, be)
    v = crt_value(got.residues, dst.moduli)
    lam = (v - 7) // src.M
    assert v == 7 + lam * src.M and 0 <= lam <= src.n - 1


def test_bajard_imbert_excess_bound_exhaustive():
    src = build_base((3, 5), 8)
    dst = build_base((7, 11), 8)
    pair = ExtensionPair(src, dst)
    be = make_backend("inst", 8)
    seen = set()
    for x in range(src.M):
        got = extend_bajard_imbert(to_rns(x, src), pair, be)
        v = crt_value(got.residues, dst.moduli)
        lam, rem = divmod(v - x, src.M)
        assert rem == 0 and 0 <= lam <= src.n - 1
        seen.add(lam)
    assert seen == {0, 1}  # the approximate extension really is approximate


def test_shenoy_kumaresan_exhaustive_tiny():
    src = build_base((3, 5), 8)
    dst = build_base((11, 13), 8)
    pair = ExtensionPair(src, dst)
    be = make_backend("modulo", 8)
    m_e = 7
    assert extend_shenoy_kumaresan(to_rns(0, src), 0, m_e, pair, be).residues == (0, 0)
    for x in range(src.M):
        got = extend_shenoy_kumaresan(to_rns(x, src), x % m_e, m_e, pair, be)
        assert got.residues == (x % 11, x % 13)


def test_shenoy_kumaresan_recovers_k():
    src = build_base((251, 247), 8)
    dst = build_base((255, 253), 8)
    pair = ExtensionPair(src, dst)
    m_e = 239
    be = make_backend("inst", 8)
    for x in range(0, src.M, 97):
        xi = to_rns(x, src)
        got = extend_shenoy_kumaresan(xi, x % m_e, m_e, pair, be)
        assert got.residues == (x % 255, x % 253)
        assert k_true(x, xi.residues, src) <= src.n - 1


def test_shenoy_kumaresan_config_errors():
    src = build_base((3, 5), 8)
    dst = build_base((11, 13), 8)
    pair = ExtensionPair(src, dst)
    be = make_backend("modulo", 8)
    with pytest.raises(ValueError, match="exceed"):
        extend_shenoy_kumaresan(to_rns(1, src), 1 % 2, 2, pair, be)
    with pytest.raises(ValueError, match="factor"):
        extend_shenoy_kumaresan(to_rns(1, src), 1 % 9, 9, pair, be)
    with pytest.raises(ValueError, match="residue"):
        extend_shenoy_kumaresan(to_rns(1, src), 7, 7, pair, be)


def test_wrong_base_rejected():
    be = make_backend("modulo", 8)
    other = build_base((11, 13), 8)
    with pytest.raises(ValueError, match="source base"):
        extend_szabo_tanaka(to_rns(1, other), PAIR22, be)


def test_exactness_randomized_w64():
    """At least 1e5 extension-vs-oracle checks across the algorithms."""
    rng = random.Random(101)
    checks = 0
    for n in (8, 16):
        pool = [p.m for p in generate_pm_moduli(2 * n, 64)]
        src, dst = RnsBase(pool[0::2], 64), RnsBase(pool[1::2], 64)
        pair = ExtensionPair(src, dst)
        params = KawamuraParams.for_base(src)
        be = make_backend("pm", 64)
        m_e = (1 << 64) - 363  # coprime odd extra modulus
        assert math.gcd(m_e, src.M) == 1
        for _ in range(15000):
            x = rng.randrange(src.M)
            xi = to_rns(x, src)
            want = tuple(x % m for m in dst.moduli)
            assert extend_szabo_tanaka(xi, pair, be).residues == want
            bi = extend_bajard_imbert(xi, pair, be)
            lam = (crt_value(bi.residues, dst.moduli) - x) // src.M
            assert 0 <= lam <= n - 1
            checks += 2
            if 2 * x < src.M:
                assert extend_kawamura(xi, pair, params, be).residues == want
                checks += 1
            sk = extend_shenoy_kumaresan(xi, x % m_e, m_e, pair, be)
            assert sk.residues == want
            checks += 1
    assert checks >= 100_000


def formula_counts_st(n, np_):
    return {
        "modmul": n * (n - 1) // 2 + n * np_,
        "modsub": n * (n - 1) // 2,
        "modadd": n * (n - 1) // 2 + n * np_ + np_ * (n - 1),
    }


def formula_counts_kawamura(n, np_):
    return {
        "modmul": n + n * np_ + np_,
        "modsub": np_,
        "modadd": 2 * n * np_,
    }


@pytest.mark.parametrize("n", [8, 16, 32])
def test_operation_count_formulas(n):
    """Quadratic cross-product cost plus linear accumulator cost, exact."""
    pool = [p.m for p in generate_pm_moduli(2 * n, 64)]
    src, dst = RnsBase(pool[0::2], 64), RnsBase(pool[1::2], 64)
    pair = ExtensionPair(src, dst)
    params = KawamuraParams.for_base(src)
    x = to_rns(src.M // 3, src)

    be = InstructionSim(64)
    extend_szabo_tanaka(x, pair, be)
    c = be.read_counters()
    want = formula_counts_st(n, dst.n)
    assert c.modmul == want["modmul"]
    assert c.modsub == want["modsub"]
    assert c.modadd == want["modadd"]

    be = InstructionSim(64)
    extend_kawamura(x, pair, params, be)
    c = be.read_counters()
    want = formula_counts_kawamura(n, dst.n)
    assert c.modmul == want["modmul"]
    assert c.modsub == want["modsub"]
    assert c.modadd == want["modadd"]
    # fixed-point accumulator: two shifts, two adds, one mask per channel
    assert c.shift == 2 * n and c.mask == n and c.word_add == 2 * n
