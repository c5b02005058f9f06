"""RNS Montgomery modular multiplication with interchangeable base
extensions, word-size modular backends, and a static instruction-cost
model."""

from .basegen import (
    RnsBase,
    build_base,
    build_pm_base,
    generate_pm_moduli,
    load_base,
    save_base,
)
from .baseext import (
    ExtensionPair,
    KawamuraParams,
    compute_k_hat,
    extend_bajard_imbert,
    extend_kawamura,
    extend_shenoy_kumaresan,
    extend_szabo_tanaka,
)
from .costmodel import (
    CostReport,
    DelayTable,
    estimate_io,
    estimate_ooo,
    quadratic_fit_r2,
    ratio_report,
)
from .isa import ModInstr, decode, encode
from .modmul import (
    MontgomeryContext,
    MontPair,
    context_new,
    from_mont,
    mont_exp,
    mont_mul,
    mont_pair,
    to_mont,
)
from .rnscore import (
    MrsDigits,
    RnsInt,
    from_rns_crt,
    mrs_value,
    rns_elementwise,
    to_mrs,
    to_rns,
)
from .wordmod import (
    InstructionSim,
    NaiveModulo,
    OpCounters,
    PmModulus,
    PseudoMersenne,
    WordModBackend,
    make_backend,
    pm_modulus,
)

__version__ = "0.1.0"
