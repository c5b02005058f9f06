"""Bit-exact encoding of the three word-size modular instructions.

R4-type layout on 32 bits: opcode (custom-0) in bits 0-6, rd 7-11,
funct3 12-14, rs1 15-19, rs2 20-24, bits 25-26 reserved zero, and the
modulus register rs3 in bits 27-31.
"""

from __future__ import annotations

from typing import NamedTuple

OPCODE_CUSTOM0 = 0b0001011

FUNCT3 = {"mulmod": 0, "addmod": 1, "submod": 2}
_KIND_OF = {v: k for k, v in FUNCT3.items()}


class ModInstr(NamedTuple):
    kind: str
    rd: int
    rs1: int
    rs2: int
    rs3: int


def _check_reg(name: str, idx: int) -> int:
    if not 0 <= idx < 32:
        raise ValueError(f"register index {name}={idx} out of range 0..31")
    return idx


def encode(instr: ModInstr) -> int:
    if instr.kind not in FUNCT3:
        raise ValueError(f"unknown instruction kind {instr.kind!r}")
    _check_reg("rd", instr.rd)
    _check_reg("rs1", instr.rs1)
    _check_reg("rs2", instr.rs2)
    _check_reg("rs3", instr.rs3)
    return (
        OPCODE_CUSTOM0
        | instr.rd << 7
        | FUNCT3[instr.kind] << 12
        | instr.rs1 << 15
        | instr.rs2 << 20
        | instr.rs3 << 27
    )


def decode(word: int) -> ModInstr:
    if not 0 <= word < (1 << 32):
        raise ValueError(f"instruction word {word:#x} is not 32 bits")
    if word & 0x7F != OPCODE_CUSTOM0:
        raise ValueError(f"word {word:#010x}: opcode {word & 0x7F:#04x} is not custom-0")
    funct3 = (word >> 12) & 0x7
    if funct3 not in _KIND_OF:
        raise ValueError(f"word {word:#010x}: funct3 {funct3} is unassigned")
    if (word >> 25) & 0x3:
        raise ValueError(f"word {word:#010x}: reserved bits 25-26 are set")
    return ModInstr(
        kind=_KIND_OF[funct3],
        rd=(word >> 7) & 0x1F,
        rs1=(word >> 15) & 0x1F,
        rs2=(word >> 20) & 0x1F,
        rs3=(word >> 27) & 0x1F,
    )
