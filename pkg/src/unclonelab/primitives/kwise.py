"""k-wise independent functions as random polynomials over GF(2^m).

A degree-(2k-1) polynomial with uniform coefficients is 2k-wise independent:
any 2k distinct evaluation points see a uniform joint distribution
(Vandermonde invertibility). Field elements are ints in [0, 2^m); arithmetic
reduces modulo a fixed irreducible polynomial per m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["REDUCTION_POLYS", "KwiseFunction", "gf_mul", "kwise_gen", "kwise_eval"]

# Irreducible reduction polynomial per field-size exponent m (verified by a
# Rabin irreducibility check; m=8 is the AES polynomial).
REDUCTION_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x402B,
    15: 0x8003,
    16: 0x1100B,
}


def gf_mul(a: int, b: int, m: int) -> int:
    """Carry-less multiply then reduce modulo the degree-m polynomial."""
    poly = REDUCTION_POLYS[m]
    prod = 0
    while b:
        if b & 1:
            prod ^= a
        a <<= 1
        b >>= 1
    top = prod.bit_length() - 1
    while top >= m:
        prod ^= poly << (top - m)
        top = prod.bit_length() - 1
    return prod


@dataclass(frozen=True)
class KwiseFunction:
    k: int
    m: int
    coefficients: tuple[int, ...]
    output_bits: int

    def __post_init__(self):
        if self.m not in REDUCTION_POLYS:
            raise ValueError(f"field exponent m={self.m} unsupported")
        if len(self.coefficients) != 2 * self.k:
            raise ValueError("need exactly 2k coefficients")
        if any(not 0 <= c < (1 << self.m) for c in self.coefficients):
            raise ValueError("coefficient out of field range")
        if self.output_bits < 1:
            raise ValueError("output_bits must be positive")


def kwise_gen(k: int, m: int, output_bits: int, rng: np.random.Generator) -> KwiseFunction:
    coeffs = tuple(int(c) for c in rng.integers(0, 1 << m, size=2 * k))
    return KwiseFunction(k, m, coeffs, output_bits)


def kwise_eval(f: KwiseFunction, x: int) -> int:
    """Horner evaluation, then resize the m-bit value to output_bits MSB-first.

    Truncation keeps the top bits; widening tiles the m-bit pattern.
    """
    if not 0 <= x < (1 << f.m):
        raise ValueError(f"input {x} outside GF(2^{f.m}) encoding range")
    acc = 0
    for c in reversed(f.coefficients):
        acc = gf_mul(acc, x, f.m) ^ c
    if f.output_bits <= f.m:
        return acc >> (f.m - f.output_bits)
    out = 0
    filled = 0
    while filled < f.output_bits:
        take = min(f.m, f.output_bits - filled)
        out = (out << take) | (acc >> (f.m - take))
        filled += take
    return out
