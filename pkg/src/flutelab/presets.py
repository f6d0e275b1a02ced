"""Ready-made flute specs used by the tests, demos and CLI."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .hpscalar import DEFAULT_PRECISION, HPScalar
from .surface import FluteSpec


def from_ratios(l1, factors: Sequence, precision_bits: int = DEFAULT_PRECISION,
                label: str = "") -> FluteSpec:
    """Cuffs from ``l_{n+1} = K_n (l_1 + ... + l_n)``.

    The rapid-growth ratios are then exactly ``1/K_n``, so any increasing
    factor list with last entry above 10 gives a RAPID spec.
    """
    p = precision_bits
    cuffs = [HPScalar.from_value(Fraction(str(l1)), p)]
    total = cuffs[0]
    for k in factors:
        nxt = total * HPScalar.from_value(Fraction(str(k)), p)
        cuffs.append(nxt)
        total = total + nxt
    return FluteSpec(tuple(cuffs), tuple(HPScalar.zero(p) for _ in cuffs), p, label)


#: factors reaching l_10 ~ 4096 from l_1 = 0.16
RAPID10_FACTORS = ("1.2", "1.3", "1.4", "1.5", "1.6", "1.8", "2", "2.5", "11")
#: depth-12 factors; l_12 ~ 1.3e4
RAPID12_FACTORS = ("1.05", "1.1", "1.15", "1.2", "1.25", "1.3", "1.35", "1.4", "1.45", "1.5", "10.5")


def rapid10(precision_bits: int = DEFAULT_PRECISION) -> FluteSpec:
    """RAPID depth-10 spec with ``l_10`` close to 4096."""
    return from_ratios("0.16", RAPID10_FACTORS, precision_bits, "rapid10")


def rapid12(l1="0.5", precision_bits: int = DEFAULT_PRECISION) -> FluteSpec:
    """RAPID depth-12 spec used by the closure and strictness experiments."""
    return from_ratios(l1, RAPID12_FACTORS, precision_bits, "rapid12")


def doubling(depth: int = 10, scale: int = 4, precision_bits: int = DEFAULT_PRECISION) -> FluteSpec:
    """``l_n = scale * 2^n`` with zero twists: the reduced-scale doubly exponential flute."""
    cuffs = [str(scale * 2 ** n) for n in range(1, depth + 1)]
    return FluteSpec.from_values(cuffs, precision_bits=precision_bits, label=f"doubling{depth}")


def arithmetic(depth: int, start=2, step=1,
               precision_bits: int = DEFAULT_PRECISION) -> FluteSpec:
    """``l_n = start + (n - 1) step``: slow growth, zero twists."""
    a, d = Fraction(str(start)), Fraction(str(step))
    p = precision_bits
    cuffs = tuple(HPScalar.from_value(a + d * n, p) for n in range(depth))
    return FluteSpec(cuffs, tuple(HPScalar.zero(p) for _ in cuffs), p, f"arith{depth}")


def geometric(depth: int = 12, l1="3", ratio="1.8", precision_bits: int = DEFAULT_PRECISION) -> FluteSpec:
    """``l_n = l1 * ratio^(n-1)``; with the defaults every gap exceeds ``-C_1``."""
    p = precision_bits
    a, r = Fraction(str(l1)), Fraction(str(ratio))
    cuffs = tuple(HPScalar.from_value(a * r ** n, p) for n in range(depth))
    return FluteSpec(cuffs, tuple(HPScalar.zero(p) for _ in cuffs), p, f"geometric{depth}")
