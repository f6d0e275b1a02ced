"""Trigonometry of ideal-vertex pentagons and Lambert quadrilaterals.

Conventions
-----------
An ideal pentagon has right angles at A, B, C, D and an ideal vertex E;
``a = |AB|``, ``b = |BC|``, ``c = |CD|``.  ``d`` is the common perpendicular
between the lines AB and DE.  A Lambert quadrilateral has three right
angles and an acute angle ``phi``; ``a1``, ``a2`` are the sides adjacent to
two right angles and ``b1``, ``b2`` the sides opposite them.

All lengths are :class:`HPScalar`.  Every formula is arranged so that no
difference of nearly-equal large numbers is formed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import DomainError
from .hpscalar import HPScalar, _as_hp, clamp_epsilon, hyp_eval

#: log(sqrt(2)/4): the lower constant in the perpendicular-excess bound.
EXCESS_LOWER = math.log(math.sqrt(2) / 4)

#: Upper excess constant.  Sweep of the exact formula at 512 bits over
#: a in [1, 100] (step 1/4), c/a in {2, 2.5, 3, 4, 5, 7, 10, 15, 20, 30, 50,
#: 70, 100} gives max 1.18791 at (a, c) = (1, 2); 10% headroom on top.
EXCESS_UPPER = 1.3067


def _positive(name: str, x: HPScalar) -> HPScalar:
    if x.sign <= 0:
        raise DomainError(f"{name} must be positive, got {x}")
    return x


def _prec(*xs: HPScalar) -> int:
    return max(x.precision_bits for x in xs)


def ideal_pentagon_b(a, c) -> HPScalar:
    """Length of the side between the two finite sides ``a`` and ``c``.

    From ``cosh a cosh c + 1 = sinh a cosh b sinh c`` one gets the exact
    rearrangement ``cosh b - 1 = (1 + cosh(c - a)) / (sinh a sinh c)``, so
    ``b = 2 asinh(cosh((c - a)/2) / sqrt(sinh a sinh c))`` with no
    cancellation even when ``b ~ 2 e^{-a}`` is tiny.
    """
    a, c = _as_hp(a), _as_hp(c)
    _positive("a", a)
    _positive("c", c)
    p = _prec(a, c)
    a, c = a.with_precision(p), c.with_precision(p)
    half_diff = (c - a).scale_pow2(-1)
    num = hyp_eval("cosh", half_diff)
    den = (hyp_eval("sinh", a) * hyp_eval("sinh", c)).sqrt()
    return hyp_eval("arcsinh", num / den).scale_pow2(1)


def right_pentagon_d(b, c) -> HPScalar:
    """Common perpendicular ``d`` with ``cosh d = sinh b sinh c``."""
    b, c = _as_hp(b), _as_hp(c)
    prod = hyp_eval("sinh", b) * hyp_eval("sinh", c)
    p = prod.precision_bits
    one = HPScalar.one(p)
    if prod < one:
        if prod.sign <= 0 or one - prod > HPScalar.from_value(clamp_epsilon(p), p):
            raise DomainError("sinh b sinh c < 1: no common perpendicular")
        return HPScalar.zero(p)
    return hyp_eval("arccosh", prod)


def perp_excess(a, c) -> HPScalar:
    """``d - (c - a)`` for the pentagon with finite sides ``a`` and ``c``."""
    a, c = _as_hp(a), _as_hp(c)
    if a < 1 or not c > a:
        raise DomainError("perp_excess requires a >= 1 and c > a")
    d = right_pentagon_d(ideal_pentagon_b(a, c), c)
    return d - (c - a)


def small_side_asymptotic(a) -> HPScalar:
    """Leading-order ``2 e^{-a}`` for the middle side as ``c/a -> inf``."""
    a = _as_hp(a)
    if not a > 1:
        raise DomainError("small_side_asymptotic requires a > 1")
    return HPScalar.from_log(1, -a.value(), a.precision_bits).scale_pow2(1)


def lambert_b1(a1, b2) -> HPScalar:
    """``b1`` from ``sinh b1 = sinh a1 cosh b2``."""
    a1, b2 = _positive("a1", _as_hp(a1)), _positive("b2", _as_hp(b2))
    return hyp_eval("arcsinh", hyp_eval("sinh", a1) * hyp_eval("cosh", b2))


def lambert_phi(a1, b2) -> HPScalar:
    """Acute angle from ``tanh a1 sinh b2 tan phi = 1``."""
    a1, b2 = _positive("a1", _as_hp(a1)), _positive("b2", _as_hp(b2))
    t = hyp_eval("tanh", a1) * hyp_eval("sinh", b2)
    return hyp_eval("arctan", t.reciprocal())


def lambert_a2(a1, phi) -> HPScalar:
    """``a2`` from ``sinh a1 sinh a2 = cos phi``."""
    a1, phi = _as_hp(a1), _as_hp(phi)
    return hyp_eval("arcsinh", hyp_eval("cos", phi) / hyp_eval("sinh", a1))


def _rel(lhs: HPScalar, rhs: HPScalar) -> float:
    return lhs.relative_error(rhs)


@dataclass(frozen=True)
class IdealPentagon:
    """Pentagon with four right angles and one ideal vertex.

    ``d`` is ``None`` when ``sinh b sinh c < 1`` (the perpendicular between
    AB and DE does not exist); that happens for short sides.
    """

    a: HPScalar
    b: HPScalar
    c: HPScalar
    d: HPScalar | None = None

    @classmethod
    def from_sides(cls, a, c) -> IdealPentagon:
        a, c = _as_hp(a), _as_hp(c)
        b = ideal_pentagon_b(a, c)
        try:
            d = right_pentagon_d(b, c)
        except DomainError:
            d = None
        return cls(a, b, c, d)

    def residuals(self) -> dict[str, float]:
        """Relative residuals of the defining identities."""
        ca, sa = hyp_eval("cosh", self.a), hyp_eval("sinh", self.a)
        cc, sc = hyp_eval("cosh", self.c), hyp_eval("sinh", self.c)
        cb, sb = hyp_eval("cosh", self.b), hyp_eval("sinh", self.b)
        out = {"cosh a cosh c + 1 = sinh a cosh b sinh c": _rel(ca * cc + 1, sa * cb * sc)}
        if self.d is not None:
            out["cosh d = sinh b sinh c"] = _rel(hyp_eval("cosh", self.d), sb * sc)
        return out


@dataclass(frozen=True)
class LambertQuad:
    a1: HPScalar
    a2: HPScalar
    b1: HPScalar
    b2: HPScalar
    phi: HPScalar

    @classmethod
    def from_a1_b2(cls, a1, b2) -> LambertQuad:
        a1, b2 = _as_hp(a1), _as_hp(b2)
        phi = lambert_phi(a1, b2)
        return cls(a1, lambert_a2(a1, phi), lambert_b1(a1, b2), b2, phi)

    def residuals(self) -> dict[str, float]:
        sa1, ca1, ta1 = (hyp_eval(k, self.a1) for k in ("sinh", "cosh", "tanh"))
        sa2, ca2 = hyp_eval("sinh", self.a2), hyp_eval("cosh", self.a2)
        sb1, cb1 = hyp_eval("sinh", self.b1), hyp_eval("cosh", self.b1)
        sb2, cb2 = hyp_eval("sinh", self.b2), hyp_eval("cosh", self.b2)
        cphi, tphi = hyp_eval("cos", self.phi), hyp_eval("tan", self.phi)
        # sin(phi) = cos(phi) tan(phi) avoids a separate sine kernel
        sphi = cphi * tphi
        return {
            "sinh a1 sinh a2 = cos phi": _rel(sa1 * sa2, cphi),
            "cosh a1 = cosh b1 sin phi": _rel(ca1, cb1 * sphi),
            "cosh a2 = cosh b2 sin phi": _rel(ca2, cb2 * sphi),
            "sinh b1 = sinh a1 cosh b2": _rel(sb1, sa1 * cb2),
            "tanh a1 sinh b2 tan phi = 1": _rel(ta1 * sb2 * tphi, HPScalar.one(self.a1.precision_bits)),
        }


@dataclass(frozen=True)
class IdentityReport:
    trials: int
    seed: int
    precision_bits: int
    worst: dict

    def passed(self, tol: float) -> bool:
        return all(v < tol for v in self.worst.values())

    def to_json(self, tol: float) -> dict:
        return {"trials": self.trials, "seed": self.seed, "precision_bits": self.precision_bits,
                "tolerance": tol, "worst_residuals": dict(self.worst), "passed": self.passed(tol)}


def identity_suite(trials: int = 1000, seed: int = 0, precision_bits: int = 256,
                   side_range: tuple[float, float] = (0.05, 12.0)) -> IdentityReport:
    """Worst relative residual of every identity over random pentagons and Lambert quadrilaterals."""
    rng = random.Random(seed)
    lo, hi = side_range
    worst: dict[str, float] = {}

    def draw() -> HPScalar:
        return HPScalar.from_value(repr(rng.uniform(lo, hi)), precision_bits)

    def fold(res: dict[str, float]) -> None:
        for k, v in res.items():
            worst[k] = max(worst.get(k, 0.0), v)

    for _ in range(trials):
        fold(IdealPentagon.from_sides(draw(), draw()).residuals())
        fold(LambertQuad.from_a1_b2(draw(), draw()).residuals())
    return IdentityReport(trials, seed, precision_bits, worst)
