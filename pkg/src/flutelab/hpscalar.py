"""High-precision signed reals stored as (sign, natural-log magnitude).

Values like ``cosh(l/2)`` with ``l`` in the thousands are representable
without exponent overflow because only the logarithm is stored.  Each
value carries its own precision; there is no global precision state.
Internally the log magnitudes are mpmath floats produced by per-precision
contexts (see :func:`context`), which are never mutated after creation.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import CancellationWarning, DomainError, PrecisionError

DEFAULT_PRECISION = 256
MIN_PRECISION = 16
MAX_PRECISION = 1 << 22

KINDS = ("cosh", "sinh", "arccosh", "arcsinh", "tanh", "exp", "log",
         "arctan", "tan", "cos")

_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d+(?:\.\d*)?|\.\d+)(?:[eE]([+-]?\d+))?\s*$")


@functools.lru_cache(maxsize=None)
def context(prec: int) -> MPContext:
    """Return a private mpmath context working at ``prec`` bits."""
    if not isinstance(prec, int) or not MIN_PRECISION <= prec <= MAX_PRECISION + 4096:
        raise PrecisionError(f"unsupported precision: {prec!r} bits")
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def _check_precision(prec: int) -> int:
    if not isinstance(prec, int) or not MIN_PRECISION <= prec <= MAX_PRECISION:
        raise PrecisionError(f"unsupported precision: {prec!r} bits")
    return prec


def _guard(prec: int, *mags: float) -> int:
    """Working precision that keeps ``prec`` bits relative to values whose
    log magnitudes are as large as ``mags``."""
    extra = 0
    for m in mags:
        if m is not None and math.isfinite(m) and abs(m) > 1:
            extra = max(extra, int(math.log2(abs(m))) + 2)
    return prec + 32 + extra


def _logmag_float(x) -> float:
    try:
        return float(x)
    except (OverflowError, ValueError):
        return math.inf


def clamp_epsilon(prec: int) -> Fraction:
    """Tolerance below 1 that arccosh-type arguments may undershoot."""
    return Fraction(1, 2 ** (prec // 2))


@dataclass(frozen=True, eq=False)
class HPScalar:
    """A signed real ``sign * exp(logmag)``.

    ``sign == 0`` exactly when ``logmag`` is minus infinity.  ``cancellation``
    is diagnostic metadata set by :func:`log_sum_signed`; it does not take
    part in comparisons.
    """

    sign: int
    logmag: object
    precision_bits: int = DEFAULT_PRECISION
    cancellation: CancellationWarning | None = field(default=None, compare=False)

    def __post_init__(self):
        _check_precision(self.precision_bits)
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        ctx = context(self.precision_bits)
        is_ninf = self.logmag == ctx.ninf
        if (self.sign == 0) != bool(is_ninf):
            raise ValueError("sign == 0 iff logmag == -inf")

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, precision_bits: int = DEFAULT_PRECISION) -> HPScalar:
        return cls(0, context(precision_bits).ninf, precision_bits)

    @classmethod
    def one(cls, precision_bits: int = DEFAULT_PRECISION) -> HPScalar:
        return cls(1, context(precision_bits).zero, precision_bits)

    @classmethod
    def from_log(cls, sign: int, logmag, precision_bits: int = DEFAULT_PRECISION,
                 cancellation=None) -> HPScalar:
        """Build from an explicit log magnitude (any mpf/int/float/str)."""
        if sign == 0:
            return cls.zero(precision_bits)
        ctx = context(precision_bits)
        L = ctx.convert(logmag) if not hasattr(logmag, "_mpf_") else ctx.make_mpf(logmag._mpf_)
        return cls(1 if sign > 0 else -1, _round_logmag(L, precision_bits),
                   precision_bits, cancellation)

    @classmethod
    def from_value(cls, x, precision_bits: int = DEFAULT_PRECISION) -> HPScalar:
        """Convert an int, Fraction, float, decimal string or mpf."""
        _check_precision(precision_bits)
        if isinstance(x, HPScalar):
            return x.with_precision(precision_bits)
        if isinstance(x, str):
            return cls.from_decimal(x, precision_bits)
        wp = precision_bits + 64
        ctx = context(wp)
        if isinstance(x, Fraction):
            if x == 0:
                return cls.zero(precision_bits)
            s = 1 if x > 0 else -1
            L = ctx.log(abs(x.numerator)) - ctx.log(x.denominator)
            return cls.from_log(s, L, precision_bits)
        if hasattr(x, "_mpf_"):
            v = ctx.make_mpf(x._mpf_)
        else:
            v = ctx.convert(x)
        if v == 0:
            return cls.zero(precision_bits)
        if not ctx.isfinite(v):
            raise DomainError(f"non-finite value {x!r}")
        s = 1 if v > 0 else -1
        # ctx.log keeps relative accuracy of the log for huge exponents
        wp2 = _guard(wp, float(ctx.mag(v)) * 0.7)
        L = context(wp2).log(abs(context(wp2).make_mpf(v._mpf_)))
        return cls.from_log(s, L, precision_bits)

    @classmethod
    def from_decimal(cls, text: str, precision_bits: int = DEFAULT_PRECISION) -> HPScalar:
        """Parse ``[-]d.ddd[e[-]N]``; the exponent may be arbitrarily large."""
        m = _DECIMAL_RE.match(text)
        if not m:
            raise ValueError(f"not a decimal number: {text!r}")
        sgn, digits, exp10 = m.groups()
        e10 = int(exp10) if exp10 else 0
        if "." in digits:
            intpart, frac = digits.split(".")
        else:
            intpart, frac = digits, ""
        mant = int((intpart or "0") + frac) if (intpart or frac) else 0
        e10 -= len(frac)
        if mant == 0:
            return cls.zero(precision_bits)
        wp = _guard(precision_bits + 32, e10 * 2.31)
        ctx = context(wp)
        L = ctx.log(mant) + e10 * ctx.ln10
        return cls.from_log(-1 if sgn == "-" else 1, L, precision_bits)

    def with_precision(self, precision_bits: int) -> HPScalar:
        if precision_bits == self.precision_bits:
            return self
        if self.sign == 0:
            return HPScalar.zero(precision_bits)
        return HPScalar.from_log(self.sign, self.logmag, precision_bits, self.cancellation)

    # -- conversion ---------------------------------------------------
    def value(self, prec: int | None = None):
        """The real value as an mpf of a context at ``prec`` bits."""
        p = prec or self.precision_bits
        ctx = context(p)
        if self.sign == 0:
            return ctx.zero
        L = ctx.make_mpf(self.logmag._mpf_)
        wp = _guard(p, _logmag_float(L))
        v = context(wp).exp(context(wp).make_mpf(L._mpf_))
        return ctx.make_mpf((+ctx.make_mpf(v._mpf_))._mpf_) * self.sign

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        L = _logmag_float(self.logmag)
        if L > 709.7:
            return self.sign * math.inf
        if L < -745:
            return 0.0 * self.sign
        return self.sign * math.exp(L)

    def to_decimal(self, digits: int | None = None) -> str:
        """Serialize as ``d.ddd…e<exp>`` with enough digits to round-trip."""
        if self.sign == 0:
            return "0e0"
        if digits is None:
            digits = int(math.ceil(self.precision_bits * math.log10(2))) + 3
        L0 = self.logmag
        wp = _guard(int(digits * 3.33) + 32, _logmag_float(L0))
        ctx = context(wp)
        L = ctx.make_mpf(L0._mpf_)
        t = L / ctx.ln10
        e10 = int(ctx.floor(t))
        mant = ctx.exp(L - e10 * ctx.ln10)
        scaled = int(ctx.nint(mant * ctx.mpf(10) ** (digits - 1)))
        if scaled >= 10 ** digits:
            scaled //= 10
            e10 += 1
        s = str(scaled)
        body = s[0] + ("." + s[1:] if len(s) > 1 else "")
        return f"{'-' if self.sign < 0 else ''}{body}e{e10}"

    def __str__(self) -> str:
        return self.to_decimal(min(20, int(self.precision_bits * 0.30103) + 3))

    def __repr__(self) -> str:
        return f"HPScalar({self!s}, prec={self.precision_bits})"

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> HPScalar:
        if isinstance(other, HPScalar):
            return other
        return HPScalar.from_value(other, self.precision_bits)

    def _prec_with(self, other: HPScalar) -> int:
        return max(self.precision_bits, other.precision_bits)

    def __neg__(self) -> HPScalar:
        if self.sign == 0:
            return self
        return HPScalar(-self.sign, self.logmag, self.precision_bits)

    def __abs__(self) -> HPScalar:
        if self.sign >= 0:
            return self
        return HPScalar(1, self.logmag, self.precision_bits)

    def __mul__(self, other) -> HPScalar:
        other = self._coerce(other)
        p = self._prec_with(other)
        if self.sign == 0 or other.sign == 0:
            return HPScalar.zero(p)
        ctx = context(_guard(p, _logmag_float(self.logmag), _logmag_float(other.logmag)))
        L = ctx.make_mpf(self.logmag._mpf_) + ctx.make_mpf(other.logmag._mpf_)
        return HPScalar.from_log(self.sign * other.sign, L, p)

    __rmul__ = __mul__

    def reciprocal(self) -> HPScalar:
        if self.sign == 0:
            raise ZeroDivisionError("reciprocal of zero")
        ctx = context(self.precision_bits)
        return HPScalar(self.sign, -ctx.make_mpf(self.logmag._mpf_), self.precision_bits)

    def __truediv__(self, other) -> HPScalar:
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> HPScalar:
        return self._coerce(other) * self.reciprocal()

    def __add__(self, other) -> HPScalar:
        return log_sum_signed([self, self._coerce(other)])

    __radd__ = __add__

    def __sub__(self, other) -> HPScalar:
        return log_sum_signed([self, -self._coerce(other)])

    def __rsub__(self, other) -> HPScalar:
        return log_sum_signed([self._coerce(other), -self])

    def square(self) -> HPScalar:
        return self * self

    def sqrt(self) -> HPScalar:
        if self.sign < 0:
            raise DomainError("square root of a negative number")
        if self.sign == 0:
            return self
        ctx = context(_guard(self.precision_bits, _logmag_float(self.logmag)))
        return HPScalar.from_log(1, ctx.make_mpf(self.logmag._mpf_) / 2, self.precision_bits)

    def scale_pow2(self, k: int) -> HPScalar:
        """Multiply by ``2**k`` exactly in log space (up to rounding of ln 2)."""
        if self.sign == 0 or k == 0:
            return self
        ctx = context(_guard(self.precision_bits, _logmag_float(self.logmag)))
        return HPScalar.from_log(self.sign, ctx.make_mpf(self.logmag._mpf_) + k * ctx.ln2,
                                 self.precision_bits)

    # -- comparison ---------------------------------------------------
    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if self.sign != other.sign:
            return -1 if self.sign < other.sign else 1
        if self.sign == 0:
            return 0
        a, b = self.logmag, other.logmag
        if a == b:
            return 0
        res = -1 if a < b else 1
        return res * self.sign

    def __eq__(self, other) -> bool:
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash((self.sign, str(self.logmag)))

    def is_zero(self) -> bool:
        return self.sign == 0

    def relative_error(self, other) -> float:
        """``|self/other - 1|`` as a float (other nonzero)."""
        other = self._coerce(other)
        if other.sign == 0:
            return 0.0 if self.sign == 0 else math.inf
        if self.sign != other.sign:
            return math.inf if self.sign == 0 else 2.0 + abs(float((self / other)))
        p = self._prec_with(other)
        ctx = context(_guard(p, _logmag_float(self.logmag), _logmag_float(other.logmag)))
        d = ctx.make_mpf(self.logmag._mpf_) - ctx.make_mpf(other.logmag._mpf_)
        return float(abs(ctx.expm1(d)))


def _round_logmag(L, prec: int):
    """Round ``L`` so its absolute accuracy is about ``2**-(prec+8)``."""
    if not context(MIN_PRECISION).isfinite(L):
        return L
    mag = _logmag_float(L)
    bits = prec + 8 + (int(math.log2(abs(mag))) + 1 if abs(mag) >= 1 else 0)
    ctx = context(bits)
    return ctx.make_mpf((+ctx.make_mpf(L._mpf_))._mpf_)


def _sort_key(t: HPScalar):
    return (t.logmag, t.sign)


def log_sum_signed(terms: Sequence[HPScalar]) -> HPScalar:
    """Exact-sign sum of log-domain terms.

    The terms are sorted canonically before summation so that the result is
    bit-for-bit independent of input order.  If the sum is smaller than the
    largest term by more than ``2**(-prec/2)`` the result carries a
    :class:`CancellationWarning`.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("log_sum_signed needs at least one term")
    prec = max(t.precision_bits for t in terms)
    nz = [t for t in terms if t.sign != 0]
    if not nz:
        return HPScalar.zero(prec)
    if len(nz) == 1:
        return nz[0].with_precision(prec)
    nz.sort(key=_sort_key, reverse=True)
    Lmax_f = _logmag_float(nz[0].logmag)
    wp = _guard(prec + 32, Lmax_f)
    ctx = context(wp)
    Lmax = ctx.make_mpf(nz[0].logmag._mpf_)
    cutoff = -(wp + 16) * 0.6931471805599453
    acc = ctx.zero
    for t in nz:
        d = ctx.make_mpf(t.logmag._mpf_) - Lmax
        if d < cutoff:
            continue
        acc += t.sign * ctx.exp(d)
    if acc == 0:
        return HPScalar(0, context(prec).ninf, prec,
                        CancellationWarning("exact cancellation"))
    warn = None
    if abs(acc) < ctx.ldexp(1, -(prec // 2)):
        warn = CancellationWarning(
            f"signed sum cancelled to 2^{int(ctx.log(abs(acc), 2))} of its largest term")
    L = Lmax + ctx.log(abs(acc))
    return HPScalar.from_log(1 if acc > 0 else -1, L, prec, warn)


def hp(x, precision_bits: int = DEFAULT_PRECISION) -> HPScalar:
    """Shorthand for :meth:`HPScalar.from_value`."""
    return HPScalar.from_value(x, precision_bits)


def _as_hp(x, prec: int | None = None) -> HPScalar:
    if isinstance(x, HPScalar):
        return x if prec is None else x.with_precision(max(prec, x.precision_bits))
    return HPScalar.from_value(x, prec or DEFAULT_PRECISION)


def hyp_eval(kind: str, x) -> HPScalar:
    """Evaluate one of the supported elementary functions on ``x``.

    ``cosh``/``sinh`` never materialise ``exp(|x|)``: for large arguments the
    log magnitude is ``|x| - ln 2 + log1p(±exp(-2|x|))``.  ``arccosh`` and
    ``arcsinh`` accept arguments with astronomically large log magnitude.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    x = _as_hp(x)
    prec = x.precision_bits
    Lf = _logmag_float(x.logmag) if x.sign else -math.inf

    if kind == "exp":
        if x.sign == 0:
            return HPScalar.one(prec)
        # e^x has log magnitude x; the value of x must be materialised.
        return HPScalar.from_log(1, x.value(_guard(prec, Lf) + max(0, int(Lf * 1.45))), prec)

    if kind == "log":
        if x.sign <= 0:
            raise DomainError("log of a non-positive number")
        return HPScalar.from_value(x.logmag, prec)

    if kind in ("cosh", "sinh"):
        if x.sign == 0:
            return HPScalar.one(prec) if kind == "cosh" else HPScalar.zero(prec)
        wp = _guard(prec, math.exp(min(Lf, 700)))
        ctx = context(wp)
        v = abs(x.value(wp))
        if v > 1:
            # |x| - ln2 + log1p(±e^{-2|x|})
            tail = -2 * v
            if tail < -(wp + 8) * 0.6931471805599453:
                corr = ctx.zero
            else:
                e = ctx.exp(tail)
                corr = ctx.log1p(e if kind == "cosh" else -e)
            L = v - ctx.ln2 + corr
        else:
            val = ctx.cosh(v) if kind == "cosh" else ctx.sinh(v)
            L = ctx.log(val)
        s = 1 if kind == "cosh" else x.sign
        return HPScalar.from_log(s, L, prec)

    if kind == "tanh":
        if x.sign == 0:
            return HPScalar.zero(prec)
        wp = _guard(prec, math.exp(min(Lf, 700)))
        ctx = context(wp)
        v = abs(x.value(wp))
        # log tanh v = log1p(-e^{-2v}) - log1p(e^{-2v})
        if v > 1:
            tail = -2 * v
            if tail < -(wp + 8) * 0.6931471805599453:
                L = ctx.zero
            else:
                e = ctx.exp(tail)
                L = ctx.log1p(-e) - ctx.log1p(e)
        else:
            L = ctx.log(ctx.tanh(v))
        return HPScalar.from_log(x.sign, L, prec)

    if kind == "arccosh":
        one = HPScalar.one(prec)
        if x < one:
            eps = clamp_epsilon(prec)
            if x.sign > 0 and (one - x) <= HPScalar.from_value(eps, prec):
                return HPScalar.zero(prec)
            raise DomainError(f"arccosh argument below 1: {x}")
        return _arc_big(x, prec, cosh=True)

    if kind == "arcsinh":
        if x.sign == 0:
            return HPScalar.zero(prec)
        r = _arc_big(abs(x), prec, cosh=False)
        return r if x.sign > 0 else -r

    # bounded circular functions
    wp = prec + 32
    ctx = context(wp)
    if kind == "arctan":
        if x.sign == 0:
            return HPScalar.zero(prec)
        if Lf > 60:
            # pi/2 - 1/x to full accuracy when 1/x is below the ulp
            inv = x.reciprocal().value(wp)
            return HPScalar.from_value(ctx.sign(inv) * ctx.pi / 2 - ctx.atan(inv), prec)
        return HPScalar.from_value(ctx.atan(x.value(wp)), prec)
    v = x.value(wp)
    if abs(v) > ctx.pi + ctx.ldexp(1, -prec):
        raise DomainError(f"{kind} argument must satisfy |x| <= pi")
    return HPScalar.from_value(ctx.tan(v) if kind == "tan" else ctx.cos(v), prec)


def _arc_big(x: HPScalar, prec: int, cosh: bool) -> HPScalar:
    """arccosh/arcsinh of x >= 0 via logs: L + log(1 ± sqrt(1 ∓ e^{-2L}))."""
    if x.sign == 0:
        return HPScalar.zero(prec)
    Lf = _logmag_float(x.logmag)
    wp = _guard(prec, Lf)
    ctx = context(wp)
    L = ctx.make_mpf(x.logmag._mpf_)
    if Lf > 2:
        tail = -2 * L
        if tail < -(wp + 8) * 0.6931471805599453:
            val = L + ctx.ln2
        else:
            e = ctx.exp(tail)
            inner = ctx.sqrt(1 - e) if cosh else ctx.sqrt(1 + e)
            val = L + ctx.log1p(inner)
    else:
        if cosh:
            # arccosh(v) = log(v + sqrt((v-1)(v+1))); v-1 computed in log space
            vm1 = (x - HPScalar.one(prec)).value(wp)
            v = 1 + vm1
            val = ctx.log1p(vm1 + ctx.sqrt(vm1 * (v + 1)))
        else:
            val = ctx.asinh(x.value(wp))
    return HPScalar.from_value(val, prec)


def as_decimal_list(values: Iterable[HPScalar], digits: int | None = None) -> list[str]:
    return [v.to_decimal(digits) for v in values]
