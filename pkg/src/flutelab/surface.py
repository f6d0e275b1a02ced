"""Marked flute surfaces: Fenchel-Nielsen data, seams and holonomy.

A stage-``N`` flute is the chain of tight pants ``P_0, P_1, ..., P_{N-1}``.
``P_0`` has two cusps and the cuff ``alpha_1``; ``P_n`` (``n >= 1``) has
cuffs ``alpha_n``, ``alpha_{n+1}`` and one cusp.  ``alpha_N`` is left open.

Twists are absolute lengths.  ``t_n = 0`` means the feet of the seams
``beta_{n-1}`` and ``beta_n`` on ``alpha_n`` coincide (for ``n = 1`` the
first foot is the point of ``alpha_1`` where ``P_0``'s first cusp
perpendicular starts).  A positive twist slides the foot of ``beta_n`` in
the positive chart direction of ``alpha_n``.

The holonomy is built from reflections: each pants is the double of an
ideal pentagon along its three seams, so the cuff and cusp elements are
products of two reflections in seam lines.
"""
from __future__ import annotations

import functools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PrecisionError, SchemaError, ValidationError
from .hpscalar import DEFAULT_PRECISION, HPScalar, _as_hp, context, hyp_eval
from .trig import IdealPentagon, ideal_pentagon_b

LN2 = math.log(2)


# ----------------------------------------------------------------------
# FluteSpec
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FluteSpec:
    """Cuff lengths ``l_1..l_N`` and twists ``t_1..t_N`` of a marked flute."""

    cuffs: tuple[HPScalar, ...]
    twists: tuple[HPScalar, ...]
    precision_bits: int = DEFAULT_PRECISION
    label: str = ""
    base_point: bool = False

    def __post_init__(self):
        p = self.precision_bits
        object.__setattr__(self, "cuffs", tuple(_as_hp(x, p).with_precision(p) for x in self.cuffs))
        object.__setattr__(self, "twists", tuple(_as_hp(x, p).with_precision(p) for x in self.twists))
        if len(self.cuffs) < 1:
            raise ValidationError("a flute needs at least one cuff")
        if len(self.twists) != len(self.cuffs):
            raise ValidationError(f"{len(self.cuffs)} cuffs but {len(self.twists)} twists")
        for n, l in enumerate(self.cuffs, 1):
            if l.sign <= 0:
                raise ValidationError(f"cuff l_{n} must be positive")
        for n in range(1, len(self.cuffs)):
            if not self.cuffs[n] > self.cuffs[n - 1]:
                raise ValidationError(f"cuffs not strictly increasing at l_{n + 1}")
        if self.base_point:
            for n, (l, t) in enumerate(zip(self.cuffs, self.twists), 1):
                if t.sign < 0 or not t < l:
                    raise ValidationError(f"base-point twist t_{n} outside [0, l_{n})")

    @classmethod
    def from_values(cls, cuffs: Sequence, twists: Sequence | None = None, *,
                    precision_bits: int = DEFAULT_PRECISION, label: str = "",
                    base_point: bool = False) -> FluteSpec:
        p = precision_bits
        cs = tuple(_as_hp(str(c) if isinstance(c, (int, float)) else c, p) for c in cuffs)
        if twists is None:
            ts = tuple(HPScalar.zero(p) for _ in cs)
        else:
            ts = tuple(_as_hp(str(t) if isinstance(t, (int, float)) else t, p) for t in twists)
        return cls(cs, ts, p, label, base_point)

    @property
    def depth(self) -> int:
        return len(self.cuffs)

    def l(self, n: int) -> HPScalar:
        """Cuff length ``l_n`` (1-based)."""
        return self.cuffs[n - 1]

    def t(self, n: int) -> HPScalar:
        """Twist ``t_n`` (1-based)."""
        return self.twists[n - 1]

    def with_twists(self, twists: Sequence, label: str | None = None) -> FluteSpec:
        """Same cuffs, new twists; the result is not flagged as a base point."""
        return FluteSpec(self.cuffs, tuple(twists), self.precision_bits,
                         self.label if label is None else label, False)

    def truncated(self, depth: int) -> FluteSpec:
        return FluteSpec(self.cuffs[:depth], self.twists[:depth], self.precision_bits,
                         self.label, self.base_point)

    def to_json(self, digits: int | None = None) -> dict:
        return {
            "label": self.label,
            "precision_bits": self.precision_bits,
            "cuffs": [_tidy(c.to_decimal(digits)) for c in self.cuffs],
            "twists": [_tidy(t.to_decimal(digits)) for t in self.twists],
            "base_point": self.base_point,
        }

    def dumps(self, digits: int | None = None) -> str:
        return json.dumps(self.to_json(digits), indent=2)

    def same_cuffs(self, other: FluteSpec) -> bool:
        return self.depth == other.depth and all(
            a.relative_error(b) < 2.0 ** (-min(self.precision_bits, other.precision_bits) // 2)
            for a, b in zip(self.cuffs, other.cuffs))


def _gen_cuffs(gen: Mapping, precision_bits: int) -> list[HPScalar]:
    try:
        base, eb, depth = gen["base"], gen["exponent_base"], int(gen["depth"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"generator form needs base, exponent_base, depth: {exc}") from exc
    if depth < 1:
        raise SchemaError("generator depth must be >= 1")
    try:
        fb, fe = Fraction(base), Fraction(eb)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"generator parameters must be decimal strings: {exc}") from exc
    out = []
    for n in range(1, depth + 1):
        if fb.denominator == 1 and fe.denominator == 1 and fb > 0:
            # exact: l_n = base ** (eb ** n); stored through its log
            e = fe.numerator ** n
            logl = HPScalar.from_value(fb.numerator, precision_bits + 64)
            out.append(HPScalar.from_log(1, hyp_eval("log", logl).value(precision_bits + 64) * e,
                                         precision_bits))
        else:
            b = HPScalar.from_value(str(base), precision_bits + 64)
            expo = HPScalar.from_value(str(eb), precision_bits + 64)
            en = hyp_eval("exp", hyp_eval("log", expo) * n)
            out.append(HPScalar.from_log(1, (hyp_eval("log", b) * en).value(), precision_bits))
    return out


def _tidy(text: str) -> str:
    """Drop trailing zeros of a rounded mantissa: ``8.000e0`` -> ``8e0``."""
    mant, _, exp = text.partition("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return f"{mant}e{exp}" if exp else mant


def parse_spec(document: str | Mapping, *, base_dir: str | None = None) -> FluteSpec:
    """Parse and validate a JSON flute document.

    Schema (numbers are decimal strings)::

        {"label": str, "precision_bits": int,
         "cuffs": [str] | {"base": str, "exponent_base": str, "depth": int},
         "twists": [str] | "zero" | "base_point_file:<path>",
         "base_point": bool}
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        doc = dict(document)
    if not isinstance(doc, dict):
        raise SchemaError("spec document must be a JSON object")
    unknown = set(doc) - {"label", "precision_bits", "cuffs", "twists", "base_point"}
    if unknown:
        raise SchemaError(f"unknown keys: {sorted(unknown)}")
    if "cuffs" not in doc:
        raise SchemaError("missing 'cuffs'")
    prec = doc.get("precision_bits", DEFAULT_PRECISION)
    if not isinstance(prec, int) or isinstance(prec, bool):
        raise SchemaError("precision_bits must be an integer")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise SchemaError("label must be a string")
    base_point = doc.get("base_point", False)
    if not isinstance(base_point, bool):
        raise SchemaError("base_point must be a boolean")

    raw = doc["cuffs"]
    if isinstance(raw, dict):
        cuffs = _gen_cuffs(raw, prec)
    elif isinstance(raw, list) and all(isinstance(x, str) for x in raw):
        try:
            cuffs = [HPScalar.from_decimal(x, prec) for x in raw]
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    else:
        raise SchemaError("cuffs must be a list of decimal strings or a generator object")

    tw = doc.get("twists", "zero")
    if tw == "zero":
        twists = [HPScalar.zero(prec) for _ in cuffs]
    elif isinstance(tw, str) and tw.startswith("base_point_file:"):
        path = tw.split(":", 1)[1]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read twist file {path}: {exc}") from exc
        if isinstance(loaded, dict):
            loaded = loaded.get("twists")
        if not isinstance(loaded, list) or not all(isinstance(x, str) for x in loaded):
            raise SchemaError("twist file must hold a list of decimal strings")
        twists = [HPScalar.from_decimal(x, prec) for x in loaded]
    elif isinstance(tw, list) and all(isinstance(x, str) for x in tw):
        try:
            twists = [HPScalar.from_decimal(x, prec) for x in tw]
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    else:
        raise SchemaError("twists must be a list of decimal strings, 'zero' or base_point_file:<path>")
    return FluteSpec(tuple(cuffs), tuple(twists), prec, label, base_point)


def load_spec(path: str) -> FluteSpec:
    with open(path) as fh:
        return parse_spec(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))


# ----------------------------------------------------------------------
# diagnostics and seams
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RapidGrowthReport:
    ratios: tuple[HPScalar, ...]
    verdict: str  # "RAPID" | "INCONCLUSIVE"


def rapid_growth_diagnostic(spec: FluteSpec) -> RapidGrowthReport:
    """Ratios ``r_n = (l_1 + ... + l_n) / l_{n+1}`` and a finite-horizon verdict.

    RAPID means the ratios strictly decrease and the last one is below 0.1.
    """
    if spec.depth < 2:
        raise ValidationError("rapid_growth_diagnostic needs N >= 2")
    ratios = []
    partial = HPScalar.zero(spec.precision_bits)
    for n in range(1, spec.depth):
        partial = partial + spec.l(n)
        ratios.append(partial / spec.l(n + 1))
    decreasing = all(ratios[k + 1] < ratios[k] for k in range(len(ratios) - 1))
    rapid = len(ratios) >= 2 and decreasing and ratios[-1] < HPScalar.from_value("0.1")
    return RapidGrowthReport(tuple(ratios), "RAPID" if rapid else "INCONCLUSIVE")


@dataclass(frozen=True)
class SeamGeometry:
    """The seam ``beta_n`` of ``P_n`` and the pentagon it bounds."""

    n: int
    b: HPScalar
    pentagon: IdealPentagon


def seam_width(spec: FluteSpec, n: int) -> SeamGeometry:
    """Length ``b_n`` of the perpendicular between ``alpha_n`` and ``alpha_{n+1}``."""
    if not 1 <= n < spec.depth:
        raise IndexError(f"seam index {n} outside 1..{spec.depth - 1}")
    pent = IdealPentagon.from_sides(spec.l(n).scale_pow2(-1), spec.l(n + 1).scale_pow2(-1))
    return SeamGeometry(n, pent.b, pent)


# ----------------------------------------------------------------------
# 2x2 matrices with log-domain entries
# ----------------------------------------------------------------------

class HPMatrix:
    """``[[a, b], [c, d]]`` over binary floats with unbounded exponents.

    Entries are mpmath floats at a fixed working precision.  Their exponent
    is an arbitrary-size integer, so an entry like ``e^{4096}`` is held as a
    mantissa and a base-2 log magnitude and never overflows; the public
    accessors hand entries out as :class:`HPScalar`.
    """

    __slots__ = ("_m", "_p")

    def __init__(self, a, b, c, d, prec: int | None = None):
        if prec is None:
            prec = max(x.precision_bits for x in (a, b, c, d))
            ctx = context(prec)
            a, b, c, d = (x.value(prec) for x in (a, b, c, d))
        else:
            ctx = context(prec)
            a, b, c, d = (ctx.convert(x) for x in (a, b, c, d))
        self._m = (a, b, c, d)
        self._p = prec

    @classmethod
    def of(cls, rows, prec: int) -> HPMatrix:
        (a, b), (c, d) = rows
        return cls(*(_as_hp(x, prec).value(prec) for x in (a, b, c, d)), prec=prec)

    @classmethod
    def identity(cls, prec: int) -> HPMatrix:
        return cls(1, 0, 0, 1, prec=prec)

    @property
    def precision_bits(self) -> int:
        return self._p

    def _entry(self, k: int) -> HPScalar:
        return HPScalar.from_value(self._m[k], self._p)

    a = property(lambda self: self._entry(0))
    b = property(lambda self: self._entry(1))
    c = property(lambda self: self._entry(2))
    d = property(lambda self: self._entry(3))

    def raw(self) -> tuple:
        return self._m

    def __matmul__(self, o: HPMatrix) -> HPMatrix:
        p = max(self._p, o._p)
        fdot = context(p).fdot
        a, b, c, d = self._m
        e, f, g, h = o._m
        return HPMatrix(fdot([(a, e), (b, g)]), fdot([(a, f), (b, h)]),
                        fdot([(c, e), (d, g)]), fdot([(c, f), (d, h)]), prec=p)

    def __neg__(self) -> HPMatrix:
        return HPMatrix(*(-x for x in self._m), prec=self._p)

    def det(self) -> HPScalar:
        a, b, c, d = self._m
        return HPScalar.from_value(context(self._p).fdot([(a, d), (-b, c)]), self._p)

    def trace(self) -> HPScalar:
        return HPScalar.from_value(context(self._p).fadd(self._m[0], self._m[3]), self._p)

    def adjugate(self) -> HPMatrix:
        a, b, c, d = self._m
        return HPMatrix(d, -b, -c, a, prec=self._p)

    def inverse(self) -> HPMatrix:
        """Inverse of a matrix whose determinant is exactly +1 or -1."""
        adj = self.adjugate()
        return -adj if self.det().sign < 0 else adj

    def at(self) -> HPScalar:
        """Image of 0 under the Moebius map (``b / d``)."""
        return HPScalar.from_value(self._m[1] / self._m[3], self._p)

    def lognorm(self) -> float:
        """Natural log of the largest entry, as a float estimate."""
        ctx = context(self._p)
        return max(int(ctx.mag(x)) for x in self._m if x) * LN2

    def with_precision(self, p: int) -> HPMatrix:
        return HPMatrix(*self._m, prec=p)

    def entries(self) -> tuple[HPScalar, ...]:
        return tuple(self._entry(k) for k in range(4))

    def __repr__(self) -> str:
        return "HPMatrix(" + ", ".join(x.to_decimal(12) for x in self.entries()) + ")"


def translation(x: HPScalar) -> HPMatrix:
    """Translation by ``x`` along the imaginary axis: ``diag(e^{x/2}, e^{-x/2})``."""
    p = x.precision_bits
    ctx = context(p + 32)
    half = x.value(p + 32) / 2
    return HPMatrix(ctx.exp(half), 0, 0, ctx.exp(-half), prec=p)


@functools.lru_cache(maxsize=None)
def _quarter_turns(p: int) -> tuple[HPMatrix, HPMatrix]:
    s = 1 / context(p).sqrt(2)
    left = HPMatrix(s, -s, s, s, prec=p)      # turn from the normal to the positive cuff direction
    right = HPMatrix(s, s, -s, s, prec=p)
    return left, right


@functools.lru_cache(maxsize=None)
def _mirrors(p: int) -> HPMatrix:
    return HPMatrix(-1, 0, 0, 1, prec=p)   # z -> -conj(z)


def _reflection_along(frame: HPMatrix) -> HPMatrix:
    """Anti-Moebius reflection in the geodesic traced by ``frame``."""
    return frame @ _mirrors(frame.precision_bits) @ frame.inverse()


def _reflection_between(p_: HPScalar, q: HPScalar) -> HPMatrix:
    """Reflection in the geodesic with finite real endpoints ``p_`` and ``q``."""
    prec = max(p_.precision_bits, q.precision_bits)
    x, y = p_.value(prec), q.value(prec)
    inv = 1 / (y - x)
    return HPMatrix((x + y) * inv, -2 * x * y * inv, 2 * inv, -(x + y) * inv, prec=prec)


# ----------------------------------------------------------------------
# holonomy
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Holonomy:
    """Matrices of the stage-``N`` flute group.

    ``generators`` maps names to SL(2, R) matrices (up to sign):

    * ``X1 .. XN`` -- cuff elements, translation by ``l_n`` along ``alpha_n``;
    * ``Y0a``, ``Y0b`` -- the two cusps of ``P_0`` (``X1 = Y0a Y0b``);
    * ``Y1 .. Y{N-1}`` -- the cusp of ``P_n`` (``X_{n+1} = X_n Y_n``).
    """

    spec: FluteSpec
    base_cuff: int
    work_bits: int
    generators: Mapping[str, HPMatrix] = field(repr=False)
    seams: tuple[HPScalar, ...] = field(repr=False)

    @property
    def stage(self) -> int:
        return self.spec.depth

    def __hash__(self) -> int:
        return hash((self.spec, self.base_cuff, self.work_bits))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Holonomy) and self.spec == other.spec
                and self.base_cuff == other.base_cuff and self.work_bits == other.work_bits)

    def cuff_element(self, n: int) -> HPMatrix:
        return self.generators[f"X{n}"]

    def cusp_elements(self) -> dict[str, HPMatrix]:
        return {k: v for k, v in self.generators.items() if k.startswith("Y")}

    def evaluate(self, word: Sequence[tuple[str, int]]) -> HPMatrix:
        """Product of generator powers, left to right."""
        out = HPMatrix.identity(self.work_bits)
        for name, e in word:
            g = self.generators[name]
            if e < 0:
                g = g.inverse()
            for _ in range(abs(e)):
                out = out @ g
        return out

    def word_lognorm(self, word: Sequence[tuple[str, int]]) -> float:
        return sum(abs(e) * self.generators[name].lognorm() for name, e in word)

    def at_precision(self, work_bits: int) -> Holonomy:
        if work_bits <= self.work_bits:
            return self
        return _build_cached(self.spec, self.base_cuff, work_bits)

    def determinant_residuals(self) -> dict[str, float]:
        """``|det g - 1|`` per generator, each evaluated where the entries fit.

        ``ad - bc`` cancels about ``2 log|g| / ln 2`` bits, so each check runs
        on a rebuild with that many extra bits.
        """
        out = {}
        for name, g in self.generators.items():
            need = self.spec.precision_bits + int(2 * g.lognorm() / LN2) + 64
            det = self.at_precision(need).generators[name].det()
            out[name] = float(abs(det - 1))
        return out

    def relation_residuals(self) -> dict[str, float]:
        """Relative deviations of the pants relations from the identity."""
        out = {}
        out["X1 = Y0a Y0b"] = _matrix_gap(self.generators["Y0a"] @ self.generators["Y0b"],
                                          self.generators["X1"])
        for n in range(1, self.stage):
            out[f"X{n + 1} = X{n} Y{n}"] = _matrix_gap(
                self.generators[f"X{n}"] @ self.generators[f"Y{n}"], self.generators[f"X{n + 1}"])
        return out


def _matrix_gap(m: HPMatrix, n: HPMatrix) -> float:
    """max |m - s n| / max |n| over the sign ``s`` that fits best (PSL)."""
    scale = max(abs(y) for y in n.raw())
    gaps = (max(abs(x - s * y) for x, y in zip(m.raw(), n.raw())) / scale for s in (1, -1))
    return float(min(gaps))


def _local_cusp(l_lo: HPScalar, b: HPScalar, l_hi: HPScalar) -> HPMatrix:
    """Cusp element of a one-cusp pants in the frame at the foot of its seam.

    The two seams through the ideal vertex ``E = coth(l_lo/4)`` are the
    geodesics ``(tanh(l_lo/4), E)`` and ``(E, e^b coth(l_hi/4))``.  Sending
    ``E`` to infinity makes both vertical, at horizontal offsets
    ``sinh(l_lo/2)/2`` and ``-e^{-b} sinh(l_hi/2)/2``, so the product of the
    two reflections is a parabolic with translation ``tau``; conjugating
    back gives ``[[1 - E tau, E^2 tau], [-tau, 1 + E tau]]``.  Multiplying
    the reflections directly would cancel about ``(l_lo + l_hi)/2`` nats.
    """
    p = l_lo.precision_bits
    ctx = context(p)
    lo, hi, bb = l_lo.value(p), l_hi.value(p), b.value(p)
    E = ctx.coth(lo / 4)
    tau = ctx.sinh(lo / 2) + ctx.exp(-bb) * ctx.sinh(hi / 2)
    return HPMatrix(1 - E * tau, E * E * tau, -tau, 1 + E * tau, prec=p)


def _frame_step(b: HPScalar, t: HPScalar, p: int) -> HPMatrix:
    """Frame change from the foot of beta_m to the foot of beta_{m+1}."""
    left, right = _quarter_turns(p)
    return translation(b) @ left @ translation(t) @ right


def _holonomy_guard(spec: FluteSpec) -> int:
    """Extra working bits for the cancellation in frame and reflection products.

    A cuff generator is a product of two reflections in lines at distance
    ``dist`` from the base frame; its entries come out about ``e^{dist}``
    smaller than those of the factors.  ``t_N`` never enters the build.
    """
    ls = [float(l) for l in spec.cuffs]
    drift = sum(abs(float(t)) for t in spec.twists[:-1])
    for x, y in zip(ls, ls[1:]):
        drift += math.log(1 / math.tanh(x / 4)) + math.log(1 / math.tanh(y / 4))
    return int(1.5 * drift / LN2 + 2 * math.log2(1 + max(ls))) + 64


def build_holonomy(spec: FluteSpec, *, base_cuff: int = 1, log_domain: bool = True,
                   work_bits: int | None = None) -> Holonomy:
    """Matrices for every cuff and cusp of the stage-``N`` flute.

    The cuff ``alpha_{base_cuff}`` is normalised to the imaginary axis with
    attracting fixed point at infinity.  With ``log_domain=False`` the build
    refuses specs whose matrix entries would leave double-precision range.
    """
    if spec.depth < 2:
        raise ValidationError("holonomy needs at least two cuffs")
    if not 1 <= base_cuff < spec.depth:
        raise IndexError(f"base cuff {base_cuff} outside 1..{spec.depth - 1}")
    if not log_domain:
        span = max(float(l) for l in spec.cuffs) + sum(abs(float(t)) for t in spec.twists)
        if span > 700:
            raise PrecisionError("entries exceed double exponent range; enable log-domain mode")
    if work_bits is None:
        work_bits = spec.precision_bits + _holonomy_guard(spec)
    return _build_cached(spec, base_cuff, work_bits)


@functools.lru_cache(maxsize=64)
def _build_cached(spec: FluteSpec, base_cuff: int, work_bits: int) -> Holonomy:
    p = work_bits
    N = spec.depth
    cuffs = [c.with_precision(p) for c in spec.cuffs]
    twists = [t.with_precision(p) for t in spec.twists]
    seams = [ideal_pentagon_b(cuffs[n - 1].scale_pow2(-1), cuffs[n].scale_pow2(-1))
             for n in range(1, N)]
    left, right = _quarter_turns(p)

    # steps[m] maps the frame at the foot of beta_m to the one at beta_{m+1};
    # index 0 is the P_0 base frame.
    steps = [left @ translation(twists[0]) @ right]
    for m in range(1, N - 1):
        steps.append(_frame_step(seams[m - 1], twists[m], p))

    frames: dict[int, HPMatrix] = {base_cuff: left}   # H_k = F_k @ right = identity
    for m in range(base_cuff, N - 1):
        frames[m + 1] = frames[m] @ steps[m]
    for m in range(base_cuff - 1, -1, -1):
        frames[m] = frames[m + 1] @ steps[m].inverse()

    gens: dict[str, HPMatrix] = {}
    # P_0: perpendiculars at B0 and A0 run into the two cusps.
    fb0 = frames[0]
    fa0 = fb0 @ left @ translation(cuffs[0].scale_pow2(-1)) @ right
    r_b0, r_a0 = _reflection_along(fb0), _reflection_along(fa0)
    r_q = _reflection_between(fb0.at(), fa0.at())
    gens["Y0a"] = r_b0 @ r_q
    gens["Y0b"] = r_q @ r_a0
    gens["X1"] = r_b0 @ r_a0
    for n in range(1, N):
        fb = frames[n]
        fc = fb @ translation(seams[n - 1])
        fd = fc @ left @ translation(cuffs[n].scale_pow2(-1)) @ right
        gens[f"Y{n}"] = fb @ _local_cusp(cuffs[n - 1], seams[n - 1], cuffs[n]) @ fb.inverse()
        gens[f"X{n + 1}"] = _reflection_along(fb) @ _reflection_along(fd)
    return Holonomy(spec, base_cuff, p, gens, tuple(s.with_precision(spec.precision_bits) for s in seams))
