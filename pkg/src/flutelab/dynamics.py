"""Geodesic rays on a flute: tracing, escape probes and twist selection.

Rays are followed pants by pants.  Each one-cusp pants ``P_n`` is the
double of an ideal pentagon ``ABCDE`` along its seams, drawn in a fixed
chart of the upper half-plane:

* ``B = i``; ``BC`` (the seam ``beta_n``) runs up the imaginary axis to ``i e^b``;
* ``AB`` (half of ``alpha_n``) lies on the unit circle, ``CD`` (half of
  ``alpha_{n+1}``) on the circle of radius ``e^b``;
* the seams to the cusp ``E = coth(a/2)`` are ``EA`` and ``DE``.

A ray is a unit-determinant frame ``R``: it is the image of the upward
imaginary axis starting at ``i``.  Hitting a seam reflects the frame back
into the chart and flips the sheet (front or back copy of the pentagon);
hitting a cuff hands the ray to the neighbouring pants through its cuff
position and angle, so nothing grows from one pants to the next.

Cuff positions live in ``[0, l_n)``, measured from the foot of
``beta_{n-1}``; the foot of ``beta_n`` sits at ``t_n``.  Angles are taken
from the positive cuff direction, positive when heading into ``P_n``.
"""
from __future__ import annotations

import functools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PrecisionError, ResolutionError, SearchFailure, ValidationError
from .hpscalar import HPScalar, context
from .surface import FluteSpec, HPMatrix, Holonomy, seam_width

LN2 = math.log(2)

# stop reasons
BOUNDARY = "BOUNDARY"            # crossed the last cuff alpha_N
TURNED_BACK = "TURNED_BACK"      # crossed a cuff downwards
BUDGET_LENGTH = "BUDGET_LENGTH"
BUDGET_CROSSINGS = "BUDGET_CROSSINGS"
MAX_STEPS = "MAX_STEPS"
HELD = "HELD"                    # H seam reflections in a row inside one pants
ENTERED_P0 = "ENTERED_P0"
REACHED = "REACHED"              # crossed the requested stop cuff
CUSP = "CUSP"                    # heading straight into the cusp: never leaves the pants

INCOMPLETE_WITNESS = "INCOMPLETE_WITNESS"
NO_WITNESS = "NO_WITNESS_WITHIN_BUDGET"

DEFAULT_MAX_STEPS = 20000


# ----------------------------------------------------------------------
# records
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Seed:
    """A unit vector on ``alpha_cuff`` at ``position`` making ``angle`` with it."""

    cuff: int
    position: HPScalar
    angle: HPScalar

    def to_json(self, digits: int = 20) -> dict:
        return {"cuff": self.cuff, "position": self.position.to_decimal(digits),
                "angle": self.angle.to_decimal(digits)}


@dataclass(frozen=True)
class Crossing:
    cuff: int
    position: HPScalar
    angle: HPScalar
    length: HPScalar      # arc length from the seed

    def to_json(self, digits: int = 20) -> dict:
        return {"cuff": self.cuff, "position": self.position.to_decimal(digits),
                "angle": self.angle.to_decimal(digits), "length": self.length.to_decimal(digits)}


@dataclass(frozen=True)
class RayState:
    """Where a traced ray ended and which cuffs it crossed on the way."""

    seed: Seed
    pants: int
    sheet: int
    frame: HPMatrix = field(repr=False)
    length: HPScalar
    crossings: tuple[Crossing, ...]
    status: str
    reflections: int = 0
    steps: int = 0

    @property
    def depth(self) -> int:
        """Highest cuff reached (the seed cuff if none was crossed)."""
        return self.crossings[-1].cuff if self.crossings else self.seed.cuff

    def increments(self) -> list[float]:
        marks = [0.0] + [float(c.length) for c in self.crossings]
        return [b - a for a, b in zip(marks, marks[1:])]

    def witness_json(self, digits: int = 20) -> dict:
        return {"seed": self.seed.to_json(digits), "total_length": self.length.to_decimal(digits),
                "status": self.status,
                "crossings": [c.to_json(digits) for c in self.crossings]}


@dataclass(frozen=True)
class CompletenessCertificate:
    verdict: str
    seam_partial_sums: tuple[HPScalar, ...]
    seam_tail: HPScalar
    method: str | None = None                 # "seam-series" | "ray" | None
    witness: RayState | None = None
    witness_bound: HPScalar | None = None
    rays_traced: int = 0

    def to_json(self, digits: int = 20) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "seam_partial_sums": [s.to_decimal(digits) for s in self.seam_partial_sums],
            "seam_tail": self.seam_tail.to_decimal(digits),
            "witness": self.witness.witness_json(digits) if self.witness else None,
            "witness_bound": self.witness_bound.to_decimal(digits) if self.witness_bound else None,
            "rays_traced": self.rays_traced,
            "note": ("evidence, not proof, of completeness" if self.verdict == NO_WITNESS
                     else "finite-length escape to the end"),
        }


# ----------------------------------------------------------------------
# pentagon charts
# ----------------------------------------------------------------------

class _Pants:
    """Chart data for ``P_n`` at a working precision tied to its cuffs."""

    SIDES = ("AB", "BC", "CD", "DE", "EA")
    SEAMS = ("BC", "DE", "EA")

    def __init__(self, spec: FluteSpec, n: int, prec: int):
        lo, hi = float(spec.l(n)), float(spec.l(n + 1))
        self.n = n
        self.prec = prec
        self.wp = prec + int((lo + hi) / LN2) + 64
        ctx = self.ctx = context(self.wp)
        self.l_lo = spec.l(n).value(self.wp)
        self.l_hi = spec.l(n + 1).value(self.wp)
        self.a, self.c = self.l_lo / 2, self.l_hi / 2
        self.b = seam_width(spec, n).b.with_precision(self.wp).value()
        eb = ctx.exp(self.b)
        self.eb = eb
        self.half_eb = ctx.exp(self.b / 2)
        ends = {
            "AB": (ctx.mpf(-1), ctx.mpf(1)),
            "CD": (-eb, eb),
            "BC": (ctx.zero, ctx.inf),
            "EA": (ctx.tanh(self.a / 2), 1 / ctx.tanh(self.a / 2)),
            "DE": (eb * ctx.tanh(self.c / 2), eb / ctx.tanh(self.c / 2)),
        }
        self.ends = ends
        self.mirror = {}
        for s in self.SEAMS:
            p, q = ends[s]
            if q == ctx.inf:
                self.mirror[s] = (ctx.mpf(-1), ctx.zero, ctx.zero, ctx.one)
            else:
                k = 1 / (q - p)
                self.mirror[s] = ((p + q) * k, -2 * p * q * k, 2 * k, -(p + q) * k)
        self.tiny = ctx.ldexp(1, -(prec // 2))
        self.min_step = ctx.ldexp(1, -(3 * self.wp) // 4)
        self.sep = ctx.ldexp(1, -(prec // 4))
        self.cusp = ends["EA"][1]
        # positions are known to ~2^-prec * l; half of those bits must agree
        self.cusp_tol = self.tiny * (ends["EA"][1] - ends["EA"][0]) * (1 + self.l_lo)

    def settle_corner(self, x, end, sheet: int, psi):
        """At a corner a ray pointing across the seam starts on the other sheet."""
        ctx = self.ctx
        eps = 4 * self.min_step * (1 + end)
        leftward = abs(psi) > ctx.pi / 2
        if (x <= eps and leftward) or (x >= end - eps and not leftward and abs(psi) != ctx.pi / 2):
            return (ctx.zero if x <= eps else end), sheet ^ 1, _flip_angle(ctx, psi)
        return x, sheet, psi

    def into_cusp(self, R: tuple) -> bool:
        """Does the ray end at the ideal vertex ``E``?"""
        a, _, c, _ = R
        if c == 0:
            return False
        return abs(a / c - self.cusp) < self.cusp_tol

    # frames are 4-tuples (alpha, beta, gamma, delta) of mpf
    def cuff_frame(self, side: str, x) -> tuple:
        ctx = self.ctx
        ch, sh = ctx.cosh(x / 2), ctx.sinh(x / 2)
        if side == "AB":
            return (ch, sh, sh, ch)
        e, ie = self.half_eb, 1 / self.half_eb
        return (e * ch, e * sh, ie * sh, ie * ch)

    def ray_frame(self, side: str, x, psi) -> tuple:
        """Frame of the ray leaving ``side`` at distance ``x`` with chart angle ``psi``."""
        ctx = self.ctx
        half = (ctx.pi / 2 - psi) / 2
        rot = (ctx.cos(half), -ctx.sin(half), ctx.sin(half), ctx.cos(half))
        return _mul(self.cuff_frame(side, x), rot)

    def first_hit(self, R: tuple, current: str | None):
        """Nearest side met by the ray ``R``, skipping ``current``."""
        ctx = self.ctx
        a, b, c, d = R
        hits = []
        for side in self.SIDES:
            if side == current:
                continue
            u = _preimage(ctx, R, self.ends[side][0])
            v = _preimage(ctx, R, self.ends[side][1])
            if u is None or v is None:
                continue
            # the ray runs along this side's line: not a crossing
            if (abs(u) < self.tiny and abs(v) > 1 / self.tiny) or \
                    (abs(v) < self.tiny and abs(u) > 1 / self.tiny):
                continue
            uv = u * v
            if uv >= 0:
                continue
            s = ctx.log(-uv) / 2
            if s > self.min_step:
                hits.append((s, side))
        if not hits:
            raise PrecisionError(f"ray left pentagon chart of P_{self.n} without a hit")
        hits.sort(key=lambda h: h[0])
        if len(hits) > 1 and hits[1][0] - hits[0][0] < self.sep * (1 + hits[0][0]):
            pair = {hits[0][1], hits[1][1]}
            # a corner between a seam and a cuff: the cuff wins, the seam
            # continuation would re-enter the same corner
            cuffs = pair & {"AB", "CD"}
            if len(cuffs) == 1 and len(pair) == 2:
                side = cuffs.pop()
                s = min(h[0] for h in hits[:2] if h[1] == side)
                return s, side
            raise PrecisionError(f"ambiguous hit between {sorted(pair)} in P_{self.n}")
        return hits[0]

    def cuff_hit(self, H: tuple, side: str):
        """Distance along the cuff side and chart angle at a hit frame ``H``."""
        ctx = self.ctx
        a, b, c, d = H
        x = ctx.asinh(a * c + b * d)
        N = self.cuff_frame(side, x)
        rot = _mul(_inv(N), H)
        phi = 2 * ctx.atan2(rot[2], rot[0])
        psi = ctx.pi / 2 - phi
        while psi > ctx.pi:
            psi -= 2 * ctx.pi
        while psi <= -ctx.pi:
            psi += 2 * ctx.pi
        return x, psi


def _mul(m: tuple, n: tuple) -> tuple:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(m: tuple) -> tuple:
    a, b, c, d = m
    return (d, -b, -c, a)


def _preimage(ctx, R: tuple, p):
    """``R^{-1}(p)`` on the real line; ``None`` for infinity."""
    a, b, c, d = R
    if p == ctx.inf:
        num, den = d, -c
    else:
        num, den = d * p - b, -c * p + a
    if den == 0:
        return None
    return num / den


def _flip_angle(ctx, psi):
    """Angle seen from the mirrored sheet."""
    return (ctx.pi if psi > 0 else -ctx.pi) - psi


# ----------------------------------------------------------------------
# the tracer
# ----------------------------------------------------------------------

class _Tracer:
    def __init__(self, spec: FluteSpec, prec: int | None = None):
        self.spec = spec
        self.prec = prec or spec.precision_bits
        self._pants: dict[int, _Pants] = {}

    def pants(self, n: int) -> _Pants:
        if n not in self._pants:
            self._pants[n] = _Pants(self.spec, n, self.prec)
        return self._pants[n]

    def enter_from_below(self, n: int, p, psi):
        """Chart state for a ray entering ``P_n`` across ``alpha_n`` at position ``p``."""
        P = self.pants(n)
        ctx = P.ctx
        p, psi = ctx.convert(p), ctx.convert(psi)
        u = ctx.fmod(p - self.spec.t(n).value(P.wp), P.l_lo)
        if u < 0:
            u += P.l_lo
        if u < P.a:
            x, sheet = u, 0
        else:
            x, sheet, psi = P.l_lo - u, 1, _flip_angle(ctx, psi)
        x, sheet, psi = P.settle_corner(x, P.a, sheet, psi)
        return P.ray_frame("AB", x, psi), sheet

    def enter_from_above(self, n: int, p, psi):
        """Chart state for a ray entering ``P_n`` across ``alpha_{n+1}``."""
        P = self.pants(n)
        ctx = P.ctx
        p, psi = ctx.convert(p), ctx.convert(psi)
        if p < P.c:
            x, sheet = p, 0
        else:
            x, sheet, psi = P.l_hi - p, 1, _flip_angle(ctx, psi)
        x, sheet, psi = P.settle_corner(x, P.c, sheet, psi)
        return P.ray_frame("CD", x, psi), sheet

    def run(self, seed: Seed, *, max_length=None, max_crossings=None, horizon: int | None = None,
            stop_down: bool = True, stop_cuff: int | None = None, max_steps: int = DEFAULT_MAX_STEPS,
            stay_in_pants: bool = False) -> RayState:
        spec, N = self.spec, self.spec.depth
        n = seed.cuff
        if not 1 <= n < N:
            raise ValidationError(f"seed cuff {n} must lie in 1..{N - 1}")
        psi0 = seed.angle.value(self.prec)
        ctx0 = context(self.prec)
        if not 0 < psi0 < ctx0.pi:
            raise ValidationError("seed angle must lie in (0, pi)")
        pos0 = seed.position.value(self.prec)
        if not 0 <= pos0 < spec.l(n).value(self.prec):
            raise ValidationError(f"seed position outside [0, l_{n})")
        R, sheet = self.enter_from_below(n, pos0, psi0)
        current = "AB"
        length = self.pants(n).ctx.zero
        crossings: list[Crossing] = []
        run_of_reflections = total_reflections = 0
        status = MAX_STEPS
        P = self.pants(n)
        steps = 0
        for steps in range(1, max_steps + 1):
            if P.into_cusp(R):
                status = CUSP
                break
            s, side = P.first_hit(R, current)
            length = length + s
            H = _mul(R, (P.ctx.exp(s / 2), P.ctx.zero, P.ctx.zero, P.ctx.exp(-s / 2)))
            if max_length is not None and length > max_length:
                status = BUDGET_LENGTH
                break
            if side in P.SEAMS:
                m = P.mirror[side]
                R = _mul(_mul(m, H), (-P.ctx.one, P.ctx.zero, P.ctx.zero, P.ctx.one))
                sheet ^= 1
                current = side
                run_of_reflections += 1
                total_reflections += 1
                if horizon is not None and run_of_reflections >= horizon:
                    status = HELD
                    break
                continue
            run_of_reflections = 0
            x, psi = P.cuff_hit(H, side)
            ctx = P.ctx
            if side == "CD":
                pos = x if sheet == 0 else P.l_hi - x
                ang = psi if sheet == 0 else _flip_angle(ctx, psi)
                pos = _wrap(ctx, pos, P.l_hi)
                crossings.append(Crossing(n + 1, HPScalar.from_value(pos, self.prec),
                                          HPScalar.from_value(ang, self.prec),
                                          HPScalar.from_value(length, self.prec)))
                if stay_in_pants:
                    status = "EXITED_UP"
                    break
                if n + 1 >= N:
                    status = BOUNDARY
                    break
                if stop_cuff is not None and n + 1 >= stop_cuff:
                    status = REACHED
                    break
                if max_crossings is not None and len(crossings) >= max_crossings:
                    status = BUDGET_CROSSINGS
                    break
                n += 1
                R, sheet = self.enter_from_below(n, pos, ang)
                P = self.pants(n)
                length = P.ctx.convert(length)
                current = "AB"
            else:  # AB: back down through alpha_n
                if stop_down or stay_in_pants:
                    status = TURNED_BACK
                    break
                u = x if sheet == 0 else P.l_lo - x
                ang = psi if sheet == 0 else _flip_angle(ctx, psi)
                pos = _wrap(ctx, u + spec.t(n).value(P.wp), P.l_lo)
                if n == 1:
                    status = ENTERED_P0
                    break
                n -= 1
                R, sheet = self.enter_from_above(n, pos, ang)
                P = self.pants(n)
                length = P.ctx.convert(length)
                current = "CD"
        frame = HPMatrix(*R, prec=P.wp)
        return RayState(seed, n, sheet, frame, HPScalar.from_value(length, self.prec),
                        tuple(crossings), status, total_reflections, steps)


def _wrap(ctx, x, period):
    x = ctx.fmod(x, period)
    if x < 0:
        x += period
    if period - x < ctx.ldexp(period, -(ctx.prec // 2)):
        x = ctx.zero
    return x


@functools.lru_cache(maxsize=32)
def _tracer(spec: FluteSpec, prec: int) -> _Tracer:
    return _Tracer(spec, prec)


def _spec_of(h) -> FluteSpec:
    return h.spec if isinstance(h, Holonomy) else h


def make_seed(spec: FluteSpec, cuff: int, position, angle=None) -> Seed:
    p = spec.precision_bits
    pos = position if isinstance(position, HPScalar) else HPScalar.from_value(position, p)
    if angle is None:
        ang = HPScalar.from_value(context(p).pi / 2, p)
    else:
        ang = angle if isinstance(angle, HPScalar) else HPScalar.from_value(angle, p)
    return Seed(cuff, pos, ang)


def seam_foot_seed(spec: FluteSpec, n: int) -> Seed:
    """Orthoray at the foot of ``beta_n`` on ``alpha_n``."""
    l = spec.l(n)
    t = spec.t(n)
    ctx = context(spec.precision_bits)
    pos = ctx.fmod(t.value(), l.value())
    if pos < 0:
        pos += l.value()
    return make_seed(spec, n, HPScalar.from_value(pos, spec.precision_bits))


def trace_ray(h: Holonomy | FluteSpec, seed: Seed, budget: tuple = (None, None), *,
              max_steps: int = DEFAULT_MAX_STEPS) -> RayState:
    """Follow a ray upward through the flute, logging each cuff it crosses.

    ``budget = (B, M)`` caps the arc length and the number of crossings.  The
    trace stops at the first downward cuff crossing (``TURNED_BACK``), at
    ``alpha_N`` (``BOUNDARY``), or when a budget runs out.
    """
    spec = _spec_of(h)
    B, M = budget
    return _tracer(spec, spec.precision_bits).run(
        seed, max_length=None if B is None else float(B),
        max_crossings=None if M is None else int(M), max_steps=max_steps)


# ----------------------------------------------------------------------
# completeness probe
# ----------------------------------------------------------------------

def probe_seeds(spec: FluteSpec, sample_count: int | None = None) -> list[Seed]:
    """Seam-foot orthorays of stages ``1..N-1``, topped up with evenly spaced ones on ``alpha_1``."""
    seeds = [seam_foot_seed(spec, n) for n in range(1, spec.depth)]
    if sample_count is None:
        return seeds
    p = spec.precision_bits
    extra = sample_count - len(seeds)
    for k in range(max(extra, 0)):
        frac = HPScalar.from_value(k, p) / HPScalar.from_value(extra, p)
        seeds.append(make_seed(spec, 1, spec.l(1) * frac))
    return seeds[:sample_count]


def seam_series(spec: FluteSpec) -> list[HPScalar]:
    """Partial sums of ``b_n + |t_n|`` for ``n = 1 .. N-1``."""
    total = HPScalar.zero(spec.precision_bits)
    out = []
    for n in range(1, spec.depth):
        total = total + seam_width(spec, n).b + abs(spec.t(n))
        out.append(total)
    return out


def _tail(values: Sequence[HPScalar], start: int) -> HPScalar:
    if not values:
        return HPScalar.zero()
    return values[-1] - values[start - 1] if start >= 1 else values[-1]


def completeness_probe(spec: FluteSpec, sample_count: int | None = None, budget: tuple = (1000, None), *,
                       tol: float = 1e-6, threads: int = 1) -> CompletenessCertificate:
    """Look for a finite-length path to the end of the flute.

    First the seam series: when the tail of ``sum(b_n + |t_n|)`` beyond
    ``N/2`` is below ``tol`` the seam chain itself is a short escape.
    Otherwise orthorays are traced: first the seam-foot orthoray of every
    stage, then, when ``sample_count`` asks for more, evenly spaced
    orthorays on ``alpha_1``.  A ray that reaches ``alpha_N`` within length
    ``B`` and whose crossing increments beyond ``N/2`` sum to less than
    ``tol`` is taken as a witness.
    """
    N = spec.depth
    sums = seam_series(spec)
    half = max(1, (N - 1) // 2)
    tail = _tail(sums, half)      # sum over n = half+1 .. N-1
    if float(tail) < tol:
        return CompletenessCertificate(INCOMPLETE_WITNESS, tuple(sums), tail, "seam-series")
    B, M = budget
    M = M if M is not None else N
    p = spec.precision_bits
    seeds = probe_seeds(spec, sample_count)

    def run(seed):
        return trace_ray(spec, seed, (B, M))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            states = list(pool.map(run, seeds))
    else:
        states = [run(s) for s in seeds]
    best = None
    for st in states:
        # same window as the seam tail: pants half+1 .. N-1
        if st.status != BOUNDARY or st.seed.cuff > half + 1:
            continue
        marks = {c.cuff: c.length for c in st.crossings}
        start = marks.get(half + 1, HPScalar.zero(p)) if half + 1 > st.seed.cuff else HPScalar.zero(p)
        if float(st.length - start) < tol and (best is None or st.length < best.length):
            best = st
    if best is not None:
        return CompletenessCertificate(INCOMPLETE_WITNESS, tuple(sums), tail, "ray", best,
                                       best.length, len(states))
    return CompletenessCertificate(NO_WITNESS, tuple(sums), tail, None, None, None, len(states))


# ----------------------------------------------------------------------
# direction classification
# ----------------------------------------------------------------------

STAYS = "STAYS"
EXITS = "EXITS"


@dataclass(frozen=True)
class DirectionInterval:
    lo: HPScalar
    hi: HPScalar
    label: str
    mixed: bool


def stays_in_pants(spec: FluteSpec, seed: Seed, horizon: int, max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """True when the ray reflects off ``horizon`` seams in a row before meeting a cuff."""
    if horizon <= 0:
        return True
    st = _tracer(spec, spec.precision_bits).run(seed, horizon=horizon, stay_in_pants=True,
                                                max_steps=max_steps)
    return st.status in (HELD, CUSP, MAX_STEPS)


def direction_classify(h: Holonomy | FluteSpec, cuff: int, theta, subdivision: int,
                       horizon: int) -> list[DirectionInterval]:
    """Split ``alpha_cuff`` into ``2^subdivision`` intervals of STAYS / EXITS basepoints.

    The label is that of the interval midpoint; an interval whose endpoints
    disagree with it is flagged ``mixed``.
    """
    spec = _spec_of(h)
    N = spec.depth
    if not 2 <= cuff < N:
        raise ValidationError(f"classification needs 2 <= cuff < {N}")
    if not 0 <= horizon <= N - cuff:
        raise ValidationError(f"horizon must lie in 0..{N - cuff}")
    p = spec.precision_bits
    l = spec.l(cuff)
    k = 2 ** subdivision
    marks = [l * HPScalar.from_value(j, p) / HPScalar.from_value(2 * k, p) for j in range(2 * k + 1)]

    @functools.lru_cache(maxsize=None)
    def label(j: int) -> bool:
        pos = marks[j] if j < 2 * k else marks[0]
        return stays_in_pants(spec, make_seed(spec, cuff, pos, theta), horizon)

    out = []
    for i in range(k):
        mid = label(2 * i + 1)
        mixed = label(2 * i) != mid or label(2 * i + 2) != mid
        out.append(DirectionInterval(marks[2 * i], marks[2 * i + 2], STAYS if mid else EXITS, mixed))
    if all(iv.mixed for iv in out):
        raise ResolutionError(f"every interval is mixed at resolution 2^-{subdivision}; refine")
    return out


def stays_measure(intervals: Sequence[DirectionInterval]) -> float:
    return sum(float(iv.hi - iv.lo) for iv in intervals if iv.label == STAYS)


# ----------------------------------------------------------------------
# twist selection
# ----------------------------------------------------------------------

def held_before(spec: FluteSpec, seed: Seed, horizon: int, top: int,
                max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """Is the ray held before it can cross ``alpha_top``?

    Held means: it heads into a cusp, or reflects ``horizon`` times in a row
    inside one pants.  Rays that drop into ``P_0`` or exhaust the step cap
    also count, since they did not escape upward.
    """
    try:
        st = _tracer(spec, spec.precision_bits).run(seed, horizon=horizon, stop_down=False,
                                                    stop_cuff=top, max_steps=max_steps)
    except PrecisionError:
        return False
    return st.status in (HELD, CUSP, ENTERED_P0, MAX_STEPS)


def arrival(spec: FluteSpec, seed: Seed, cuff: int) -> Crossing | None:
    """First upward crossing of ``alpha_cuff`` by the ray, if it gets there unheld."""
    try:
        st = _tracer(spec, spec.precision_bits).run(seed, stop_down=False, stop_cuff=cuff)
    except PrecisionError:
        return None
    if st.status in (REACHED, BOUNDARY) and st.crossings and st.crossings[-1].cuff == cuff:
        return st.crossings[-1]
    return None


def cusp_aiming_twist(spec: FluteSpec, n: int, position, angle) -> HPScalar | None:
    """Twist ``t_n`` sending a ray that crosses ``alpha_n`` at (position, angle) into the cusp of ``P_n``.

    The ray then runs straight to the ideal vertex and never leaves ``P_n``,
    an explicit member of the measure-zero set of trapped directions.
    """
    P = _tracer(spec, spec.precision_bits).pants(n)
    ctx = P.ctx
    p = ctx.convert(position.value(P.wp) if isinstance(position, HPScalar) else position)
    th = ctx.convert(angle.value(P.wp) if isinstance(angle, HPScalar) else angle)
    E = P.cusp
    for sheet, psi in ((0, th), (1, _flip_angle(ctx, th))):
        half = (ctx.pi / 2 - psi) / 2
        sn, cs = ctx.sin(half), ctx.cos(half)
        if sn == 0:
            T = 1 / E
        else:
            q = cs / sn
            den = 1 - E * q
            if den == 0:
                continue
            T = (E - q) / den
        if not -1 < T < 1:
            continue
        x = 2 * ctx.atanh(T)
        if not 0 <= x <= P.a:
            continue
        u = x if sheet == 0 else P.l_lo - x
        t = _wrap(ctx, p - u, P.l_lo)
        return HPScalar.from_value(t, spec.precision_bits)
    return None


def choose_complete_twists(cuffs: Sequence, horizon: int = 3, grid: int = 128, *,
                           precision_bits: int | None = None, label: str = "") -> FluteSpec:
    """Greedy twists that trap the orthoray from every seam foot.

    The maintained family is one orthoray per stage, based at the foot of
    ``beta_m`` on ``alpha_m``.  For ``K = 1 .. N-2`` the twist ``t_{K+1}``
    is the smallest candidate for which every ray of stages ``1..K`` is held
    (see :func:`held_before`) before it can cross ``alpha_{K+2}``.  The
    candidates are the grid ``j l_{K+1} / grid`` together with the twists
    that aim an arriving ray straight into the cusp of ``P_{K+1}``: trapped
    directions form a null set, so a plain grid almost never contains one.
    ``t_1`` and ``t_N`` stay zero (``t_N`` does not enter the stage-``N``
    surface).
    """
    if horizon < 2:
        raise ValidationError("horizon must be >= 2")
    if grid < 1:
        raise ValidationError("grid must be positive")
    if isinstance(cuffs, FluteSpec):
        base = cuffs
    else:
        base = FluteSpec.from_values([c if isinstance(c, HPScalar) else str(c) for c in cuffs],
                                     precision_bits=precision_bits or 256)
    p = base.precision_bits
    N = base.depth
    name = label or base.label
    twists = [HPScalar.zero(p)] * N
    spec = base.with_twists(twists, name)
    for K in range(1, N - 1):
        l_next = base.l(K + 1)
        cands = {}
        for j in range(grid):
            cands.setdefault(float(j) / grid, l_next * HPScalar.from_value(j, p) / HPScalar.from_value(grid, p))
        for m in range(1, K + 1):
            hit = arrival(spec, seam_foot_seed(spec, m), K + 1)
            if hit is not None:
                t = cusp_aiming_twist(spec, K + 1, hit.position, hit.angle)
                if t is not None:
                    cands[float(t / l_next)] = t
        chosen = None
        for _, cand in sorted(cands.items(), key=lambda kv: kv[0]):
            trial = list(twists)
            trial[K] = cand
            tspec = base.with_twists(trial, name)
            if all(held_before(tspec, seam_foot_seed(tspec, m), horizon, K + 2) for m in range(1, K + 1)):
                chosen, spec = trial, tspec
                break
        if chosen is None:
            raise SearchFailure(f"no candidate twist at cuff {K + 1} holds every seed (grid={grid})")
        twists = chosen
    return spec


def witness_json(state: RayState, digits: int = 20) -> str:
    return json.dumps(state.witness_json(digits), indent=2)
