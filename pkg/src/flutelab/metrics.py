"""Truncated length-spectrum distance and the twist-deformation experiments.

All comparisons live on the fixed-length slice: two specs share their cuff
lengths and differ only in twists.  The distance is

    d_ls_trunc(a, b) = 1/2 * max_c |log(len_b(c) / len_a(c))|

over ``enumerate_curves(max_top)``.  The Teichmueller distance is never
computed; reports carry an explicit marker instead.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .curves import enumerate_curves, geodesic_length, lower_bound_constant
from .errors import MismatchError, ValidationError
from .hpscalar import HPScalar, context
from .surface import FluteSpec, build_holonomy, rapid_growth_diagnostic

D_T_MARKER = "NOT COMPUTED"
EPS_CONV = 1e-3
K_MAX = 12
MAX_TOP = 10
C1 = lower_bound_constant()


@dataclass(frozen=True)
class MetricReport:
    """Outcome of one truncated length-spectrum comparison."""

    label_a: str
    label_b: str
    max_top: int
    log_ratios: Mapping[str, HPScalar] = field(repr=False)
    d_ls: HPScalar
    argmax: str | None
    d_T: str = D_T_MARKER

    def ratio(self, curve_id: str) -> HPScalar:
        """``len_b / len_a`` for one curve."""
        lr = self.log_ratios[curve_id]
        return HPScalar.from_value(context(lr.precision_bits).exp(lr.value()), lr.precision_bits)

    def to_json(self, digits: int = 20) -> dict:
        return {
            "spec_a": self.label_a,
            "spec_b": self.label_b,
            "max_top": self.max_top,
            "d_ls_trunc": self.d_ls.to_decimal(digits),
            "argmax_curve": self.argmax,
            "log_ratios": {k: v.to_decimal(digits) for k, v in self.log_ratios.items()},
            "d_T": self.d_T,
        }


def _log_ratio(a: HPScalar, b: HPScalar) -> HPScalar:
    """``log(b / a)`` for positive lengths, read off the stored log magnitudes."""
    p = max(a.precision_bits, b.precision_bits)
    ctx = context(p)
    return HPScalar.from_value(ctx.make_mpf(b.logmag._mpf_) - ctx.make_mpf(a.logmag._mpf_), p)


def dls_truncated(spec_a: FluteSpec, spec_b: FluteSpec, max_top: int = MAX_TOP) -> MetricReport:
    """Truncated length-spectrum distance between two twist-slice points."""
    if not spec_a.same_cuffs(spec_b):
        raise MismatchError("d_ls is evaluated on the fixed-length slice only")
    curves = enumerate_curves(spec_a, max_top)
    ha, hb = build_holonomy(spec_a), build_holonomy(spec_b)
    ratios: dict[str, HPScalar] = {}
    best, arg = None, None
    for c in curves:
        lr = _log_ratio(geodesic_length(ha, c), geodesic_length(hb, c))
        ratios[c.curve_id] = lr
        if lr.sign != 0 and (best is None or abs(lr) > best):
            best, arg = abs(lr), c.curve_id
    p = spec_a.precision_bits
    d = best.scale_pow2(-1) if best is not None else HPScalar.zero(p)
    return MetricReport(spec_a.label, spec_b.label, max_top, ratios, d, arg)


# ----------------------------------------------------------------------
# twist perturbations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TwistPerturbation:
    """Base twists, target twists and their per-cuff difference."""

    base: tuple[HPScalar, ...]
    target: tuple[HPScalar, ...]

    def __post_init__(self):
        if len(self.base) != len(self.target):
            raise ValidationError("base and target twist sequences differ in length")

    @property
    def diff(self) -> tuple[HPScalar, ...]:
        return tuple(t - s for s, t in zip(self.base, self.target))

    def check_envelope(self, cuffs: Sequence[HPScalar], C) -> None:
        """Raise unless ``|target_n - base_n| <= C l_n`` for every cuff."""
        Ch = C if isinstance(C, HPScalar) else HPScalar.from_value(str(C))
        for n, (d, l) in enumerate(zip(self.diff, cuffs), 1):
            cap = Ch * l
            # allow rounding noise at half the working precision
            if abs(d) > cap + cap.scale_pow2(-(cap.precision_bits // 2)):
                raise ValidationError(f"twist change at cuff {n} exceeds {C} * l_{n}")

    def apply(self, spec: FluteSpec, label: str = "") -> FluteSpec:
        return spec.with_twists(self.target, label)

    def restricted(self, k: int) -> TwistPerturbation:
        """Keep the change on cuffs ``1..k`` only."""
        tgt = tuple(t if n <= k else s
                    for n, (s, t) in enumerate(zip(self.base, self.target), 1))
        return TwistPerturbation(self.base, tgt)


def scaled_perturbations(base: FluteSpec, k_max: int, scale=1) -> list[TwistPerturbation]:
    """``t_n + scale * l_n / k`` for ``k = 1..k_max``."""
    sc = HPScalar.from_value(Fraction(str(scale)), base.precision_bits)
    out = []
    for k in range(1, k_max + 1):
        inv = HPScalar.from_value(Fraction(1, k), base.precision_bits)
        tgt = tuple(t + sc * l * inv for l, t in zip(base.cuffs, base.twists))
        out.append(TwistPerturbation(base.twists, tgt))
    return out


def sample_target_twists(base: FluteSpec, C, seed: int = 0) -> TwistPerturbation:
    """Random twist changes with ``|t''_n| <= C l_n`` (uniform, seeded)."""
    rng = random.Random(seed)
    p = base.precision_bits
    Cf = Fraction(str(C))
    tgt = []
    for l, t in zip(base.cuffs, base.twists):
        u = Fraction(rng.randint(-2**30, 2**30), 2**30) * Cf
        tgt.append(t + HPScalar.from_value(u, p) * l)
    return TwistPerturbation(base.twists, tuple(tgt))


# ----------------------------------------------------------------------
# display bounds
# ----------------------------------------------------------------------

def _half_log1p(x: float) -> float:
    return 0.5 * math.log1p(x) if x >= 0 and math.isfinite(x) else math.inf


def single_twist_bound(spec: FluteSpec, j: int, eps: float) -> float:
    """Bound on d_ls after changing the twist at one cuff ``alpha_j`` by ``eps``."""
    den = float(spec.l(j + 1)) - float(spec.l(j)) + C1
    return _half_log1p(2 * abs(eps) / den) if den > 0 else math.inf


def tail_bound(spec: FluteSpec, k: int, mass: float, factor: float = 4.0) -> float:
    """``1/2 log(1 + factor * mass / (l_{k+1} - l_k + C_1))``; inf when vacuous."""
    den = float(spec.l(k + 1)) - float(spec.l(k)) + C1
    return _half_log1p(factor * mass / den) if den > 0 else math.inf


def envelope_bound(spec: FluteSpec, diff: Sequence[HPScalar], max_top: int) -> float:
    """``1/2 log(1 + max_j 2 sum_{m<=j} |d_m| / (l_{j+1} - l_j + C_1))``."""
    worst, acc = 0.0, 0.0
    for j in range(1, max_top + 1):
        acc += abs(float(diff[j - 1]))
        if acc == 0:
            continue
        den = float(spec.l(j + 1)) - float(spec.l(j)) + C1
        if den <= 0:
            return math.inf
        worst = max(worst, 2 * acc / den)
    return _half_log1p(worst)


# ----------------------------------------------------------------------
# experiments
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRow:
    k: int
    report: MetricReport
    bound: float

    @property
    def d_ls(self) -> float:
        return float(self.report.d_ls)

    @property
    def bound_holds(self) -> bool:
        return self.d_ls <= self.bound * (1 + 1e-12)


@dataclass(frozen=True)
class ExperimentResult:
    name: str
    rows: tuple[ExperimentRow, ...]
    verdict: str
    extras: Mapping[str, object] = field(default_factory=dict)

    def to_csv(self, digits: int = 20) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "d_ls_trunc", "argmax_curve", "bound_value"])
        for r in self.rows:
            w.writerow([r.k, r.report.d_ls.to_decimal(digits), r.report.argmax or "",
                        "inf" if math.isinf(r.bound) else repr(r.bound)])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "experiment": self.name,
            "verdict": self.verdict,
            "bounds_hold": all(r.bound_holds for r in self.rows),
            "rows": [{"k": r.k, "d_ls_trunc": r.d_ls, "argmax_curve": r.report.argmax,
                      "bound": None if math.isinf(r.bound) else r.bound,
                      "bound_holds": r.bound_holds} for r in self.rows],
            "d_T": D_T_MARKER,
        }
        doc.update({k: v for k, v in self.extras.items()})
        return json.dumps(doc, indent=2)


def eventually_decreasing(values: Sequence[float], tail_from: int | None = None) -> bool:
    """Non-increasing from the midpoint on, ending strictly below where it started."""
    if len(values) < 2:
        return True
    start = len(values) // 2 if tail_from is None else tail_from
    tail = values[start:]
    steady = all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(tail, tail[1:]))
    return steady and (len(tail) < 2 or tail[-1] < tail[0] or tail[0] == 0)


def closure_experiment(base: FluteSpec, C=1, k_max: int = K_MAX, max_top: int = MAX_TOP,
                       seed: int = 0, target: TwistPerturbation | None = None) -> ExperimentResult:
    """Finite-twist approximants ``X_k`` of a target surface ``X*``.

    ``X*`` carries twist changes ``t''_n`` with ``|t''_n| <= C l_n``;
    ``X_k`` applies them on cuffs ``1..k`` only.
    """
    pert = target or sample_target_twists(base, C, seed)
    pert.check_envelope(base.cuffs, C)
    star = pert.apply(base, "X*")
    mass = sum(float(l) for l in base.cuffs[:max_top])
    rows = []
    for k in range(1, min(k_max, max_top) + 1):
        xk = pert.restricted(k).apply(base, f"X_{k}")
        rep = dls_truncated(xk, star, max_top)
        rows.append(ExperimentRow(k, rep, tail_bound(base, k, mass, 4.0 * float(Fraction(str(C))))
                                  if k < max_top else math.inf))
    return ExperimentResult("closure", tuple(rows), _trend(base, rows))


def _trend(base: FluteSpec, rows: Sequence[ExperimentRow]) -> str:
    rapid = base.depth >= 3 and rapid_growth_diagnostic(base).verdict == "RAPID"
    if rapid and eventually_decreasing([r.d_ls for r in rows]):
        return "DECREASING"
    return "INCONCLUSIVE"


def convergence_experiment(base: FluteSpec, perturbations: Sequence[TwistPerturbation],
                           max_top: int = MAX_TOP, C=1, eps: float = EPS_CONV) -> ExperimentResult:
    """Distances ``d_ls_trunc(X_k, X_0)`` along a sequence of twist perturbations."""
    for pert in perturbations:
        pert.check_envelope(base.cuffs, C)
    rows = []
    for k, pert in enumerate(perturbations, 1):
        xk = pert.apply(base, f"X_{k}")
        rep = dls_truncated(xk, base, max_top)
        rows.append(ExperimentRow(k, rep, envelope_bound(base, pert.diff, max_top)))
    hit = next((r.k for r in rows if r.d_ls < eps), None)
    verdict = "CONVERGENT" if hit is not None else "NOT CONVERGENT"
    return ExperimentResult("convergence", tuple(rows), verdict,
                            {"eps_conv": eps, "first_k_below_eps": hit})


def strictness_experiment(base: FluteSpec, k_max: int = K_MAX, max_top: int = MAX_TOP
                          ) -> ExperimentResult:
    """``X_k`` has twists ``t_n + l_n`` for ``n <= k``; ``X_0'`` has them everywhere.

    The limit's obstruction (unbounded quasiconformal distortion) is not
    machine-checkable; the report records the diverging twist envelope
    ``l_n`` as a labelled proxy.
    """
    full = TwistPerturbation(base.twists, tuple(t + l for l, t in zip(base.cuffs, base.twists)))
    limit = full.apply(base, "X_0'")
    mass = sum(float(l) for l in base.cuffs)
    rows = []
    for k in range(1, min(k_max, max_top) + 1):
        xk = full.restricted(k).apply(base, f"X_{k}")
        rows.append(ExperimentRow(k, dls_truncated(xk, limit, max_top),
                                  tail_bound(base, k, mass) if k < max_top else math.inf))
    env = [float(l) for l in base.cuffs]
    diverges = all(b > a for a, b in zip(env, env[1:])) and env[-1] > 10 * env[0]
    extras = {
        "twist_envelope": env,
        "envelope_verdict": "DIVERGES" if diverges else "BOUNDED",
        "envelope_note": "proxy for the unbounded distortion of X_0'; not a proof",
    }
    return ExperimentResult("strictness", tuple(rows), _trend(base, rows), extras)
