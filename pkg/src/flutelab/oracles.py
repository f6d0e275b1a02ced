"""Independent reference computations used to cross-check the main engine.

Nothing here touches :class:`HPScalar` or the reflection-group holonomy:
everything is plain ``mpmath`` at a locally chosen precision, built from
closed forms.
"""
from __future__ import annotations

import math

import mpmath

from .surface import FluteSpec


def seam_width_hexagon(a, c, prec: int = 512):
    """Seam length of a one-cusp pants with half-cuffs ``a`` and ``c``.

    Letting one side of a right-angled hexagon shrink to an ideal point
    gives ``e^b = coth(a/2) coth(c/2)``.
    """
    ctx = mpmath.MPContext()
    ctx.prec = prec
    a, c = ctx.mpf(a), ctx.mpf(c)
    return ctx.log(ctx.coth(a / 2)) + ctx.log(ctx.coth(c / 2))


def _bits_for(spec: FluteSpec, i: int, j: int, extra: int) -> int:
    span = sum(float(spec.l(m)) for m in range(max(i - 1, 1), j + 2))
    span += sum(abs(float(spec.t(m))) for m in range(1, j + 1))
    return spec.precision_bits + int(2 * span / math.log(2)) + extra


def delta_length_crossing(spec: FluteSpec, i: int, j: int):
    """Length of ``Delta(i, j)`` from its cuff-crossing itinerary.

    The curve leaves ``alpha_{i-1}`` (or the cusp of ``P_0``), runs up the
    chain of seams to ``alpha_{j+1}`` and returns.  Along the way the frame
    alternates between a seam crossing ``T(b_m)`` and a twist slide
    ``T(t_{m+1})`` along the next cuff, turned by a quarter rotation.
    """
    ctx = mpmath.MPContext()
    ctx.prec = _bits_for(spec, i, j, 96)
    mat = ctx.matrix

    def T(x):
        return mat([[ctx.exp(x / 2), 0], [0, ctx.exp(-x / 2)]])

    s = 1 / ctx.sqrt(2)
    R = mat([[s, -s], [s, s]])
    Ri = mat([[s, s], [-s, s]])
    l = [None] + [ctx.mpf(x.value(ctx.prec)) for x in spec.cuffs]
    t = [None] + [ctx.mpf(x.value(ctx.prec)) for x in spec.twists]

    def b(m):
        return ctx.log(ctx.coth(l[m] / 4)) + ctx.log(ctx.coth(l[m + 1] / 4))

    def step(m):
        if m == 0:
            return R * T(t[1]) * Ri
        return T(b(m)) * R * T(t[m + 1]) * Ri

    if i >= 2:
        G = R
        for m in range(i - 1, j + 1):
            G = G * step(m)
        G = G * Ri
        M = T(-l[i - 1]) * G * T(l[j + 1]) * ctx.inverse(G)
    else:
        # P_0 coordinates: the first cusp loop is unipotent with
        # translation 2 coth(l_1/4).
        Pinv = mat([[1, 0], [2 / ctx.tanh(l[1] / 4), 1]])
        G = ctx.eye(2)
        for m in range(0, j + 1):
            G = G * step(m)
        G = G * Ri
        M = Pinv * G * T(l[j + 1]) * ctx.inverse(G)
    tr = abs(M[0, 0] + M[1, 1])
    return 2 * ctx.acosh(tr / 2)
