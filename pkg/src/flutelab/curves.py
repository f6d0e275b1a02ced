"""Simple closed curves on a flute: labels, words and geodesic lengths.

Two families are modelled.

* ``Cuff(n)``: the cuff ``alpha_n``, word ``X_n``.
* ``Delta(i, j)``: the simple loop around the cusps of ``P_{i-1}, ..., P_j``
  (for ``i = 1``, one of the two cusps of ``P_0``).  It crosses exactly the
  cuffs ``alpha_i .. alpha_j``, twice each.  Its word is the cusp product
  ``Y_{i-1} Y_i ... Y_j`` (``Y0b Y1 ... Yj`` when ``i = 1``), which telescopes
  to ``X_{i-1}^{-1} X_{j+1}``.
"""
from __future__ import annotations

import csv
import functools
import io
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MismatchError, NotHyperbolicError
from .hpscalar import HPScalar, clamp_epsilon, hyp_eval
from .surface import FluteSpec, Holonomy, build_holonomy

LN2 = math.log(2)
Word = tuple[tuple[str, int], ...]


@dataclass(frozen=True, order=True)
class CurveClass:
    """A Cuff or Delta label; ``i == j == n`` for ``Cuff(n)``."""

    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in ("cuff", "delta"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.kind == "cuff" and self.i != self.j:
            raise ValueError("a cuff label carries a single index")
        if self.i < 1 or self.j < self.i:
            raise IndexError(f"bad indices ({self.i}, {self.j})")

    @classmethod
    def cuff(cls, n: int) -> CurveClass:
        return cls("cuff", n, n)

    @classmethod
    def delta(cls, i: int, j: int) -> CurveClass:
        return cls("delta", i, j)

    @property
    def curve_id(self) -> str:
        return f"cuff({self.i})" if self.kind == "cuff" else f"delta({self.i},{self.j})"

    @property
    def crossed_cuffs(self) -> tuple[int, ...]:
        """Cuffs met by the curve (each twice for a Delta class)."""
        return () if self.kind == "cuff" else tuple(range(self.i, self.j + 1))

    def check(self, depth: int) -> None:
        top = depth if self.kind == "cuff" else depth - 1
        if self.j > top:
            raise IndexError(f"{self.curve_id} out of range for a stage-{depth} flute")

    def __str__(self) -> str:
        return self.curve_id


Cuff = CurveClass.cuff
Delta = CurveClass.delta

_NAME = re.compile(r"^([XY])(\d+)([ab]?)$")


def _gen_key(name: str) -> tuple:
    m = _NAME.match(name)
    if not m:
        return (name,)
    return (m.group(1), int(m.group(2)), m.group(3))


def _word_key(word: Word) -> tuple:
    return tuple((_gen_key(g), e) for g, e in word)


def canonical_rotation(word: Sequence[tuple[str, int]]) -> Word:
    """Least cyclic rotation of a word under the generator order."""
    w = tuple(word)
    if not w:
        return w
    return min((w[k:] + w[:k] for k in range(len(w))), key=_word_key)


def free_reduce(word: Iterable[tuple[str, int]]) -> Word:
    out: list[tuple[str, int]] = []
    for g, e in word:
        if out and out[-1][0] == g:
            e += out.pop()[1]
        if e:
            out.append((g, e))
    # cyclic reduction
    while len(out) > 1 and out[0][0] == out[-1][0]:
        g, e = out.pop()
        e += out[0][1]
        out[0] = (g, e)
        if e == 0:
            out.pop(0)
    return tuple(out)


def curve_word(c: CurveClass, depth: int | None = None) -> Word:
    """Cyclically reduced canonical word realising ``c``."""
    if depth is not None:
        c.check(depth)
    if c.kind == "cuff":
        return ((f"X{c.i}", 1),)
    head = "Y0b" if c.i == 1 else f"Y{c.i - 1}"
    word = [(head, 1)] + [(f"Y{m}", 1) for m in range(c.i, c.j + 1)]
    return canonical_rotation(free_reduce(word))


def _inverse_x(n: int) -> list[tuple[str, int]]:
    return [("Y0a", -1)] if n == 0 else [(f"X{n}", -1)]


def dehn_twisted_word(c: CurveClass, m: int, power: int = 1) -> Word:
    """Word, in the old group, of ``c`` after ``t_m -> t_m + power * l_m``.

    A full twist at ``alpha_m`` (``i <= m <= j``) conjugates the part of the
    chain above ``alpha_m`` by ``X_m^{-power}``, so ``Delta(i, j)`` becomes
    ``X_{i-1}^{-1} X_m^{-power} X_{j+1} X_m^{power}``.
    """
    if c.kind == "cuff" or not c.i <= m <= c.j:
        return curve_word(c)
    word = _inverse_x(c.i - 1) + [(f"X{m}", -power), (f"X{c.j + 1}", 1), (f"X{m}", power)]
    return canonical_rotation(free_reduce(word))


def word_trace(h: Holonomy, word: Sequence[tuple[str, int]], target_bits: int | None = None
               ) -> tuple[HPScalar, Holonomy]:
    """Trace of a word with at least ``target_bits`` of relative accuracy.

    The entries of the product can be far larger than the trace; the number
    of bits lost to that cancellation is estimated from the factor norms and
    the holonomy is rebuilt at a higher working precision when needed.
    """
    target = target_bits or h.spec.precision_bits
    norms = h.word_lognorm(word)
    while True:
        tr = h.evaluate(word).trace()
        # a trace swamped by rounding noise sits near norms - work_bits*ln2,
        # which makes ``need`` exceed ``work_bits``; accepting is then safe
        logtr = min(float(tr.logmag), norms) if tr.sign != 0 else -math.inf
        lost = (norms - logtr) / LN2 if tr.sign != 0 else h.work_bits
        need = int(target + lost + 48)
        if need <= h.work_bits:
            return tr, h
        h = h.at_precision(max(need + 32, (3 * h.work_bits) // 2))


def geodesic_length(h: Holonomy, c: CurveClass | Sequence[tuple[str, int]]) -> HPScalar:
    """Length ``2 arccosh(|tr| / 2)`` of the closed geodesic of a class or word."""
    if isinstance(c, CurveClass):
        c.check(h.stage)
        word = curve_word(c)
    else:
        word = tuple(c)
    return _length(h, word)


@functools.lru_cache(maxsize=4096)
def _length(h: Holonomy, word: Word) -> HPScalar:
    p = h.spec.precision_bits
    if not word:
        raise NotHyperbolicError("identity word: trace 2, not a closed geodesic")
    tr, _ = word_trace(h, word, p)
    half = abs(tr).scale_pow2(-1).with_precision(p)
    one = HPScalar.one(p)
    if not half > one + HPScalar.from_value(clamp_epsilon(p), p):
        raise NotHyperbolicError(f"|trace| = {abs(tr).to_decimal(20)} is not hyperbolic")
    return hyp_eval("arccosh", half).scale_pow2(1)


def enumerate_curves(spec: FluteSpec | int, max_top: int) -> list[CurveClass]:
    """All ``Cuff(n)``, ``n <= max_top``, and ``Delta(i, j)``, ``i <= j <= max_top``."""
    depth = spec if isinstance(spec, int) else spec.depth
    if not 1 <= max_top < depth:
        raise IndexError(f"max_top={max_top} must lie in 1..{depth - 1}")
    out = [Cuff(n) for n in range(1, max_top + 1)]
    out += [Delta(i, j) for i in range(1, max_top + 1) for j in range(i, max_top + 1)]
    return out


def twist_budget(spec_a: FluteSpec, spec_b: FluteSpec, c: CurveClass) -> HPScalar:
    """``2 * sum |t_b - t_a|`` over the cuffs crossed by ``c``."""
    p = max(spec_a.precision_bits, spec_b.precision_bits)
    total = HPScalar.zero(p)
    for m in c.crossed_cuffs:
        total = total + abs(spec_b.t(m) - spec_a.t(m))
    return total.scale_pow2(1)


def length_twist_bound(spec_a: FluteSpec, spec_b: FluteSpec, c: CurveClass,
                       h_a: Holonomy | None = None) -> tuple[HPScalar, HPScalar]:
    """Interval that must contain the length of ``c`` on ``spec_b``.

    Changing the twist at a cuff by ``t`` moves a curve that crosses it
    ``k`` times by at most ``k |t|``; Delta curves cross each cuff twice.
    """
    if not spec_a.same_cuffs(spec_b):
        raise MismatchError("length_twist_bound needs identical cuff lengths")
    h_a = h_a or build_holonomy(spec_a)
    ell = geodesic_length(h_a, c)
    w = twist_budget(spec_a, spec_b, c)
    return ell - w, ell + w


def lower_bound_constant() -> float:
    """``C_1 = 2 log(sqrt(2)/4)``."""
    return 2 * math.log(math.sqrt(2) / 4)


def write_lengths_csv(rows: Iterable[tuple[CurveClass, HPScalar]], stream=None,
                      digits: int | None = None) -> str:
    """CSV with columns ``curve_id, kind, i, j, length``."""
    buf = stream if stream is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve_id", "kind", "i", "j", "length"])
    for c, ell in rows:
        w.writerow([c.curve_id, c.kind, c.i, c.j, ell.to_decimal(digits)])
    return buf.getvalue() if stream is None else ""
