"""A tour of the holonomy of a flute with enormous cuffs.

Run:  python3 demos/holonomy_tour.py

The cuff lengths reach about 4096, so matrix entries are near e^2048, far
past double range.  Everything below stays exact to the working precision.
"""
from flutelab import build_holonomy, presets, rapid_growth_diagnostic
from flutelab.curves import Cuff, Delta, enumerate_curves, geodesic_length, lower_bound_constant
from flutelab.oracles import delta_length_crossing
from flutelab import HPScalar


def main():
    spec = presets.rapid10()
    rep = rapid_growth_diagnostic(spec)
    print("cuffs:", ", ".join(f"{float(l):.4g}" for l in spec.cuffs))
    print("growth ratios:", ", ".join(f"{float(r):.3g}" for r in rep.ratios), "->", rep.verdict)

    h = build_holonomy(spec)
    g = h.cuff_element(10)
    print(f"\nX10 has entries of size about e^{g.lognorm():.0f}; working precision {h.work_bits} bits")
    for n in (1, 5, 10):
        ell = geodesic_length(h, Cuff(n))
        print(f"length of alpha_{n} from its trace: {ell}  (rel. error {ell.relative_error(spec.l(n)):.1e})")

    print("\nrelations X_{n+1} = X_n Y_n, largest residual:",
          f"{max(h.relation_residuals().values()):.1e}")

    C1 = lower_bound_constant()
    print("\ncurves crossing a block of cuffs, with the lower bound l_{j+1} - l_j + C_1:")
    for c in enumerate_curves(spec, 9):
        if c.kind == "delta" and c.i in (1, 5) and c.j in (5, 8, 9):
            ell = geodesic_length(h, c)
            floor = float(spec.l(c.j + 1) - spec.l(c.j)) + C1
            print(f"  {c.curve_id:12s} length {float(ell):12.4f}   floor {floor:12.4f}")

    ell = geodesic_length(h, Delta(2, 6))
    ref = HPScalar.from_value(delta_length_crossing(spec, 2, 6))
    print(f"\ncrossing-matrix oracle for delta(2,6): relative gap {ell.relative_error(ref):.1e}")


if __name__ == "__main__":
    main()
