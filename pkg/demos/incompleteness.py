"""Incompleteness and how twists repair it.

Run:  python3 demos/incompleteness.py

A flute whose cuffs grow fast enough is connected to its end by a chain of
seams of finite total length.  With zero twists the seams line up, so a
single geodesic runs off the surface in finite time.  Twisting each new
cuff by half its length sends that same geodesic straight into a cusp.
"""
from flutelab import presets
from flutelab.dynamics import (choose_complete_twists, completeness_probe, seam_foot_seed,
                               trace_ray)
from flutelab.surface import seam_width


def show_chain(spec, title):
    st = trace_ray(spec, seam_foot_seed(spec, 1), (1000, None))
    print(f"{title}: status {st.status} after {len(st.crossings)} cuff crossings, "
          f"length {float(st.length):.6f}")
    for c in st.crossings[:4]:
        print(f"   crossed alpha_{c.cuff} at position {float(c.position):+.2e}, "
              f"length so far {float(c.length):.6f}")


def main():
    spec = presets.doubling(10)
    print("cuffs l_n = 4 * 2^n, n = 1..10")
    b = [seam_width(spec, n).b for n in range(1, spec.depth)]
    print("seam widths b_n:", ", ".join(x.to_decimal(3) for x in b))
    total = sum(b[1:], b[0])
    print(f"their sum {float(total):.6f} is all the length needed to reach alpha_10\n")

    show_chain(spec, "zero twists")
    cert = completeness_probe(spec)
    print(f"probe verdict: {cert.verdict} via {cert.method}\n")

    print("choosing twists (horizon 3, grid 128) ...")
    fixed = choose_complete_twists(spec, 3, 128)
    print("twists:", [f"{float(t):g}" for t in fixed.twists])
    show_chain(fixed, "chosen twists")
    cert = completeness_probe(fixed, budget=(1000, fixed.depth))
    print(f"probe verdict on the seam-foot family: {cert.verdict}")

    wide = completeness_probe(fixed, 16, budget=(1000, fixed.depth))
    print(f"probe verdict with 16 extra orthorays on alpha_1: {wide.verdict}")
    if wide.witness is not None:
        w = wide.witness
        print(f"   escaping ray starts at position {float(w.seed.position):.4f}, "
              f"total length {float(w.length):.4f}")
    print("Trapped directions form a null set; the twists above trap the family they were built for.")


if __name__ == "__main__":
    main()
