"""Length-spectrum experiments on the twist slice.

Run:  python3 demos/twist_experiments.py

Three families of surfaces share the cuffs of a rapidly growing flute and
differ only in twists.  For each the truncated length-spectrum distance is
printed next to the bound it is expected to respect.
"""
from flutelab import presets
from flutelab.metrics import (closure_experiment, convergence_experiment, scaled_perturbations,
                              strictness_experiment)


def table(res, title):
    print(f"\n{title}: verdict {res.verdict}")
    print("   k   d_ls_trunc        bound   argmax")
    for r in res.rows:
        bound = "vacuous" if r.bound == float("inf") else f"{r.bound:.6f}"
        print(f"  {r.k:2d}   {r.d_ls:.6e}   {bound:>10s}   {r.report.argmax or '-'}")


def main():
    spec = presets.rapid12()
    print("cuffs:", ", ".join(f"{float(l):.4g}" for l in spec.cuffs))

    conv = convergence_experiment(spec, scaled_perturbations(spec, 12), 10)
    table(conv, "twists t_n + l_n / k against the base")
    d = [r.d_ls for r in conv.rows]
    print("  k * d_ls stays near", f"{d[-1] * len(d):.3f}: the distance decays like 1/k")

    table(closure_experiment(spec, 1, 10, 10, seed=0), "finite-twist approximants of a random target")
    stc = strictness_experiment(spec, 10, 10)
    table(stc, "approximants of the full-twist surface")
    print("  twist envelope:", stc.extras["envelope_verdict"], "-", stc.extras["envelope_note"])


if __name__ == "__main__":
    main()
