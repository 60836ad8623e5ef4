"""Run the desk-scale trend suites and report median alpha_eff with sign tests.

    python scripts/trend_suites.py [--timeout 90] [--suites ccz iqp ...] [--csv out.csv]
"""
import argparse
import csv
import sys
import time

from zxdd.suites import (
    CCZ_TREND, HIDDEN_SHIFT_TREND, IQP_TREND, PAULI_TREND, build_suite, run_suite, sign_test,
)

SUITES = {
    "ccz": (CCZ_TREND, ["cats", "single", "single_paired"]),
    "hidden_shift": (HIDDEN_SHIFT_TREND, ["single", "single_paired"]),
    "iqp": (IQP_TREND, ["cats", "single", "single_paired"]),
    "pauli": (PAULI_TREND, ["cats", "single", "single_paired"]),
}
PAIRS = [("single", "cats"), ("single_paired", "single")]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--timeout", type=float, default=90.0)
    ap.add_argument("--suites", nargs="+", default=list(SUITES), choices=list(SUITES))
    ap.add_argument("--csv")
    args = ap.parse_args()

    rows = []
    for name in args.suites:
        cfg, strategies = SUITES[name]
        t0 = time.perf_counter()
        insts = build_suite(cfg)
        runs = run_suite(insts, strategies, args.timeout)
        print(f"{name}: {len(insts)} circuits, t_initial {min(i.t_initial for i in insts)}"
              f"..{max(i.t_initial for i in insts)}, {time.perf_counter() - t0:.0f}s")
        for better, worse in PAIRS:
            if better in runs and worse in runs:
                st = sign_test(runs[better].alphas(), runs[worse].alphas())
                print(f"  {better} vs {worse}: wins={st.wins} losses={st.losses} "
                      f"ties={st.ties} p={st.p_value:.4f} median {st.median_better:.4f} "
                      f"vs {st.median_worse:.4f}")
        for i, inst in enumerate(insts):
            for s in strategies:
                r = runs[s].results[i]
                rows.append([name, inst.circuit.qubits, inst.seed, s, r.t_initial, r.terms,
                             f"{r.alpha_eff:.6g}", r.status, f"{r.elapsed:.3f}"])
        sys.stdout.flush()
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["class", "qubits", "seed", "strategy", "t_initial", "terms",
                        "alpha_eff", "status", "elapsed_s"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
