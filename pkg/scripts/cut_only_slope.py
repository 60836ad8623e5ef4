"""Term growth of the cut_only strategy against T-count; 2^t is only an upper bound."""
import argparse

from zxdd.cli import fit_exponential
from zxdd.engine import simulate_amplitude
from zxdd.suites import SuiteConfig, build_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=30)
    ap.add_argument("--tmax", type=int, default=16)
    args = ap.parse_args()
    suite = build_suite(SuiteConfig("ccz", (12, 300), size=args.size, t_range=(4, args.tmax)))
    ts, terms = [], []
    for inst in suite:
        r = simulate_amplitude(inst.circuit, inst.out_bits, "cut_only", timeout=None)
        ts.append(r.t_initial)
        terms.append(r.terms)
        print(f"seed={inst.seed:4d} t={r.t_initial:3d} terms={r.terms:7d} "
              f"elapsed={r.elapsed * 1e3:8.1f}ms")
    m, c = fit_exponential(ts, terms)
    print(f"terms ~ {c:.3g} * 2^({m:.3f} t)")


if __name__ == "__main__":
    main()
