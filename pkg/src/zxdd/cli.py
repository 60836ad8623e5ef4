"""Command-line front end: ``zxdd gen|sim|bench|plot``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import random
import statistics
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .circuits import GENERATORS, CircuitError, from_qasm, parse, serialize
from .engine import beta_eff, oracle_amplitude, simulate_amplitude
from .decomp import STRATEGIES

log = logging.getLogger("zxdd")

CSV_VERSION = 1
DEFAULT_TIMEOUT = 90.0
DEFAULT_FILTER = 10
WORKERS_ENV = "ZXDD_WORKERS"
EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT, EXIT_ORACLE = 0, 1, 3, 4


@dataclass
class RunRecord:
    cls: str
    qubits: int
    seed: int
    strategy: str
    t_initial: int
    terms: int
    alpha_eff: float
    beta_raw: float
    beta_log: float
    probability: str
    elapsed_ms: float
    status: str

    def row(self) -> list:
        r = [getattr(self, f.name) for f in fields(self)]
        return [f"{x:.6g}" if isinstance(x, float) else x for x in r]


CSV_COLUMNS = ["class"] + [f.name for f in fields(RunRecord)][1:]
TIMING_COLUMNS = ("elapsed_ms",)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def load_circuit(path: Path):
    text = Path(path).read_text()
    if str(path).endswith(".qasm"):
        return from_qasm(text), text
    return parse(text), text


def random_out_bits(text: str, qubits: int, seed: int = 0) -> list[int]:
    """Output plug drawn from a seed tied to the circuit text, not the strategy."""
    digest = hashlib.sha256(f"{seed}:{text}".encode()).hexdigest()
    rng = random.Random(int(digest[:16], 16))
    return [rng.randrange(2) for _ in range(qubits)]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _record(meta: dict, strategy: str, res, status: str | None = None) -> RunRecord:
    beta = beta_eff(res)
    return RunRecord(
        cls=meta.get("class", "unknown"),
        qubits=int(meta.get("qubits", 0)),
        seed=int(meta.get("seed", -1)),
        strategy=strategy,
        t_initial=res.t_initial,
        terms=res.terms,
        alpha_eff=res.alpha_eff,
        beta_raw=beta.beta,
        beta_log=beta.beta_log,
        probability="" if res.probability is None else f"{res.probability:.12g}",
        elapsed_ms=res.elapsed * 1000.0,
        status=status or res.status,
    )


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

_GEN_PARAMS = {
    "ccz": ("qubits", "gates"),
    "pauli": ("qubits", "gadgets"),
    "hidden_shift": ("q_half", "n_cswap"),
    "iqp": ("qubits", "edge_prob"),
}


def cmd_gen(args) -> int:
    params = {name: getattr(args, name) for name in _GEN_PARAMS[args.cls]}
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise SystemExit(f"gen {args.cls}: missing --{', --'.join(m.replace('_', '-') for m in missing)}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gen = GENERATORS[args.cls]
    entries = []
    for i in range(args.count):
        seed = args.seed + i
        c = gen(*params.values(), seed)
        name = f"{args.cls}_{i:03d}.circ"
        (out / name).write_text(serialize(c))
        meta = {"file": name, "seed": seed, "qubits": c.qubits, "gates": len(c.gates),
                "t_spiders": c.t_spiders(), "class": args.cls}
        meta.update({k: v for k, v in c.metadata.items() if k not in meta})
        entries.append(meta)
    manifest = {"class": args.cls, "params": params, "base_seed": args.seed,
                "count": args.count, "circuits": entries}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.count} circuits to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sim
# ---------------------------------------------------------------------------

def cmd_sim(args) -> int:
    try:
        c, text = load_circuit(args.file)
    except (OSError, CircuitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.out_bits == "random":
        bits = random_out_bits(text, c.qubits, args.seed)
    else:
        bits = [int(ch) for ch in args.out_bits]
        if len(bits) != c.qubits or any(b not in (0, 1) for b in bits):
            print(f"error: --out-bits must be {c.qubits} binary digits", file=sys.stderr)
            return EXIT_ERROR
    res = simulate_amplitude(c, bits, args.strategy, timeout=args.timeout)
    meta = {"class": Path(args.file).stem, "qubits": c.qubits, "seed": args.seed}
    w = csv.writer(sys.stdout)
    if args.header:
        w.writerow(CSV_COLUMNS)
    w.writerow(_record(meta, args.strategy, res).row())
    if res.status == "timeout":
        return EXIT_TIMEOUT
    if args.check_oracle:
        ref = oracle_amplitude(c, bits)
        err = abs(res.amplitude.as_complex() - ref)
        ok = err <= 1e-9
        print(f"oracle {'PASS' if ok else 'FAIL'} |err|={err:.3e}", file=sys.stderr)
        if not ok:
            return EXIT_ORACLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _bench_job(job):
    path, meta, strategy, timeout, filter_t, seed, plug = job
    c, text = load_circuit(path)
    if plug == "shift" and "shift" in meta:
        bits = [int(ch) for ch in meta["shift"]]
    else:
        bits = random_out_bits(text, c.qubits, seed)
    res = simulate_amplitude(c, bits, strategy, timeout=timeout)
    if res.status == "ok" and res.t_initial <= filter_t:
        return _record(meta, strategy, res, status="filtered")
    return _record(meta, strategy, res)


def _suite(directory: Path) -> list[tuple[Path, dict]]:
    manifest = directory / "manifest.json"
    meta = {}
    if manifest.exists():
        for e in json.loads(manifest.read_text()).get("circuits", []):
            meta[e["file"]] = e
    files = sorted(p for p in directory.iterdir() if p.suffix in (".circ", ".qasm"))
    out = []
    for p in files:
        m = dict(meta.get(p.name, {}))
        m.setdefault("class", "unknown")
        if "qubits" not in m:
            m["qubits"] = load_circuit(p)[0].qubits
        out.append((p, m))
    return out


def run_bench(directory, strategies, timeout=DEFAULT_TIMEOUT, filter_t=DEFAULT_FILTER,
              workers=1, seed=0, plug="random") -> list[RunRecord]:
    suite = _suite(Path(directory))
    if not suite:
        raise ValueError(f"no circuit files in {directory}")
    jobs = [(p, m, s, timeout, filter_t, seed, plug) for p, m in suite for s in strategies]
    if workers > 1:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(workers) as pool:
            return list(pool.imap(_bench_job, jobs))
    return [_bench_job(j) for j in jobs]


def write_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.row())


def summarize(records: list[RunRecord]) -> dict[str, dict]:
    out = {}
    for s in dict.fromkeys(r.strategy for r in records):
        rows = [r for r in records if r.strategy == s]
        ok = [r for r in rows if r.status == "ok"]
        out[s] = {
            "runs": len(rows),
            "ok": len(ok),
            "timeout": sum(r.status == "timeout" for r in rows),
            "filtered": sum(r.status == "filtered" for r in rows),
            "median_alpha_eff": statistics.median(r.alpha_eff for r in ok) if ok else math.nan,
        }
    return out


def cmd_bench(args) -> int:
    strategies = args.strategies
    for s in strategies:
        if s not in STRATEGIES:
            print(f"error: unknown strategy {s!r}", file=sys.stderr)
            return EXIT_ERROR
    try:
        records = run_bench(args.dir, strategies, args.timeout, args.filter_tcount,
                            args.workers, args.seed, args.plug)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    write_csv(records, args.out)
    stats = summarize(records)
    if all(v["ok"] == 0 for v in stats.values()):
        log.warning("no circuits passed the T-count > %d filter; nothing to analyse",
                    args.filter_tcount)
    for s, v in stats.items():
        print(f"{s}: ok={v['ok']} timeout={v['timeout']} filtered={v['filtered']} "
              f"median_alpha_eff={v['median_alpha_eff']:.4f}", file=sys.stderr)
    print(f"wrote {len(records)} rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------

def fit_exponential(xs, ys) -> tuple[float, float]:
    """Least-squares fit of y = c 2^(m x); returns (m, c)."""
    import numpy as np

    xs = np.asarray(xs, dtype=float)
    ly = np.log2(np.asarray(ys, dtype=float))
    if len(xs) < 2 or np.ptp(xs) == 0:
        raise ValueError("need at least two distinct x values to fit")
    m, b = np.polyfit(xs, ly, 1)
    return float(m), float(2.0**b)


def read_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def plot_csv(path, x: str, y: str, out) -> dict[str, tuple[float, float]]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    rows = read_csv(path)
    xcol = {"tcount": "t_initial", "qubits": "qubits"}[x]
    need = {xcol, "strategy", "status", "alpha_eff" if y == "alpha_eff" else "elapsed_ms"}
    if not rows or need - set(rows[0]):
        raise ValueError(f"CSV is missing columns {sorted(need - set(rows[0] if rows else {}))}")
    rows = [r for r in rows if r["status"] == "ok"]
    if not rows:
        raise ValueError("no ok rows to plot after filtering")

    fits = {}
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in dict.fromkeys(r["strategy"] for r in rows):
        sub = [r for r in rows if r["strategy"] == s]
        xs = np.array([float(r[xcol]) for r in sub])
        if y == "alpha_eff":
            ys = np.array([float(r["alpha_eff"]) for r in sub])
            ax.scatter(xs, ys, s=12, label=s)
        else:
            ms = np.array([max(float(r["elapsed_ms"]), 1e-6) for r in sub])
            ax.scatter(xs, np.log2(ms), s=12, label=s)
            try:
                m, c = fit_exponential(xs, ms)
            except ValueError:
                continue
            fits[s] = (m, c)
            grid = np.linspace(xs.min(), xs.max(), 50)
            ax.plot(grid, np.log2(c) + m * grid, lw=1)
            ax.lines[-1].set_label(f"{s} fit m={m:.3f}")
    ax.set_xlabel("T-count after simplification" if x == "tcount" else "qubits")
    ax.set_ylabel("alpha_eff" if y == "alpha_eff" else "log2(runtime / ms)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out, format="svg")
    plt.close(fig)
    return fits


def cmd_plot(args) -> int:
    try:
        fits = plot_csv(args.csv, args.x, args.y, args.out)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    for s, (m, c) in fits.items():
        print(f"{s}: y = {c:.4g} * 2^({m:.4f} x)")
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxdd", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a seeded circuit suite")
    g.add_argument("cls", choices=sorted(GENERATORS), metavar="class")
    g.add_argument("--qubits", type=int)
    g.add_argument("--gates", type=int)
    g.add_argument("--gadgets", type=int)
    g.add_argument("--q-half", dest="q_half", type=int)
    g.add_argument("--n-cswap", dest="n_cswap", type=int)
    g.add_argument("--edge-prob", dest="edge_prob", type=float)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sim", help="simulate one amplitude")
    s.add_argument("file")
    s.add_argument("--out-bits", default="random")
    s.add_argument("--strategy", default="single_paired", choices=sorted(STRATEGIES))
    s.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    s.add_argument("--seed", type=int, default=0, help="seed for the random output plug")
    s.add_argument("--check-oracle", action="store_true")
    s.add_argument("--header", action="store_true")
    s.set_defaults(func=cmd_sim)

    b = sub.add_parser("bench", help="run every circuit under every strategy")
    b.add_argument("dir")
    b.add_argument("--strategies", nargs="+", default=["cats", "single", "single_paired"])
    b.add_argument("--filter-tcount", type=int, default=DEFAULT_FILTER)
    b.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    b.add_argument("--workers", type=int, default=default_workers())
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--plug", choices=["random", "shift"], default="random",
                   help="'shift' plugs the hidden shift string where the manifest has one")
    b.add_argument("--out", default="results.csv")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="scatter plot with exponential fit")
    pl.add_argument("csv")
    pl.add_argument("--x", choices=["tcount", "qubits"], default="tcount")
    pl.add_argument("--y", choices=["alpha_eff", "log2_time"], default="alpha_eff")
    pl.add_argument("--out", default="plot.svg")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
