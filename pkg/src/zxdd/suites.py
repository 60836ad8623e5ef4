"""Seeded benchmark suites and the paired sign test used to compare strategies."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

from .circuits import GENERATORS, Circuit, serialize
from .cli import random_out_bits
from .engine import SimResult, prepare, simulate_amplitude
from .diagram import t_count


@dataclass(frozen=True)
class SuiteConfig:
    """A family of seeded circuits.

    ``args`` are the generator's positional parameters; ``vary`` lists
    (position, values) pairs cycled over the instances, so a suite can
    sweep one parameter. Instances whose T-count after simplification
    falls outside ``t_range`` are skipped until ``size`` are collected.
    """
    cls: str
    args: tuple
    size: int
    t_range: tuple[int, int] = (0, 10**9)
    vary: tuple = ()
    plug: str = "random"  # or "shift": the hidden shift string
    first_seed: int = 0
    max_tries: int = 2000


@dataclass
class Instance:
    circuit: Circuit
    out_bits: list[int]
    seed: int
    t_initial: int


def _plug(c: Circuit, how: str) -> list[int]:
    if how == "shift" and "shift" in c.metadata:
        return [int(ch) for ch in c.metadata["shift"]]
    return random_out_bits(serialize(c), c.qubits)


def build_suite(cfg: SuiteConfig) -> list[Instance]:
    gen = GENERATORS[cfg.cls]
    lo, hi = cfg.t_range
    out = []
    seed = cfg.first_seed
    while len(out) < cfg.size:
        if seed - cfg.first_seed >= cfg.max_tries:
            raise RuntimeError(f"{cfg.cls}: only {len(out)} instances with t in {cfg.t_range}")
        args = list(cfg.args)
        for pos, values in cfg.vary:
            args[pos] = values[len(out) % len(values)]
        c = gen(*args, seed)
        bits = _plug(c, cfg.plug)
        t = t_count(prepare(c, bits))
        if lo <= t <= hi:
            out.append(Instance(c, bits, seed, t))
        seed += 1
    return out


# the desk-scale trend suites
CCZ_TREND = SuiteConfig("ccz", (20, 400), size=20, t_range=(20, 60))
HIDDEN_SHIFT_TREND = SuiteConfig("hidden_shift", (8, 5), size=20, t_range=(11, 10**9),
                                 plug="shift")
IQP_TREND = SuiteConfig("iqp", (12, 0.5), size=20, t_range=(11, 10**9),
                        vary=((0, tuple(range(12, 21))),))
PAULI_TREND = SuiteConfig("pauli", (10, 30), size=10, t_range=(11, 10**9))


@dataclass
class StrategyRuns:
    strategy: str
    results: list[SimResult] = field(default_factory=list)

    def alphas(self) -> list[float]:
        # a timed-out run counts as worse than any finished one
        return [r.alpha_eff if r.status == "ok" else math.inf for r in self.results]


def run_suite(instances: list[Instance], strategies, timeout: float = 90.0,
              progress=None) -> dict[str, StrategyRuns]:
    runs = {s: StrategyRuns(s) for s in strategies}
    for inst in instances:
        for s in strategies:
            r = simulate_amplitude(inst.circuit, inst.out_bits, s, timeout=timeout)
            runs[s].results.append(r)
            if progress is not None:
                progress(inst, s, r)
    return runs


@dataclass
class SignTest:
    wins: int
    losses: int
    ties: int
    p_value: float
    median_better: float
    median_worse: float

    @property
    def median_margin(self) -> float:
        return self.median_worse - self.median_better

    def passed(self, level: float = 0.05) -> bool:
        return self.p_value < level and self.median_margin > 0


def sign_test(better: list[float], worse: list[float]) -> SignTest:
    """One-sided paired sign test that ``better`` is lower than ``worse``.

    Ties are dropped; the p-value is P(X >= wins) for X ~ Bin(wins + losses, 1/2),
    and 1.0 when every pair ties.
    """
    if len(better) != len(worse):
        raise ValueError("paired samples must have equal length")
    wins = sum(b < w for b, w in zip(better, worse))
    losses = sum(b > w for b, w in zip(better, worse))
    n = wins + losses
    p = sum(math.comb(n, k) for k in range(wins, n + 1)) / 2**n if n else 1.0
    return SignTest(wins, losses, len(better) - n, p,
                    statistics.median(better), statistics.median(worse))
