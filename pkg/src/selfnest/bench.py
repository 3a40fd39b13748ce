"""Random-tree benchmark comparing the NEST and the NeST."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .approx import (
    delta_nest_embedded_from_counts,
    delta_nest_from_counts,
    nest_embedded_profile,
    nest_profile,
)
from .profile import compute_profile, sn_node_count
from .randgen import GenSpec, random_tree, trial_seed
from .tree import serialize_canonical

DEFAULT_SIZES = (10, 20, 30, 40, 50, 75, 100, 150, 200, 250)
DEFAULT_TRIALS = 300
DEFAULT_SEED = 20190101

CSV_HEADER = (
    "size,trial,seed,n_tau,n_nest,n_nest_embedded,d_nest,d_nest_embedded,"
    "delta_nest,delta_nest_embedded,t_nest_ns,t_nest_embedded_ns"
)


@dataclass(frozen=True)
class BenchRecord:
    size: int
    trial: int
    seed: int
    n_tau: int
    n_nest: int
    n_nest_embedded: int
    d_nest: int
    d_nest_embedded: int
    delta_nest: Fraction
    delta_nest_embedded: Fraction
    t_nest_ns: int
    t_nest_embedded_ns: int
    # instrumentation, not part of the CSV
    height: int = 0
    outdegree: int = 0
    t_profile_ns: int = 0
    ops_profile: int = 0
    ops_nest: int = 0
    ops_nest_embedded: int = 0
    tree: str = ""

    def row(self) -> list:
        return [
            self.size, self.trial, self.seed, self.n_tau, self.n_nest, self.n_nest_embedded,
            self.d_nest, self.d_nest_embedded, _frac(self.delta_nest), _frac(self.delta_nest_embedded),
            self.t_nest_ns, self.t_nest_embedded_ns,
        ]  # fmt: skip

    @property
    def is_violation(self) -> bool:
        """The NeST is strictly farther from the tree than the NEST."""
        return self.d_nest_embedded > self.d_nest


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def run_trial(size: int, trial: int, master_seed: int) -> BenchRecord:
    seed = trial_seed(master_seed, size, trial)
    t = random_tree(GenSpec(size, seed))
    clock = time.perf_counter_ns
    t0 = clock()
    p = compute_profile(t)
    t1 = clock()
    s_nest, ops_nest = nest_profile(p)
    t2 = clock()
    s_emb, ops_emb = nest_embedded_profile(p)
    t3 = clock()
    n = len(t)
    n_nest = sn_node_count(s_nest)
    n_emb = sn_node_count(s_emb)
    return BenchRecord(
        size=size,
        trial=trial,
        seed=seed,
        n_tau=n,
        n_nest=n_nest,
        n_nest_embedded=n_emb,
        d_nest=n_nest - n,
        d_nest_embedded=n - n_emb,
        delta_nest=delta_nest_from_counts(n, n_nest),
        delta_nest_embedded=delta_nest_embedded_from_counts(n, n_emb),
        t_nest_ns=t2 - t1,
        t_nest_embedded_ns=t3 - t2,
        height=t.height,
        outdegree=t.outdegree,
        t_profile_ns=t1 - t0,
        ops_profile=p.ops,
        ops_nest=ops_nest,
        ops_nest_embedded=ops_emb,
        tree=serialize_canonical(t),
    )


def _run_star(args):
    return run_trial(*args)


def run_benchmark(
    sizes: Sequence[int] = DEFAULT_SIZES,
    trials_per_size: int = DEFAULT_TRIALS,
    master_seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> list[BenchRecord]:
    """One record per (size, trial), sorted by (size, trial).

    Timings cover the approximation on a precomputed height profile; the
    profile itself is timed separately in ``t_profile_ns``.
    """
    if not sizes:
        raise ValueError("sizes must not be empty")
    if trials_per_size < 1:
        raise ValueError("trials_per_size must be >= 1")
    tasks = [(size, k, master_seed) for size in sizes for k in range(trials_per_size)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            records = list(pool.map(_run_star, tasks, chunksize=16))
    else:
        records = [run_trial(*task) for task in tasks]
    records.sort(key=lambda r: (r.size, r.trial))
    return records


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER.split(","))
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def violations(records: Iterable[BenchRecord]) -> list[BenchRecord]:
    return [r for r in records if r.is_violation]


def format_violations(records: Iterable[BenchRecord]) -> str:
    return "".join(f"{r.tree}\tsize={r.size} trial={r.trial} seed={r.seed}\n" for r in records)


def quantile(values: Sequence, q: Fraction) -> Fraction:
    """Exact linear-interpolation quantile (position q*(n-1) in sorted data)."""
    xs = sorted(Fraction(v) for v in values)
    if not xs:
        raise ValueError("no data")
    pos = Fraction(q) * (len(xs) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - lo)


@dataclass(frozen=True)
class Summary:
    mean: Fraction
    q1: Fraction
    median: Fraction
    q3: Fraction


def summarize(values: Sequence) -> Summary:
    return Summary(
        mean=Fraction(sum(Fraction(v) for v in values), len(values)),
        q1=quantile(values, Fraction(1, 4)),
        median=quantile(values, Fraction(1, 2)),
        q3=quantile(values, Fraction(3, 4)),
    )


STAT_FIELDS = ("n_nest", "n_nest_embedded", "t_nest_ns", "t_nest_embedded_ns")


def aggregate(records: Iterable[BenchRecord]) -> dict[int, dict[str, Summary]]:
    """Per size, exact summaries of node counts and timings."""
    by_size: dict[int, list[BenchRecord]] = {}
    for r in records:
        by_size.setdefault(r.size, []).append(r)
    return {
        size: {f: summarize([getattr(r, f) for r in rs]) for f in STAT_FIELDS}
        for size, rs in sorted(by_size.items())
    }


def format_summary(agg: dict[int, dict[str, Summary]], n_violations: Optional[int] = None) -> str:
    lines = ["size  nest(mean,med)      nest_emb(mean,med)  t_nest_us  t_emb_us"]
    for size, st in agg.items():
        a, b = st["n_nest"], st["n_nest_embedded"]
        lines.append(
            f"{size:>4}  {float(a.mean):>9.1f} {float(a.median):>8.1f}  "
            f"{float(b.mean):>8.1f} {float(b.median):>8.1f}  "
            f"{float(st['t_nest_ns'].mean) / 1e3:>9.1f}  {float(st['t_nest_embedded_ns'].mean) / 1e3:>8.1f}"
        )
    if n_violations is not None:
        lines.append(f"violations (d_nest_embedded > d_nest): {n_violations}")
    return "\n".join(lines) + "\n"


def plot_svg(agg: dict[int, dict[str, Summary]], path) -> None:
    """Node counts and running times per size: mean and median lines, quartile band."""
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    sizes = list(agg)
    panels = [
        ("n_nest", "NEST nodes", 1),
        ("n_nest_embedded", "NeST nodes", 1),
        ("t_nest_ns", "NEST time (us)", 1e3),
        ("t_nest_embedded_ns", "NeST time (us)", 1e3),
    ]
    fig, axes = plt.subplots(1, 4, figsize=(16, 4))
    for ax, (key, title, scale) in zip(axes, panels):
        col = [agg[s][key] for s in sizes]
        ax.plot(sizes, [float(c.mean) / scale for c in col], "-", label="mean")
        ax.plot(sizes, [float(c.median) / scale for c in col], ":", label="median")
        ax.fill_between(
            sizes, [float(c.q1) / scale for c in col], [float(c.q3) / scale for c in col], alpha=0.25, label="Q1-Q3"
        )
        ax.plot(sizes, [float(c.q1) / scale for c in col], "--", color="gray", linewidth=0.8)
        ax.plot(sizes, [float(c.q3) / scale for c in col], "--", color="gray", linewidth=0.8)
        ax.set_title(title)
        ax.set_xlabel("tree size")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
