"""Monte-Carlo experiments: random-group threshold sweep and greedy-vs-exact sweep.

Every election is generated from its own stream ``make_rng(seed, grid_index, ...)``
so results do not depend on execution order; per-point aggregates are built
from integer sums and the CSV output is byte-stable for a fixed config.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Iterable

import numpy as np
from scipy.optimize import brentq

from .election import ApprovalElection, is_justifying
from .exact import DEFAULT_NODE_BUDGET, BudgetExceeded, exact_min_justifying
from .generators import avg_approvals, fixture_example2, gen_euclid1d, gen_euclid2d, gen_ic, make_rng
from .greedy import greedy_candidate, greedy_cc

MODELS = ("ic", "e1d", "e2d")
FIXTURES = ("example2",)
GREEDY_COLUMNS = (
    "avg_cc", "sd_cc", "avg_cand", "sd_cand", "avg_exact", "sd_exact", "exact_failures", "trials",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter sweep description.  The grid is ``start, start+step, ...`` below ``stop``."""

    model: str = "ic"
    n: int = 2000
    m: int = 50
    k: int = 10
    start: float = 0.0
    stop: float = 1.0
    step: float = 0.02
    trials: int = 200
    sizes: tuple[int, ...] = (1, 2, 3, 4)
    seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    exact: bool = True
    fixture: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise ConfigError(f"unknown fixture {self.fixture!r}")
        if self.n < 1 or self.m < 1 or not 1 <= self.k <= self.m:
            raise ConfigError("need n, m >= 1 and 1 <= k <= m")
        if not self.step > 0:
            raise ConfigError("step must be positive")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.start < 0 or self.stop < self.start:
            raise ConfigError("grid must satisfy 0 <= start <= stop")
        if self.model == "ic" and self.stop > 1.0 + 1e-12:
            raise ConfigError("IC probabilities must stay within [0, 1]")
        if any(s < 0 or s > self.m for s in self.sizes):
            raise ConfigError("group sizes must lie in [0, m]")
        if self.node_budget < 1 or self.jobs < 1:
            raise ConfigError("node_budget and jobs must be positive")

    def grid(self) -> list[float]:
        count = math.ceil((self.stop - self.start) / self.step - 1e-9)
        return [round(self.start + i * self.step, 10) for i in range(max(count, 0))]


def _coerce(name: str, raw: str):
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    if name not in kinds:
        raise ConfigError(f"unknown config key {name!r}")
    kind = kinds[name]
    try:
        if name == "sizes":
            return tuple(int(x) for x in raw.replace(",", " ").split())
        if name == "fixture":
            return raw or None
        if name == "exact":
            flag = raw.strip().lower()
            if flag in ("1", "true", "yes", "on"):
                return True
            if flag in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if "int" in str(kind):
            return int(raw)
        if "float" in str(kind):
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {name}") from None
    return raw


def parse_config(text: str) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def build_config(base: dict | None = None, **overrides) -> ExperimentConfig:
    values = dict(base or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row: a grid point and its aggregated measurements."""

    grid_value: float
    avg_approvals: float
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        for key, v in self.values.items():
            if key.startswith("frac_") and not 0.0 <= v <= 1.0:
                raise ValueError(f"{key}={v} is not a fraction")
            if key.startswith(("avg_", "sd_")) and not (v >= 0 or math.isnan(v)):
                raise ValueError(f"{key}={v} is negative")

    def row(self) -> list[str]:
        cells = [_fmt(self.grid_value), _fmt(self.avg_approvals)]
        cells += [_fmt(v) for v in self.values.values()]
        return cells


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return f"{v:.6f}"


def to_csv(records: Iterable[ExperimentRecord]) -> str:
    records = list(records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["grid_value", "avg_approvals"]
    if records:
        header += list(records[0].values)
    writer.writerow(header)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def generate(cfg: ExperimentConfig, value: float, rng) -> ApprovalElection:
    if cfg.model == "ic":
        return gen_ic(cfg.n, cfg.m, cfg.k, value, rng)
    if cfg.model == "e1d":
        return gen_euclid1d(cfg.n, cfg.m, cfg.k, value, rng)[0]
    return gen_euclid2d(cfg.n, cfg.m, cfg.k, value, rng)


def _map(cfg: ExperimentConfig, fn, tasks: list):
    if cfg.jobs == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))


# ---------------------------------------------------------------------------
# Threshold experiment


def _threshold_trial(task) -> tuple[int, bool]:
    cfg, i, value, s, t = task
    rng = make_rng(cfg.seed, i, s, t)
    e = generate(cfg, value, rng)
    group = rng.choice(cfg.m, size=s, replace=False) if s else ()
    approvals = sum(len(b) for b in e.ballots)
    return approvals, is_justifying(e, [int(c) for c in group])


def run_threshold_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Fraction of elections in which one random size-``s`` group is justifying.

    For each grid point and each ``s``, ``trials`` fresh elections are drawn
    and one uniformly random group of ``s`` candidates is tested in each.
    """
    records = []
    for i, value in enumerate(cfg.grid()):
        tasks = [(cfg, i, value, s, t) for s in cfg.sizes for t in range(cfg.trials)]
        results = _map(cfg, _threshold_trial, tasks)
        total_approvals = sum(a for a, _ in results)
        fractions = {}
        for j, s in enumerate(cfg.sizes):
            chunk = results[j * cfg.trials : (j + 1) * cfg.trials]
            fractions[f"frac_s{s}"] = sum(ok for _, ok in chunk) / cfg.trials
        avg = total_approvals / (len(results) * cfg.n)
        records.append(ExperimentRecord(value, avg, fractions))
    return records


def ic_transition_points(k: int, s: int) -> list[float]:
    """Values of ``p`` in (0, 1) where ``p (1-p)^s = 1/k``.

    Between the two roots (or above the single root when ``s = 0``) random
    size-``s`` groups are expected to fail for large ``n``.
    """
    target = 1.0 / k

    def gap(p):
        return p * (1.0 - p) ** s - target

    if s == 0:
        return [target] if target < 1 else []
    peak = 1.0 / (s + 1)
    if gap(peak) <= 0:
        return []
    return [brentq(gap, 0.0, peak, xtol=1e-14), brentq(gap, peak, 1.0, xtol=1e-14)]


# ---------------------------------------------------------------------------
# Greedy experiment


def _greedy_trial(task) -> tuple[int, int, int, int | None]:
    cfg, i, value, t = task
    e = generate(cfg, value, make_rng(cfg.seed, i, t))
    return _measure(cfg, e)


def _measure(cfg: ExperimentConfig, e: ApprovalElection) -> tuple[int, int, int, int | None]:
    cc = len(greedy_cc(e))
    cand = len(greedy_candidate(e))
    opt = None
    if cfg.exact:
        try:
            opt = len(exact_min_justifying(e, cfg.node_budget))
        except BudgetExceeded:
            opt = None
    approvals = sum(len(b) for b in e.ballots)
    return approvals, cc, cand, opt


def _mean_sd(values: list[int]) -> tuple[float, float]:
    if not values:
        return float("nan"), float("nan")
    count = len(values)
    total = sum(values)
    total_sq = sum(v * v for v in values)
    mean = total / count
    var = max(0.0, (total_sq * count - total * total) / (count * count))
    return mean, math.sqrt(var)


def _greedy_record(cfg: ExperimentConfig, value: float, results) -> ExperimentRecord:
    avg = sum(r[0] for r in results) / (len(results) * cfg.n)
    cc_avg, cc_sd = _mean_sd([r[1] for r in results])
    cand_avg, cand_sd = _mean_sd([r[2] for r in results])
    solved = [r[3] for r in results if r[3] is not None]
    exact_avg, exact_sd = _mean_sd(solved) if cfg.exact else (float("nan"), float("nan"))
    failures = len(results) - len(solved) if cfg.exact else 0
    values = dict(
        zip(GREEDY_COLUMNS, (cc_avg, cc_sd, cand_avg, cand_sd, exact_avg, exact_sd, failures, len(results)))
    )
    return ExperimentRecord(value, avg, values)


def run_greedy_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Average and spread of GreedyCC, GreedyCandidate and optimal group sizes.

    Budget-exhausted exact searches are counted in ``exact_failures`` and left
    out of the exact average.  With ``fixture="example2"`` a single row for
    that instance (at ``k = cfg.k``) is produced instead of a sweep; its
    ``grid_value`` is ``k``.
    """
    if cfg.fixture == "example2":
        e = fixture_example2(cfg.k)
        return [_greedy_record(replace(cfg, n=e.n), float(cfg.k), [_measure(cfg, e)])]
    records = []
    for i, value in enumerate(cfg.grid()):
        tasks = [(cfg, i, value, t) for t in range(cfg.trials)]
        records.append(_greedy_record(cfg, value, _map(cfg, _greedy_trial, tasks)))
    return records


# ---------------------------------------------------------------------------
# Plotting


def emit_plot_script(
    csv_path: str,
    kind: str,
    k: int | None = None,
    m: int | None = None,
    model: str = "ic",
) -> str:
    """A standalone matplotlib script plotting the CSV against average approvals.

    For IC threshold runs with known ``k`` and ``m`` the predicted transition
    points are drawn as dashed vertical lines at ``m * p``.
    """
    with open(csv_path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    if "avg_approvals" not in header:
        raise ValueError("CSV lacks the avg_approvals column")
    if kind == "threshold":
        series = [(c, c.replace("frac_s", "s = ")) for c in header if c.startswith("frac_s")]
        if not series:
            raise ValueError("threshold CSV has no frac_s* columns")
        ylabel = "fraction of justifying groups"
    elif kind == "greedy":
        needed = ["avg_cc", "avg_cand", "avg_exact"]
        missing = [c for c in needed if c not in header]
        if missing:
            raise ValueError(f"greedy CSV lacks columns {missing}")
        series = [("avg_cc", "GreedyCC"), ("avg_cand", "GreedyCandidate"), ("avg_exact", "minimum")]
        ylabel = "average group size"
    else:
        raise ValueError(f"unknown experiment kind {kind!r}")

    transitions = {}
    if kind == "threshold" and model == "ic" and k is not None and m is not None:
        for column, _ in series:
            s = int(column.removeprefix("frac_s"))
            transitions[column] = [round(m * p, 6) for p in ic_transition_points(k, s)]

    lines = [
        "import csv",
        "import matplotlib.pyplot as plt",
        "",
        f"with open({csv_path!r}, newline='') as fh:",
        "    rows = list(csv.DictReader(fh))",
        "x = [float(r['avg_approvals']) for r in rows]",
        "fig, ax = plt.subplots()",
    ]
    for i, (column, label) in enumerate(series):
        lines.append(f"line, = ax.plot(x, [float(r[{column!r}]) for r in rows], label={label!r})")
        for xpos in transitions.get(column, []):
            lines.append(f"ax.axvline({xpos!r}, linestyle='--', color=line.get_color())")
    lines += [
        "ax.set_xlabel('average number of approvals per voter')",
        f"ax.set_ylabel({ylabel!r})",
        "ax.legend()",
        f"fig.savefig({(csv_path.rsplit('.', 1)[0] + '.png')!r}, dpi=150)",
        "",
    ]
    return "\n".join(lines)
