"""Figure construction: pure data-series assembly plus a thin matplotlib shim.

figure_series() turns trial rows into the exact points and envelope samples a
figure will draw, with no I/O and no randomness, so identical inputs always
yield identical series. render() reads the CSVs, builds the series, and saves
the image.

Envelope constants are the guarantees' closed forms, hard-coded and never
fit to the data:

  regret-curve    sqrt(2*n*T); for two-stage retention runs the three-term
                  bound sqrt(2*n*L1) + sqrt(2*(n-m+2)*L2)
                  + L2*(m-2)/(n-1)*sqrt(2*n/L1)
  gap-vs-r        the diagonal gap = r
  failure-rate    the diagonal rate = delta
  sample-scaling  2*(n-m+2)^3 / (n*r)^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .records import Row, read_many

KINDS = ("regret-curve", "gap-vs-r", "failure-rate", "sample-scaling")

_Z95 = 1.959963984540054
_ENVELOPE_POINTS = 256


@dataclass(frozen=True)
class PlotSpec:
    """Input CSVs, figure kind, and output image path."""

    inputs: tuple[str, ...]
    kind: str
    out_path: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        missing = [p for p in self.inputs if not Path(p).is_file()]
        if missing:
            raise FileNotFoundError(f"input CSV(s) not found: {missing}")


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    lo: tuple[float, ...] | None = None  # confidence band, same length as y
    hi: tuple[float, ...] | None = None
    role: str = "data"  # "data" points with bars, "envelope" dashed reference


@dataclass(frozen=True)
class FigureData:
    kind: str
    title: str
    xlabel: str
    ylabel: str
    series: tuple[Series, ...]


def _mean_se(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), se


def _group(rows: list[Row], key, value) -> tuple[list[float], list[float], list[float]]:
    """x-sorted per-group means and standard errors of value(row)."""
    buckets: dict[float, list[float]] = {}
    for row in rows:
        buckets.setdefault(key(row), []).append(value(row))
    xs = sorted(buckets)
    means, ses = [], []
    for x in xs:
        mean, se = _mean_se(buckets[x])
        means.append(mean)
        ses.append(se)
    return xs, means, ses


def _single(rows: list[Row], what: str, key) -> float:
    values = {key(r) for r in rows}
    if len(values) != 1:
        raise ValueError(f"{what}; found {sorted(values)}")
    return values.pop()


def _require(rows: list[Row], kind: str, fields: tuple[str, ...]) -> None:
    for row in rows:
        for name in fields:
            if getattr(row, name) is None:
                raise ValueError(
                    f"{kind} needs {'/'.join(fields)} on every row; "
                    f"algorithm {row.algorithm!r} rows leave {name} blank"
                )


def _wilson(successes: int, trials: int) -> tuple[float, float]:
    p = successes / trials
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = _Z95 * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _span(xs: list[float]) -> np.ndarray:
    lo, hi = min(xs), max(xs)
    if lo == hi:
        lo, hi = 0.8 * lo, 1.2 * hi
    return np.linspace(lo, hi, _ENVELOPE_POINTS)


def _two_stage_budgets(n: int, m: int, r: float) -> tuple[int, int]:
    l2 = 2.0 * (n - m + 2) ** 3 / ((n - 1) ** 2 * r**2)
    l1 = (m - 2) / (n - 1) * l2
    return math.ceil(l1), math.ceil(l2)


def _two_stage_regret_bound(n: int, m: int, r: float) -> float:
    if m == 1:
        return math.sqrt(2.0 * n * math.ceil(2.0 * n / r**2))
    l1, l2 = _two_stage_budgets(n, m, r)
    bound = math.sqrt(2.0 * (n - m + 2) * l2)
    if m > 2:
        bound += math.sqrt(2.0 * n * l1) + l2 * (m - 2) / (n - 1) * math.sqrt(2.0 * n / l1)
    return bound


def _regret_curve(rows: list[Row]) -> FigureData:
    xs, means, ses = _group(rows, lambda r: r.samples_used, lambda r: r.realized_regret)
    data = Series(
        label="mean regret",
        x=tuple(float(x) for x in xs),
        y=tuple(means),
        lo=tuple(m - s for m, s in zip(means, ses)),
        hi=tuple(m + s for m, s in zip(means, ses)),
    )
    n = int(_single(rows, "regret-curve needs a single arm count", lambda r: r.n))
    algorithms = {r.algorithm for r in rows}
    if algorithms == {"rbar-regret"}:
        m = int(_single(rows, "two-stage envelope needs a single m", lambda r: r.m))
        r_target = _single(rows, "two-stage envelope needs a single r", lambda r: r.eps_or_r)
        bound = _two_stage_regret_bound(n, m, r_target)
        grid = _span([float(x) for x in xs])
        envelope = Series(
            label="three-term regret bound",
            x=tuple(grid),
            y=(bound,) * grid.size,
            role="envelope",
        )
    else:
        grid = _span([float(x) for x in xs])
        envelope = Series(
            label="sqrt(2nT)",
            x=tuple(grid),
            y=tuple(math.sqrt(2.0 * n * t) for t in grid),
            role="envelope",
        )
    return FigureData(
        kind="regret-curve",
        title=f"regret vs horizon (n={n})",
        xlabel="rounds T",
        ylabel="regret",
        series=(data, envelope),
    )


def _gap_vs_r(rows: list[Row]) -> FigureData:
    _require(rows, "gap-vs-r", ("eps_or_r", "realized_gap"))
    xs, means, ses = _group(rows, lambda r: r.eps_or_r, lambda r: r.realized_gap)
    data = Series(
        label="mean retained gap",
        x=tuple(xs),
        y=tuple(means),
        lo=tuple(m - s for m, s in zip(means, ses)),
        hi=tuple(m + s for m, s in zip(means, ses)),
    )
    grid = np.linspace(0.0, 1.05 * max(xs), _ENVELOPE_POINTS)
    envelope = Series(
        label="gap = r target",
        x=tuple(grid),
        y=tuple(grid),
        role="envelope",
    )
    return FigureData(
        kind="gap-vs-r",
        title="expected gap vs retention target",
        xlabel="target r",
        ylabel="expected gap",
        series=(data, envelope),
    )


def _failure_rate(rows: list[Row]) -> FigureData:
    _require(rows, "failure-rate", ("delta", "contains_eps_optimal"))
    buckets: dict[float, list[bool]] = {}
    for row in rows:
        buckets.setdefault(row.delta, []).append(not row.contains_eps_optimal)
    xs = sorted(buckets)
    rates, los, his = [], [], []
    for x in xs:
        fails = buckets[x]
        rates.append(sum(fails) / len(fails))
        lo, hi = _wilson(sum(fails), len(fails))
        los.append(lo)
        his.append(hi)
    data = Series(
        label="failure rate (Wilson 95%)",
        x=tuple(xs), y=tuple(rates), lo=tuple(los), hi=tuple(his),
    )
    grid = np.linspace(0.0, 1.05 * max(xs), _ENVELOPE_POINTS)
    envelope = Series(
        label="rate = delta",
        x=tuple(grid),
        y=tuple(grid),
        role="envelope",
    )
    return FigureData(
        kind="failure-rate",
        title="retention failure rate vs delta",
        xlabel="delta",
        ylabel="failure rate",
        series=(data, envelope),
    )


def _sample_scaling(rows: list[Row]) -> FigureData:
    _require(rows, "sample-scaling", ("m", "eps_or_r"))
    n = int(_single(rows, "sample-scaling needs a single arm count", lambda r: r.n))
    r_target = _single(rows, "sample-scaling needs a single r", lambda r: r.eps_or_r)
    xs, means, ses = _group(rows, lambda r: r.n - r.m, lambda r: r.samples_used)
    data = Series(
        label="mean samples used",
        x=tuple(float(x) for x in xs),
        y=tuple(means),
        lo=tuple(m - s for m, s in zip(means, ses)),
        hi=tuple(m + s for m, s in zip(means, ses)),
    )
    grid = _span([float(x) for x in xs])
    envelope = Series(
        label="2(n-m+2)^3/(n r)^2",
        x=tuple(grid),
        y=tuple(2.0 * (x + 2) ** 3 / (n * r_target) ** 2 for x in grid),
        role="envelope",
    )
    return FigureData(
        kind="sample-scaling",
        title=f"sampling budget vs arms dropped (n={n}, r={r_target:g})",
        xlabel="arms dropped (n - m)",
        ylabel="samples used",
        series=(data, envelope),
    )


_BUILDERS = {
    "regret-curve": _regret_curve,
    "gap-vs-r": _gap_vs_r,
    "failure-rate": _failure_rate,
    "sample-scaling": _sample_scaling,
}


def figure_series(kind: str, rows: list[Row]) -> FigureData:
    """Deterministic series for one figure; header-only inputs give no series."""
    if kind not in KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
    if not rows:
        return FigureData(
            kind=kind, title=f"{kind} (no data)", xlabel="", ylabel="", series=(),
        )
    return _BUILDERS[kind](rows)


def render(spec: PlotSpec) -> str:
    """Read the spec's CSVs and save the figure; returns the image path."""
    rows = read_many(spec.inputs)
    data = figure_series(spec.kind, rows)
    _draw(data, spec.out_path)
    return spec.out_path


def _draw(data: FigureData, out_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for series in data.series:
        if series.role == "envelope":
            ax.plot(series.x, series.y, "--", color="black", label=series.label)
        else:
            yerr = None
            if series.lo is not None:
                yerr = (
                    np.array(series.y) - np.array(series.lo),
                    np.array(series.hi) - np.array(series.y),
                )
            ax.errorbar(
                series.x, series.y, yerr=yerr,
                marker="o", linestyle="-", capsize=3, label=series.label,
            )
    ax.set_title(data.title)
    ax.set_xlabel(data.xlabel)
    ax.set_ylabel(data.ylabel)
    ax.grid(True, alpha=0.3)
    if data.series:
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
