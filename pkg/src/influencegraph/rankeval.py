"""Compare two rankings of the same accounts.

Aligns the rankings on account id, fits an ordinary-least-squares
trendline through the (position in A, position in B) pairs, and reports
the mean absolute position difference. ``plot_comparison`` renders the
scatter with the identity line and the fitted trendline.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping


@dataclass(frozen=True)
class RankComparison:
    n: int
    slope: float
    intercept: float
    mean_abs_diff: float
    pairs: tuple[tuple[int, int], ...]


def compare_rankings(pairs: Iterable[tuple[int, int]]) -> RankComparison:
    """OLS trendline and mean absolute difference of aligned positions."""
    points = [(int(x), int(y)) for x, y in pairs]
    if len(points) < 2:
        raise ValueError("need at least two rank pairs")
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate positions in the first ranking")
    if min(xs) < 1 or min(ys) < 1:
        raise ValueError("rank positions must be positive integers")
    fit = statistics.linear_regression(xs, ys)
    mean_abs = statistics.fmean(abs(x - y) for x, y in points)
    return RankComparison(
        n=len(points),
        slope=fit.slope,
        intercept=fit.intercept,
        mean_abs_diff=mean_abs,
        pairs=tuple(points),
    )


def load_ranking(path: Path | str) -> dict[str, int]:
    """Two-column CSV (account id, rank position) -> id -> position.

    A header row is skipped when its second cell is not an integer.
    """
    ranking: dict[str, int] = {}
    with Path(path).open(newline="", encoding="utf-8") as handle:
        for index, row in enumerate(csv.reader(handle)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: row {index + 1} needs two columns")
            account, rank_text = row[0].strip(), row[1].strip()
            if index == 0 and not _is_int(rank_text):
                continue  # header
            if not _is_int(rank_text):
                raise ValueError(f"{path}: row {index + 1} has a non-integer rank")
            if account in ranking:
                raise ValueError(f"{path}: duplicate account id {account!r}")
            ranking[account] = int(rank_text)
    return ranking


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


def join_rankings(
    first: Mapping[str, int], second: Mapping[str, int]
) -> tuple[list[tuple[int, int]], int, int]:
    """Pair positions of accounts present in both rankings.

    Returns (pairs, dropped-from-first, dropped-from-second).
    """
    shared = sorted(set(first) & set(second))
    pairs = [(first[key], second[key]) for key in shared]
    return pairs, len(first) - len(shared), len(second) - len(shared)


def plot_comparison(comparison: RankComparison, path: Path | str) -> None:
    """Scatter of rank pairs with the identity line and fitted trendline."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    figure = Figure(figsize=(6.0, 6.0))
    FigureCanvasAgg(figure)
    axes = figure.add_subplot()

    xs = [x for x, _ in comparison.pairs]
    ys = [y for _, y in comparison.pairs]
    axes.scatter(xs, ys, s=12, alpha=0.6, color="tab:blue", label="accounts")
    low = min(min(xs), min(ys))
    high = max(max(xs), max(ys))
    axes.plot([low, high], [low, high], color="red", linewidth=1.0, label="ideal y=x")
    axes.plot(
        [low, high],
        [comparison.slope * low + comparison.intercept,
         comparison.slope * high + comparison.intercept],
        color="black",
        linewidth=1.0,
        label=f"trend y={comparison.slope:.3f}x+{comparison.intercept:.3f}",
    )
    axes.set_xlabel("rank in system A")
    axes.set_ylabel("rank in system B")
    axes.set_title(f"n={comparison.n}, mean |Δrank|={comparison.mean_abs_diff:.3f}")
    axes.legend(loc="best")
    figure.tight_layout()
    figure.savefig(str(path), dpi=150)
