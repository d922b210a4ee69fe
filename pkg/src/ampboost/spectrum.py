"""Exhaustive solution-space enumeration and distributional statistics.

A SolutionSpace is the full cost table over all D assignments.  Everything
downstream (engine, sweeps, hybrid experiments) works off this table; states
sharing one cost value form a degeneracy class and amplify identically, so
the class grouping computed here doubles as the engine's compressed basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import CapacityError, DegenerateSpectrumError, FitError
from .problems import Problem, evaluate_indices

DEFAULT_MEMORY_CAP = 2**26
_GROUP_RTOL = 1e-9
_CHUNK = 1 << 20


@dataclass(frozen=True)
class CostClasses:
    """Distinct cost values (ascending) with multiplicities and index mapping."""

    values: np.ndarray  # (n_classes,) ascending
    counts: np.ndarray  # (n_classes,) int64, sums to D
    class_of: np.ndarray  # (D,) class id per flat index

    @cached_property
    def _member_order(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.concatenate(([0], np.cumsum(self.counts)))
        return order, bounds

    def member_indices(self, class_id: int) -> np.ndarray:
        """All flat indices whose cost falls in the given class."""
        order, bounds = self._member_order
        return order[bounds[class_id] : bounds[class_id + 1]]


@dataclass(frozen=True)
class SolutionSpace:
    costs: np.ndarray
    problem: Problem | None = None

    def __post_init__(self):
        costs = np.ascontiguousarray(self.costs, dtype=np.float64)
        costs.flags.writeable = False
        object.__setattr__(self, "costs", costs)

    @property
    def d(self) -> int:
        return int(self.costs.shape[0])

    @cached_property
    def c_min(self) -> float:
        return float(self.costs.min())

    @cached_property
    def c_max(self) -> float:
        return float(self.costs.max())

    @cached_property
    def argmin_set(self) -> np.ndarray:
        return np.flatnonzero(self.costs == self.c_min)

    @cached_property
    def argmax_set(self) -> np.ndarray:
        return np.flatnonzero(self.costs == self.c_max)

    @cached_property
    def integer_valued(self) -> bool:
        return bool(np.all(np.abs(self.costs - np.round(self.costs)) < 1e-9))

    @cached_property
    def classes(self) -> CostClasses:
        return _group_costs(self.costs, self.integer_valued)

    def degeneracy(self, cost: float) -> int:
        """Multiplicity of the class containing `cost` (0 if absent)."""
        cid = self.class_id(cost)
        return 0 if cid is None else int(self.classes.counts[cid])

    def class_id(self, cost: float) -> int | None:
        vals = self.classes.values
        k = int(np.searchsorted(vals, cost))
        for cand in (k - 1, k, k + 1):
            if 0 <= cand < len(vals) and _close(vals[cand], cost):
                return cand
        return None


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _GROUP_RTOL * max(1.0, abs(a), abs(b))


def _group_costs(costs: np.ndarray, integer_valued: bool) -> CostClasses:
    uniq, inverse, counts = np.unique(costs, return_inverse=True, return_counts=True)
    if not integer_valued and len(uniq) > 1:
        # merge float values within relative tolerance into one class
        gap = np.diff(uniq)
        tol = _GROUP_RTOL * np.maximum(1.0, np.abs(uniq[1:]))
        new_group = np.concatenate(([0], (gap > tol).astype(np.int64))).cumsum()
        if new_group[-1] + 1 < len(uniq):
            merged_vals = np.zeros(new_group[-1] + 1)
            merged_counts = np.zeros(new_group[-1] + 1, dtype=np.int64)
            np.add.at(merged_counts, new_group, counts)
            np.add.at(merged_vals, new_group, uniq * counts)
            merged_vals /= merged_counts
            uniq, counts = merged_vals, merged_counts
            inverse = new_group[inverse]
    return CostClasses(uniq, counts.astype(np.int64), inverse.astype(np.int64))


def enumerate_space(problem: Problem, memory_cap: int = DEFAULT_MEMORY_CAP) -> SolutionSpace:
    """Evaluate the cost of every assignment; costs[i] is indexed by flat index."""
    d = problem.d_total
    if d > memory_cap:
        raise CapacityError(
            f"enumeration needs {d} entries, exceeds cap of {memory_cap}"
        )
    costs = np.empty(d, dtype=np.float64)
    for lo in range(0, d, _CHUNK):
        hi = min(lo + _CHUNK, d)
        costs[lo:hi] = evaluate_indices(problem, np.arange(lo, hi, dtype=np.int64))
    return SolutionSpace(costs, problem)


@dataclass(frozen=True)
class SpaceStats:
    mu: float
    sigma: float
    sigma_scaled: float
    x_delta: float
    gaussian_fit: tuple[float, float, float]  # (alpha, mu, sigma)


def stats(space: SolutionSpace, p_s: float) -> SpaceStats:
    """Population mean/sd over all D entries, scaled sd, and skewness."""
    mu = float(space.costs.mean())
    sigma = float(np.sqrt(np.mean((space.costs - mu) ** 2)))
    x_delta = 2.0 * mu - (space.c_max + space.c_min)
    if sigma > 0:
        alpha = space.d / (sigma * np.sqrt(2.0 * np.pi))
    else:
        alpha = float("inf")
    return SpaceStats(
        mu=mu,
        sigma=sigma,
        sigma_scaled=sigma * p_s,
        x_delta=x_delta,
        gaussian_fit=(alpha, mu, sigma),
    )


def exact_ps(space: SolutionSpace) -> float:
    """Scale factor mapping the full cost range onto a 2*pi span."""
    span = space.c_max - space.c_min
    if span <= 0:
        raise DegenerateSpectrumError("constant cost function: c_max == c_min")
    return 2.0 * np.pi / span


def histogram(
    space: SolutionSpace, bins: int | None = None, unit: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of the cost table; counts always sum to D.

    unit=True buckets each integer cost value separately (integer costs only).
    """
    if unit:
        if not space.integer_valued:
            raise FitError("unit-bin mode requires integer-valued costs")
        lo, hi = int(round(space.c_min)), int(round(space.c_max))
        edges = np.arange(lo, hi + 2) - 0.5
    else:
        if bins is None or bins < 1:
            raise FitError(f"bins must be >= 1, got {bins}")
        edges = np.linspace(space.c_min, space.c_max, bins + 1)
        if space.c_min == space.c_max:
            edges = np.array([space.c_min - 0.5, space.c_max + 0.5])
    counts, edges = np.histogram(space.costs, bins=edges)
    return edges, counts


def fit_gaussian(edges: np.ndarray, counts: np.ndarray) -> tuple[float, float, float]:
    """Moment-based bell-curve fit: (alpha, mu, sigma).

    alpha is chosen so the fitted curve integrates to the total count
    (alpha * sigma * sqrt(2*pi) = total mass * bin width).
    """
    counts = np.asarray(counts, dtype=np.float64)
    if np.count_nonzero(counts) < 3:
        raise FitError("need at least 3 nonempty bins for a gaussian fit")
    centers = 0.5 * (edges[:-1] + edges[1:])
    total = counts.sum()
    mu = float((centers * counts).sum() / total)
    sigma = float(np.sqrt(((centers - mu) ** 2 * counts).sum() / total))
    if sigma == 0:
        raise FitError("zero-width histogram")
    width = float(np.mean(np.diff(edges)))
    alpha = total * width / (sigma * np.sqrt(2.0 * np.pi))
    return alpha, mu, sigma


def gaussian_curve(x, alpha: float, mu: float, sigma: float):
    return alpha * np.exp(-((x - mu) ** 2) / (2.0 * sigma**2))


def rank_solutions(
    space: SolutionSpace, r: int, direction: str = "min", max_indices: int = 64
) -> list[tuple[float, int, np.ndarray]]:
    """The r best distinct cost values with multiplicity and attaining indices."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    classes = space.classes
    n_cls = len(classes.values)
    order = range(min(r, n_cls)) if direction == "min" else range(
        n_cls - 1, max(n_cls - 1 - r, -1), -1
    )
    out = []
    for cid in order:
        idx = classes.member_indices(cid)[:max_indices]
        out.append((float(classes.values[cid]), int(classes.counts[cid]), idx))
    return out


# -- persistence -----------------------------------------------------------


def save_space(space: SolutionSpace, path: str | Path) -> None:
    """Raw little-endian float64 cost table plus a JSON sidecar."""
    path = Path(path)
    space.costs.astype("<f8").tofile(path)
    sidecar = {"d": space.d}
    if space.problem is not None:
        sidecar["problem"] = space.problem.to_dict()
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar))


def load_space(path: str | Path) -> SolutionSpace:
    path = Path(path)
    costs = np.fromfile(path, dtype="<f8")
    problem = None
    sidecar_path = path.with_suffix(path.suffix + ".json")
    if sidecar_path.exists():
        sidecar = json.loads(sidecar_path.read_text())
        if "problem" in sidecar:
            problem = Problem.from_dict(sidecar["problem"])
    return SolutionSpace(costs, problem)
