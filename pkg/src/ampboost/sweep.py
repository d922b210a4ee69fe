"""Mapping the scale-parameter landscape.

Per-state probability vs p_s curves are narrow resonances: a state's peak
has relative width ~1/(2k), and peaks of successively better solutions sit
at successively smaller p_s.  find_peak does a coarse scan (cheap low-k
pre-scan, then full-k candidates) followed by golden-section refinement;
correlation_points walks the best costs in order, predicting each next
window from the previous peak, which keeps the scan cost flat per target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import amplify_class_probs, grover_iterations
from .errors import FitError, NotFoundError, PredictionFailure
from .spectrum import SolutionSpace

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


# -- regression ------------------------------------------------------------


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_corr: float


def linear_regression(points) -> LinearFit:
    """Least-squares line with the sums-based correlation factor."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise FitError("need at least 2 points")
    x, y = pts[:, 0], pts[:, 1]
    n = len(x)
    sx, sy = x.sum(), y.sum()
    sxx, syy, sxy = (x * x).sum(), (y * y).sum(), (x * y).sum()
    dx = n * sxx - sx * sx
    dy = n * syy - sy * sy
    if dx <= 0 or dy <= 0:
        raise FitError("correlation undefined for constant x or constant y")
    slope = (n * sxy - sx * sy) / dx
    intercept = (sy - slope * sx) / n
    r = (n * sxy - sx * sy) / np.sqrt(dx * dy)
    return LinearFit(float(slope), float(intercept), float(r))


@dataclass(frozen=True)
class CorrelationFit:
    """Linear and quadratic fits of cost vs p_s, with the better model tagged."""

    linear: LinearFit
    quadratic: tuple[float, float, float]  # cost = a*ps^2 + b*ps + c
    adj_r2_linear: float
    adj_r2_quadratic: float
    model: str  # "linear" | "quadratic"
    ps_lo: float
    ps_hi: float


def _adj_r2(y, resid, n_params: int) -> float:
    n = len(y)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0 or n - n_params - 1 <= 0:
        return float("-inf")
    return 1.0 - (ss_res / ss_tot) * (n - 1) / (n - n_params - 1)


def fit_correlation(points) -> CorrelationFit:
    """Fit cost-vs-p_s points with both models; select by adjusted R^2."""
    pts = np.asarray(points, dtype=np.float64)
    lin = linear_regression(pts)
    x, y = pts[:, 0], pts[:, 1]
    resid_lin = y - (lin.slope * x + lin.intercept)
    if len(x) >= 4:
        qa, qb, qc = np.polyfit(x, y, 2)
        resid_quad = y - (qa * x**2 + qb * x + qc)
    else:
        qa, qb, qc = 0.0, lin.slope, lin.intercept
        resid_quad = resid_lin
    r2l = _adj_r2(y, resid_lin, 1)
    r2q = _adj_r2(y, resid_quad, 2)
    model = "quadratic" if r2q > r2l else "linear"
    return CorrelationFit(
        linear=lin,
        quadratic=(float(qa), float(qb), float(qc)),
        adj_r2_linear=r2l,
        adj_r2_quadratic=r2q,
        model=model,
        ps_lo=float(x.min()),
        ps_hi=float(x.max()),
    )


def predict_ps(fit: CorrelationFit | LinearFit, cost_value: float, window=None) -> float:
    """Invert the fitted cost-vs-p_s relation at a cost value."""
    if isinstance(fit, LinearFit) or fit.model == "linear":
        lin = fit if isinstance(fit, LinearFit) else fit.linear
        if lin.slope == 0:
            raise PredictionFailure("flat fit cannot be inverted")
        return (cost_value - lin.intercept) / lin.slope
    a, b, c = fit.quadratic
    disc = b * b - 4.0 * a * (c - cost_value)
    if disc < 0:
        raise PredictionFailure(f"no real root for cost {cost_value}")
    roots = [(-b + s * np.sqrt(disc)) / (2.0 * a) for s in (+1.0, -1.0)]
    lo, hi = window if window is not None else (fit.ps_lo, fit.ps_hi)
    span = hi - lo
    usable = [r for r in roots if lo - 2.0 * span <= r <= hi + 2.0 * span]
    if not usable:
        raise PredictionFailure(f"no root near window for cost {cost_value}")
    return min(usable, key=lambda r: abs(r - 0.5 * (lo + hi)))


# -- sweeping --------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    ps_grid: np.ndarray
    k_used: int
    tracked: dict[float, np.ndarray]  # cost value -> merged probability series
    cumulative_top_r: np.ndarray
    top_r: int


def sweep(space: SolutionSpace, ps_grid, k: int, track=None, top_r: int = 5) -> SweepRecord:
    """Fixed-k amplification across a p_s grid.

    track: cost values to follow (degenerate states merged), or an integer r
    to follow the r best distinct costs.  cumulative_top_r records the summed
    probability of the top_r most probable distinct costs at each grid point.
    """
    ps_grid = np.asarray(ps_grid, dtype=np.float64)
    if ps_grid.size == 0 or np.any(np.diff(ps_grid) < 0):
        raise ValueError("ps grid must be nonempty and ascending")
    classes = space.classes
    if track is None:
        track_ids = []
    elif isinstance(track, int):
        track_ids = list(range(min(track, len(classes.values))))
    else:
        track_ids = []
        for cost in track:
            cid = space.class_id(float(cost))
            if cid is None:
                raise NotFoundError(f"cost {cost} not present in space")
            track_ids.append(cid)
    series = {cid: np.empty(len(ps_grid)) for cid in track_ids}
    cumulative = np.empty(len(ps_grid))
    for g, ps in enumerate(ps_grid):
        probs = amplify_class_probs(space, ps, k)
        for cid in track_ids:
            series[cid][g] = probs[cid]
        r = min(top_r, len(probs))
        cumulative[g] = np.sort(probs)[-r:].sum()
    tracked = {float(classes.values[cid]): series[cid] for cid in track_ids}
    return SweepRecord(ps_grid, int(k), tracked, cumulative, top_r)


# -- peak location ---------------------------------------------------------


@dataclass(frozen=True)
class PeakPoint:
    cost_value: float
    ps_star: float
    peak_prob: float
    degeneracy: int
    k_at_peak: int


def _resolve_k(space: SolutionSpace, k_policy, degeneracy: int) -> int:
    if k_policy == "kG":
        return grover_iterations(space.d, max(1, degeneracy))
    return int(k_policy)


def _heuristic_center(space: SolutionSpace, cost: float) -> float:
    """Starting guess: scale the span from this cost to the far extremum to 2*pi."""
    mu = float(space.costs.mean())
    span = (space.c_max - cost) if cost <= mu else (cost - space.c_min)
    if span <= 0:
        span = space.c_max - space.c_min
    return 2.0 * np.pi / span


def _scan(space, cid, ps_values, k):
    best_ps, best_p = ps_values[0], -1.0
    for ps in ps_values:
        p = amplify_class_probs(space, ps, k)[cid]
        if p > best_p:
            best_ps, best_p = ps, p
    return best_ps, best_p


def _golden_refine(space, cid, lo, hi, k, rel_tol=1e-7):
    f = lambda ps: amplify_class_probs(space, ps, k)[cid]
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > rel_tol * b:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
    ps = x1 if f1 >= f2 else x2
    return ps, f(ps)


def find_peak(
    space: SolutionSpace,
    target_cost: float,
    ps_window: tuple[float, float] | None = None,
    k_policy="kG",
    rel_tol: float = 1e-7,
) -> PeakPoint:
    """Locate the p_s maximizing the (merged) probability of a cost value.

    Coarse scan first: a cheap low-k pass over the window finds candidate
    resonance bands (peak positions are nearly k-independent, widths shrink
    like 1/k), then the best candidates are rescanned at the target k and the
    winner refined by golden section.
    """
    cid = space.class_id(float(target_cost))
    if cid is None:
        raise NotFoundError(f"cost {target_cost} not present in space")
    degeneracy = int(space.classes.counts[cid])
    k = _resolve_k(space, k_policy, degeneracy)
    if ps_window is None:
        center = _heuristic_center(space, float(target_cost))
        ps_window = (0.5 * center, 1.5 * center)
    lo, hi = ps_window
    if k == 0:
        return PeakPoint(float(target_cost), 0.5 * (lo + hi),
                         degeneracy / space.d, degeneracy, 0)

    k_pre = min(k, max(8, k // 8))
    step_pre = hi / (4.0 * k_pre)
    grid_pre = np.arange(lo, hi + step_pre, step_pre)
    probs_pre = np.array([amplify_class_probs(space, ps, k_pre)[cid] for ps in grid_pre])

    # rescan the strongest low-k bands at full k
    n_candidates = 3
    order = np.argsort(probs_pre)[::-1]
    picked, bands = [], []
    halfwidth_pre = hi / (2.0 * k_pre)
    for g in order:
        if any(abs(grid_pre[g] - grid_pre[p]) < 2.0 * halfwidth_pre for p in picked):
            continue
        picked.append(g)
        if len(picked) == n_candidates:
            break
    step = hi / (4.0 * k)
    best_ps, best_p = None, -1.0
    for g in picked:
        b_lo = max(lo, grid_pre[g] - 2.0 * halfwidth_pre)
        b_hi = min(hi, grid_pre[g] + 2.0 * halfwidth_pre)
        ps_c, p_c = _scan(space, cid, np.arange(b_lo, b_hi + step, step), k)
        if p_c > best_p:
            best_ps, best_p = ps_c, p_c
    ps_star, peak_prob = _golden_refine(
        space, cid, max(lo, best_ps - step), min(hi, best_ps + step), k, rel_tol
    )
    if peak_prob < best_p:
        ps_star, peak_prob = best_ps, best_p
    return PeakPoint(float(space.classes.values[cid]), float(ps_star),
                     float(peak_prob), degeneracy, k)


def _peak_in_window(space, cid, lo, hi, k, rel_tol=1e-7):
    step = hi / (4.0 * k)
    ps0, p0 = _scan(space, cid, np.arange(lo, hi + step, step), k)
    ps, p = _golden_refine(space, cid, max(lo, ps0 - step), min(hi, ps0 + step), k, rel_tol)
    if p < p0:
        ps, p = ps0, p0
    return ps, p


def correlation_points(
    space: SolutionSpace,
    r: int,
    k_policy="kG",
    direction: str = "min",
    rel_tol: float = 1e-7,
) -> list[PeakPoint]:
    """Peak points for the r best distinct costs, walked in cost order.

    The first target gets a full window search; each later window is the
    previous peak shifted by the heuristic-center increment, which tracks the
    sequential peak structure and keeps per-target cost flat.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    classes = space.classes
    n_cls = len(classes.values)
    ids = list(range(min(r, n_cls)))
    if direction == "max":
        ids = list(range(n_cls - 1, n_cls - 1 - min(r, n_cls), -1))
    points: list[PeakPoint] = []
    prev: PeakPoint | None = None
    for cid in ids:
        cost = float(classes.values[cid])
        deg = int(classes.counts[cid])
        k = _resolve_k(space, k_policy, deg)
        if prev is None:
            pk = find_peak(space, cost, k_policy=k_policy, rel_tol=rel_tol)
        else:
            center = prev.ps_star + (
                _heuristic_center(space, cost) - _heuristic_center(space, prev.cost_value)
            )
            halfwidth = center / (2.0 * k)
            gap = abs(center - prev.ps_star)
            w = 3.0 * gap + 6.0 * halfwidth
            ps, p = _peak_in_window(space, cid, max(center - w, 0.25 * center),
                                    center + w, k, rel_tol)
            # widen once if the band was missed
            if p < max(2.0 * deg / space.d, 0.1 * prev.peak_prob):
                ps2, p2 = _peak_in_window(space, cid, max(center - 4 * w, 0.2 * center),
                                          center + 4 * w, k, rel_tol)
                if p2 > p:
                    ps, p = ps2, p2
            pk = PeakPoint(cost, float(ps), float(p), deg, k)
        points.append(pk)
        prev = pk
    return points
