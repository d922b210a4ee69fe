"""Sampling-based approximation of the phase scale factor.

Draw M costs uniformly with replacement, fit a unit-height gaussian model of
the solution-space histogram to the sample moments, solve for the two tail
crossings x_-, x_+ where the modeled count drops to one solution, and scale
2*pi across that span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import substream
from .errors import EstimationError, GaussianModelViolation
from .problems import Problem, evaluate_indices, generate_linear_qubo
from .spectrum import enumerate_space, exact_ps


@dataclass(frozen=True)
class SampleEstimate:
    m_samples: int
    mu_t: float
    sigma_t: float
    alpha_t: float
    x_minus: float
    x_plus: float
    ps_t: float


def sample_costs(problem: Problem, m: int, seed: int = 0) -> np.ndarray:
    """m cost evaluations at assignments drawn uniformly with replacement."""
    if m < 2:
        raise EstimationError(f"need at least 2 samples, got {m}")
    rng = substream(seed, "sampling")
    idx = rng.integers(0, problem.d_total, size=m)
    return evaluate_indices(problem, idx)


def estimate_ps(samples, n_qubits: int) -> SampleEstimate:
    """Gaussian-model scale estimate from a cost sample.

    Population (1/M) standard deviation; the model height alpha must exceed 1
    or the unit-count tail crossings do not exist.
    """
    samples = np.asarray(samples, dtype=np.float64)
    m = len(samples)
    if m < 2:
        raise EstimationError(f"need at least 2 samples, got {m}")
    mu = float(samples.mean())
    sigma = float(np.sqrt(np.mean((samples - mu) ** 2)))
    if sigma == 0:
        raise EstimationError("zero sample variance: cannot estimate a scale")
    alpha = 2.0 ** (n_qubits - 1) / (sigma * np.sqrt(np.pi / 2.0))
    if alpha <= 1.0:
        raise GaussianModelViolation(
            f"alpha={alpha:.4g} <= 1: sample spread too wide for the "
            f"2^{n_qubits}-mass unit-height gaussian model"
        )
    half_span = sigma * np.sqrt(2.0 * np.log(alpha))
    x_minus, x_plus = mu - half_span, mu + half_span
    return SampleEstimate(
        m_samples=m,
        mu_t=mu,
        sigma_t=sigma,
        alpha_t=float(alpha),
        x_minus=float(x_minus),
        x_plus=float(x_plus),
        ps_t=float(2.0 * np.pi / (x_plus - x_minus)),
    )


def ps_error(estimate: float, exact: float) -> float:
    """Relative error |estimate - exact| / exact."""
    if exact <= 0:
        raise EstimationError(f"reference scale must be > 0, got {exact}")
    return abs(estimate - exact) / exact


@dataclass(frozen=True)
class TableRow:
    m: int
    mean_error: float
    std_error: float
    trials: int


def table1_experiment(
    n_qubits: int,
    m_values,
    trials: int = 50,
    qubo_count: int = 100,
    seed: int = 0,
) -> list[TableRow]:
    """Mean scale-estimation error per sample count, over random chain QUBOs.

    Each QUBO is enumerated once for the exact reference scale, then sampled
    `trials` times per M.
    """
    errors: dict[int, list[float]] = {int(m): [] for m in m_values}
    for q in range(qubo_count):
        problem = generate_linear_qubo(n_qubits, seed=seed * 1_000_003 + q)
        space = enumerate_space(problem)
        reference = exact_ps(space)
        for m in errors:
            for t in range(trials):
                trial_seed = ((seed * 1_000_003 + q) * 7919 + m) * 104729 + t
                samples = sample_costs(problem, m, seed=trial_seed)
                try:
                    est = estimate_ps(samples, n_qubits)
                except GaussianModelViolation:
                    continue
                errors[m].append(ps_error(est.ps_t, reference))
    rows = []
    for m in sorted(errors):
        errs = np.asarray(errors[m])
        rows.append(
            TableRow(
                m=m,
                mean_error=float(errs.mean()),
                std_error=float(errs.std() / np.sqrt(len(errs))),
                trials=len(errs),
            )
        )
    return rows
