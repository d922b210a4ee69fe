"""Exact simulation of the amplify-measure loop.

The full-state operations (uniform init, diagonal phase oracle, reflection
about the mean) act on D complex amplitudes.  run_amplification exploits an
exact symmetry instead: states with equal cost receive equal phases and are
reflected about the same mean, so they stay equal forever.  Evolving one
amplitude per degeneracy class is therefore bitwise-equivalent to evolving
all D states, at a fraction of the work.  The per-class hot loop lives in
the compiled kernel (see backend).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from ._rng import substream
from .errors import CapacityError, DimensionError, InvalidProblemError
from .spectrum import DEFAULT_MEMORY_CAP, SolutionSpace

TWO_PI = 2.0 * np.pi


def init_uniform(d: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> np.ndarray:
    """Equal superposition over d basis states."""
    if d < 1:
        raise DimensionError(f"state size must be >= 1, got {d}")
    if d > memory_cap:
        raise CapacityError(f"state of {d} amplitudes exceeds cap of {memory_cap}")
    return np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)


def _phases(costs: np.ndarray, p_s: float) -> np.ndarray:
    # reduce mod 2*pi before exp to keep trig arguments small for huge cost*p_s
    return np.exp(1j * np.mod(p_s * costs, TWO_PI))


def apply_cost_oracle(state: np.ndarray, space: SolutionSpace, p_s: float) -> np.ndarray:
    """Diagonal phase oracle: amps[i] *= exp(i * p_s * cost[i])."""
    if state.shape[0] != space.d:
        raise DimensionError(f"state length {state.shape[0]} != space D {space.d}")
    return state * _phases(space.costs, p_s)


def apply_diffusion(state: np.ndarray) -> np.ndarray:
    """Reflection about the mean amplitude: amps[i] -> 2*mean - amps[i]."""
    # np.mean uses pairwise summation, which keeps the norm budget at large D
    return 2.0 * state.mean() - state


@dataclass(frozen=True)
class AmplifyResult:
    probabilities: np.ndarray
    iterations_used: int
    p_s_used: float
    history: dict[int, np.ndarray] | None = None


def amplify_class_amps(space: SolutionSpace, p_s: float, k: int, tracked_classes=None):
    """Evolve one amplitude per degeneracy class for k oracle+diffusion rounds."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    classes = space.classes
    phase = _phases(classes.values, p_s)
    counts = classes.counts.astype(np.float64)
    tracked = None
    if tracked_classes is not None:
        tracked = np.asarray(list(tracked_classes), dtype=np.int64)
    return backend.amplify_classes(phase, counts, float(space.d), int(k), tracked)


def amplify_class_probs(space: SolutionSpace, p_s: float, k: int) -> np.ndarray:
    """Total measurement probability per degeneracy class after k rounds."""
    amps, _ = amplify_class_amps(space, p_s, k)
    return space.classes.counts * np.abs(amps) ** 2


def run_amplification(
    space: SolutionSpace,
    p_s: float,
    k: int,
    tracked=None,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> AmplifyResult:
    """Apply (oracle; diffusion) k times to the uniform state.

    tracked: optional flat indices whose per-iteration probability history
    (length k+1, including the uniform start) is recorded.
    """
    if space.d > memory_cap:
        raise CapacityError(f"state of {space.d} amplitudes exceeds cap of {memory_cap}")
    classes = space.classes
    tracked_list = list(tracked) if tracked is not None else None
    tracked_classes = None
    if tracked_list:
        tracked_classes = [int(classes.class_of[i]) for i in tracked_list]
    amps, hist = amplify_class_amps(space, p_s, k, tracked_classes)
    per_state = np.abs(amps) ** 2
    probabilities = per_state[classes.class_of]
    history = None
    if tracked_list:
        history = {idx: hist[:, t].copy() for t, idx in enumerate(tracked_list)}
    return AmplifyResult(
        probabilities=probabilities,
        iterations_used=int(k),
        p_s_used=float(p_s),
        history=history,
    )


def grover_iterations(d: int, m: int) -> int:
    """Standard iteration count round(pi/4 * sqrt(d/m)) for m marked among d."""
    if not (1 <= m <= d):
        raise InvalidProblemError(f"marked count m={m} outside [1, {d}]")
    # nearest integer, ties away from zero (documented rounding mode)
    return int(np.floor(np.pi / 4.0 * np.sqrt(d / m) + 0.5))


def _as_probabilities(source) -> np.ndarray:
    if isinstance(source, AmplifyResult):
        return source.probabilities
    arr = np.asarray(source)
    if np.iscomplexobj(arr):
        return np.abs(arr) ** 2
    return arr


def measure(source, shots: int, seed: int = 0) -> np.ndarray:
    """i.i.d. draws of flat indices from a state's probability distribution."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = _as_probabilities(source)
    rng = substream(seed, "shots")
    return sample_indices(probs, shots, rng)


def sample_indices(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    return np.searchsorted(cdf, rng.random(shots), side="right")


def measure_compressed(
    space: SolutionSpace, class_probs: np.ndarray, shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw flat indices from per-class totals: pick a class, then a member."""
    cls = sample_indices(class_probs, shots, rng)
    out = np.empty(shots, dtype=np.int64)
    for s, cid in enumerate(cls):
        members = space.classes.member_indices(int(cid))
        out[s] = members[rng.integers(len(members))]
    return out
