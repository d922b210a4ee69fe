"""Cost-function families: linear/graph QUBO, Max-Cut, k-coloring, subset sum.

A problem is an immutable weighted (hyper)graph plus a kind tag that selects
the evaluation rule.  Assignments are digit sequences (binary except for
coloring); digit 0 is the most significant digit of the flat index, so the
printed string "1101" corresponds to flat index 13 for n=4.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._rng import substream
from .errors import InvalidAssignmentError, InvalidProblemError

LINEAR_QUBO = "linear_qubo"
GRAPH_QUBO = "graph_qubo"
MAXCUT = "maxcut"
COLORING = "coloring"
SUBSET_SUM = "subset_sum"

KINDS = (LINEAR_QUBO, GRAPH_QUBO, MAXCUT, COLORING, SUBSET_SUM)

#: kinds whose cost function uses the QUBO rule sum(W_i x_i) + sum(w_ij x_i x_j)
_QUBO_KINDS = (LINEAR_QUBO, GRAPH_QUBO)


@dataclass(frozen=True)
class Problem:
    kind: str
    n: int
    node_weights: tuple[float, ...] = ()
    edges: tuple[tuple[int, int, float], ...] = ()
    k_colors: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidProblemError(f"unknown problem kind: {self.kind!r}")
        if self.n < 1:
            raise InvalidProblemError(f"need at least one node, got n={self.n}")
        if self.kind == COLORING and self.k_colors < 2:
            raise InvalidProblemError(f"k_colors must be >= 2, got {self.k_colors}")

        weights = tuple(float(w) for w in self.node_weights)
        if not weights:
            weights = (0.0,) * self.n
        if len(weights) != self.n:
            raise InvalidProblemError(
                f"node_weights length {len(weights)} != n={self.n}"
            )
        object.__setattr__(self, "node_weights", weights)

        seen = set()
        edges = []
        for i, j, w in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidProblemError(f"self-loop on node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidProblemError(f"edge ({i},{j}) out of range for n={self.n}")
            pair = (min(i, j), max(i, j))
            if pair in seen:
                raise InvalidProblemError(f"duplicate edge {pair}")
            seen.add(pair)
            edges.append((pair[0], pair[1], float(w)))
        object.__setattr__(self, "edges", tuple(edges))

        if self.kind == LINEAR_QUBO:
            expected = {(i, i + 1) for i in range(self.n - 1)}
            if {(i, j) for i, j, _ in self.edges} != expected:
                raise InvalidProblemError("linear QUBO must have exactly the chain edges")
        if self.kind in (MAXCUT, COLORING) and any(w != 0.0 for w in self.node_weights):
            raise InvalidProblemError(f"{self.kind} problems carry no node weights")
        if self.kind == SUBSET_SUM and self.edges:
            raise InvalidProblemError("subset sum problems have no edges")

    @property
    def radix(self) -> int:
        return self.k_colors if self.kind == COLORING else 2

    @property
    def d_total(self) -> int:
        """Total assignment count D = radix**n."""
        return self.radix**self.n

    # -- JSON round trip ---------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "n": self.n,
            "node_weights": list(self.node_weights),
            "edges": [[i, j, w] for i, j, w in self.edges],
        }
        if self.kind == COLORING:
            d["k_colors"] = self.k_colors
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "Problem":
        return cls(
            kind=d["kind"],
            n=int(d["n"]),
            node_weights=tuple(d.get("node_weights") or ()),
            edges=tuple((e[0], e[1], e[2]) for e in d.get("edges") or ()),
            k_colors=int(d.get("k_colors", 2)),
        )

    @classmethod
    def from_json(cls, text: str) -> "Problem":
        return cls.from_dict(json.loads(text))


# -- factories -------------------------------------------------------------


def linear_qubo(node_weights: Sequence[float], edge_weights: Sequence[float]) -> Problem:
    n = len(node_weights)
    if len(edge_weights) != n - 1:
        raise InvalidProblemError("linear QUBO needs n-1 edge weights")
    edges = tuple((i, i + 1, w) for i, w in enumerate(edge_weights))
    return Problem(LINEAR_QUBO, n, tuple(node_weights), edges)


def subset_sum(weights: Sequence[float]) -> Problem:
    return Problem(SUBSET_SUM, len(weights), tuple(weights))


def maxcut(n: int, edges: Iterable[tuple[int, int, float]]) -> Problem:
    return Problem(MAXCUT, n, edges=tuple(edges))


def coloring(n: int, edges: Iterable[tuple[int, int, float]], k_colors: int) -> Problem:
    return Problem(COLORING, n, edges=tuple(edges), k_colors=k_colors)


# -- assignments -----------------------------------------------------------


def check_assignment(problem: Problem, digits: Sequence[int]) -> None:
    if len(digits) != problem.n:
        raise InvalidAssignmentError(
            f"assignment length {len(digits)} != n={problem.n}"
        )
    r = problem.radix
    for d in digits:
        if not (0 <= int(d) < r):
            raise InvalidAssignmentError(f"digit {d} outside radix {r}")


def index_of(problem: Problem, digits: Sequence[int]) -> int:
    """Flat index of an assignment; digit 0 is most significant."""
    check_assignment(problem, digits)
    idx = 0
    for d in digits:
        idx = idx * problem.radix + int(d)
    return idx


def digits_of(problem: Problem, index: int) -> tuple[int, ...]:
    if not (0 <= index < problem.d_total):
        raise InvalidAssignmentError(f"flat index {index} outside [0, {problem.d_total})")
    out = []
    for _ in range(problem.n):
        out.append(index % problem.radix)
        index //= problem.radix
    return tuple(reversed(out))


def digits_to_string(digits: Sequence[int]) -> str:
    return "".join(str(int(d)) for d in digits)


def string_to_digits(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


# -- evaluation ------------------------------------------------------------


def evaluate_cost(problem: Problem, digits: Sequence[int]) -> float:
    """Evaluate the problem's cost function on one assignment."""
    check_assignment(problem, digits)
    x = [int(d) for d in digits]
    if problem.kind in _QUBO_KINDS:
        total = sum(w * xi for w, xi in zip(problem.node_weights, x))
        total += sum(w * x[i] * x[j] for i, j, w in problem.edges)
        return float(total)
    if problem.kind == MAXCUT:
        return float(sum(w for i, j, w in problem.edges if x[i] != x[j]))
    if problem.kind == COLORING:
        return float(sum(w for i, j, w in problem.edges if x[i] == x[j]))
    # subset sum
    return float(sum(w * xi for w, xi in zip(problem.node_weights, x)))


def _digit_columns(problem: Problem, indices: np.ndarray) -> list[np.ndarray]:
    """Per-node digit vectors for an array of flat indices."""
    n, r = problem.n, problem.radix
    cols = []
    if r == 2:
        for i in range(n):
            cols.append((indices >> (n - 1 - i)) & 1)
    else:
        for i in range(n):
            cols.append((indices // r ** (n - 1 - i)) % r)
    return cols


def evaluate_indices(problem: Problem, indices: np.ndarray) -> np.ndarray:
    """Vectorized cost evaluation for an array of flat indices."""
    indices = np.asarray(indices, dtype=np.int64)
    cols = _digit_columns(problem, indices)
    costs = np.zeros(indices.shape, dtype=np.float64)
    if problem.kind in (LINEAR_QUBO, GRAPH_QUBO, SUBSET_SUM):
        for w, col in zip(problem.node_weights, cols):
            if w != 0.0:
                costs += w * col
    if problem.kind in _QUBO_KINDS:
        for i, j, w in problem.edges:
            if w != 0.0:
                costs += w * (cols[i] * cols[j])
    elif problem.kind == MAXCUT:
        for i, j, w in problem.edges:
            costs += w * (cols[i] != cols[j])
    elif problem.kind == COLORING:
        for i, j, w in problem.edges:
            costs += w * (cols[i] == cols[j])
    return costs


# -- generators ------------------------------------------------------------


def generate_linear_qubo(
    n: int, weight_lo: int = -100, weight_hi: int = 100, seed: int = 0
) -> Problem:
    """Random chain QUBO with i.i.d. uniform integer weights (inclusive range)."""
    if n < 2:
        raise InvalidProblemError(f"linear QUBO needs n >= 2, got {n}")
    if weight_lo >= weight_hi:
        raise InvalidProblemError("weight_lo must be < weight_hi")
    rng = substream(seed, "problem")
    nodes = rng.integers(weight_lo, weight_hi + 1, size=n)
    links = rng.integers(weight_lo, weight_hi + 1, size=n - 1)
    return linear_qubo([float(w) for w in nodes], [float(w) for w in links])


def generate_random_graph(
    n: int,
    m_edges: int,
    weighted: bool = False,
    seed: int = 0,
    kind: str = MAXCUT,
    k_colors: int = 2,
    weight_lo: int = -100,
    weight_hi: int = 100,
) -> Problem:
    """Simple graph with m_edges distinct pairs drawn uniformly without replacement."""
    max_edges = n * (n - 1) // 2
    if not (0 <= m_edges <= max_edges):
        raise InvalidProblemError(f"m_edges={m_edges} outside [0, {max_edges}] for n={n}")
    rng = substream(seed, "problem")
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = rng.choice(len(all_pairs), size=m_edges, replace=False)
    pairs = sorted(all_pairs[k] for k in chosen)
    if weighted:
        ws = rng.integers(weight_lo, weight_hi + 1, size=m_edges)
        edges = tuple((i, j, float(w)) for (i, j), w in zip(pairs, ws))
    else:
        edges = tuple((i, j, 1.0) for i, j in pairs)
    node_weights: tuple[float, ...] = ()
    if kind == GRAPH_QUBO:
        nodes = rng.integers(weight_lo, weight_hi + 1, size=n)
        node_weights = tuple(float(w) for w in nodes)
    return Problem(kind, n, node_weights, edges, k_colors=k_colors)
