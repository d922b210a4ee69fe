"""Gate-level cost oracles and their verification bridge.

Oracles are built from phase gates only (P, CP, and an X-conjugated CP
gadget for the cut term), so their net unitary is diagonal.  The gate set
maps basis states to basis states, which lets extract_diagonal track a
(permutation, phase) pair instead of simulating full matrices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import CircuitError
from .problems import LINEAR_QUBO, GRAPH_QUBO, MAXCUT, SUBSET_SUM, Problem

_ONE_QUBIT = {"h", "x", "p"}
_TWO_QUBIT = {"cp", "xxphase"}
EXTRACT_CAP_QUBITS = 12


@dataclass(frozen=True)
class Gate:
    kind: str  # h | x | p | cp | xxphase
    qubits: tuple[int, ...]
    theta: float = 0.0

    def __post_init__(self):
        if self.kind in _ONE_QUBIT and len(self.qubits) != 1:
            raise CircuitError(f"{self.kind} takes one qubit")
        if self.kind in _TWO_QUBIT and len(self.qubits) != 2:
            raise CircuitError(f"{self.kind} takes two qubits")
        if self.kind not in _ONE_QUBIT | _TWO_QUBIT:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated operand in {self.qubits}")


@dataclass(frozen=True)
class CircuitIR:
    n_qubits: int
    gates: tuple[Gate, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for g in self.gates:
            if any(not (0 <= q < self.n_qubits) for q in g.qubits):
                raise CircuitError(f"gate {g} outside register of {self.n_qubits}")


# -- builders --------------------------------------------------------------


def build_qubo_oracle(problem: Problem, p_s: float) -> CircuitIR:
    """One P(W_i * p_s) per node and one CP(w_ij * p_s) per edge."""
    if problem.kind not in (LINEAR_QUBO, GRAPH_QUBO):
        raise CircuitError(f"expected a QUBO kind, got {problem.kind}")
    gates = [Gate("p", (i,), w * p_s) for i, w in enumerate(problem.node_weights)]
    gates += [Gate("cp", (i, j), w * p_s) for i, j, w in problem.edges]
    return CircuitIR(problem.n, tuple(gates), {"kind": problem.kind, "p_s": p_s})


def build_maxcut_oracle(problem: Problem, p_s: float) -> CircuitIR:
    """One two-qubit cut gadget per edge: diag(1, e^{i\\theta}, e^{i\\theta}, 1)."""
    if problem.kind != MAXCUT:
        raise CircuitError(f"expected a maxcut problem, got {problem.kind}")
    gates = [Gate("xxphase", (i, j), w * p_s) for i, j, w in problem.edges]
    return CircuitIR(problem.n, tuple(gates), {"kind": problem.kind, "p_s": p_s})


def build_subset_sum_oracle(problem: Problem, p_s: float) -> CircuitIR:
    """Depth-1 oracle: a single P gate per qubit, no two-qubit gates."""
    if problem.kind != SUBSET_SUM:
        raise CircuitError(f"expected a subset_sum problem, got {problem.kind}")
    gates = [Gate("p", (i,), w * p_s) for i, w in enumerate(problem.node_weights)]
    return CircuitIR(problem.n, tuple(gates), {"kind": problem.kind, "p_s": p_s})


_BUILDERS = {
    LINEAR_QUBO: build_qubo_oracle,
    GRAPH_QUBO: build_qubo_oracle,
    MAXCUT: build_maxcut_oracle,
    SUBSET_SUM: build_subset_sum_oracle,
}


def build_oracle(problem: Problem, p_s: float) -> CircuitIR:
    builder = _BUILDERS.get(problem.kind)
    if builder is None:
        raise CircuitError(
            f"no circuit builder for kind {problem.kind!r}; d-ary problems are "
            "simulated directly by the engine instead"
        )
    return builder(problem, p_s)


def expand_gadgets(circuit: CircuitIR) -> CircuitIR:
    """Rewrite each cut gadget as X/CP primitives:
    (X_a CP X_a)(X_b CP X_b) = diag(1, e^{i\\theta}, e^{i\\theta}, 1)."""
    gates = []
    for g in circuit.gates:
        if g.kind == "xxphase":
            a, b = g.qubits
            gates += [
                Gate("x", (a,)), Gate("cp", (a, b), g.theta), Gate("x", (a,)),
                Gate("x", (b,)), Gate("cp", (a, b), g.theta), Gate("x", (b,)),
            ]
        else:
            gates.append(g)
    return CircuitIR(circuit.n_qubits, tuple(gates), dict(circuit.metadata))


def gadget_unitary(theta: float) -> np.ndarray:
    """4x4 unitary of the expanded cut gadget (basis order 00,01,10,11)."""
    x_a = np.kron([[0, 1], [1, 0]], np.eye(2))
    x_b = np.kron(np.eye(2), [[0, 1], [1, 0]])
    cp = np.diag([1, 1, 1, np.exp(1j * theta)])
    return x_b @ cp @ x_b @ x_a @ cp @ x_a


# -- diagonal extraction ---------------------------------------------------


def extract_diagonal(circuit: CircuitIR, cap_qubits: int = EXTRACT_CAP_QUBITS) -> np.ndarray:
    """Per-basis-state phase factors, normalized so index 0 has phase 1.

    Tracks how each generalized-permutation gate maps (index, phase) pairs;
    errors if the circuit contains H or fails to return to the identity
    permutation (net action not diagonal).  Qubit q acts on index bit
    (n-1-q): qubit 0 is the most significant bit.
    """
    n = circuit.n_qubits
    if n > cap_qubits:
        raise CircuitError(f"extraction capped at {cap_qubits} qubits, got {n}")
    d = 1 << n
    perm = np.arange(d, dtype=np.int64)
    phase = np.zeros(d, dtype=np.float64)

    def bit(q):
        return 1 << (n - 1 - q)

    for g in circuit.gates:
        if g.kind == "h":
            raise CircuitError("circuit contains H: net action is not diagonal")
        if g.kind == "x":
            perm ^= bit(g.qubits[0])
        elif g.kind == "p":
            phase += np.where(perm & bit(g.qubits[0]), g.theta, 0.0)
        elif g.kind == "cp":
            mask = bit(g.qubits[0]) | bit(g.qubits[1])
            phase += np.where((perm & mask) == mask, g.theta, 0.0)
        elif g.kind == "xxphase":
            ba, bb = bit(g.qubits[0]), bit(g.qubits[1])
            mask = ba | bb
            hit = ((perm & mask) == ba) | ((perm & mask) == bb)
            phase += np.where(hit, g.theta, 0.0)
    if not np.array_equal(perm, np.arange(d)):
        raise CircuitError("net action is not diagonal (unbalanced X gates)")
    return np.exp(1j * (phase - phase[0]))


# -- text export -----------------------------------------------------------

_QASM_GATE = {"h": "h", "x": "x", "p": "u1", "cp": "cu1"}


def export_text(circuit: CircuitIR) -> str:
    """OpenQASM 2.0 text; cut gadgets are expanded to X/CP primitives."""
    circuit = expand_gadgets(circuit)
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{circuit.n_qubits}];" if circuit.n_qubits else "qreg q[1];",
    ]
    for g in circuit.gates:
        name = _QASM_GATE[g.kind]
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind in ("p", "cp"):
            lines.append(f"{name}({g.theta!r}) {ops};")
        else:
            lines.append(f"{name} {ops};")
    return "\n".join(lines) + "\n"


_LINE = re.compile(
    r"^\s*(?P<name>[a-z0-9]+)\s*(?:\((?P<theta>[^)]*)\))?\s*(?P<ops>[^;]*);\s*$"
)


def parse_text(text: str) -> CircuitIR:
    """Parse the subset of OpenQASM 2.0 that export_text emits."""
    n_qubits = 0
    gates = []
    name_map = {v: k for k, v in _QASM_GATE.items()}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith(("OPENQASM", "include", "//")):
            continue
        m = _LINE.match(line)
        if m is None:
            raise CircuitError(f"cannot parse line: {raw!r}")
        name = m.group("name")
        ops = [int(x) for x in re.findall(r"q\[(\d+)\]", m.group("ops"))]
        if name == "qreg":
            n_qubits = int(re.search(r"\[(\d+)\]", line).group(1))
            continue
        if name not in name_map:
            raise CircuitError(f"unsupported gate {name!r}")
        theta = float(m.group("theta")) if m.group("theta") else 0.0
        gates.append(Gate(name_map[name], tuple(ops), theta))
    return CircuitIR(n_qubits, tuple(gates))


def to_json(circuit: CircuitIR) -> str:
    return json.dumps(
        {
            "n_qubits": circuit.n_qubits,
            "gates": [
                {"kind": g.kind, "qubits": list(g.qubits), "theta": g.theta}
                for g in circuit.gates
            ],
            "metadata": circuit.metadata,
        }
    )


def from_json(text: str) -> CircuitIR:
    d = json.loads(text)
    gates = tuple(
        Gate(g["kind"], tuple(g["qubits"]), g.get("theta", 0.0)) for g in d["gates"]
    )
    return CircuitIR(int(d["n_qubits"]), gates, d.get("metadata", {}))
