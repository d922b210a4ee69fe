"""Command-line workbench: every pipeline stage as a seeded subcommand.

CSV is used for plot-bound series and JSON for structured records.  Every
output embeds (JSON) or sidecars (CSV: `<out>.config.json`) the resolved run
configuration and seed, so any artifact can be regenerated byte-identically.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click
import numpy as np

from . import __version__
from .circuits import build_oracle, export_text, extract_diagonal, to_json as circuit_json
from .engine import amplify_class_probs, grover_iterations, run_amplification
from .errors import AmpboostError
from .estimator import estimate_ps, sample_costs, table1_experiment
from .hybrid import (
    Exists,
    HybridConfig,
    hybrid_solve,
    simulated_experiment,
    subset_sum_query,
)
from .problems import (
    COLORING,
    GRAPH_QUBO,
    LINEAR_QUBO,
    MAXCUT,
    SUBSET_SUM,
    Problem,
    evaluate_cost,
    generate_linear_qubo,
    generate_random_graph,
    string_to_digits,
    subset_sum,
)
from .spectrum import enumerate_space, exact_ps, histogram, stats
from .sweep import correlation_points, fit_correlation, sweep as run_sweep


# -- plumbing --------------------------------------------------------------


def _load_problem(path: str) -> Problem:
    with open(path) as fh:
        return Problem.from_json(fh.read())


def _resolve_ps(spec: str, problem: Problem, space, seed: int) -> tuple[float, dict]:
    """p_s policy: 'exact' | 'sampled:M' | explicit float."""
    if spec == "exact":
        return exact_ps(space), {"policy": "exact"}
    if spec.startswith("sampled:"):
        m = int(spec.split(":", 1)[1])
        est = estimate_ps(sample_costs(problem, m, seed=seed), problem.n)
        return est.ps_t, {"policy": "sampled", "m": m}
    return float(spec), {"policy": "explicit"}


def _resolve_k(spec: str, d: int) -> int:
    return grover_iterations(d, 1) if spec == "kG" else int(spec)


def _parse_grid(spec: str) -> np.ndarray:
    lo, hi, steps = spec.split(":")
    return np.linspace(float(lo), float(hi), int(steps))


def _emit(config: dict, payload, out: str | None, fmt: str):
    """payload: dict for json, (header, rows) for csv."""
    if fmt == "json":
        text = json.dumps({"config": config, "result": payload}, indent=2) + "\n"
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)
        return
    header, rows = payload
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    body = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(body)
        with open(out + ".config.json", "w") as fh:
            json.dump(config, fh, indent=2)
    else:
        click.echo(body, nl=False)
        click.echo("# config: " + json.dumps(config), err=True)


def _fail(exc: AmpboostError):
    record = {"error": type(exc).__name__, "message": str(exc)}
    click.echo(json.dumps(record), err=True)
    sys.exit(1)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except AmpboostError as exc:
            _fail(exc)


@click.group(cls=_Group)
@click.version_option(__version__)
def main():
    """Amplitude-amplification workbench for QUBO-style cost landscapes."""


_seed = click.option("--seed", type=int, default=0, show_default=True)
_problem = click.option("--problem", "problem_path", required=True,
                        type=click.Path(exists=True, dir_okay=False))
_out = click.option("--out", type=click.Path(dir_okay=False), default=None)
_fmt = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                    default="csv", show_default=True)


# -- commands --------------------------------------------------------------


@main.command()
@click.option("--kind", type=click.Choice(
    [LINEAR_QUBO, GRAPH_QUBO, MAXCUT, COLORING, SUBSET_SUM]), required=True)
@click.option("--n", type=int, default=None)
@click.option("--edges", "m_edges", type=int, default=None,
              help="edge count for graph kinds")
@click.option("--weighted/--unweighted", default=True)
@click.option("--k-colors", type=int, default=2, show_default=True)
@click.option("--weights", default=None, help="comma list (subset_sum only)")
@click.option("--weight-lo", type=int, default=-100, show_default=True)
@click.option("--weight-hi", type=int, default=100, show_default=True)
@_seed
@_out
def gen(kind, n, m_edges, weighted, k_colors, weights, weight_lo, weight_hi, seed, out):
    """Generate a problem instance and emit its JSON."""
    if kind == SUBSET_SUM:
        if weights is None:
            raise click.UsageError("subset_sum requires --weights")
        problem = subset_sum(tuple(float(w) for w in weights.split(",")))
    elif kind == LINEAR_QUBO:
        if n is None:
            raise click.UsageError("--n is required")
        problem = generate_linear_qubo(n, weight_lo, weight_hi, seed=seed)
    else:
        if n is None:
            raise click.UsageError("--n is required")
        if m_edges is None:
            m_edges = 2 * n
        problem = generate_random_graph(
            n, m_edges, weighted=weighted, seed=seed, kind=kind,
            k_colors=k_colors, weight_lo=weight_lo, weight_hi=weight_hi,
        )
    text = problem.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command("eval")
@_problem
@click.argument("assignment")
def eval_cmd(problem_path, assignment):
    """Cost of one assignment, given as a digit string (digit 0 leftmost)."""
    problem = _load_problem(problem_path)
    cost = evaluate_cost(problem, string_to_digits(assignment))
    click.echo(f"{cost:g}")


@main.command("spectrum")
@_problem
@click.option("--bins", type=int, default=0, help="0 = unit-width integer bins")
@_out
@_fmt
def spectrum_cmd(problem_path, bins, out, fmt):
    """Full-enumeration statistics and cost histogram."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem)
    ps = exact_ps(space)
    st = stats(space, ps)
    edges, counts = (
        histogram(space, unit=True) if bins == 0 else histogram(space, bins=bins)
    )
    config = {"command": "spectrum", "problem": problem.to_dict(), "bins": bins}
    summary = {
        "d": space.d, "c_min": space.c_min, "c_max": space.c_max,
        "mu": st.mu, "sigma": st.sigma, "x_delta": st.x_delta, "ps_exact": ps,
        "degeneracy_min": int(len(space.argmin_set)),
        "degeneracy_max": int(len(space.argmax_set)),
    }
    if fmt == "json":
        _emit(config, {"summary": summary,
                       "histogram": {"edges": edges.tolist(),
                                     "counts": counts.tolist()}}, out, fmt)
    else:
        rows = [(f"{lo:g}", f"{hi:g}", int(c))
                for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        config["summary"] = summary
        _emit(config, (("bin_lo", "bin_hi", "count"), rows), out, fmt)


@main.command()
@_problem
@click.option("--ps", "ps_spec", default="exact", show_default=True,
              help="exact | sampled:M | value")
@click.option("--k", "k_spec", default="kG", show_default=True)
@click.option("--top", type=int, default=10, show_default=True)
@_seed
@_out
@_fmt
def amplify(problem_path, ps_spec, k_spec, top, seed, out, fmt):
    """One amplification run; per-cost probability table, most probable first."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem)
    ps, ps_meta = _resolve_ps(ps_spec, problem, space, seed)
    k = _resolve_k(k_spec, space.d)
    class_probs = amplify_class_probs(space, ps, k)
    order = np.argsort(class_probs)[::-1][:top]
    classes = space.classes
    config = {"command": "amplify", "problem": problem.to_dict(), "seed": seed,
              "ps": ps, "ps_policy": ps_meta, "k": k}
    rows = [
        (f"{classes.values[c]:g}", int(classes.counts[c]),
         f"{class_probs[c] / classes.counts[c]:.12g}", f"{class_probs[c]:.12g}")
        for c in order
    ]
    if fmt == "json":
        _emit(config, {"rows": [
            {"cost": float(classes.values[c]), "degeneracy": int(classes.counts[c]),
             "per_state_prob": float(class_probs[c] / classes.counts[c]),
             "class_prob": float(class_probs[c])} for c in order]}, out, fmt)
    else:
        _emit(config, (("cost", "degeneracy", "per_state_prob", "class_prob"), rows),
              out, fmt)


@main.command("sweep")
@_problem
@click.option("--grid", "grid_spec", required=True, help="lo:hi:steps")
@click.option("--k", "k_spec", default="kG", show_default=True)
@click.option("--track", type=int, default=3, show_default=True,
              help="track the lowest-cost classes")
@click.option("--top-r", type=int, default=5, show_default=True)
@_out
@_fmt
def sweep_cmd(problem_path, grid_spec, k_spec, track, top_r, out, fmt):
    """Probability-vs-p_s series over a grid."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem)
    grid = _parse_grid(grid_spec)
    k = _resolve_k(k_spec, space.d)
    record = run_sweep(space, grid, k, track=track, top_r=top_r)
    config = {"command": "sweep", "problem": problem.to_dict(), "k": k,
              "grid": grid_spec, "track": track, "top_r": top_r}
    costs = sorted(record.tracked)
    header = ["ps", "cumulative_top_r"] + [f"p_cost_{c:g}" for c in costs]
    rows = [
        [f"{record.ps_grid[i]:.12g}", f"{record.cumulative_top_r[i]:.12g}"]
        + [f"{record.tracked[c][i]:.12g}" for c in costs]
        for i in range(len(record.ps_grid))
    ]
    if fmt == "json":
        _emit(config, {"ps": record.ps_grid.tolist(),
                       "cumulative_top_r": record.cumulative_top_r.tolist(),
                       "tracked": {f"{c:g}": record.tracked[c].tolist()
                                   for c in costs}}, out, fmt)
    else:
        _emit(config, (header, rows), out, fmt)


@main.command("peaks")
@_problem
@click.option("-r", "--count", "r", type=int, default=10, show_default=True)
@click.option("--direction", type=click.Choice(["min", "max"]), default="min",
              show_default=True)
@click.option("--k", "k_spec", default="kG", show_default=True)
@_out
@_fmt
def peaks_cmd(problem_path, r, direction, k_spec, out, fmt):
    """Peak locations for the r best costs, plus the cost-vs-p_s regression."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem)
    points = correlation_points(space, r, k_policy=k_spec, direction=direction)
    fit = fit_correlation([(p.ps_star, p.cost_value) for p in points])
    config = {"command": "peaks", "problem": problem.to_dict(), "r": r,
              "direction": direction, "k": k_spec}
    fit_summary = {
        "model": fit.model, "r_corr": fit.linear.r_corr,
        "slope": fit.linear.slope, "intercept": fit.linear.intercept,
        "adj_r2_linear": fit.adj_r2_linear,
        "adj_r2_quadratic": fit.adj_r2_quadratic,
    }
    if fmt == "json":
        _emit(config, {"points": [
            {"cost": p.cost_value, "ps_star": p.ps_star, "peak_prob": p.peak_prob,
             "degeneracy": p.degeneracy, "k": p.k_at_peak} for p in points],
            "fit": fit_summary}, out, fmt)
    else:
        config["fit"] = fit_summary
        rows = [(f"{p.cost_value:g}", f"{p.ps_star:.12g}", f"{p.peak_prob:.12g}",
                 p.degeneracy, p.k_at_peak) for p in points]
        _emit(config, (("cost", "ps_star", "peak_prob", "degeneracy", "k"), rows),
              out, fmt)


@main.command("estimate-ps")
@click.option("--problem", "problem_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m_spec", default="1000", show_default=True,
              help="sample count, or comma list with --table1")
@click.option("--table1", is_flag=True, help="run the trial battery instead")
@click.option("--n", type=int, default=18, show_default=True,
              help="qubit count for --table1")
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--qubos", type=int, default=100, show_default=True)
@_seed
@_out
@_fmt
def estimate_ps_cmd(problem_path, m_spec, table1, n, trials, qubos, seed, out, fmt):
    """Sampling-based p_s estimate, or the error-vs-M trial battery."""
    if table1:
        m_values = [int(x) for x in m_spec.split(",")]
        rows = table1_experiment(n, m_values, trials=trials, qubo_count=qubos,
                                 seed=seed)
        config = {"command": "estimate-ps", "table1": True, "n": n,
                  "m_values": m_values, "trials": trials, "qubos": qubos,
                  "seed": seed}
        if fmt == "json":
            _emit(config, {"rows": [vars(r) for r in rows]}, out, fmt)
        else:
            _emit(config, (("m", "mean_error", "std_error", "trials"),
                           [(r.m, f"{r.mean_error:.12g}", f"{r.std_error:.12g}",
                             r.trials) for r in rows]), out, fmt)
        return
    if problem_path is None:
        raise click.UsageError("--problem is required without --table1")
    problem = _load_problem(problem_path)
    m = int(m_spec)
    est = estimate_ps(sample_costs(problem, m, seed=seed), problem.n)
    config = {"command": "estimate-ps", "problem": problem.to_dict(), "m": m,
              "seed": seed}
    _emit(config, vars(est).copy(), out, "json")


@main.command("experiment")
@_problem
@click.option("--grid", "grid_spec", required=True, help="lo:hi:steps")
@click.option("--k", "k_spec", default="kG", show_default=True)
@click.option("--budget-per-point", type=int, required=True)
@click.option("--threshold", type=float, required=True)
@_seed
@_out
@_fmt
def experiment_cmd(problem_path, grid_spec, k_spec, budget_per_point, threshold,
                   seed, out, fmt):
    """Measurement campaign: t = budget/k shots at each grid p_s."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem)
    grid = _parse_grid(grid_spec)
    k = _resolve_k(k_spec, space.d)
    record = simulated_experiment(space, grid, k, budget_per_point, threshold,
                                  seed=seed)
    config = {"command": "experiment", "problem": problem.to_dict(), "k": k,
              "grid": grid_spec, "budget_per_point": budget_per_point,
              "threshold": threshold, "seed": seed}
    rows = [
        (f"{e.ps:.12g}", e.k, int(i), f"{c:g}", int(c < threshold))
        for e in record.entries for i, c in e.outcomes
    ]
    if fmt == "json":
        _emit(config, {"entries": [
            {"ps": e.ps, "k": e.k, "shots": e.shots_t,
             "outcomes": [{"index": i, "cost": c, "below": c < threshold}
                          for i, c in e.outcomes]} for e in record.entries]},
            out, fmt)
    else:
        _emit(config, (("ps", "k", "index", "cost", "below_threshold"), rows),
              out, fmt)


@main.command("hybrid")
@_problem
@click.option("--budget", type=int, default=300_000, show_default=True)
@click.option("--direction", type=click.Choice(["min", "max"]), default="min",
              show_default=True)
@click.option("--target", type=float, default=None,
              help="subset-sum existence query instead of optimization")
@_seed
@_out
def hybrid_cmd(problem_path, budget, direction, target, seed, out):
    """Full quantum-greedy solve (or subset-sum target query) with trace."""
    problem = _load_problem(problem_path)
    config = {"command": "hybrid", "problem": problem.to_dict(),
              "budget": budget, "direction": direction, "seed": seed,
              "target": target}
    if target is not None:
        result = subset_sum_query(problem, target, seed=seed)
        if isinstance(result, Exists):
            payload = {"verdict": "Exists",
                       "assignment": list(result.assignment),
                       "cost": result.cost}
        else:
            payload = {"verdict": "NotFoundEvidence", "trials": result.trials}
        _emit(config, payload, out, "json")
        return
    best, cost, trace = hybrid_solve(
        problem, budget, HybridConfig(direction=direction), seed=seed
    )
    payload = {
        "assignment": list(best), "cost": cost, "verdict": trace.verdict,
        "iterations_spent": trace.iterations_spent,
        "amplify_runs": trace.amplify_runs,
        "cost_evaluations": trace.cost_evaluations,
        "events": trace.to_json_events(),
    }
    _emit(config, payload, out, "json")


@main.command("circuit")
@_problem
@click.option("--ps", "ps_spec", default="1.0", show_default=True,
              help="exact | sampled:M | value")
@click.option("--format", "fmt", type=click.Choice(["qasm", "json"]),
              default="qasm", show_default=True)
@click.option("--verify", is_flag=True,
              help="check the circuit diagonal against the simulated phases")
@_seed
@_out
def circuit_cmd(problem_path, ps_spec, fmt, verify, seed, out):
    """Build the phase oracle; export OpenQASM or JSON; optionally verify."""
    problem = _load_problem(problem_path)
    space = enumerate_space(problem) if (verify or ps_spec == "exact") else None
    ps, _ = _resolve_ps(ps_spec, problem, space, seed)
    circ = build_oracle(problem, ps)
    text = export_text(circ) if fmt == "qasm" else circuit_json(circ) + "\n"
    if verify:
        diag = extract_diagonal(circ)
        ref = np.exp(1j * ps * (space.costs - space.costs[0]))
        err = float(np.max(np.abs(diag - ref)))
        click.echo(f"# max |diagonal - engine phase| = {err:.3e}", err=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    sys.exit(main())
