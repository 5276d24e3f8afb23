"""Iteration traces: run a method, record metrics, serialize to CSV.

Quadratic targets advance in the eigenbasis so the recorded Lyapunov values
keep full relative accuracy all the way down to underflow; full-space
iterates are reconstructed for output.  Objective targets use the literal
method updates via the gradient oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .lyapunov import LyapunovSeries, DEFAULT_TOLERANCE, per_coordinate_V, vector_V
from .methods import NAGGS, IterationState, MethodSpec, coefficient_arrays, step_general
from .problems import Objective, QuadraticProblem, evaluate

DIVERGENCE_THRESHOLD = 1e12


@dataclass
class Trace:
    """Recorded iterates and per-iterate metrics of one run.

    Row k holds iterate x_k; ``lyapunov[k]`` is defined from k = 2 on (NaN
    before that and on truncated rows).
    """

    iterates: np.ndarray
    objective_gap: np.ndarray
    distance: np.ndarray
    lyapunov: np.ndarray
    method: MethodSpec
    descriptor: dict = field(default_factory=dict)
    seed: Optional[int] = None
    diverged: bool = False

    def __len__(self) -> int:
        return self.iterates.shape[0]

    def lyapunov_series(self, tolerance: float = DEFAULT_TOLERANCE) -> LyapunovSeries:
        vals = self.lyapunov[2:]
        vals = vals[~np.isnan(vals)]
        if vals.shape[0] < 1:
            raise ValueError("trace too short for a Lyapunov series")
        return LyapunovSeries(values=vals, start_index=2, tolerance=tolerance)


def run_trace(target: Union[QuadraticProblem, Objective], spec: MethodSpec,
              x0: np.ndarray, iters: int, *, x1: Optional[np.ndarray] = None,
              v_floor: Optional[float] = None, seed: Optional[int] = None,
              divergence_threshold: float = DIVERGENCE_THRESHOLD) -> Trace:
    """Run ``iters`` recorded iterates (x0 included) and collect metrics.

    ``x1`` overrides the default equal start x_{-1} = x0 (under which the
    first step of every method is a plain gradient step).  ``v_floor`` stops
    the run once V drops below it, mirroring the measurement floor used by
    the showcase scenarios.  Divergence (distance beyond the threshold) stops
    the run and flags the trace instead of raising.
    """
    if iters < 3:
        raise ValueError("iters must be >= 3 so V is defined at least once")
    x0 = np.asarray(x0, dtype=float)
    if x1 is not None:
        x1 = np.asarray(x1, dtype=float)
        if x1.shape != x0.shape:
            raise ValueError("x1 must match x0's dimension")
    if isinstance(target, QuadraticProblem):
        return _run_quadratic(target, spec, x0, iters, x1, v_floor, seed,
                              divergence_threshold)
    return _run_objective(target, spec, x0, iters, x1, v_floor, seed,
                          divergence_threshold)


def _descriptor(target, spec: MethodSpec) -> dict:
    d = {"method": spec.kind, "alpha": spec.alpha, "beta": spec.beta,
         "gamma": spec.gamma, "dim": target.dim}
    if target.mu is not None:
        d["mu"] = target.mu
    if getattr(target, "lipschitz", None) is not None:
        d["L"] = target.lipschitz
    d["kind"] = "quadratic" if isinstance(target, QuadraticProblem) else "objective"
    return d


def _run_quadratic(p: QuadraticProblem, spec: MethodSpec, x0, iters, x1,
                   v_floor, seed, divergence_threshold) -> Trace:
    if x0.shape != (p.dim,):
        raise ValueError("x0 has wrong dimension")
    a, b = coefficient_arrays(spec, p.eigvals)
    q, xs, lam = p.eigvecs, p.minimizer, p.eigvals

    cur = q.T @ (x0 - xs)
    rows = [cur]
    if x1 is not None:
        prev = cur
        cur = q.T @ (x1 - xs)
        rows.append(cur)
    else:
        prev = cur

    gaps, dists, lyap = [], [], []

    def push_metrics(xhat) -> bool:
        gaps.append(0.5 * float(np.sum(lam * xhat * xhat)))
        dists.append(float(np.linalg.norm(xhat)))
        k = len(gaps) - 1
        if k >= 2:
            lyap.append(float(np.sum(per_coordinate_V(rows[k], rows[k - 1], rows[k - 2]))))
        else:
            lyap.append(math.nan)
        return dists[-1] > divergence_threshold

    stop = False
    for r in rows:
        stop = push_metrics(r) or stop
    diverged = stop
    while not stop and len(rows) < iters:
        cur, prev = a * cur + b * prev, cur
        if not np.all(np.isfinite(cur)):
            raise ValueError("non-finite iterate produced")
        rows.append(cur)
        if push_metrics(cur):
            diverged = True
            break
        if v_floor is not None and not math.isnan(lyap[-1]) and lyap[-1] < v_floor:
            break

    xhat = np.vstack(rows)
    iterates = xhat @ q.T + xs
    return Trace(
        iterates=iterates,
        objective_gap=np.array(gaps),
        distance=np.array(dists),
        lyapunov=np.array(lyap),
        method=spec,
        descriptor=_descriptor(p, spec),
        seed=seed,
        diverged=diverged,
    )


def _run_objective(obj: Objective, spec: MethodSpec, x0, iters, x1,
                   v_floor, seed, divergence_threshold) -> Trace:
    if obj.minimizer is None:
        raise ValueError("objective needs a known minimizer to compute metrics")
    if x0.shape != (obj.dim,):
        raise ValueError("x0 has wrong dimension")
    xs = np.asarray(obj.minimizer, dtype=float)
    f_star = float(obj.value(xs))

    if x1 is not None:
        aux = None
        if spec.kind == NAGGS:
            if spec.beta == 1.0:
                raise ValueError("cannot reconstruct NAG-GS auxiliary state for beta = 1")
            aux = (x1 - spec.beta * x0) / (1.0 - spec.beta)
        state = IterationState(current=x1, previous=x0, auxiliary=aux)
        rows = [x0, x1]
    else:
        aux = x0 if spec.kind == NAGGS else None
        state = IterationState(current=x0, previous=x0, auxiliary=aux)
        rows = [x0]

    gaps, dists, lyap = [], [], []

    def push_metrics(x) -> bool:
        val = float(obj.value(x))
        if not math.isfinite(val):
            raise ValueError("non-finite objective value from the oracle")
        gaps.append(val - f_star)
        dists.append(float(np.linalg.norm(x - xs)))
        k = len(gaps) - 1
        if k >= 2:
            lyap.append(vector_V(rows[k], rows[k - 1], rows[k - 2], xs))
        else:
            lyap.append(math.nan)
        return dists[-1] > divergence_threshold

    stop = False
    for r in rows:
        stop = push_metrics(r) or stop
    diverged = stop
    while not stop and len(rows) < iters:
        state = step_general(obj, spec, state)
        if not np.all(np.isfinite(state.current)):
            raise ValueError("non-finite iterate from the gradient oracle")
        rows.append(state.current)
        if push_metrics(state.current):
            diverged = True
            break
        if v_floor is not None and not math.isnan(lyap[-1]) and lyap[-1] < v_floor:
            break

    return Trace(
        iterates=np.vstack(rows),
        objective_gap=np.array(gaps),
        distance=np.array(dists),
        lyapunov=np.array(lyap),
        method=spec,
        descriptor=_descriptor(obj, spec),
        seed=seed,
        diverged=diverged,
    )


def export_csv(trace: Trace, path) -> None:
    """Write ``iter,objective_gap,distance,lyapunov`` rows, 17 significant
    digits, LF line endings; the lyapunov cell is empty where undefined."""
    lines = ["iter,objective_gap,distance,lyapunov"]
    for k in range(len(trace)):
        v = trace.lyapunov[k]
        cell = "" if math.isnan(v) else f"{v:.17g}"
        lines.append(f"{k},{trace.objective_gap[k]:.17g},{trace.distance[k]:.17g},{cell}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path) -> dict:
    """Parse a trace CSV back into metric arrays (lyapunov NaN where empty)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split(",")
    if header != ["iter", "objective_gap", "distance", "lyapunov"]:
        raise ValueError("not a trace CSV")
    gaps, dists, lyap = [], [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise ValueError("malformed trace row")
        gaps.append(float(parts[1]))
        dists.append(float(parts[2]))
        lyap.append(float(parts[3]) if parts[3] else math.nan)
    return {
        "objective_gap": np.array(gaps),
        "distance": np.array(dists),
        "lyapunov": np.array(lyap),
    }


def series_from_csv(path, tolerance: float = DEFAULT_TOLERANCE) -> LyapunovSeries:
    """Rebuild the Lyapunov series of an exported trace."""
    data = read_trace_csv(path)
    vals = data["lyapunov"]
    defined = np.where(~np.isnan(vals))[0]
    if defined.shape[0] < 1:
        raise ValueError("trace CSV holds no Lyapunov values")
    start = int(defined[0])
    return LyapunovSeries(values=vals[defined], start_index=start, tolerance=tolerance)
