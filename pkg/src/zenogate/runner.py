"""Experiment orchestration: single runs, sweeps, and result emission.

`run` dispatches a validated Scenario to its engine and returns a
ResultRecord of plot-ready scalars; `sweep` repeats a scenario along one
axis and fits log-log convergence slopes; `emit` writes records as CSV or a
JSON document.  All computation is pure (nothing is written unless `emit`
is called) and deterministic for a fixed scenario and seed.
"""

from __future__ import annotations

import copy
import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import dissipative as dis
from . import zeno as zn
from .adiabatic import gauge_decompose, propagate_exact
from .errors import AxisMismatch, ValidationError
from .linalg import spectral_norm, state_fidelity, trace_distance
from .scenario import Scenario, scenario_from_dict
from .spectral import (
    FramePath,
    frame_path_analytic_three_level,
    frame_path_from_spectra,
    instantaneous_spectrum,
    three_level_eigenbasis,
    three_level_generators,
    three_level_hamiltonian,
    three_level_projectors,
)

CSV_COLUMNS = (
    "scenario_id", "engine", "axis", "axis_value", "p_N", "q_n", "fidelity",
    "phi_principal", "phi_expected", "distance", "trace_drift", "wall_ms",
)


@dataclass
class ResultRecord:
    """Scalar outcomes of one engine run (absent quantities stay None)."""

    scenario_id: str
    digest: str
    engine: str
    axis: str = ""
    axis_value: float | None = None
    p_N: float | None = None
    q_n: float | None = None
    fidelity: float | None = None
    phi_principal: float | None = None
    phi_expected: float | None = None
    distance: float | None = None
    trace_drift: float | None = None
    wall_ms: float | None = None

    def as_row(self, include_timing: bool = False) -> list:
        vals = {
            "scenario_id": self.scenario_id,
            "engine": self.engine,
            "axis": self.axis,
            "axis_value": self.axis_value,
            "p_N": self.p_N,
            "q_n": self.q_n,
            "fidelity": self.fidelity,
            "phi_principal": self.phi_principal,
            "phi_expected": self.phi_expected,
            "distance": self.distance,
            "trace_drift": self.trace_drift,
            "wall_ms": self.wall_ms if include_timing else None,
        }
        return [_format_value(vals[c]) for c in CSV_COLUMNS]


@dataclass
class SweepSummary:
    """Per-value records of a sweep plus fitted log-log slopes."""

    axis: str
    records: list
    slopes: dict = field(default_factory=dict)


def _format_value(v) -> str:
    if v is None or v == "":
        return "" if v is None else str(v)
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


# ---------------------------------------------------------------------------
# Context assembly
# ---------------------------------------------------------------------------

def _custom_h_of_t(samples):
    times = np.array([t for t, _ in samples], dtype=float)
    mats = np.stack([m for _, m in samples])

    def h(t):
        if t <= times[0]:
            return mats[0]
        if t >= times[-1]:
            return mats[-1]
        k = int(np.searchsorted(times, t, side="right")) - 1
        s = (t - times[k]) / (times[k + 1] - times[k])
        return (1.0 - s) * mats[k] + s * mats[k + 1]

    return h


def _three_level_h_of_t(path):
    # controls interpolate piecewise linearly in (a, b) between path samples
    times, a, b = path.times, path.a, path.b

    def h(t):
        return three_level_hamiltonian(np.interp(t, times, a), np.interp(t, times, b))

    return h


def _frames_for(scenario: Scenario, samples: int, duration: float | None = None):
    """(path, frames) on a uniform grid with the requested number of samples."""
    if scenario.model_type == "custom":
        h = _custom_h_of_t(scenario.model_hamiltonians)
        t_end = scenario.model_hamiltonians[-1][0] if duration is None else duration
        grid = np.linspace(0.0, t_end, samples)
        spectra = [instantaneous_spectrum(h(t), scenario.cluster_tol) for t in grid]
        return None, frame_path_from_spectra(grid, spectra)
    path = scenario.build_path(samples=samples, duration=duration)
    if scenario.control.mode == "wagon_wheel":
        theta0 = float(path.theta()[0])
        frames = zn.wagon_wheel_frames(
            scenario.control.hamiltonian, path.times, three_level_projectors(theta0)
        )
        return path, frames
    if scenario.frame_method == "analytic":
        return path, frame_path_analytic_three_level(path)
    spectra = [
        instantaneous_spectrum(three_level_hamiltonian(a, b), scenario.cluster_tol)
        for a, b in zip(path.a, path.b)
    ]
    return path, frame_path_from_spectra(path.times, spectra)


def _initial_vector(scenario: Scenario, path) -> np.ndarray:
    if scenario.initial_amplitudes is not None:
        return scenario.initial_amplitudes
    theta0 = float(path.theta()[0])
    ep, em, ez = three_level_eigenbasis(theta0)
    return {"E_plus": ep, "E_minus": em, "E_zero": ez}[scenario.initial_name]


def _expected_holonomy(scenario: Scenario, path) -> float | None:
    """Predicted unwrapped subspace rotation angle, when the model admits one."""
    if scenario.model_type != "three_level" or scenario.level != 0:
        return None
    if scenario.control.mode not in ("none", "alpha_frame") and scenario.engine != "adiabatic":
        return None
    theta = path.theta()
    alpha = scenario.control.alpha if scenario.control.mode == "alpha_frame" else 0.0
    if scenario.engine == "adiabatic":
        alpha = 0.0
    return float((1.0 - alpha) * (theta[-1] - theta[0]) / np.sqrt(2.0))


def _subspace_generator(scenario: Scenario, path):
    theta0 = float(path.theta()[0])
    return three_level_generators(theta0).subspace_generator


def _zeno_limit_gate(h0, frames: FramePath, level: int) -> np.ndarray:
    return zn.zeno_unitary(zn.zeno_hamiltonian(h0, frames, level))


def _full_zeno_unitary(h0, frames: FramePath) -> np.ndarray:
    u = np.eye(frames.dim, dtype=complex)
    for n in range(frames.nlevels):
        u = _zeno_limit_gate(h0, frames, n) @ u
    return u


# ---------------------------------------------------------------------------
# Engine runs
# ---------------------------------------------------------------------------

def _run_zeno(scenario: Scenario, record: ResultRecord):
    n = scenario.N
    path, frames = _frames_for(scenario, samples=n + 1)
    h0 = zn.control_hamiltonian(scenario.control, path)
    wt = frames.frames[-1]
    gate_limit = _zeno_limit_gate(h0, frames, scenario.level)

    if scenario.nonselective:
        psi0 = _initial_vector(scenario, path)
        rho0 = np.outer(psi0, psi0.conj())
        rho = zn.nonselective_zeno_evolution(h0, frames, n, rho0, scenario.substeps)
        uz = _full_zeno_unitary(h0, frames)
        dephased = zn.nonselective_step(rho0, frames.projectors0)
        pred = wt @ uz @ dephased @ uz.conj().T @ wt.conj().T
        record.distance = trace_distance(rho, pred)
        record.fidelity = state_fidelity(rho, pred)
        record.trace_drift = abs(float(np.trace(rho).real) - 1.0)
        return

    psi0 = _initial_vector(scenario, path)
    zr = zn.projected_evolution(h0, frames, scenario.level, n, psi0, scenario.substeps)
    record.p_N = zr.survival_probability
    p0 = frames.projectors0[scenario.level].matrix
    record.distance = spectral_norm(zr.final_operator - wt @ gate_limit @ p0)
    pred_state = wt @ (gate_limit @ psi0)
    record.fidelity = float(abs(pred_state.conj() @ zr.conditional_state) ** 2)
    if scenario.model_type == "three_level" and scenario.level == 0:
        gen = _subspace_generator(scenario, path)
        try:
            phi = zn.holonomy_angle(wt.conj().T @ zr.final_operator, gen, tol=scenario.holonomy_tol)
        except Exception:
            phi = None
        record.phi_principal = phi
        record.phi_expected = _expected_holonomy(scenario, path)


def _adiabatic_defaults(scenario: Scenario, duration: float) -> tuple[int, int]:
    steps = scenario.steps if scenario.steps is not None else max(1024, int(np.ceil(duration * 100)))
    samples = scenario.path_spec.get("samples") or 2049
    return steps, samples


def _run_adiabatic(scenario: Scenario, record: ResultRecord):
    if scenario.model_type == "custom":
        duration = scenario.model_hamiltonians[-1][0]
    else:
        duration = float(scenario.path_spec.get("duration", 1.0))
    steps, samples = _adiabatic_defaults(scenario, duration)
    path, frames = _frames_for(scenario, samples=samples)
    if scenario.model_type == "custom":
        h = _custom_h_of_t(scenario.model_hamiltonians)
        spectra = [instantaneous_spectrum(h(t), scenario.cluster_tol) for t in frames.times]
        energies = np.array([[e for e in s.energies] for s in spectra])
    else:
        h = _three_level_h_of_t(path)
        r = path.radius()
        energies = np.column_stack([np.zeros_like(r), 2.0 * r])

    result = propagate_exact(h, frames.times[-1], steps)
    decomp = gauge_decompose(result, frames, energies)
    psi0 = _initial_vector(scenario, path)
    p0 = frames.projectors0[scenario.level].matrix
    record.q_n = float(
        np.real(
            (decomp.gauge_evolution @ psi0).conj()
            @ ((np.eye(frames.dim) - p0) @ (decomp.gauge_evolution @ psi0))
        )
    )
    gate_limit = _zeno_limit_gate(None, frames, scenario.level)
    block = p0 @ decomp.gauge_evolution @ p0
    rank = frames.projectors0[scenario.level].rank
    record.fidelity = float(abs(np.trace(gate_limit.conj().T @ block)) ** 2 / rank**2)
    record.distance = spectral_norm(block - p0 @ gate_limit @ p0)
    if scenario.model_type == "three_level" and scenario.level == 0:
        gen = _subspace_generator(scenario, path)
        try:
            phi = zn.holonomy_angle(block, gen, tol=max(scenario.holonomy_tol, 10.0 * record.distance))
        except Exception:
            phi = None
        record.phi_principal = phi
        record.phi_expected = _expected_holonomy(scenario, path)


def _dissipative_defaults(scenario: Scenario, duration: float, gap_sq: float) -> int:
    if scenario.steps is not None:
        return scenario.steps
    stiff = int(np.ceil(scenario.gamma * gap_sq * duration / dis.STIFFNESS_BUDGET))
    return max(512, stiff)


def _run_dissipative(scenario: Scenario, record: ResultRecord):
    reference_samples = 4097
    path, frames = _frames_for(scenario, samples=reference_samples)
    duration = float(frames.times[-1])
    h0 = zn.control_hamiltonian(scenario.control, path)
    alphas = scenario.alphas or tuple(float(i) for i in range(frames.nlevels))

    if scenario.model_type == "three_level":
        times, av, bv = path.times, path.a, path.b

        def projectors_at(t):
            a = np.interp(t, times, av)
            b = np.interp(t, times, bv)
            p0, p1 = three_level_projectors(np.arctan2(b, a))
            return [p0.matrix, p1.matrix]
    else:
        projectors_at = dis.projectors_from_frames(frames)

    diss = dis.DissipatorSpec(gamma=scenario.gamma, alphas=alphas, projectors_at=projectors_at)
    steps = _dissipative_defaults(scenario, duration, diss.max_weight_gap_sq())
    psi0 = _initial_vector(scenario, path)
    rho0 = (
        np.outer(psi0, psi0.conj())
        if scenario.initial_amplitudes is not None or scenario.initial_name
        else np.eye(frames.dim) / frames.dim
    )
    traj = dis.integrate_master(h0, diss, rho0, duration, steps, store_every=steps)
    final = traj.final
    record.trace_drift = traj.trace_drift

    uz = _full_zeno_unitary(h0, frames)
    wt = frames.frames[-1]
    dephased = zn.nonselective_step(rho0, frames.projectors0)
    pred = wt @ uz @ dephased @ uz.conj().T @ wt.conj().T
    record.distance = trace_distance(final, pred)
    record.fidelity = state_fidelity(final, pred)


_ENGINES = {"zeno": _run_zeno, "adiabatic": _run_adiabatic, "dissipative": _run_dissipative}


def run(scenario: Scenario) -> ResultRecord:
    """Execute one scenario and return its result record (pure compute)."""
    record = ResultRecord(scenario_id=scenario.name, digest=scenario.digest, engine=scenario.engine)
    start = time.perf_counter()
    _ENGINES[scenario.engine](scenario, record)
    record.wall_ms = 1000.0 * (time.perf_counter() - start)
    return record


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

_AXES = {
    "N": ("zeno",),
    "gamma": ("dissipative",),
    "alpha": ("zeno",),
    "T": ("zeno", "adiabatic", "dissipative"),
    "steps": ("adiabatic", "dissipative"),
}


def _derive(scenario: Scenario, axis: str, value) -> Scenario:
    data = copy.deepcopy(scenario.raw)
    if axis == "N":
        data["N"] = int(value)
    elif axis == "gamma":
        data["gamma"] = float(value)
    elif axis == "alpha":
        data.setdefault("control", {})["alpha"] = float(value)
    elif axis == "steps":
        data["steps"] = int(value)
    elif axis == "T":
        base = data.setdefault("path", {}).get("duration", 1.0)
        data["path"]["duration"] = float(value)
        if scenario.steps is not None:
            data["steps"] = max(1, int(np.ceil(scenario.steps * float(value) / base)))
    return scenario_from_dict(data, source=f"<sweep {axis}={value}>")


def _loglog_slope(xs, ys) -> float | None:
    pts = [(x, y) for x, y in zip(xs, ys) if x is not None and y is not None and x > 0 and y > 0]
    if len(pts) < 2:
        return None
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    return float(np.polyfit(lx, ly, 1)[0])


def sweep(scenario: Scenario, axis: str, values) -> SweepSummary:
    """Run the scenario once per axis value; fit slopes on convergence axes."""
    if axis not in _AXES:
        raise AxisMismatch(f"unknown sweep axis {axis!r}")
    if scenario.engine not in _AXES[axis]:
        raise AxisMismatch(f"axis {axis!r} does not apply to the {scenario.engine} engine")
    if axis == "alpha" and scenario.control.mode != "alpha_frame":
        raise AxisMismatch("axis 'alpha' requires control.mode = alpha_frame")
    values = sorted(values)
    records = []
    for v in values:
        derived = _derive(scenario, axis, v)
        rec = run(derived)
        rec.axis = axis
        rec.axis_value = float(v)
        records.append(rec)
    slopes = {}
    xs = [r.axis_value for r in records]
    if axis == "N":
        slopes["survival_deficit"] = _loglog_slope(xs, [None if r.p_N is None else 1.0 - r.p_N for r in records])
        slopes["distance"] = _loglog_slope(xs, [r.distance for r in records])
    elif axis == "gamma":
        slopes["distance"] = _loglog_slope(xs, [r.distance for r in records])
    elif axis == "T":
        slopes["escape"] = _loglog_slope(xs, [r.q_n for r in records])
        slopes["distance"] = _loglog_slope(xs, [r.distance for r in records])
    return SweepSummary(axis=axis, records=records, slopes={k: v for k, v in slopes.items() if v is not None})


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def emit(records, out_path, fmt: str = "csv", include_timing: bool = False):
    """Write records to `out_path` as CSV or a JSON document.

    Output is byte-stable for identical inputs; measured wall time is
    emitted only when `include_timing` is set, because it would break that
    stability.  I/O failures propagate as the interpreter's OSError.
    """
    records = list(records)
    if fmt == "csv":
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in records:
                writer.writerow(rec.as_row(include_timing=include_timing))
    elif fmt in ("json", "json-like"):
        docs = []
        for rec in records:
            doc = {c: v for c, v in zip(CSV_COLUMNS, rec.as_row(include_timing=include_timing))}
            doc["digest"] = rec.digest
            docs.append(doc)
        with open(out_path, "w") as fh:
            json.dump(docs, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ValidationError(f"unknown emit format {fmt!r}")
