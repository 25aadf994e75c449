"""Scenario files: schema, parsing, validation.

A scenario is a YAML document (flat keys with nested sections) declaring the
model, control path, engine, and numerical knobs of one experiment.  Unknown
keys are rejected outright (ParseError) because a silently ignored typo can
poison a whole physics sweep; constraint violations raise ValidationError
naming the offending field.

Schema (defaults in parentheses)::

    name: str                     # optional identifier; defaults to digest prefix
    engine: adiabatic | zeno | dissipative
    model:
      type: three_level | custom  (three_level)
      hamiltonians:               # custom only: sampled H(t), linearly interpolated
        - {t: 0.0, matrix: [[...], ...]}
    path:
      type: circle | polyline | samples   (circle)
      center: [a, b]              ([0, 0])
      radius: r                   (1.0)
      windings: m                 (1)   # signed loops around the origin; 0 if not enclosing
      duration: T                 (1.0)
      samples: K                  (engine-dependent)
      points: [[a, b], ...]       # polyline corners
      times/a/b: [...]            # explicit samples
    control:
      mode: none | alpha_frame | wagon_wheel | custom   (none)
      alpha: x                    # alpha_frame strength
      hamiltonian: [[...], ...]   # constant matrix for wagon_wheel/custom
    N: 4096                       # zeno: number of measurements
    substeps: 1                   # zeno: propagator substeps per interval
    steps: int                    # integrator steps (engine-dependent default)
    gamma: rate                   # dissipative
    alphas: [0.0, 1.0, ...]       # dissipative dephasing weights (0..nlevels-1)
    initial_state:
      name: E_plus | E_minus | E_zero   # three_level eigenvectors at the path start
      amplitudes: [...]                 # or explicit amplitudes
    level: 0                      # eigenspace index followed by the run
    seed: 0                       # affects randomized probes only, never the physics
    nonselective: false           # zeno: evolve a density matrix, outcomes unread
    frame_method: analytic | tracked    (analytic for three_level, tracked for custom)
    runtime_budget_s: float       # optional declared runtime bound
    tolerances:
      cluster: 1e-8
      holonomy: 1e-2

Matrix entries are real numbers or two-element ``[re, im]`` lists.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import CriticalPoint, ParseError, ValidationError
from .spectral import ParameterPath, circle_path, polyline_path, winding_number
from .zeno import ControlConfig

ENGINES = ("adiabatic", "zeno", "dissipative")
NAMED_STATES = ("E_plus", "E_minus", "E_zero")

_TOP_KEYS = {
    "name", "engine", "model", "path", "control", "N", "substeps", "steps",
    "gamma", "alphas", "initial_state", "level", "seed", "nonselective",
    "frame_method", "runtime_budget_s", "tolerances",
}
_SECTION_KEYS = {
    "model": {"type", "hamiltonians"},
    "path": {"type", "center", "radius", "windings", "duration", "samples", "points", "times", "a", "b"},
    "control": {"mode", "alpha", "hamiltonian"},
    "initial_state": {"name", "amplitudes"},
    "tolerances": {"cluster", "holonomy"},
}


def _reject_unknown(section: dict, allowed: set, where: str):
    for key in section:
        if key not in allowed:
            raise ParseError(f"unknown key {key!r} in {where}")


def _parse_entry(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ParseError(f"matrix entry in {where} must be a number or [re, im], got {value!r}")


def parse_matrix(rows, where: str) -> np.ndarray:
    try:
        m = np.array([[_parse_entry(v, where) for v in row] for row in rows], dtype=complex)
    except (TypeError, ParseError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{where} is not a matrix (list of rows)") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{where} must be square, got shape {m.shape}")
    return m


def scenario_digest(data: dict) -> str:
    """Content hash of a scenario document, stable under key reordering."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class Scenario:
    """Validated scenario ready for the runner."""

    engine: str
    name: str
    digest: str
    model_type: str = "three_level"
    model_hamiltonians: list = field(default_factory=list)  # [(t, matrix), ...]
    path_spec: dict = field(default_factory=dict)
    control: ControlConfig = field(default_factory=ControlConfig)
    N: int = 4096
    substeps: int = 1
    steps: int | None = None
    gamma: float | None = None
    alphas: tuple | None = None
    initial_name: str | None = None
    initial_amplitudes: np.ndarray | None = None
    level: int = 0
    seed: int = 0
    nonselective: bool = False
    frame_method: str = "analytic"
    runtime_budget_s: float | None = None
    cluster_tol: float = 1e-8
    holonomy_tol: float = 1e-2
    raw: dict = field(default_factory=dict)

    def build_path(self, samples: int | None = None, duration: float | None = None) -> ParameterPath:
        """Materialize the declared parameter path, optionally resampled/rescaled."""
        spec = dict(self.path_spec)
        if samples is not None:
            spec["samples"] = samples
        if duration is not None:
            spec["duration"] = duration
        kind = spec["type"]
        if kind == "circle":
            return circle_path(
                center=spec["center"], radius=spec["radius"], windings=spec["windings"],
                duration=spec["duration"], samples=spec["samples"],
            )
        if kind == "polyline":
            return polyline_path(spec["points"], duration=spec["duration"], samples=spec["samples"])
        times = np.asarray(spec["times"], dtype=float)
        scale = 1.0 if duration is None else duration / times[-1]
        return ParameterPath(
            times=times * scale,
            a=np.asarray(spec["a"], dtype=float),
            b=np.asarray(spec["b"], dtype=float),
        )

    @property
    def declared_windings(self) -> int:
        if self.path_spec["type"] == "circle":
            return int(self.path_spec["windings"])
        return winding_number(self.build_path(samples=self.path_spec.get("samples")))


def _require(condition: bool, message: str):
    if not condition:
        raise ValidationError(message)


def scenario_from_dict(data: dict, source: str = "<dict>") -> Scenario:
    """Validate a scenario document and fill defaults."""
    if not isinstance(data, dict):
        raise ParseError(f"{source}: scenario document must be a mapping")
    _reject_unknown(data, _TOP_KEYS, source)
    for section, allowed in _SECTION_KEYS.items():
        if section in data:
            if not isinstance(data[section], dict):
                raise ParseError(f"section {section!r} in {source} must be a mapping")
            _reject_unknown(data[section], allowed, f"section {section!r} of {source}")

    engine = data.get("engine")
    if engine not in ENGINES:
        raise ValidationError(f"engine must be one of {ENGINES}, got {engine!r}")

    model = data.get("model", {})
    model_type = model.get("type", "three_level")
    _require(model_type in ("three_level", "custom"), f"model.type must be three_level or custom, got {model_type!r}")
    model_hams = []
    if model_type == "custom":
        samples = model.get("hamiltonians")
        _require(bool(samples), "model.hamiltonians is required for a custom model")
        dim = None
        for i, item in enumerate(samples):
            if not isinstance(item, dict) or set(item) != {"t", "matrix"}:
                raise ParseError(f"model.hamiltonians[{i}] must be a {{t, matrix}} mapping")
            m = parse_matrix(item["matrix"], f"model.hamiltonians[{i}].matrix")
            if dim is None:
                dim = m.shape[0]
            _require(m.shape[0] == dim, "model.hamiltonians matrices must share one dimension")
            model_hams.append((float(item["t"]), m))
        model_hams.sort(key=lambda p: p[0])
        _require(model_hams[0][0] == 0.0, "model.hamiltonians must start at t = 0")

    pspec = dict(data.get("path", {}))
    ptype = pspec.setdefault("type", "circle")
    _require(ptype in ("circle", "polyline", "samples"), f"path.type must be circle, polyline or samples, got {ptype!r}")
    if ptype == "circle":
        pspec.setdefault("center", [0.0, 0.0])
        pspec.setdefault("radius", 1.0)
        pspec.setdefault("windings", 1)
        pspec.setdefault("duration", 1.0)
        _require(pspec["radius"] > 0, "path.radius must be positive")
        _require(isinstance(pspec["windings"], int), "path.windings must be an integer")
    elif ptype == "polyline":
        _require("points" in pspec, "path.points is required for a polyline path")
        pspec.setdefault("duration", 1.0)
    else:
        for key in ("times", "a", "b"):
            _require(key in pspec, f"path.{key} is required for sampled paths")
    _require(pspec.get("duration", 1.0) > 0, "path.duration must be positive")

    n_meas = int(data.get("N", 4096))
    _require(n_meas >= 1, "N must be a positive integer")
    substeps = int(data.get("substeps", 1))
    _require(substeps >= 1, "substeps must be a positive integer")
    steps = data.get("steps")
    if steps is not None:
        steps = int(steps)
        _require(steps >= 1, "steps must be a positive integer")
    level = int(data.get("level", 0))
    _require(level >= 0, "level must be nonnegative")
    seed = int(data.get("seed", 0))
    nonselective = bool(data.get("nonselective", False))
    frame_method = data.get("frame_method", "analytic" if model_type == "three_level" else "tracked")
    _require(frame_method in ("analytic", "tracked"), "frame_method must be analytic or tracked")
    if model_type == "custom":
        _require(frame_method == "tracked", "custom models support only tracked frames")

    gamma = data.get("gamma")
    alphas = data.get("alphas")
    if engine == "dissipative":
        _require(gamma is not None, "gamma is required for the dissipative engine")
        gamma = float(gamma)
        _require(gamma >= 0, "gamma must be nonnegative")
        if alphas is not None:
            alphas = tuple(float(a) for a in alphas)

    cspec = data.get("control", {})
    mode = cspec.get("mode", "none")
    cham = None
    if "hamiltonian" in cspec:
        cham = parse_matrix(cspec["hamiltonian"], "control.hamiltonian")
    try:
        control = ControlConfig(mode=mode, alpha=float(cspec.get("alpha", 0.0)), hamiltonian=cham)
    except ValueError as exc:
        raise ValidationError(f"control: {exc}") from exc
    if control.mode == "alpha_frame":
        _require(model_type == "three_level", "control.mode alpha_frame requires the three_level model")

    istate = data.get("initial_state", {"name": "E_minus"})
    iname = istate.get("name")
    iamps = istate.get("amplitudes")
    _require((iname is None) != (iamps is None), "initial_state needs exactly one of name, amplitudes")
    if iname is not None:
        _require(iname in NAMED_STATES, f"initial_state.name must be one of {NAMED_STATES}, got {iname!r}")
        _require(model_type == "three_level", f"named state {iname!r} does not exist for a custom model")
    amps = None
    if iamps is not None:
        amps = np.array([_parse_entry(v, "initial_state.amplitudes") for v in iamps], dtype=complex)
        norm = np.linalg.norm(amps)
        _require(norm > 0, "initial_state.amplitudes must be nonzero")
        amps = amps / norm

    tols = data.get("tolerances", {})
    budget = data.get("runtime_budget_s")

    scenario = Scenario(
        engine=engine,
        name=str(data.get("name", "")) or scenario_digest(data)[:12],
        digest=scenario_digest(data),
        model_type=model_type,
        model_hamiltonians=model_hams,
        path_spec=pspec,
        control=control,
        N=n_meas,
        substeps=substeps,
        steps=steps,
        gamma=gamma,
        alphas=alphas,
        initial_name=iname,
        initial_amplitudes=amps,
        level=level,
        seed=seed,
        nonselective=nonselective,
        frame_method=frame_method,
        runtime_budget_s=None if budget is None else float(budget),
        cluster_tol=float(tols.get("cluster", 1e-8)),
        holonomy_tol=float(tols.get("holonomy", 1e-2)),
        raw=data,
    )

    # The declared path must actually be constructible (winding/enclosure
    # consistency, no critical point) before the runner ever sees it.
    if model_type == "three_level":
        try:
            path = scenario.build_path(samples=pspec.get("samples", 129))
        except (ValueError, CriticalPoint) as exc:
            raise ValidationError(f"path: {exc}") from exc
        if ptype == "circle" and path.closed:
            _require(
                winding_number(path) == pspec["windings"],
                f"path.windings = {pspec['windings']} does not match the loop's actual winding",
            )
    return scenario


def load_scenario(path) -> Scenario:
    """Load and validate a scenario YAML file."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return scenario_from_dict(data, source=str(path))
