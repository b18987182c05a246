"""Command-line front end.

Subcommands ``analyze``, ``simulate``, ``sweep``, ``equilibria`` and
``persistence`` read a JSON scenario (or sweep spec) given by
``--scenario``. Exit codes: 0 on success whatever the verdict, 2 on input
errors, 3 on numerical failure of the integrator.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .dynamics import IntegratorConfig, check_invariant_region, estimate_tail_floor, integrate
from .equilibria import find_endemic
from .errors import IntegrationError, ParameterError
from .model import ModelParams, StateVec, population_bound, validate_params
from .persistence import uniform_persistence_estimate, weak_repeller_test
from .stability import certify_global_stability
from .thresholds import disease_free_equilibrium, threshold_report

EXIT_INPUT = 2
EXIT_NUMERIC = 3

SWEEP_OUTPUTS = ("r_c", "r0", "j_c", "local_stable", "gas_certified", "endemic_I", "tail_floor_I")
_SCENARIO_KEYS = {"params", "x0", "integrator", "label", "allow_zero"}
_SWEEP_KEYS = {"base", "axis1", "axis2", "outputs"}


class InputError(Exception):
    pass


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    x0: Optional[StateVec] = None
    integrator: IntegratorConfig = IntegratorConfig()
    label: str = ""

    def initial_state(self) -> StateVec:
        """Given x0, or the DFE with ``I = 1e-3*Lambda/mu`` seeded."""
        if self.x0 is not None:
            return self.x0
        dfe = disease_free_equilibrium(self.params)
        return StateVec(dfe.S0, 0.0, 1e-3 * population_bound(self.params), dfe.V0, 0.0)


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def values(self) -> list[float]:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count).tolist()
        return np.linspace(self.lo, self.hi, self.count).tolist()


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axis1: Axis
    axis2: Optional[Axis] = None
    outputs: tuple = ("r_c",)
    allow_zero: tuple = ()


def _state_from(raw) -> StateVec:
    if isinstance(raw, dict):
        extra = set(raw) - set(StateVec._fields)
        if extra:
            raise InputError(f"x0: unknown field(s) {sorted(extra)}")
        raw = [raw[k] for k in StateVec._fields]
    if len(raw) != 5:
        raise InputError("x0 must have five components (S, E, I, V, C)")
    x = StateVec(*map(float, raw))
    for name, v in zip(StateVec._fields, x):
        if not (math.isfinite(v) and v >= 0.0):
            raise InputError(f"x0.{name} must be finite and nonnegative (got {v!r})")
    return x


def _integrator_from(raw: dict) -> IntegratorConfig:
    names = {f.name for f in fields(IntegratorConfig)}
    extra = set(raw) - names
    if extra:
        raise InputError(f"integrator: unknown field(s) {sorted(extra)}")
    return IntegratorConfig(**raw)


def parse_scenario(data: dict) -> tuple[Scenario, tuple]:
    if not isinstance(data, dict):
        raise InputError("scenario must be a JSON object")
    extra = set(data) - _SCENARIO_KEYS
    if extra:
        raise InputError(f"scenario: unknown field(s) {sorted(extra)}")
    if "params" not in data:
        raise InputError("scenario: missing 'params'")
    allow_zero = tuple(data.get("allow_zero", ()))
    params = validate_params(ModelParams.from_dict(data["params"]), allow_zero=allow_zero)
    x0 = _state_from(data["x0"]) if data.get("x0") is not None else None
    integ = _integrator_from(data.get("integrator") or {})
    return Scenario(params, x0, integ, str(data.get("label", ""))), allow_zero


def _axis_from(raw: dict) -> Axis:
    names = {f.name for f in fields(ModelParams)} - {"n"}
    name = raw.get("name")
    if name not in names:
        raise InputError(f"invalid sweep axis parameter {name!r}")
    count = int(raw.get("count", 0))
    if count < 2:
        raise InputError("sweep axis count must be >= 2")
    scale = raw.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise InputError(f"sweep axis scale must be 'linear' or 'log' (got {scale!r})")
    return Axis(name, float(raw["min"]), float(raw["max"]), count, scale)


def parse_sweep(data: dict) -> SweepSpec:
    if not isinstance(data, dict):
        raise InputError("sweep spec must be a JSON object")
    extra = set(data) - _SWEEP_KEYS
    if extra:
        raise InputError(f"sweep spec: unknown field(s) {sorted(extra)}")
    base, allow_zero = parse_scenario(data.get("base"))
    if "axis1" not in data:
        raise InputError("sweep spec: missing 'axis1'")
    axis1 = _axis_from(data["axis1"])
    axis2 = _axis_from(data["axis2"]) if data.get("axis2") else None
    outputs = tuple(data.get("outputs", ["r_c"]))
    bad = [o for o in outputs if o not in SWEEP_OUTPUTS]
    if bad:
        raise InputError(f"unknown sweep output(s) {bad}; choose from {list(SWEEP_OUTPUTS)}")
    return SweepSpec(base, axis1, axis2, outputs, allow_zero)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _apply_flags(cfg: IntegratorConfig, args) -> IntegratorConfig:
    changes = {}
    for flag, name in (("rtol", "rel_tol"), ("atol", "abs_tol"), ("t_end", "t_end"), ("stride", "dense_output_stride")):
        value = getattr(args, flag, None)
        if value is not None:
            changes[name] = value
    return replace(cfg, **changes) if changes else cfg


def _seed() -> int:
    return int(os.environ.get("SVEIRC_SEED", "42"))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def analyze_scenario(scenario: Scenario) -> dict:
    return {
        "label": scenario.label,
        "params": scenario.params.to_dict(),
        "thresholds": threshold_report(scenario.params).to_dict(),
        "stability": certify_global_stability(scenario.params).to_dict(),
    }


def cmd_analyze(args) -> int:
    scenario, _ = parse_scenario(_load_json(args.scenario))
    _emit(_dumps(analyze_scenario(scenario)), args.out)
    return 0


def cmd_simulate(args) -> int:
    scenario, _ = parse_scenario(_load_json(args.scenario))
    cfg = _apply_flags(scenario.integrator, args)
    trace = integrate(scenario.params, scenario.initial_state(), cfg)
    _emit(trace.to_csv(), args.out)
    if args.check_omega:
        report = check_invariant_region(trace, scenario.params)
        sys.stderr.write(_dumps(report.to_dict()))
    return 0


def cmd_equilibria(args) -> int:
    scenario, _ = parse_scenario(_load_json(args.scenario))
    reports = find_endemic(scenario.params)
    payload = {
        "label": scenario.label,
        "r_c": threshold_report(scenario.params).r_c,
        "equilibria": [r.to_dict() for r in reports],
    }
    _emit(_dumps(payload), args.out)
    return 0


def cmd_persistence(args) -> int:
    scenario, _ = parse_scenario(_load_json(args.scenario))
    cfg = _apply_flags(scenario.integrator, args)
    P = scenario.params
    rng = np.random.default_rng(_seed())
    epsilon = args.epsilon * population_bound(P)
    repeller = weak_repeller_test(P, epsilon, args.ensemble, rng, cfg, jobs=args.jobs)
    report = uniform_persistence_estimate(P, args.ensemble, cfg, rng, jobs=args.jobs)
    if not repeller.skipped:
        report = replace(report, repeller_escapes=repeller.escapes)
    payload = {
        "label": scenario.label,
        "r_c": threshold_report(P).r_c,
        "persistence": report.to_dict(),
        "weak_repeller": repeller.to_dict(),
    }
    _emit(_dumps(payload), args.out)
    return 0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def sweep_point(task) -> list:
    """Evaluate the requested outputs at one grid point (picklable for workers)."""
    params, x0, cfg, outputs = task
    thr = threshold_report(params)
    row = []
    verdict = None
    for name in outputs:
        if name == "r_c":
            row.append(thr.r_c)
        elif name == "r0":
            row.append(thr.r0)
        elif name == "j_c":
            row.append(thr.j_c)
        elif name in ("local_stable", "gas_certified"):
            verdict = verdict or certify_global_stability(params)
            row.append(verdict.locally_stable if name == "local_stable" else verdict.globally_stable_certified)
        elif name == "endemic_I":
            eq = find_endemic(params)
            row.append(eq[0].state.I if eq else None)
        elif name == "tail_floor_I":
            row.append(estimate_tail_floor(integrate(params, x0, cfg)).I)
    return row


def run_sweep(spec: SweepSpec, cfg: Optional[IntegratorConfig] = None, jobs: int = 1) -> str:
    cfg = cfg or spec.base.integrator
    axes = [spec.axis1] + ([spec.axis2] if spec.axis2 else [])
    grid = [(v,) for v in spec.axis1.values()]
    if spec.axis2:
        grid = [(a, b) for a in spec.axis1.values() for b in spec.axis2.values()]
    tasks = []
    for point in grid:
        changes = {ax.name: val for ax, val in zip(axes, point)}
        params = validate_params(spec.base.params.replace(**changes), allow_zero=spec.allow_zero)
        base = replace(spec.base, params=params)
        tasks.append((params, base.initial_state(), cfg, spec.outputs))
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(sweep_point, tasks))
    else:
        rows = [sweep_point(t) for t in tasks]
    lines = [",".join([ax.name for ax in axes] + list(spec.outputs))]
    for point, row in zip(grid, rows):
        lines.append(",".join(_fmt(v) for v in (*point, *row)))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    spec = parse_sweep(_load_json(args.scenario))
    cfg = _apply_flags(spec.base.integrator, args)
    _emit(run_sweep(spec, cfg, jobs=args.jobs), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sveirc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, integ=False):
        p.add_argument("--scenario", required=True, help="path to a JSON scenario / sweep spec")
        p.add_argument("--out", help="write output here instead of stdout")
        if integ:
            p.add_argument("--rtol", type=float)
            p.add_argument("--atol", type=float)
            p.add_argument("--t-end", dest="t_end", type=float)
            p.add_argument("--stride", type=float)
        return p

    common(sub.add_parser("analyze", help="thresholds and stability verdicts as JSON")).set_defaults(func=cmd_analyze)
    p = common(sub.add_parser("simulate", help="integrate and emit a CSV trace"), integ=True)
    p.add_argument("--check-omega", action="store_true", help="print invariant-region report to stderr")
    p.set_defaults(func=cmd_simulate)
    p = common(sub.add_parser("sweep", help="parameter sweep to long-format CSV"), integ=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    common(sub.add_parser("equilibria", help="endemic equilibria as JSON")).set_defaults(func=cmd_equilibria)
    p = common(sub.add_parser("persistence", help="empirical persistence report as JSON"), integ=True)
    p.add_argument("--ensemble", type=int, default=20)
    p.add_argument("--epsilon", type=float, default=1e-4, help="repeller radius as a fraction of Lambda/mu")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_persistence)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParameterError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except IntegrationError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError) as exc:
        sys.stderr.write(f"error: invalid input: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
