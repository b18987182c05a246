"""Numerical checks of boundary escape, the weak repeller and uniform persistence.

All persistence quantities here are empirical: the liminf of each
component is replaced by its minimum over the last quarter of a long
finite horizon.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .dynamics import IntegratorConfig, estimate_tail_floor, integrate
from .model import ModelParams, StateVec, concentration_bound, population_bound
from .sampling import random_omega_point
from .stability import dissipativity_floor
from .thresholds import disease_free_equilibrium, threshold_report

log = logging.getLogger(__name__)

ESCAPE_LEVEL = 1e-12
BOUNDARY_SEED = 1e-8
FLOOR_TOL = 1e-8
INCONCLUSIVE_BAND = 1e-2
TAIL_FRACTION = 0.25


def boundary_escape_test(params: ModelParams, x0, cfg: Optional[IntegratorConfig] = None) -> Optional[float]:
    """First sampled time at which E, I and C all exceed ``1e-12*Lambda/mu``.

    ``x0`` must lie on the boundary (E*I*C = 0) but off the disease-free
    set (E + I + C > 0). Returns None if the trajectory never leaves the
    boundary within the horizon.
    """
    x0 = StateVec(*map(float, x0))
    if x0.E * x0.I * x0.C != 0.0 or x0.E + x0.I + x0.C <= 0.0:
        raise ValueError("x0 must satisfy E*I*C = 0 and E + I + C > 0")
    level = ESCAPE_LEVEL * population_bound(params)
    trace = integrate(params, x0, cfg)
    inside = np.min(trace.states[:, 1:3], axis=1) > level
    inside &= trace.states[:, 4] > level
    hits = np.nonzero(inside)[0]
    return float(trace.times[hits[0]]) if hits.size else None


@dataclass(frozen=True)
class WeakRepellerResult:
    skipped: bool
    ensemble: int
    escapes: int
    epsilon: float
    max_distances: list = field(default_factory=list)
    note: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _near_dfe_point(params: ModelParams, radius: float, rng: np.random.Generator) -> StateVec:
    """Point of X0 at distance at most ``3*radius`` from the DFE."""
    dfe = disease_free_equilibrium(params).state()
    d = rng.normal(size=5)
    d[1:3] = np.abs(d[1:3])
    d[4] = abs(d[4])
    d[1:3] = np.maximum(d[1:3], 1e-3)
    d[4] = max(d[4], 1e-3)
    d /= np.linalg.norm(d)
    x = np.asarray(dfe) + radius * d
    x[0] = max(x[0], 0.0)
    x[3] = max(x[3], 0.0)
    excess = x[:4].sum() - population_bound(params)
    if excess > 0.0:
        x[0] -= excess
    return StateVec(*x.tolist())


def _run(args):
    params, x0, cfg = args
    return integrate(params, x0, cfg)


def _integrate_many(params, starts, cfg, jobs):
    tasks = [(params, x0, cfg) for x0 in starts]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run, tasks))
    return [_run(t) for t in tasks]


def weak_repeller_test(
    params: ModelParams,
    epsilon: float,
    ensemble: int,
    rng: Optional[np.random.Generator] = None,
    cfg: Optional[IntegratorConfig] = None,
    jobs: int = 1,
) -> WeakRepellerResult:
    """Start ``ensemble`` trajectories within ``epsilon`` of the DFE and count escapes.

    A trajectory escapes when its distance from the DFE exceeds
    ``2*epsilon`` somewhere on the horizon. Skipped unless R_c > 1.
    """
    r_c = threshold_report(params).r_c
    if not r_c > 1.0:
        return WeakRepellerResult(True, ensemble, 0, epsilon, note=f"skipped: R_c = {r_c:.6g} <= 1")
    rng = rng or np.random.default_rng(42)
    starts = [_near_dfe_point(params, epsilon * rng.uniform(0.05, 1.0 / 3.0), rng) for _ in range(ensemble)]
    dfe = np.asarray(disease_free_equilibrium(params).state())
    dists = []
    for trace in _integrate_many(params, starts, cfg, jobs):
        dists.append(float(np.max(np.linalg.norm(trace.states - dfe, axis=1))))
    escapes = sum(d > 2.0 * epsilon for d in dists)
    return WeakRepellerResult(False, ensemble, escapes, epsilon, dists)


@dataclass(frozen=True)
class PersistenceReport:
    ensemble_size: int
    per_ic_floors: list
    uniform_floor: StateVec
    verdict: str
    empirical_delta: float
    s_floor_bound: float
    v_floor_bound: float
    s_floor_ok: bool
    v_floor_ok: bool
    floor_spread: float
    initial_conditions: list = field(default_factory=list)
    repeller_escapes: Optional[int] = None
    note: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_ic_floors"] = [dict(f._asdict()) for f in self.per_ic_floors]
        d["uniform_floor"] = dict(self.uniform_floor._asdict())
        d["initial_conditions"] = [dict(x._asdict()) for x in self.initial_conditions]
        return d


def vaccinated_floor_bound(params: ModelParams) -> float:
    P = params
    k = P.eta + P.mu + P.beta2 * P.Lambda / P.mu + P.alpha2
    return P.sigma * dissipativity_floor(P) / k


def stratified_initial_conditions(params: ModelParams, count: int, rng: np.random.Generator) -> list[StateVec]:
    """Initial conditions in the region with E + I + C > 0.

    Cycles through three strata: interior points, boundary points with a
    single infected component at ``1e-8*Lambda/mu``, and points near the
    DFE.
    """
    N = population_bound(params)
    Cmax = concentration_bound(params)
    out = []
    for k in range(count):
        stratum = k % 3
        if stratum == 0:
            out.append(random_omega_point(params, rng))
        elif stratum == 1:
            x = random_omega_point(params, rng)
            which = (k // 3) % 3
            seed = [0.0, 0.0, 0.0]
            seed[which] = BOUNDARY_SEED * N
            E, I, C = seed
            S = x.S
            V = min(x.V, N - S - E - I)
            out.append(StateVec(S, E, I, max(V, 0.0), C))
        else:
            out.append(_near_dfe_point(params, 1e-4 * min(N, Cmax) * rng.uniform(0.1, 1.0), rng))
    return out


def uniform_persistence_estimate(
    params: ModelParams,
    ensemble: int,
    horizon_cfg: Optional[IntegratorConfig] = None,
    rng: Optional[np.random.Generator] = None,
    jobs: int = 1,
) -> PersistenceReport:
    rng = rng or np.random.default_rng(42)
    r_c = threshold_report(params).r_c
    starts = stratified_initial_conditions(params, ensemble, rng)
    traces = _integrate_many(params, starts, horizon_cfg, jobs)
    floors = [estimate_tail_floor(tr, TAIL_FRACTION) for tr in traces]
    uniform = StateVec(*np.min(np.array(floors), axis=0).tolist())

    N = population_bound(params)
    Cmax = concentration_bound(params)
    tol = np.array([FLOOR_TOL * N, FLOOR_TOL * N, FLOOR_TOL * Cmax])
    infected = np.array([[f.E, f.I, f.C] for f in floors])
    ok = np.all(infected > tol, axis=1)
    note = None
    if abs(r_c - 1.0) < INCONCLUSIVE_BAND:
        verdict, note = "inconclusive", f"R_c = {r_c:.6g} within {INCONCLUSIVE_BAND} of 1"
    elif ok.all():
        verdict = "persistent"
    elif not ok.any():
        verdict = "not-persistent"
    else:
        verdict, note = "inconclusive", f"{int(ok.sum())}/{len(ok)} trajectories keep all infected floors"

    spread = 0.0
    if verdict == "persistent":
        hi = infected.max(axis=0)
        lo = infected.min(axis=0)
        spread = float(np.max((hi - lo) / hi))
        if spread > 0.1:
            log.info("tail floors spread %.3g across the ensemble; several attractors or unsettled tails", spread)

    delta_s = dissipativity_floor(params)
    delta_v = vaccinated_floor_bound(params)
    return PersistenceReport(
        ensemble_size=ensemble,
        per_ic_floors=floors,
        uniform_floor=uniform,
        verdict=verdict,
        empirical_delta=float(min(uniform)),
        s_floor_bound=delta_s,
        v_floor_bound=delta_v,
        s_floor_ok=bool(uniform.S >= delta_s),
        v_floor_ok=bool(uniform.V >= delta_v),
        floor_spread=spread,
        initial_conditions=starts,
        note=note,
    )


def disease_free_convergence(params: ModelParams, S: float, V: float, cfg: Optional[IntegratorConfig] = None) -> float:
    """Terminal distance to the DFE from a start on the disease-free set."""
    trace = integrate(params, (S, 0.0, 0.0, V, 0.0), cfg)
    return math.dist(trace.final, disease_free_equilibrium(params).state())
