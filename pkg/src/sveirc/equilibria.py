"""Endemic equilibria via a scalar reduction in the infectious density.

At a steady state C and E are explicit in I, and (S, V) solve a 2x2
linear system once I and g(C) are fixed. What is left is the balance of
new infections against removal from E, a scalar function h(I) whose
sign changes bracket the endemic equilibria.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import SingularLinearSolve
from .linalg import stability_modulus
from .model import ModelParams, StateVec, dose_response, jacobian, population_bound, vector_field
from .thresholds import disease_free_equilibrium

GRID_POINTS = 200
GRID_LOW = 1e-12


@dataclass(frozen=True)
class EquilibriumReport:
    state: StateVec
    residual_norm: float
    interior: bool
    dfe_distance: float
    local_modulus: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["state"] = dict(self.state._asdict())
        return d


def _susceptible_vaccinated(params: ModelParams, I: float, g: float) -> tuple[float, float]:
    P = params
    a11 = P.beta1 * I + P.sigma + P.alpha1 * g + P.mu
    a12 = -(1.0 - P.p) * P.eta
    a21 = -P.sigma
    a22 = P.beta2 * I + P.eta + P.mu + P.alpha2 * g
    det = a11 * a22 - a12 * a21
    if not det > 0.0:
        raise SingularLinearSolve(f"degenerate (S, V) system at I = {I!r} (det = {det!r})")
    return P.Lambda * a22 / det, -P.Lambda * a21 / det


def steady_state_at(params: ModelParams, I: float) -> StateVec:
    """State with I fixed and every equation except E' = 0 balanced."""
    P = params
    C = P.phi * I / P.omega
    g = dose_response(C, P.kappa, P.n)
    E = (P.gamma + P.d + P.mu) * I / P.xi
    S, V = _susceptible_vaccinated(P, I, g)
    return StateVec(S, E, I, V, C)


def endemic_residual(params: ModelParams, I: float) -> float:
    """New infections minus removal from E at the partial steady state for ``I``."""
    P = params
    S, E, _, V, C = steady_state_at(P, I)
    g = dose_response(C, P.kappa, P.n)
    incidence = P.beta1 * S * I + P.beta2 * V * I + P.alpha1 * S * g + P.alpha2 * V * g
    return incidence - (P.xi + P.mu) * E


def _report(params: ModelParams, x: StateVec) -> EquilibriumReport:
    res = max(abs(v) for v in vector_field(params, x))
    dfe = disease_free_equilibrium(params)
    dist = math.dist(x, dfe.state())
    return EquilibriumReport(
        state=x,
        residual_norm=res,
        interior=all(v > 0.0 for v in x),
        dfe_distance=dist,
        local_modulus=stability_modulus(jacobian(params, x)),
    )


def find_endemic(params: ModelParams, grid_points: int = GRID_POINTS) -> list[EquilibriumReport]:
    """All endemic equilibria found as sign changes of h on a geometric grid.

    Returns an empty list when h keeps one sign over ``(1e-12, 1]*Lambda/mu``.
    Tangential roots (no sign change) are not detected.
    """
    N = population_bound(params)
    grid = np.geomspace(GRID_LOW * N, N, grid_points)
    values = [endemic_residual(params, float(I)) for I in grid]
    reports = []
    for k in range(grid_points - 1):
        lo, hi = values[k], values[k + 1]
        if lo == 0.0:
            root = float(grid[k])
        elif lo * hi < 0.0:
            root = brentq(
                lambda I: endemic_residual(params, I),
                float(grid[k]), float(grid[k + 1]),
                xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500,
            )
        else:
            continue
        reports.append(_report(params, steady_state_at(params, root)))
    return reports
