"""Random parameter draws, threshold tuning and sampling of the invariant region."""

from __future__ import annotations

import numpy as np

from .model import RATE_FIELDS, ModelParams, StateVec, concentration_bound, population_bound
from .thresholds import global_threshold_jc, threshold_report

RATE_RANGE = (1e-3, 1e1)


def random_params(rng: np.random.Generator, n: int = 1, rate_range=RATE_RANGE) -> ModelParams:
    """Log-uniform rates on ``rate_range``, ``p`` uniform on (0.05, 0.95).

    ``beta2 <= beta1`` and ``alpha2 <= alpha1`` are enforced by swapping.
    """
    lo, hi = np.log(rate_range[0]), np.log(rate_range[1])
    vals = {name: float(np.exp(rng.uniform(lo, hi))) for name in RATE_FIELDS}
    if vals["beta2"] > vals["beta1"]:
        vals["beta1"], vals["beta2"] = vals["beta2"], vals["beta1"]
    if vals["alpha2"] > vals["alpha1"]:
        vals["alpha1"], vals["alpha2"] = vals["alpha2"], vals["alpha1"]
    vals["p"] = float(rng.uniform(0.05, 0.95))
    return ModelParams(n=n, **vals)


def scale_transmission(params: ModelParams, factor: float) -> ModelParams:
    """Multiply beta1, beta2, alpha1, alpha2 by ``factor``.

    Every threshold (R_c, R_0, J_c) is linear in these four coefficients.
    """
    return params.replace(
        beta1=params.beta1 * factor,
        beta2=params.beta2 * factor,
        alpha1=params.alpha1 * factor,
        alpha2=params.alpha2 * factor,
    )


def with_rc(params: ModelParams, target: float) -> ModelParams:
    return scale_transmission(params, target / threshold_report(params).r_c)


def with_jc(params: ModelParams, target: float) -> ModelParams:
    return scale_transmission(params, target / global_threshold_jc(params))


def random_omega_point(params: ModelParams, rng: np.random.Generator) -> StateVec:
    """Uniform-ish point of the invariant region with S > 0."""
    w = rng.dirichlet(np.ones(5))
    N = population_bound(params)
    S, E, I, V = (w[:4] * N).tolist()
    return StateVec(S, E, I, V, float(rng.uniform(0.0, concentration_bound(params))))


def halton_omega_slice(params: ModelParams, count: int = 100):
    """Deterministic low-discrepancy points ``(S, V, C)`` of the region.

    ``S + V <= Lambda/mu`` and ``0 <= C <= phi*Lambda/(omega*mu)``; the
    vertices of the slice are appended with S kept strictly positive, since
    the region excludes S = 0.
    """
    from scipy.stats import qmc  # slow import, only needed here

    N = population_bound(params)
    Cmax = concentration_bound(params)
    u = qmc.Halton(d=3, scramble=False).random(count + 1)[1:]
    pts = [(u1 * N, u2 * (1.0 - u1) * N, u3 * Cmax) for u1, u2, u3 in u]
    s_min = 1e-12 * N
    for S, V in ((N, 0.0), (s_min, N - s_min), (s_min, 0.0)):
        for C in (0.0, Cmax):
            pts.append((S, V, C))
    return pts
