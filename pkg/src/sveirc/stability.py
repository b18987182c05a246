"""Local and global stability of the disease-free equilibrium.

Local stability uses the block-triangular form of the DFE Jacobian: a 2x2
block over (S, V) and a 3x3 block over the infected variables ordered
(I, E, C). Global stability for n = 1 is certified through the five
hypotheses of the Kamgang-Sallet theorem with an explicit upper-bound
matrix for the infected subsystem.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import RequiresHollingTypeII
from .linalg import is_irreducible, is_metzler, stability_modulus
from .model import ModelParams, dose_response, dose_response_slope_at_zero, population_bound
from .sampling import halton_omega_slice
from .thresholds import disease_free_equilibrium, global_threshold_jc, threshold_report

MARGINAL_BAND = 1e-9


@dataclass(frozen=True)
class RouthHurwitzCoeffs:
    """Coefficients of ``lambda**3 + a1*lambda**2 + a2*lambda + a3``."""

    a1: float
    a2: float
    a3: float

    @property
    def hurwitz(self) -> float:
        return self.a1 * self.a2 - self.a3

    @property
    def all_negative(self) -> bool:
        return self.a1 > 0 and self.a3 > 0 and self.hurwitz > 0


@dataclass(frozen=True)
class Condition:
    passed: Optional[bool]
    diagnostic: str
    value: Optional[float] = None


@dataclass(frozen=True)
class StabilityVerdict:
    locally_stable: bool
    globally_stable_certified: bool
    stability_modulus_dfe: float
    stability_modulus_upper_bound: Optional[float]
    conditions: dict = field(default_factory=dict)
    marginal: bool = False
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def jacobian_blocks_at_dfe(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    P = params
    dfe = disease_free_equilibrium(P)
    S0, V0 = dfe.S0, dfe.V0
    dg0 = dose_response_slope_at_zero(P.kappa, P.n)
    A = np.array([
        [-(P.sigma + P.mu), (1.0 - P.p) * P.eta],
        [P.sigma, -(P.eta + P.mu)],
    ])
    B = np.array([
        [-(P.gamma + P.d + P.mu), P.xi, 0.0],
        [P.beta1 * S0 + P.beta2 * V0, -(P.xi + P.mu), (P.alpha1 * S0 + P.alpha2 * V0) * dg0],
        [P.phi, 0.0, -P.omega],
    ])
    return A, B


def routh_hurwitz_dfe(params: ModelParams) -> RouthHurwitzCoeffs:
    _, B = jacobian_blocks_at_dfe(params)
    J33, J32 = B[0, 0], B[0, 1]
    J23, J22, J25 = B[1, 0], B[1, 1], B[1, 2]
    J53, J55 = B[2, 0], B[2, 2]
    return RouthHurwitzCoeffs(
        a1=-(J22 + J33 + J55),
        a2=J22 * J33 - J23 * J32 + J55 * (J22 + J33),
        a3=-J22 * J33 * J55 - J32 * J25 * J53 + J23 * J32 * J55,
    )


def a3_split(params: ModelParams) -> tuple[float, float]:
    """The two sides ``(left, right)`` with ``a3 = omega * (right - left)``."""
    P = params
    dfe = disease_free_equilibrium(P)
    kron = 1.0 if P.n == 1 else 0.0
    left = P.xi * (
        P.beta1 * dfe.S0 + P.beta2 * dfe.V0
        + P.phi * (P.alpha1 * dfe.S0 + P.alpha2 * dfe.V0) * kron / (P.omega * P.kappa)
    )
    right = (P.xi + P.mu) * (P.gamma + P.d + P.mu)
    return left, right


def dfe_spectrum_modulus(params: ModelParams) -> float:
    """Stability modulus of the full DFE Jacobian from its two diagonal blocks."""
    A, B = jacobian_blocks_at_dfe(params)
    return max(stability_modulus(A), stability_modulus(B))


def infected_block(params: ModelParams, x) -> np.ndarray:
    """Matrix ``A2(x)`` of the infected subsystem on (E, I, C): ``x2' = A2(x) x2``."""
    P = params
    S, _, _, V, C = (float(v) for v in x)
    if C > 0.0:
        per_c = dose_response(C, P.kappa, P.n) / C
    else:
        per_c = dose_response_slope_at_zero(P.kappa, P.n)
    return np.array([
        [-(P.xi + P.mu), P.beta1 * S + P.beta2 * V, (P.alpha1 * S + P.alpha2 * V) * per_c],
        [P.xi, -(P.gamma + P.d + P.mu), 0.0],
        [0.0, P.phi, -P.omega],
    ])


def kamgang_sallet_upper_bound(params: ModelParams) -> np.ndarray:
    P = params
    if P.n != 1:
        raise RequiresHollingTypeII(P.n)
    N = population_bound(P)
    return np.array([
        [-(P.xi + P.mu), P.beta1 * N, P.alpha1 * N / P.kappa],
        [P.xi, -(P.gamma + P.d + P.mu), 0.0],
        [0.0, P.phi, -P.omega],
    ])


def upper_bound_charpoly(params: ModelParams) -> RouthHurwitzCoeffs:
    """Closed-form characteristic coefficients of the upper-bound matrix."""
    P = params
    if P.n != 1:
        raise RequiresHollingTypeII(P.n)
    N = population_bound(P)
    q1, q2, q3, q4 = P.xi + P.mu, P.beta1 * N, P.alpha1 * N / P.kappa, P.gamma + P.d + P.mu
    w = P.omega
    return RouthHurwitzCoeffs(
        a1=q1 + q4 + w,
        a2=q1 * q4 + w * (q1 + q4) - P.xi * q2,
        a3=w * (q1 * q4 - P.xi * q2) - P.xi * P.phi * q3,
    )


def dissipativity_floor(params: ModelParams) -> float:
    """Lower bound eventually respected by S on the invariant region."""
    P = params
    return 0.5 * P.Lambda * P.mu / (P.beta1 * P.Lambda + (P.sigma + P.alpha1 + P.mu) * P.mu)


def _check_dissipative(params: ModelParams) -> Condition:
    delta = dissipativity_floor(params)
    return Condition(True, f"point dissipative; S eventually >= delta = {delta:.12g}", delta)


def _check_disease_free_subsystem(params: ModelParams) -> Condition:
    P = params
    tr = -(P.sigma + P.mu) - (P.eta + P.mu)
    det = (P.sigma + P.mu) * (P.eta + P.mu) - (1.0 - P.p) * P.eta * P.sigma
    ok = tr < 0 and det > 0
    return Condition(ok, f"(S, V) linear block: trace = {tr:.12g}, det = {det:.12g}", det)


def _check_metzler_irreducible(params: ModelParams, count: int) -> Condition:
    bad = []
    pts = halton_omega_slice(params, count)
    for S, V, C in pts:
        M = infected_block(params, (S, 0.0, 0.0, V, C))
        if not (is_metzler(M) and is_irreducible(M)):
            bad.append((S, V, C))
    if bad:
        return Condition(False, f"{len(bad)}/{len(pts)} sampled points fail; first at (S, V, C) = {bad[0]}")
    return Condition(True, f"Metzler and irreducible at all {len(pts)} sampled points")


def _check_upper_bound_attained(params: ModelParams) -> Condition:
    P = params
    if P.alpha1 == P.alpha2 and P.beta1 == P.beta2:
        where = "the disease-free segment S + V = Lambda/mu"
    else:
        where = "the single point (Lambda/mu, 0, 0, 0, 0)"
    return Condition(True, f"satisfied analytically: bound attained only on {where}, inside the disease-free set")


def certify_global_stability(params: ModelParams, sample_count: int = 100) -> StabilityVerdict:
    """Check hypotheses A1-A5 and report local and global DFE stability."""
    report = threshold_report(params)
    s_dfe = dfe_spectrum_modulus(params)
    marginal = abs(report.r_c - 1.0) < MARGINAL_BAND
    locally_stable = report.r_c < 1.0 if marginal else s_dfe < 0.0
    conditions = {
        "A1": _check_dissipative(params),
        "A2": _check_disease_free_subsystem(params),
    }
    if params.n != 1:
        for name in ("A3", "A4", "A5"):
            conditions[name] = Condition(None, "not evaluated: global criterion needs n = 1")
        return StabilityVerdict(
            locally_stable=locally_stable,
            globally_stable_certified=False,
            stability_modulus_dfe=s_dfe,
            stability_modulus_upper_bound=None,
            conditions=conditions,
            marginal=marginal,
            reason="NoGlobalCriterionAvailable",
        )
    conditions["A3"] = _check_metzler_irreducible(params, sample_count)
    conditions["A4"] = _check_upper_bound_attained(params)
    s_bar = stability_modulus(kamgang_sallet_upper_bound(params))
    j_c = global_threshold_jc(params)
    if abs(j_c - 1.0) < MARGINAL_BAND:
        marginal = True
        a5 = j_c <= 1.0
    else:
        a5 = s_bar <= 0.0
    conditions["A5"] = Condition(a5, f"s(upper bound) = {s_bar:.12g}, J_c = {j_c:.12g}", s_bar)
    certified = all(c.passed for c in conditions.values())
    return StabilityVerdict(
        locally_stable=locally_stable,
        globally_stable_certified=certified,
        stability_modulus_dfe=s_dfe,
        stability_modulus_upper_bound=s_bar,
        conditions=conditions,
        marginal=marginal,
        reason=None if certified else "A5 fails: J_c > 1" if not a5 else "hypothesis failed",
    )
