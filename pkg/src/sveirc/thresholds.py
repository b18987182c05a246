"""Disease-free equilibrium and reproduction-number thresholds."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import RequiresHollingTypeII
from .linalg import spectral_radius
from .model import ModelParams, StateVec

__all__ = [
    "DiseaseFreeEquilibrium",
    "ThresholdReport",
    "disease_free_equilibrium",
    "control_reproduction_number",
    "basic_reproduction_number",
    "global_threshold_jc",
    "next_generation_matrices",
    "next_generation_spectral_radius",
    "threshold_report",
]


@dataclass(frozen=True)
class DiseaseFreeEquilibrium:
    S0: float
    V0: float

    def state(self) -> StateVec:
        return StateVec(self.S0, 0.0, 0.0, self.V0, 0.0)


@dataclass(frozen=True)
class ThresholdReport:
    r_c: float
    r0: float
    r_c_dir: float
    r_c_env: float
    j_c: Optional[float]
    dfe: DiseaseFreeEquilibrium
    n_used: int
    j_c_reason: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def disease_free_equilibrium(params: ModelParams) -> DiseaseFreeEquilibrium:
    P = params
    denom = P.mu * (P.mu + P.eta) + P.sigma * (P.mu + P.p * P.eta)
    return DiseaseFreeEquilibrium(
        S0=P.Lambda * (P.mu + P.eta) / denom,
        V0=P.Lambda * P.sigma / denom,
    )


def _kron(n: int) -> float:
    return 1.0 if n == 1 else 0.0


def control_reproduction_number(params: ModelParams) -> ThresholdReport:
    """R_c with its direct and environmental parts.

    The environmental part is always reported but only enters ``r_c`` for
    ``n = 1``. ``r0`` and ``j_c`` are filled in as well so the result is a
    complete report.
    """
    return threshold_report(params)


def _rc_parts(params: ModelParams, dfe: DiseaseFreeEquilibrium) -> tuple[float, float]:
    P = params
    gen = P.xi / ((P.xi + P.mu) * (P.mu + P.gamma + P.d))
    r_dir = gen * (P.beta1 * dfe.S0 + P.beta2 * dfe.V0)
    r_env = gen * P.phi * (P.alpha1 * dfe.S0 + P.alpha2 * dfe.V0) / (P.kappa * P.omega)
    return r_dir, r_env


def basic_reproduction_number(params: ModelParams) -> float:
    P = params
    return (
        P.xi * P.Lambda / (P.mu * (P.xi + P.mu) * (P.gamma + P.d + P.mu))
        * (P.beta1 + _kron(P.n) * P.alpha1 * P.phi / (P.kappa * P.omega))
    )


def global_threshold_jc(params: ModelParams) -> float:
    """Closed-form sufficient threshold for global stability of the DFE (n = 1 only)."""
    P = params
    if P.n != 1:
        raise RequiresHollingTypeII(P.n)
    return (
        P.Lambda / P.mu * P.xi / ((P.xi + P.mu) * (P.gamma + P.d + P.mu))
        * (P.phi * P.alpha1 / (P.kappa * P.omega) + P.beta1)
    )


def next_generation_matrices(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """New-infection matrix F and transition matrix V on (E, I, C) at the DFE.

    Shedding ``phi`` is a transfer I -> C and therefore lives in V.
    """
    P = params
    dfe = disease_free_equilibrium(P)
    F = np.zeros((3, 3))
    F[0, 1] = P.beta1 * dfe.S0 + P.beta2 * dfe.V0
    F[0, 2] = _kron(P.n) * (P.alpha1 * dfe.S0 + P.alpha2 * dfe.V0) / P.kappa
    V = np.array([
        [P.xi + P.mu, 0.0, 0.0],
        [-P.xi, P.gamma + P.d + P.mu, 0.0],
        [0.0, -P.phi, P.omega],
    ])
    return F, V


def _lower_triangular_inverse(L: np.ndarray) -> np.ndarray:
    n = L.shape[0]
    inv = np.zeros_like(L)
    for col in range(n):
        for i in range(col, n):
            acc = (1.0 if i == col else 0.0) - L[i, col:i] @ inv[col:i, col]
            inv[i, col] = acc / L[i, i]
    return inv


def next_generation_spectral_radius(params: ModelParams) -> float:
    F, V = next_generation_matrices(params)
    K = F @ _lower_triangular_inverse(V)
    return spectral_radius(K)


def threshold_report(params: ModelParams) -> ThresholdReport:
    dfe = disease_free_equilibrium(params)
    r_dir, r_env = _rc_parts(params, dfe)
    try:
        j_c, reason = global_threshold_jc(params), None
    except RequiresHollingTypeII as exc:
        j_c, reason = None, f"RequiresHollingTypeII: {exc}"
    return ThresholdReport(
        r_c=r_dir + _kron(params.n) * r_env,
        r0=basic_reproduction_number(params),
        r_c_dir=r_dir,
        r_c_env=r_env,
        j_c=j_c,
        dfe=dfe,
        n_used=params.n,
        j_c_reason=reason,
    )
