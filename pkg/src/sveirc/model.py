"""Parameters, state, dose-response and vector field of the SVEIR-C model.

The recovered class decouples from the rest of the system and is not
tracked; the state is ``(S, E, I, V, C)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    EffectivenessOutOfRange,
    InvalidHillExponent,
    NonPositiveParameter,
    OrderingViolation,
    ParameterError,
    UnknownParameter,
)

__all__ = [
    "ModelParams",
    "StateVec",
    "DerivVec",
    "validate_params",
    "dose_response",
    "dose_response_slope",
    "dose_response_slope_at_zero",
    "vector_field",
    "jacobian",
    "make_rhs",
    "population_bound",
    "concentration_bound",
]

RATE_FIELDS = (
    "Lambda", "mu", "beta1", "beta2", "alpha1", "alpha2", "gamma", "d",
    "xi", "sigma", "phi", "eta", "omega", "kappa",
)


@dataclass(frozen=True)
class ModelParams:
    """Rate and shape constants of the model.

    ``Lambda`` is recruitment, ``mu`` natural mortality, ``beta1``/``beta2``
    direct transmission into S/V, ``alpha1``/``alpha2`` environmental
    transmission, ``gamma`` recovery, ``d`` disease mortality, ``xi``
    progression E -> I, ``sigma`` vaccination, ``phi`` shedding, ``p``
    vaccine effectiveness, ``eta`` immune maturation, ``omega`` pathogen
    decay, ``kappa`` half-saturation and ``n`` the Hill exponent.
    """

    Lambda: float
    mu: float
    beta1: float
    beta2: float
    alpha1: float
    alpha2: float
    gamma: float
    d: float
    xi: float
    sigma: float
    phi: float
    p: float
    eta: float
    omega: float
    kappa: float
    n: int = 1

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UnknownParameter(unknown)
        missing = [name for name in names if name not in data and name != "n"]
        if missing:
            raise ParameterError(f"missing parameter field(s): {', '.join(sorted(missing))}")
        values = {k: (v if k == "n" else float(v)) for k, v in data.items()}
        return cls(**values)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))


class StateVec(NamedTuple):
    S: float
    E: float
    I: float
    V: float
    C: float


class DerivVec(NamedTuple):
    dS: float
    dE: float
    dI: float
    dV: float
    dC: float


def validate_params(raw: ModelParams, allow_zero: Iterable[str] = ()) -> ModelParams:
    """Return ``raw`` unchanged if it satisfies the model's assumptions.

    ``allow_zero`` may contain ``"sigma"`` to admit the no-vaccination
    variant of the model; no other field may be zero.
    """
    allow_zero = set(allow_zero)
    if allow_zero - {"sigma"}:
        raise ValueError(f"only 'sigma' may be allowed to vanish, got {sorted(allow_zero)}")
    n = raw.n
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidHillExponent(n)
    for name in RATE_FIELDS:
        value = getattr(raw, name)
        if not math.isfinite(value):
            raise NonPositiveParameter(name, value)
        if value > 0 or (value == 0 and name in allow_zero):
            continue
        raise NonPositiveParameter(name, value)
    if not (0.0 < raw.p < 1.0):
        raise EffectivenessOutOfRange(raw.p)
    if raw.beta2 > raw.beta1:
        raise OrderingViolation("beta")
    if raw.alpha2 > raw.alpha1:
        raise OrderingViolation("alpha")
    return raw


def dose_response(C: float, kappa: float, n: int) -> float:
    """Hill-type saturation ``C**n / (C**n + kappa**n)``."""
    if C <= 0.0:
        return 0.0
    r = C / kappa
    if r > 1.0:
        # large C: avoid overflow of C**n
        return 1.0 / (1.0 + r ** (-n))
    rn = r**n
    return rn / (1.0 + rn)


def dose_response_slope(C: float, kappa: float, n: int) -> float:
    """Derivative of :func:`dose_response` with respect to ``C``.

    At ``C = 0`` this is the one-sided limit: ``1/kappa`` for ``n = 1``
    and 0 otherwise.
    """
    if C <= 0.0:
        return dose_response_slope_at_zero(kappa, n)
    r = C / kappa
    if r > 1.0:
        rinv = r ** (-n)
        return n / kappa * r ** (-n - 1) / (1.0 + rinv) ** 2
    rn = r**n
    return n / kappa * r ** (n - 1) / (1.0 + rn) ** 2


def dose_response_slope_at_zero(kappa: float, n: int) -> float:
    return 1.0 / kappa if n == 1 else 0.0


def population_bound(params: ModelParams) -> float:
    """Upper bound ``Lambda/mu`` of S + E + I + V on the invariant region."""
    return params.Lambda / params.mu


def concentration_bound(params: ModelParams) -> float:
    return params.phi * params.Lambda / (params.omega * params.mu)


def make_rhs(params: ModelParams):
    """Return ``f(t, y) -> list`` evaluating the vector field on plain floats.

    Used by the integrator's inner loop, where NamedTuple construction and
    attribute lookups dominate the cost.
    """
    Lam, mu = params.Lambda, params.mu
    b1, b2, a1, a2 = params.beta1, params.beta2, params.alpha1, params.alpha2
    q1 = params.xi + mu
    q4 = params.gamma + params.d + mu
    xi, sigma, phi, omega = params.xi, params.sigma, params.phi, params.omega
    back = (1.0 - params.p) * params.eta
    ev = params.eta + mu
    kappa, n = params.kappa, params.n

    def rhs(t, y):
        S, E, I, V, C = y
        g = dose_response(C, kappa, n)
        inf_S = (b1 * I + a1 * g) * S
        inf_V = (b2 * I + a2 * g) * V
        return [
            Lam - inf_S - (sigma + mu) * S + back * V,
            inf_S + inf_V - q1 * E,
            xi * E - q4 * I,
            sigma * S - inf_V - ev * V,
            phi * I - omega * C,
        ]

    return rhs


def vector_field(params: ModelParams, x) -> DerivVec:
    return DerivVec(*make_rhs(params)(0.0, tuple(x)))


def jacobian(params: ModelParams, x) -> np.ndarray:
    """Analytic 5x5 Jacobian of :func:`vector_field` at ``x``."""
    S, E, I, V, C = (float(v) for v in x)
    P = params
    g = dose_response(C, P.kappa, P.n)
    dg = dose_response_slope(C, P.kappa, P.n)
    J = np.zeros((5, 5))
    # S
    J[0, 0] = -P.beta1 * I - P.sigma - P.alpha1 * g - P.mu
    J[0, 2] = -P.beta1 * S
    J[0, 3] = (1.0 - P.p) * P.eta
    J[0, 4] = -P.alpha1 * S * dg
    # E
    J[1, 0] = P.beta1 * I + P.alpha1 * g
    J[1, 1] = -(P.xi + P.mu)
    J[1, 2] = P.beta1 * S + P.beta2 * V
    J[1, 3] = P.beta2 * I + P.alpha2 * g
    J[1, 4] = (P.alpha1 * S + P.alpha2 * V) * dg
    # I
    J[2, 1] = P.xi
    J[2, 2] = -(P.gamma + P.d + P.mu)
    # V
    J[3, 0] = P.sigma
    J[3, 2] = -P.beta2 * V
    J[3, 3] = -P.beta2 * I - (P.eta + P.mu) - P.alpha2 * g
    J[3, 4] = -P.alpha2 * V * dg
    # C
    J[4, 2] = P.phi
    J[4, 4] = -P.omega
    return J
