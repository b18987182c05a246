"""Adaptive integration of the model with invariant-region monitoring.

The integrator is a Dormand-Prince 5(4) pair with a PI step-size
controller. The state is five-dimensional, so the inner loop runs on
plain Python floats; numpy only appears when the trace is assembled.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import MaxStepsExceeded, StepSizeUnderflow, TraceTooShort
from .model import ModelParams, StateVec, concentration_bound, make_rhs, population_bound
from .stability import dfe_spectrum_modulus

__all__ = [
    "IntegratorConfig",
    "Trace",
    "InvariantReport",
    "default_horizon",
    "integrate",
    "check_invariant_region",
    "invariant_excess",
    "estimate_tail_floor",
    "dp_step",
]

# Dormand-Prince tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

SAFETY = 0.9
GROW_MIN, GROW_MAX = 0.2, 5.0
_PI_ALPHA = 0.7 / 5
_PI_BETA = 0.4 / 5


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``abs_tol`` is applied per component relative to that component's
    invariant-region bound (``Lambda/mu`` for S, E, I, V and
    ``phi*Lambda/(omega*mu)`` for C). ``t_end`` and
    ``dense_output_stride`` default to :func:`default_horizon` and
    ``t_end/1000``.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    t_end: Optional[float] = None
    max_steps: int = 500_000
    dense_output_stride: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.t_end is not None and not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.dense_output_stride is not None and not self.dense_output_stride > 0:
            raise ValueError("dense_output_stride must be positive")

    def resolved(self, params: ModelParams) -> "IntegratorConfig":
        t_end = self.t_end if self.t_end is not None else default_horizon(params)
        stride = self.dense_output_stride or t_end / 1000.0
        return replace(self, t_end=t_end, dense_output_stride=stride)


@dataclass(frozen=True)
class Trace:
    times: np.ndarray
    states: np.ndarray
    accepted_steps: int
    rejected_steps: int
    max_invariant_violation: float
    max_clamp: float = 0.0

    def __len__(self):
        return len(self.times)

    def state(self, k: int) -> StateVec:
        return StateVec(*self.states[k].tolist())

    @property
    def final(self) -> StateVec:
        return self.state(-1)

    def to_csv(self, handle=None) -> Optional[str]:
        """Write ``t,S,E,I,V,C`` rows with 17 significant digits."""
        own = handle is None
        buf = io.StringIO() if own else handle
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "S", "E", "I", "V", "C"])
        for t, row in zip(self.times.tolist(), self.states.tolist()):
            writer.writerow([f"{v:.17g}" for v in (t, *row)])
        return buf.getvalue() if own else None


def _slow_rates(params: ModelParams) -> float:
    P = params
    return min(P.mu, P.omega, P.eta, P.xi, P.gamma)


def default_horizon(params: ModelParams, multiples: float = 50.0) -> float:
    """``multiples`` times the slowest timescale of the model.

    The slowest timescale includes the linear growth or decay rate at the
    DFE, which becomes the bottleneck near the threshold. That rate is
    floored at 1e-3 of the slowest kinetic rate to keep the horizon finite.
    """
    slow = _slow_rates(params)
    local = abs(dfe_spectrum_modulus(params))
    return multiples / min(slow, max(local, 1e-3 * slow))


def _initial_step(rhs, t0, y0, f0, scale, rtol, t_end):
    d0 = math.sqrt(sum((y / (scale[i] * 1e-6 + rtol * abs(y) + 1e-300)) ** 2 for i, y in enumerate(y0)) / 5)
    d1 = math.sqrt(sum((f / (scale[i] * 1e-6 + rtol * abs(y0[i]) + 1e-300)) ** 2 for i, f in enumerate(f0)) / 5)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(h0, t_end * 1e-3)


def dp_step(rhs, t, y, f, h):
    """One Dormand-Prince step; returns the 5th-order solution and the seven stages.

    The last stage is evaluated at the new solution (first-same-as-last).
    """
    k = [f]
    n = len(y)
    for s in range(1, 7):
        a = _A[s]
        yi = [y[i] + h * sum(a[j] * k[j][i] for j in range(s)) for i in range(n)]
        k.append(rhs(t + _C[s] * h, yi))
    return yi, k


def integrate(params: ModelParams, x0, cfg: Optional[IntegratorConfig] = None) -> Trace:
    """Integrate from ``x0`` over ``[0, cfg.t_end]`` and sample at the dense stride.

    A step that drives a component below ``-tol_neg`` is rejected and
    retried at half size; smaller excursions are clamped to zero.
    """
    cfg = (cfg or IntegratorConfig()).resolved(params)
    rhs = make_rhs(params)
    N = population_bound(params)
    Cmax = concentration_bound(params)
    scale = (N, N, N, N, Cmax)
    atol = [cfg.abs_tol * s for s in scale]
    rtol = cfg.rel_tol
    tol_neg = 1e-10 * max(1.0, N)
    t_end = cfg.t_end
    stride = cfg.dense_output_stride

    n_out = int(math.floor(t_end / stride + 1e-9))
    out_t = [k * stride for k in range(n_out + 1)]
    if t_end - out_t[-1] > 1e-12 * t_end:
        out_t.append(t_end)
    out_y = [list(map(float, x0))]
    next_out = 1

    t = 0.0
    y = list(out_y[0])
    f = rhs(t, y)
    h = _initial_step(rhs, t, y, f, scale, rtol, t_end)
    h_min = 1e-14 * t_end
    err_prev = 1e-4
    accepted = rejected = 0
    max_clamp = 0.0
    just_rejected = False

    while t < t_end:
        if accepted + rejected >= cfg.max_steps:
            raise MaxStepsExceeded(f"exceeded {cfg.max_steps} steps at t = {t:g}")
        if h < h_min:
            raise StepSizeUnderflow(f"step size {h:g} underflow at t = {t:g}")
        h = min(h, t_end - t)
        y_new, k = dp_step(rhs, t, y, f, h)
        err_sq = 0.0
        for i in range(5):
            e = h * sum(_E[j] * k[j][i] for j in range(7))
            sc = atol[i] + rtol * max(abs(y[i]), abs(y_new[i]))
            err_sq += (e / sc) ** 2
        err = math.sqrt(err_sq / 5)

        worst = min(y_new)
        if worst < -tol_neg:
            rejected += 1
            h *= 0.5
            just_rejected = True
            continue
        if err > 1.0:
            rejected += 1
            h *= max(GROW_MIN, SAFETY * err ** (-0.2))
            just_rejected = True
            continue

        f_new = k[6]
        if worst < 0.0:
            max_clamp = max(max_clamp, -worst)
            y_new = [max(v, 0.0) for v in y_new]
            f_new = rhs(t + h, y_new)
        t_new = t + h
        # cubic Hermite dense output on (t, t_new]
        while next_out < len(out_t) and out_t[next_out] <= t_new * (1 + 1e-15):
            th = (out_t[next_out] - t) / h
            th = min(max(th, 0.0), 1.0)
            h00 = (1 + 2 * th) * (1 - th) ** 2
            h10 = th * (1 - th) ** 2
            h01 = th * th * (3 - 2 * th)
            h11 = th * th * (th - 1)
            row = [
                h00 * y[i] + h10 * h * f[i] + h01 * y_new[i] + h11 * h * f_new[i]
                for i in range(5)
            ]
            # interpolation undershoot between nonnegative nodes
            out_y.append([v if v >= 0.0 or v < -tol_neg else 0.0 for v in row])
            next_out += 1
        accepted += 1
        t, y, f = t_new, y_new, f_new

        err = max(err, 1e-10)
        fac = SAFETY * err ** (-_PI_ALPHA) * err_prev ** _PI_BETA
        fac = min(GROW_MAX, max(GROW_MIN, fac))
        if just_rejected:
            fac = min(fac, 1.0)
        h *= fac
        err_prev = err
        just_rejected = False

    while len(out_y) < len(out_t):
        out_y.append(list(y))
    times = np.array(out_t)
    states = np.array(out_y)
    excess = invariant_excess(states, params)
    return Trace(
        times=times,
        states=states,
        accepted_steps=accepted,
        rejected_steps=rejected,
        max_invariant_violation=float(np.max(excess)),
        max_clamp=max_clamp,
    )


def invariant_excess(states, params: ModelParams) -> np.ndarray:
    """Per-sample excess over the invariant-region bounds, in scaled units.

    Returns ``max((S+E+I+V)/N - 1, C/Cmax - 1, 0)`` with ``N = Lambda/mu``.
    """
    states = np.atleast_2d(np.asarray(states, dtype=float))
    N = population_bound(params)
    Cmax = concentration_bound(params)
    pop = states[:, :4].sum(axis=1) / N - 1.0
    conc = states[:, 4] / Cmax - 1.0
    return np.maximum(np.maximum(pop, conc), 0.0)


@dataclass(frozen=True)
class InvariantReport:
    max_population_excess: float
    max_concentration_excess: float
    min_S: float
    population_bound: float
    concentration_bound: float

    @property
    def scaled_violation(self) -> float:
        return max(
            self.max_population_excess / self.population_bound,
            self.max_concentration_excess / self.concentration_bound,
        )

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["scaled_violation"] = self.scaled_violation
        return d


def check_invariant_region(trace: Trace, params: ModelParams) -> InvariantReport:
    N = population_bound(params)
    Cmax = concentration_bound(params)
    pop = trace.states[:, :4].sum(axis=1) - N
    conc = trace.states[:, 4] - Cmax
    return InvariantReport(
        max_population_excess=float(max(np.max(pop), 0.0)),
        max_concentration_excess=float(max(np.max(conc), 0.0)),
        min_S=float(np.min(trace.states[:, 0])),
        population_bound=N,
        concentration_bound=Cmax,
    )


def estimate_tail_floor(trace: Trace, window_fraction: float = 0.25) -> StateVec:
    """Componentwise minimum over the last ``window_fraction`` of the samples."""
    if len(trace) < 10:
        raise TraceTooShort(f"need at least 10 samples, got {len(trace)}")
    if not 0.0 < window_fraction < 1.0:
        raise ValueError("window_fraction must lie in (0, 1)")
    start = int(math.floor(len(trace) * (1.0 - window_fraction)))
    return StateVec(*np.min(trace.states[start:], axis=0).tolist())


def tail_oscillation(trace: Trace, window_fraction: float = 0.25) -> float:
    """Relative peak-to-peak spread of the tail window (max over components)."""
    start = int(math.floor(len(trace) * (1.0 - window_fraction)))
    tail = trace.states[start:]
    span = np.max(tail, axis=0) - np.min(tail, axis=0)
    ref = np.maximum(np.max(np.abs(tail), axis=0), 1e-300)
    return float(np.max(span / ref))
