import math

import numpy as np
import pytest

from sveirc import IntegratorConfig, endemic_residual, find_endemic, integrate
from sveirc.dynamics import tail_oscillation
from sveirc.model import population_bound
from sveirc.sampling import random_params, with_jc, with_rc
from sveirc.thresholds import threshold_report


@pytest.mark.parametrize("n", [1, 2])
def test_endemic_at_rc_two(baseline, n):
    P = with_rc(baseline.replace(n=n), 2.0)
    found = find_endemic(P)
    assert found
    eq = found[0]
    assert eq.interior
    assert eq.residual_norm < 1e-10 * P.Lambda
    S, E, I, V, C = eq.state
    assert C == pytest.approx(P.phi * I / P.omega, rel=1e-12)
    assert E == pytest.approx((P.gamma + P.d + P.mu) * I / P.xi, rel=1e-12)


def test_none_below_threshold(baseline):
    P = with_jc(baseline, 0.5 * threshold_report(baseline).j_c / threshold_report(baseline).r_c)
    P = with_rc(P, 0.5)
    assert threshold_report(P).j_c < 1
    assert find_endemic(P) == []


def test_residual_sign_near_zero(rng):
    checked = 0
    while checked < 100:
        P = random_params(rng, n=int(rng.integers(1, 3)))
        rc = threshold_report(P).r_c
        if abs(rc - 1.0) < 1e-2:
            continue
        checked += 1
        # small enough that both I << Lambda/mu and C << kappa
        I = 1e-8 * min(population_bound(P), P.kappa * P.omega / P.phi)
        h = endemic_residual(P, I)
        assert (h > 0) == (rc > 1)


def test_residual_negative_at_full_scale(rng):
    for _ in range(100):
        P = random_params(rng, n=int(rng.integers(1, 3)))
        assert endemic_residual(P, population_bound(P)) < 0


def test_found_above_threshold(rng):
    checked = 0
    while checked < 100:
        P = random_params(rng, n=int(rng.integers(1, 3)))
        if not threshold_report(P).r_c > 1.01:
            continue
        checked += 1
        found = find_endemic(P)
        assert found and any(e.interior for e in found)
        assert all(e.residual_norm < 1e-10 * P.Lambda for e in found)


def test_agrees_with_long_run_state(baseline):
    P = with_rc(baseline, 2.0)
    trace = integrate(P, (5.0, 0.5, 0.5, 1.0, 0.5), IntegratorConfig(t_end=3000.0))
    if tail_oscillation(trace) >= 1e-6:
        pytest.skip("tail has not settled")
    eq = find_endemic(P)[0].state
    assert math.dist(trace.final, eq) < 1e-3 * np.linalg.norm(eq)
    assert abs(endemic_residual(P, trace.final.I)) < 1e-6 * P.Lambda
