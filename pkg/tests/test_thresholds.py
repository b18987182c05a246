from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import params_strategy
from sveirc import (
    basic_reproduction_number,
    control_reproduction_number,
    disease_free_equilibrium,
    global_threshold_jc,
    next_generation_spectral_radius,
)
from sveirc.errors import RequiresHollingTypeII
from sveirc.sampling import random_params, scale_transmission
from sveirc.thresholds import threshold_report


def test_dfe_worked_example(baseline):
    dfe = disease_free_equilibrium(baseline)
    P = baseline
    A = np.array([[P.sigma + P.mu, -(1 - P.p) * P.eta], [-P.sigma, P.eta + P.mu]])
    oracle = np.linalg.solve(A, [P.Lambda, 0.0])
    assert dfe.S0 == pytest.approx(oracle[0], rel=1e-14)
    assert dfe.V0 == pytest.approx(oracle[1], rel=1e-14)
    assert dfe.S0 == pytest.approx(0.6 / 0.13, rel=1e-14)
    assert dfe.V0 == pytest.approx(0.2 / 0.13, rel=1e-14)


def test_dfe_without_vaccination(baseline):
    dfe = disease_free_equilibrium(baseline.replace(sigma=0.0))
    assert (dfe.S0, dfe.V0) == (pytest.approx(10.0, rel=1e-15), 0.0)


def test_vaccinated_ratio(rng):
    for _ in range(50):
        P = random_params(rng)
        dfe = disease_free_equilibrium(P)
        assert dfe.V0 / dfe.S0 == pytest.approx(P.sigma / (P.eta + P.mu), rel=1e-13)


def test_r0_worked_example(baseline):
    # xi*Lambda/(mu*(xi+mu)*(gamma+d+mu)) * (beta1 + alpha1*phi/(kappa*omega)) in exact arithmetic
    F = Fraction
    xi, lam, mu, gdm = F(2, 10), F(1), F(1, 10), F(25, 100)
    exact = xi * lam / (mu * (xi + mu) * gdm) * (F(3, 100) + F(2, 100) / (F(10) * F(1, 2)))
    assert exact == F(68, 75)
    assert basic_reproduction_number(baseline) == pytest.approx(float(exact), rel=1e-14)
    assert next_generation_spectral_radius(baseline.replace(sigma=0.0)) == pytest.approx(float(exact), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rc_matches_next_generation(n, rng):
    for _ in range(200):
        P = random_params(rng, n=n)
        rc = control_reproduction_number(P).r_c
        assert next_generation_spectral_radius(P) == pytest.approx(rc, rel=1e-10)


@settings(max_examples=100)
@given(P=params_strategy())
def test_decomposition_identity(P):
    rep = threshold_report(P)
    kron = 1.0 if P.n == 1 else 0.0
    assert rep.r_c == rep.r_c_dir + kron * rep.r_c_env


def test_kronecker_invariance(baseline):
    P = baseline.replace(n=3)
    rep = threshold_report(P)
    assert rep.r_c == rep.r_c_dir
    for field in ("alpha1", "alpha2", "phi", "omega", "kappa"):
        Q = P.replace(**{field: getattr(P, field) * (0.1 if field == "alpha2" else 7.0)})
        if Q.alpha2 > Q.alpha1:
            continue
        assert threshold_report(Q).r_c == rep.r_c


def test_linear_scaling(rng):
    for _ in range(20):
        P = random_params(rng)
        assert threshold_report(scale_transmission(P, 2.0)).r_c == pytest.approx(2.0 * threshold_report(P).r_c, rel=1e-14)


def test_zero_transmission_limit(baseline):
    assert next_generation_spectral_radius(scale_transmission(baseline, 1e-30)) < 1e-25


def test_r0_sigma_independent(baseline):
    values = {basic_reproduction_number(baseline.replace(sigma=s)) for s in (0.1, 1.0, 10.0)}
    assert len(values) == 1


def test_r0_dominates_rc_and_jc_dominates(rng):
    for _ in range(200):
        P = random_params(rng)
        rep = threshold_report(P)
        assert rep.r0 >= rep.r_c * (1 - 1e-14)
        assert rep.j_c > rep.r_c


def test_jc_equals_r0_without_vaccination(rng):
    for _ in range(100):
        P = random_params(rng).replace(sigma=0.0)
        assert global_threshold_jc(P) == pytest.approx(basic_reproduction_number(P), rel=1e-12)


def test_jc_requires_n1(baseline):
    with pytest.raises(RequiresHollingTypeII):
        global_threshold_jc(baseline.replace(n=2))
    rep = threshold_report(baseline.replace(n=2))
    assert rep.j_c is None and rep.j_c_reason


def test_rc_monotone(rng):
    up = ("beta1", "beta2", "alpha1", "alpha2", "phi")
    down = ("gamma", "omega")
    for _ in range(50):
        P = random_params(rng)
        base = threshold_report(P).r_c
        for name in up + down:
            factor = 1.1 if name not in ("beta2", "alpha2") else 0.9
            Q = P.replace(**{name: getattr(P, name) * factor})
            rc = threshold_report(Q).r_c
            sign = 1 if (name in up) == (factor > 1) else -1
            assert sign * (rc - base) >= -1e-15 * base
