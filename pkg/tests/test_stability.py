import numpy as np
import pytest
from scipy.optimize import brentq

from sveirc import (
    certify_global_stability,
    jacobian,
    jacobian_blocks_at_dfe,
    kamgang_sallet_upper_bound,
    routh_hurwitz_dfe,
)
from sveirc.linalg import is_irreducible, is_metzler, stability_modulus
from sveirc.sampling import random_omega_point, random_params, with_jc, with_rc
from sveirc.stability import a3_split, dfe_spectrum_modulus, infected_block, upper_bound_charpoly
from sveirc.thresholds import disease_free_equilibrium, global_threshold_jc, threshold_report


def test_sv_block_is_stable(rng):
    for _ in range(200):
        P = random_params(rng)
        A, _ = jacobian_blocks_at_dfe(P)
        assert np.trace(A) == pytest.approx(-P.sigma - 2 * P.mu - P.eta, rel=1e-14)
        det = P.mu * (P.mu + P.sigma + P.eta) + P.p * P.eta * P.sigma
        assert np.linalg.det(A) == pytest.approx(det, rel=1e-10)
        assert stability_modulus(A) < 0.0


def test_infected_block_structure(baseline):
    _, B = jacobian_blocks_at_dfe(baseline.replace(n=2))
    assert B[1, 2] == 0.0
    P = baseline
    np.testing.assert_array_equal(np.diag(B), [-(P.gamma + P.d + P.mu), -(P.xi + P.mu), -P.omega])


def test_blocks_reproduce_full_jacobian(rng):
    for _ in range(50):
        P = random_params(rng, n=int(rng.integers(1, 3)))
        J = jacobian(P, disease_free_equilibrium(P).state())
        full = np.max(np.linalg.eigvals(J).real)
        assert dfe_spectrum_modulus(P) == pytest.approx(full, rel=1e-8, abs=1e-12 * np.max(np.abs(J)))


@pytest.mark.parametrize("target, stable", [(0.5, True), (2.0, False)])
def test_routh_hurwitz_examples(baseline, target, stable):
    rh = routh_hurwitz_dfe(with_rc(baseline, target))
    assert (rh.a3 > 0) == stable
    if stable:
        assert rh.hurwitz > 0


def test_a3_three_ways(rng):
    for _ in range(200):
        P = random_params(rng, n=int(rng.integers(1, 3)))
        rh = routh_hurwitz_dfe(P)
        _, B = jacobian_blocks_at_dfe(P)
        left, right = a3_split(P)
        scale = P.omega * max(left, right)
        assert rh.a3 == pytest.approx(-np.linalg.det(B), abs=1e-12 * scale)
        assert rh.a3 == pytest.approx(P.omega * (right - left), abs=1e-12 * scale)


def test_sign_equivalence_and_implication(rng):
    seen = 0
    while seen < 200:
        P = random_params(rng, n=int(rng.integers(1, 3)))
        rc = threshold_report(P).r_c
        if abs(rc - 1.0) <= 1e-3:
            continue
        seen += 1
        rh = routh_hurwitz_dfe(P)
        assert (rh.a3 > 0) == (rc < 1)
        if rh.a3 > 0:
            assert rh.a2 > 0 and rh.hurwitz > 0
        assert rh.a1 > 0


def test_upper_bound_domination(rng):
    for _ in range(20):
        P = random_params(rng)
        Abar = kamgang_sallet_upper_bound(P)
        s_bar = stability_modulus(Abar)
        for _ in range(100):
            M = infected_block(P, random_omega_point(P, rng))
            assert np.all(M <= Abar + 1e-14 * np.abs(Abar))
            assert is_metzler(M) and is_irreducible(M)
            assert stability_modulus(M) <= s_bar + 1e-12 * np.max(np.abs(Abar))


def test_upper_bound_charpoly_matches(rng):
    for _ in range(50):
        P = random_params(rng)
        c = np.poly(kamgang_sallet_upper_bound(P))
        rh = upper_bound_charpoly(P)
        np.testing.assert_allclose([rh.a1, rh.a2, rh.a3], c[1:], rtol=1e-9, atol=1e-12 * np.max(np.abs(c)))


def test_upper_bound_modulus_vanishes_at_jc_one(rng):
    for _ in range(20):
        P = with_jc(random_params(rng), 1.0)
        Abar = kamgang_sallet_upper_bound(P)
        assert abs(stability_modulus(Abar)) < 1e-8 * np.max(np.abs(Abar))
        below, above = with_jc(P, 0.9), with_jc(P, 1.1)
        assert stability_modulus(kamgang_sallet_upper_bound(below)) < 0
        assert stability_modulus(kamgang_sallet_upper_bound(above)) > 0


def test_certified_at_jc_point_eight(baseline):
    P = with_jc(baseline, 0.8)
    assert global_threshold_jc(P) == pytest.approx(0.8, rel=1e-14)
    v = certify_global_stability(P)
    assert v.globally_stable_certified and v.locally_stable
    assert all(c.passed for c in v.conditions.values())
    assert v.stability_modulus_upper_bound < 0


def _gap_scenario(baseline):
    """n = 1 parameters with J_c = 1.5 and R_c = 0.9, found by tuning sigma."""
    base = baseline.replace(beta2=1e-4, alpha2=1e-4)

    def ratio_gap(log_sigma):
        P = base.replace(sigma=float(np.exp(log_sigma)))
        rep = threshold_report(P)
        return rep.j_c / rep.r_c - 1.5 / 0.9

    sigma = float(np.exp(brentq(ratio_gap, np.log(1e-4), np.log(1e2))))
    return with_jc(base.replace(sigma=sigma), 1.5)


def test_gap_scenario_fails_a5_only(baseline):
    P = _gap_scenario(baseline)
    rep = threshold_report(P)
    assert rep.r_c == pytest.approx(0.9, rel=1e-9)
    v = certify_global_stability(P)
    assert v.locally_stable and not v.globally_stable_certified
    assert v.conditions["A5"].passed is False
    assert all(v.conditions[k].passed for k in ("A1", "A2", "A3", "A4"))
    assert v.reason.startswith("A5")


def test_no_global_criterion_for_n2(baseline):
    v = certify_global_stability(baseline.replace(n=2))
    assert not v.globally_stable_certified
    assert v.reason == "NoGlobalCriterionAvailable"
    assert v.stability_modulus_upper_bound is None


def test_marginal_band(baseline):
    v = certify_global_stability(with_rc(baseline, 1.0))
    assert v.marginal


def test_verdict_serializes(baseline):
    d = certify_global_stability(baseline).to_dict()
    assert set(d["conditions"]) == {"A1", "A2", "A3", "A4", "A5"}
    assert "diagnostic" in d["conditions"]["A3"]
