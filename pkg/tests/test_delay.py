"""Delayed characteristic analysis: crossing frequencies, critical delays.

The delayed coefficients are tied to the delay-free ones through exact
reduction identities, every reported crossing is substituted back into
the transcendental characteristic function, and the eigenvalue slope is
checked against a finite difference of Newton-tracked roots.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from musselbed import (HypothesisError, ModelParams, char_coeffs_no_delay,
                       char_residual, check_hypotheses, critical_delays,
                       crossing_frequency, delay_char_coeffs,
                       eigenvalue_slope, mode_ceiling, tau_star,
                       transversality_at)
from musselbed.verify import _newton

REFERENCE = ModelParams(r=2.0, alpha=0.10, gamma=0.5, d=1.0)
REF_OMEGA = 0.32534071178670415
REF_TAU = 2.35445346214238
REF_SLOPE = 0.03727081517272211 - 0.040231468467524976j


def _seeded_admissible_params(count: int, seed: int = 6004):
    """Draws satisfying every structural hypothesis, reproducibly."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        alpha = float(rng.uniform(0.05, 0.9))
        r = float(rng.uniform(1.0 + 0.02, 1.0 / alpha - 1e-9))
        p = ModelParams(r=r, alpha=alpha,
                        gamma=float(rng.uniform(0.1, 8.0)),
                        d=float(rng.uniform(0.01, 2.0)))
        report = check_hypotheses(p)
        if report.h1 and report.h2 and report.h3:
            out.append(p)
    return out


def test_delayed_coefficients_reduce_to_delay_free_ones():
    # Setting the delay to zero merges the exponential terms into the
    # quadratic: t_n + b and d_n + m_n must reproduce the delay-free
    # trace and determinant coefficients exactly.
    for p in _seeded_admissible_params(50):
        for n in range(0, 6):
            lag = delay_char_coeffs(p, n)
            free = char_coeffs_no_delay(p, n)
            assert lag.t_n + lag.b == pytest.approx(free.t_tilde, abs=1e-10)
            assert lag.d_n + lag.m_n == pytest.approx(free.d_tilde, abs=1e-10)


def test_flat_mode_has_no_diffusive_damping():
    for p in _seeded_admissible_params(10, seed=41):
        assert delay_char_coeffs(p, 0).d_n == 0.0


def test_reference_crossing_frequency_and_first_delay():
    omega = crossing_frequency(REFERENCE, 0)
    assert omega == pytest.approx(REF_OMEGA, abs=1e-9)
    ts = tau_star(REFERENCE)
    assert ts.tau == pytest.approx(REF_TAU, abs=1e-9)
    assert ts.n0 == 0
    assert ts.omega == pytest.approx(REF_OMEGA, abs=1e-9)
    assert ts.s0 == (0,)


def test_characteristic_residual_vanishes_at_reported_crossings():
    for p in _seeded_admissible_params(25, seed=77):
        for n in range(0, 4):
            if crossing_frequency(p, n) is None:
                continue
            for hp in critical_delays(p, n, j_max=2):
                residual = char_residual(p, n, 1j * hp.omega, hp.tau_crit)
                assert abs(residual) < 1e-10


def test_critical_delays_are_increasing_and_evenly_spaced():
    for p in _seeded_admissible_params(15, seed=13):
        for n in range(0, 3):
            if crossing_frequency(p, n) is None:
                continue
            table = critical_delays(p, n, j_max=3)
            assert len(table) == 4
            spacing = 2.0 * math.pi / table[0].omega
            for j in range(1, 4):
                assert table[j].j == j
                gap = table[j].tau_crit - table[j - 1].tau_crit
                assert gap == pytest.approx(spacing, rel=1e-9)


def test_transversality_is_positive_at_crossings():
    for p in _seeded_admissible_params(25, seed=310):
        for n in range(0, 4):
            if crossing_frequency(p, n) is None:
                continue
            assert transversality_at(p, n) > 0.0


def test_first_delay_is_minimal_over_crossing_modes():
    for p in _seeded_admissible_params(15, seed=96):
        try:
            ts = tau_star(p)
        except HypothesisError:
            continue
        for n in ts.s0:
            first = critical_delays(p, n, j_max=0)[0]
            assert first.tau_crit >= ts.tau - 1e-12


def test_modes_above_the_ceiling_admit_no_crossing():
    for p in _seeded_admissible_params(15, seed=55):
        ceiling = mode_ceiling(p)
        for n in (ceiling, ceiling + 3):
            assert crossing_frequency(p, n) is None


def test_eigenvalue_slope_matches_tracked_root_difference():
    # Finite-difference oracle: Newton-converge the crossing root at
    # tau* +/- h and difference the results.
    h = 1e-6
    lam0 = 1j * REF_OMEGA
    lam_plus = _newton(REFERENCE, 0, lam0, REF_TAU + h)
    lam_minus = _newton(REFERENCE, 0, lam0, REF_TAU - h)
    assert lam_plus is not None and lam_minus is not None
    fd = (lam_plus - lam_minus) / (2.0 * h)
    slope = eigenvalue_slope(REFERENCE, 0, lam0, REF_TAU)
    assert slope.real == pytest.approx(fd.real, abs=1e-7)
    assert slope.imag == pytest.approx(fd.imag, abs=1e-7)
    assert slope.real == pytest.approx(REF_SLOPE.real, abs=1e-9)
    assert slope.imag == pytest.approx(REF_SLOPE.imag, abs=1e-9)


def test_first_delay_requires_hypotheses():
    with pytest.raises(HypothesisError):
        tau_star(ModelParams(r=0.5, alpha=0.10, gamma=0.5))
