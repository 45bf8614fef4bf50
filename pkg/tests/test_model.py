"""Kinetics, equilibria, and hypothesis predicates.

Closed-form equilibrium components are checked against an independent
nullcline-intersection root find, and the kinetic rates against values
computed by hand from the model definition.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import bisect

from musselbed import (HypothesisError, ModelParams, boundary_equilibrium,
                       check_hypotheses, delta0, hypothesis_h1,
                       positive_equilibrium, reaction_rhs, rho0)


def _seeded_admissible_params(count: int, seed: int = 471):
    """Random parameter sets with a coexistence state, reproducibly."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        alpha = float(rng.uniform(0.05, 0.9))
        r = float(rng.uniform(1.0 + 0.02, 1.0 / alpha - 1e-9))
        out.append(ModelParams(r=r, alpha=alpha,
                               gamma=float(rng.uniform(0.1, 8.0)),
                               d=float(rng.uniform(0.01, 2.0))))
    return out


def test_kinetic_rates_match_hand_computed_point():
    # dm = 0.5*(2*0.5 - 1/1.5) = 1/6, da = (0.1*0.5 - 0.25)/0.5 = -0.4
    p = ModelParams(r=2.0, alpha=0.1, gamma=0.5)
    dm, da = reaction_rhs(0.5, 0.5, 0.5, 0.5, p)
    assert dm == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert da == pytest.approx(-0.4, abs=1e-15)


def test_kinetic_rates_broadcast_over_arrays():
    p = ModelParams(r=2.0, alpha=0.1, gamma=0.5)
    m = np.array([0.5, 0.125, 0.0])
    a = np.array([0.5, 4.0 / 9.0, 1.0])
    dm, da = reaction_rhs(m, a, m, a, p)
    for k in range(3):
        dm_k, da_k = reaction_rhs(float(m[k]), float(a[k]),
                                  float(m[k]), float(a[k]), p)
        assert dm[k] == pytest.approx(dm_k, abs=1e-15)
        assert da[k] == pytest.approx(da_k, abs=1e-15)


def test_delayed_arguments_enter_only_the_mussel_equation():
    p = ModelParams(r=2.0, alpha=0.1, gamma=0.5)
    base = reaction_rhs(0.4, 0.6, 0.2, 0.9, p)
    moved = reaction_rhs(0.4, 0.6, 0.3, 0.7, p)
    assert base[0] != moved[0]
    assert base[1] == moved[1]


def test_boundary_state_is_a_fixed_point():
    eq = boundary_equilibrium()
    assert (eq.m, eq.a) == (0.0, 1.0)
    for p in _seeded_admissible_params(5):
        dm, da = reaction_rhs(eq.m, eq.a, eq.m, eq.a, p)
        assert dm == 0.0
        assert da == 0.0


def test_coexistence_state_zeroes_the_kinetics():
    for p in _seeded_admissible_params(30):
        eq = positive_equilibrium(p)
        dm, da = reaction_rhs(eq.m, eq.a, eq.m, eq.a, p)
        assert abs(dm) < 1e-14
        assert abs(da) < 1e-14


def test_coexistence_state_matches_nullcline_intersection():
    # Independent route: a(m) = alpha/(alpha+m) from the algae nullcline,
    # then bisect r*a(m) - 1/(1+m) = 0 on m.
    for p in _seeded_admissible_params(30):
        def growth_balance(m: float) -> float:
            return p.r * p.alpha / (p.alpha + m) - 1.0 / (1.0 + m)

        hi = 1.0
        while growth_balance(hi) > 0.0:
            hi *= 2.0
        m_root = bisect(growth_balance, 1e-12, hi, xtol=1e-14)
        eq = positive_equilibrium(p)
        assert eq.m == pytest.approx(m_root, abs=1e-10)
        assert eq.a == pytest.approx(p.alpha / (p.alpha + m_root), abs=1e-10)


def test_reference_equilibrium_values():
    eq = positive_equilibrium(ModelParams(r=2.0, alpha=0.10, gamma=0.5))
    assert eq.m == pytest.approx(0.1250, abs=1e-12)
    assert eq.a == pytest.approx(4.0 / 9.0, abs=1e-12)


def test_equilibrium_component_identities():
    for p in _seeded_admissible_params(30):
        eq = positive_equilibrium(p)
        assert eq.a == pytest.approx(p.alpha / (p.alpha + eq.m), rel=1e-12)
        assert p.r * eq.a * (1.0 + eq.m) == pytest.approx(1.0, rel=1e-12)
        assert delta0(p) == pytest.approx(p.r * eq.a, rel=1e-12)


def test_equilibrium_requires_admissible_parameters():
    for bad in (ModelParams(r=0.5, alpha=0.1, gamma=0.5),
                ModelParams(r=1.0, alpha=0.1, gamma=0.5),
                ModelParams(r=10.0, alpha=0.1, gamma=0.5),
                ModelParams(r=1.5, alpha=0.95, gamma=0.5)):
        assert not hypothesis_h1(bad)
        with pytest.raises(HypothesisError):
            positive_equilibrium(bad)


def test_parameter_validation_rejects_nonpositive_values():
    with pytest.raises(ValueError):
        ModelParams(r=-1.0, alpha=0.1, gamma=0.5)
    with pytest.raises(ValueError):
        ModelParams(r=2.0, alpha=0.0, gamma=0.5)
    with pytest.raises(ValueError):
        ModelParams(r=2.0, alpha=0.1, gamma=0.5, d=0.0)
    with pytest.raises(ValueError):
        ModelParams(r=2.0, alpha=0.1, gamma=0.5, tau=-0.1)
    with pytest.raises(ValueError):
        ModelParams(r=2.0, alpha=0.1, gamma=0.5, l=0.0)
    # tau = 0 is the delay-free case and must be accepted
    ModelParams(r=2.0, alpha=0.1, gamma=0.5, tau=0.0)


def test_wavenumber_squared():
    p = ModelParams(r=2.0, alpha=0.1, gamma=0.5, l=2.0)
    assert p.wavenumber_sq(0) == 0.0
    assert p.wavenumber_sq(3) == pytest.approx(2.25, rel=1e-15)


def test_hypothesis_report_on_reference_parameters():
    report = check_hypotheses(ModelParams(r=2.0, alpha=0.10, gamma=0.5, d=1.0))
    assert report.h1 and report.h2 and report.h3
    names = [name for name, _ in report.details]
    assert len(names) == len(set(names))


def test_hypothesis_report_without_coexistence_state():
    report = check_hypotheses(ModelParams(r=0.5, alpha=0.10, gamma=0.5))
    assert not report.h1
    assert not report.h2
    assert not report.h3


def test_homogeneous_stability_predicate_tracks_trace_sign():
    # delta0^2 - rho0 < 0 is equivalent to a positive delay-free trace
    # margin of the homogeneous mode; check the equivalence on draws.
    for p in _seeded_admissible_params(40, seed=92):
        eq = positive_equilibrium(p)
        trace_margin = (p.alpha / eq.a
                        - p.gamma * p.r ** 2 * eq.a ** 2 * eq.m)
        gap = delta0(p) ** 2 - rho0(p)
        assert (gap < 0.0) == (trace_margin > 0.0) or (
            math.isclose(gap, 0.0, abs_tol=1e-12))
