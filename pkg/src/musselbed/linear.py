"""Delay-free linear analysis at the coexistence state.

Per cosine mode n the linearization yields the quadratic

    gamma * lambda^2 + t_tilde(n) * lambda + d_tilde(n) = 0,

whose coefficients and roots this module computes, along with the stability
of the mussel-free state, the Hopf critical values of the capture rate r for
the non-spatial system, and the diffusion-driven (Turing) instability
report and critical curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import bisect

from .exceptions import HypothesisError, NumericalError
from .model import (
    ModelParams,
    check_hypotheses,
    delta0,
    hypothesis_h1,
    positive_equilibrium,
    rho0,
)

# Number of initial subdivisions for sign-scans before bisection; the scanned
# functions are smooth with at most a handful of roots, so a dense scan plus
# bisection is robust and still cheap.
_SCAN_POINTS = 10_000
_EDGE = 1e-9


@dataclass(frozen=True)
class SpectralCoeffsNoDelay:
    """Mode-n quadratic coefficients: gamma*lam^2 + t_tilde*lam + d_tilde = 0."""

    n: int
    t_tilde: float
    d_tilde: float


@dataclass(frozen=True)
class TuringReport:
    """Diffusion-driven instability classification at one parameter point.

    g_r is the quadratic's slope coefficient in k^2, lambda_disc the
    discriminant g_r^2 - 4*d*d_tilde(0), kc_squared the continuous minimizer
    of the mode determinant (present only when the defining bracket is
    positive), and min_mode_value the continuous minimum of the determinant
    over k^2 >= 0.  The verdict is "stable", "turing-unstable", or
    "hopf-unstable"; marginal flags a zero-minimum borderline case that was
    conservatively classified stable.  The discrete scan over integer modes
    is reported separately since admissible wave numbers are n/l.
    """

    g_r: float
    lambda_disc: float
    kc_squared: Optional[float]
    min_mode_value: float
    verdict: str
    marginal: bool
    discrete_min_n: int
    discrete_min_value: float


@dataclass(frozen=True)
class RHopfPoint:
    """A Hopf critical value of r for the non-spatial system.

    transversality_sign is +1 when the eigenvalue pair crosses into the right
    half plane as r increases through r_hopf, -1 when it crosses back.
    """

    r: float
    transversality_sign: int


def _j11(m_star: float) -> float:
    """Self-activation entry of the kinetic Jacobian, m*/(1+m*)^2."""
    return m_star / (1.0 + m_star) ** 2


def char_coeffs_no_delay(p: ModelParams, n: int) -> SpectralCoeffsNoDelay:
    """Quadratic coefficients of mode n for the delay-free linearization."""
    eq = positive_equilibrium(p)
    ksq = p.wavenumber_sq(n)
    t_tilde = (1.0 + p.gamma * p.d) * ksq + p.alpha / eq.a \
        - p.gamma * p.r ** 2 * eq.a ** 2 * eq.m
    d_tilde = p.d * ksq ** 2 \
        + (p.d * p.alpha / eq.a - p.r ** 2 * eq.a ** 2 * eq.m) * ksq \
        + p.alpha * p.r * (p.r - 1.0) * eq.a
    return SpectralCoeffsNoDelay(n, t_tilde, d_tilde)


def eigenvalues_no_delay(p: ModelParams, n: int) -> tuple[complex, complex]:
    """The two roots of mode n's quadratic, plus-branch first."""
    c = char_coeffs_no_delay(p, n)
    disc = complex(c.t_tilde * c.t_tilde - 4.0 * p.gamma * c.d_tilde)
    root = disc ** 0.5
    return (
        (-c.t_tilde + root) / (2.0 * p.gamma),
        (-c.t_tilde - root) / (2.0 * p.gamma),
    )


def boundary_stability(p: ModelParams, n_max: int = 20) -> str:
    """Stability verdict for the mussel-free state (0, 1).

    Mode n contributes real eigenvalues r - 1 - d*n^2/l^2 and
    -(alpha + n^2/l^2)/gamma; every eigenvalue except the homogeneous
    r - 1 is strictly negative, so the verdict follows the sign of the
    rightmost eigenvalue over the scanned modes: "stable" when negative,
    "unstable" when positive, "marginal" at zero (exactly r = 1).
    """
    rightmost = max(
        max(p.r - 1.0 - p.d * p.wavenumber_sq(n),
            -(p.alpha + p.wavenumber_sq(n)) / p.gamma)
        for n in range(n_max + 1)
    )
    if rightmost > 0.0:
        return "unstable"
    if rightmost == 0.0:
        return "marginal"
    return "stable"


def r_star(alpha: float) -> float:
    """Capture rate where the Hopf transversality in r changes sign.

    Equals (alpha + sqrt(alpha^2 + 8*alpha))/(4*alpha); eigenvalue pairs
    cross rightward at Hopf points below this value and leftward above it.
    """
    if not 0.0 < alpha < 1.0:
        raise HypothesisError(f"r_star needs 0 < alpha < 1, got {alpha!r}")
    return 0.25 * (alpha + math.sqrt(alpha * alpha + 8.0 * alpha)) / alpha


def hopf_points_in_r(alpha: float, gamma: float) -> list[RHopfPoint]:
    """All Hopf critical values of r for the non-spatial system.

    Finds the roots of delta0(r)^2 - rho0(r) on (1, 1/alpha) by a dense
    sign-scan followed by bisection.  Points coinciding with r_star (where
    the crossing speed vanishes) are excluded.  Returns the empty list when
    the trace never changes sign.
    """
    if not 0.0 < alpha < 1.0:
        raise HypothesisError(f"hopf_points_in_r needs 0 < alpha < 1, got {alpha!r}")

    def trace_gap(r: float) -> float:
        p = ModelParams(r=r, alpha=alpha, gamma=gamma)
        return delta0(p) ** 2 - rho0(p)

    lo = 1.0 + _EDGE
    hi = 1.0 / alpha - _EDGE
    rs = r_star(alpha)
    points: list[RHopfPoint] = []
    step = (hi - lo) / _SCAN_POINTS
    prev_r, prev_f = lo, trace_gap(lo)
    for i in range(1, _SCAN_POINTS + 1):
        cur_r = lo + i * step
        cur_f = trace_gap(cur_r)
        if prev_f == 0.0:
            root = prev_r
        elif prev_f * cur_f < 0.0:
            root = bisect(trace_gap, prev_r, cur_r, xtol=1e-12)
        else:
            prev_r, prev_f = cur_r, cur_f
            continue
        if abs(root - rs) > 1e-9:
            sign = 1 if root < rs else -1
            points.append(RHopfPoint(root, sign))
        prev_r, prev_f = cur_r, cur_f
    return points


def _detcoeffs(p: ModelParams) -> tuple[float, float]:
    """(g, d_tilde_0): slope and intercept of the determinant in k^2."""
    eq = positive_equilibrium(p)
    g = p.d * p.alpha / eq.a - p.r ** 2 * eq.a ** 2 * eq.m
    d0 = p.alpha * p.r * (p.r - 1.0) * eq.a
    return g, d0


def turing_analysis(p: ModelParams, n_scan: int = 50, strict: bool = True) -> TuringReport:
    """Classify diffusion-driven instability of the coexistence state.

    The mode determinant is the upward parabola d*u^2 + g*u + d_tilde(0) in
    u = k^2; the state is stable against all spatial modes when g >= 0, or
    when g < 0 with negative discriminant.  A negative continuous minimum
    while the homogeneous mode stays stable is the Turing verdict.

    Requires the homogeneous mode to be stable (the h2 predicate); with
    strict=True its failure raises, otherwise the verdict "hopf-unstable"
    is returned with the remaining fields still filled in.
    """
    report = check_hypotheses(p)
    if not report.h1:
        raise HypothesisError("turing_analysis requires the coexistence state (h1)")
    g, d0 = _detcoeffs(p)
    disc = g * g - 4.0 * p.d * d0
    kc_sq: Optional[float] = None
    if g < 0.0:
        kc_sq = -g / (2.0 * p.d)
        min_value = d0 - g * g / (4.0 * p.d)
    else:
        min_value = d0

    best_n, best_value = 0, d0
    for n in range(n_scan + 1):
        u = p.wavenumber_sq(n)
        value = p.d * u * u + g * u + d0
        if value < best_value:
            best_n, best_value = n, value

    marginal = False
    if not report.h2:
        if strict:
            raise HypothesisError(
                "homogeneous mode is not delay-free stable (h2 fails): "
                "the diffusion-driven classification does not apply"
            )
        verdict = "hopf-unstable"
    elif g >= 0.0 or disc < 0.0:
        verdict = "stable"
    elif disc == 0.0:
        verdict = "stable"
        marginal = True
    else:
        verdict = "turing-unstable"
    return TuringReport(
        g_r=g,
        lambda_disc=disc,
        kc_squared=kc_sq,
        min_mode_value=min_value,
        verdict=verdict,
        marginal=marginal,
        discrete_min_n=best_n,
        discrete_min_value=best_value,
    )


@dataclass(frozen=True)
class TuringCurvePoint:
    """One point of the diffusion-driven instability threshold curve."""

    alpha: float
    r: float
    branch: int


def turing_curve(alpha_range: tuple[float, float], d: float,
                 resolution: int = 50) -> list[TuringCurvePoint]:
    """Threshold curve of diffusion-driven instability in the (alpha, r) plane.

    For each alpha in the sampled range, finds the r-values in (1, 1/alpha)
    where the continuous minimum of the mode determinant touches zero
    (discriminant root with negative slope coefficient), by sign-scan plus
    bisection.  Alphas admitting no root contribute no points.  The curve is
    independent of gamma and of the domain length; admissibility of discrete
    wave numbers is the business of turing_analysis.
    """
    lo, hi = alpha_range
    if not (0.0 < lo <= hi < 1.0):
        raise HypothesisError(
            f"turing_curve needs 0 < alpha range < 1, got {alpha_range!r}"
        )
    if resolution < 1:
        raise ValueError("resolution must be at least 1")

    def disc_at(alpha: float, r: float) -> float:
        p = ModelParams(r=r, alpha=alpha, gamma=1.0, d=d)
        g, d0 = _detcoeffs(p)
        return g * g - 4.0 * d * d0

    points: list[TuringCurvePoint] = []
    for i in range(resolution):
        alpha = lo if resolution == 1 else lo + (hi - lo) * i / (resolution - 1)
        r_lo = 1.0 + _EDGE
        r_hi = 1.0 / alpha - _EDGE
        step = (r_hi - r_lo) / _SCAN_POINTS
        roots: list[float] = []
        prev_r, prev_f = r_lo, disc_at(alpha, r_lo)
        for k in range(1, _SCAN_POINTS + 1):
            cur_r = r_lo + k * step
            cur_f = disc_at(alpha, cur_r)
            if prev_f * cur_f < 0.0:
                roots.append(bisect(lambda r: disc_at(alpha, r), prev_r, cur_r,
                                    xtol=1e-12))
            prev_r, prev_f = cur_r, cur_f
        branch = 0
        for root in sorted(roots):
            p = ModelParams(r=root, alpha=alpha, gamma=1.0, d=d)
            g, d0 = _detcoeffs(p)
            if g >= 0.0:
                continue
            kc_sq = -g / (2.0 * d)
            residual = d * kc_sq * kc_sq + g * kc_sq + d0
            if abs(residual) > 1e-8:
                raise NumericalError(
                    f"curve point (alpha={alpha}, r={root}) leaves determinant "
                    f"residual {residual!r} at the critical wave number"
                )
            points.append(TuringCurvePoint(alpha, root, branch))
            branch += 1
    return points


def stable_mode_floor(p: ModelParams) -> int:
    """Smallest N such that every mode n >= N has positive trace and determinant.

    Exists for every parameter set with a coexistence state because both
    coefficients are upward parabolas in the squared wave number: the trace
    is positive past its single zero, the determinant past its larger root.
    """
    if not hypothesis_h1(p):
        raise HypothesisError("stable_mode_floor requires the coexistence state (h1)")
    eq = positive_equilibrium(p)
    # largest squared wave number at which either coefficient is still <= 0
    u_trace = (p.gamma * p.r ** 2 * eq.a ** 2 * eq.m - p.alpha / eq.a) \
        / (1.0 + p.gamma * p.d)
    g, d0 = _detcoeffs(p)
    disc = g * g - 4.0 * p.d * d0
    u_det = (-g + math.sqrt(disc)) / (2.0 * p.d) if disc >= 0.0 else 0.0
    u_bad = max(u_trace, u_det, 0.0)
    n = math.isqrt(int(u_bad * p.l * p.l)) + 2
    while n > 0:
        c = char_coeffs_no_delay(p, n - 1)
        if c.t_tilde > 0.0 and c.d_tilde > 0.0:
            n -= 1
        else:
            break
    return n
