"""Delay-induced spectral analysis at the coexistence state.

With digestion delay tau, mode n of the linearization has the transcendental
characteristic function

    gamma*lam^2 + t_n*lam + (b*lam + m_n)*exp(-lam*tau) + d_n,

whose purely imaginary crossings this module locates: the crossing frequency
per mode, the ladder of critical delays, the first overall critical delay,
and the crossing speed (transversality).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .exceptions import HypothesisError, NumericalError
from .model import ModelParams, check_hypotheses, positive_equilibrium

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpectralCoeffsDelay:
    """Mode-n coefficients of the delayed characteristic function.

    script_t is the quartic's middle coefficient t_n**2 - 2*gamma*d_n - b**2,
    positive whenever the homogeneous mode is delay-free stable.
    """

    n: int
    t_n: float
    m_n: float
    d_n: float
    b: float
    script_t: float


@dataclass(frozen=True)
class HopfPoint:
    """A critical delay for mode n: the j-th delay at which the mode's
    eigenvalue pair reaches the imaginary axis at frequency omega.

    transversality is the (always positive) crossing-speed expression
    guaranteeing the pair genuinely enters the right half plane.
    """

    n: int
    j: int
    omega: float
    tau_crit: float
    transversality: float


@dataclass(frozen=True)
class TauStar:
    """First overall critical delay.

    tau is the minimum over contributing modes of the first critical delay,
    attained by mode n0 at frequency omega.  s0 lists every mode (up to the
    scanned ceiling) admitting an imaginary-axis crossing, and first_crossings
    holds the j = 0 crossing of each such mode.
    """

    tau: float
    n0: int
    omega: float
    s0: tuple[int, ...]
    first_crossings: tuple[HopfPoint, ...]


def delay_char_coeffs(p: ModelParams, n: int) -> SpectralCoeffsDelay:
    """Coefficients of mode n's delayed characteristic function."""
    eq = positive_equilibrium(p)
    ksq = p.wavenumber_sq(n)
    t_n = p.alpha + eq.m + (1.0 + p.gamma * p.d) * ksq
    m_n = p.r * eq.a * eq.m * (1.0 - p.alpha * p.r - p.r * eq.a * ksq)
    d_n = p.d * (p.alpha + eq.m + ksq) * ksq
    b = -p.gamma * p.r ** 2 * eq.a ** 2 * eq.m
    script_t = t_n * t_n - 2.0 * p.gamma * d_n - b * b
    return SpectralCoeffsDelay(n, t_n, m_n, d_n, b, script_t)


def char_residual(p: ModelParams, n: int, lam: complex, tau: float) -> complex:
    """Residual of mode n's delayed characteristic function at (lam, tau)."""
    c = delay_char_coeffs(p, n)
    return (p.gamma * lam * lam + c.t_n * lam
            + (c.b * lam + c.m_n) * cmath.exp(-lam * tau) + c.d_n)


def crossing_frequency(p: ModelParams, n: int) -> Optional[float]:
    """Frequency at which mode n's eigenvalues can reach the imaginary axis.

    Substituting lam = i*omega leads to a quadratic in z = omega**2 whose
    unique positive root exists exactly when d_n**2 - m_n**2 < 0; returns
    sqrt of that root, or None when the mode admits no crossing.
    """
    c = delay_char_coeffs(p, n)
    if c.script_t <= 0.0:
        raise HypothesisError(
            f"mode {n}: quartic middle coefficient is not positive "
            "(homogeneous mode is not delay-free stable)"
        )
    gap = c.d_n * c.d_n - c.m_n * c.m_n
    if gap >= 0.0:
        if c.d_n + c.m_n <= 0.0:
            raise HypothesisError(
                f"mode {n}: nonpositive delay-free determinant (d_n + m_n <= 0); "
                "the mode is already unstable without delay"
            )
        return None
    z = (-c.script_t + math.sqrt(c.script_t ** 2 - 4.0 * p.gamma ** 2 * gap)) \
        / (2.0 * p.gamma ** 2)
    return math.sqrt(z)


def transversality_at(p: ModelParams, n: int) -> float:
    """Crossing-speed expression for mode n; strictly positive on any crossing.

    This is the real part of the reciprocal eigenvalue slope in tau at the
    crossing, which shares its sign with the actual slope.
    """
    omega = crossing_frequency(p, n)
    if omega is None:
        raise HypothesisError(f"mode {n} admits no imaginary-axis crossing")
    c = delay_char_coeffs(p, n)
    gap = c.d_n * c.d_n - c.m_n * c.m_n
    radicand = c.script_t ** 2 - 4.0 * p.gamma ** 2 * gap
    if radicand <= 0.0:
        raise NumericalError(f"mode {n}: degenerate crossing (zero radicand)")
    return math.sqrt(radicand) / (c.b ** 2 * omega ** 2 + c.m_n ** 2)


def critical_delays(p: ModelParams, n: int, j_max: int = 3) -> list[HopfPoint]:
    """The first j_max + 1 critical delays of mode n, in increasing order.

    The crossing phase is recovered from the exact (cos, sin) pair of the
    imaginary-axis condition via the two-argument arctangent mapped into
    [0, 2*pi); successive delays differ by exactly 2*pi/omega.
    """
    omega = crossing_frequency(p, n)
    if omega is None:
        raise HypothesisError(f"mode {n} admits no imaginary-axis crossing")
    c = delay_char_coeffs(p, n)
    den = c.m_n ** 2 + omega ** 2 * c.b ** 2
    if den == 0.0:
        raise NumericalError(f"mode {n}: singular phase normalization")
    cos_val = ((p.gamma * c.m_n - c.b * c.t_n) * omega ** 2 - c.m_n * c.d_n) / den
    sin_val = (c.m_n * c.t_n * omega + omega * c.b * (p.gamma * omega ** 2 - c.d_n)) / den
    angle = math.atan2(sin_val, cos_val) % TWO_PI
    trans = transversality_at(p, n)
    return [
        HopfPoint(n, j, omega, (angle + TWO_PI * j) / omega, trans)
        for j in range(j_max + 1)
    ]


def mode_ceiling(p: ModelParams, margin: int = 5, n_cap: int = 10_000) -> int:
    """Scan ceiling for crossing modes: first n with d_n - m_n >= 0, plus margin.

    d_n - m_n is an upward parabola in the squared wave number, so every mode
    at or beyond the returned ceiling (minus the margin) admits no crossing.
    """
    for n in range(n_cap + 1):
        c = delay_char_coeffs(p, n)
        if c.d_n - c.m_n >= 0.0:
            return n + margin
    raise NumericalError(f"no crossing-free mode found below n = {n_cap}")


def tau_star(p: ModelParams, n_max: Optional[int] = None, j_max: int = 0) -> TauStar:
    """First critical delay over all modes, with the per-mode crossing report.

    Scans modes 0..n_max (default: mode_ceiling) for imaginary-axis
    crossings and returns the smallest first critical delay along with the
    attaining mode and frequency.  Raises when no mode admits a crossing —
    the coexistence state then stays stable for every delay.
    """
    report = check_hypotheses(p)
    if not (report.h1 and report.h2 and report.h3):
        failed = [name for name, ok in
                  (("h1", report.h1), ("h2", report.h2), ("h3", report.h3))
                  if not ok]
        raise HypothesisError(
            f"tau_star requires hypotheses h1-h3; failing: {', '.join(failed)}"
        )
    if n_max is None:
        n_max = mode_ceiling(p)
    s0: list[int] = []
    firsts: list[HopfPoint] = []
    for n in range(n_max + 1):
        if crossing_frequency(p, n) is None:
            continue
        s0.append(n)
        firsts.append(critical_delays(p, n, j_max=j_max)[0])
    if not s0:
        raise HypothesisError(
            "no mode admits an imaginary-axis crossing: the coexistence "
            "state is stable for every delay"
        )
    best = min(firsts, key=lambda hp: hp.tau_crit)
    return TauStar(
        tau=best.tau_crit,
        n0=best.n,
        omega=best.omega,
        s0=tuple(s0),
        first_crossings=tuple(firsts),
    )


def eigenvalue_slope(p: ModelParams, n: int, lam: complex, tau: float) -> complex:
    """d(lam)/d(tau) along a root branch of mode n's characteristic function."""
    c = delay_char_coeffs(p, n)
    shift = cmath.exp(-lam * tau)
    numerator = lam * (c.b * lam + c.m_n) * shift
    denominator = (2.0 * p.gamma * lam + c.t_n
                   + (c.b - tau * (c.b * lam + c.m_n)) * shift)
    if denominator == 0:
        raise NumericalError(f"mode {n}: vanishing slope denominator at {lam!r}")
    return numerator / denominator
