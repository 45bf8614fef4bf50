"""Core model: parameters, kinetics, equilibria, and hypothesis predicates.

The dimensionless system on the interval (0, l*pi) is

    dm/dt       = d * Lap(m) + m(t) * (r * a(t - tau) - 1 / (1 + m(t - tau))),
    gamma da/dt = Lap(a) + alpha * (1 - a(t)) - m(t) * a(t),

with homogeneous Neumann boundary conditions: m is the mussel biomass, a the
algae concentration.  `reaction_rhs` evaluates the kinetic (non-diffusive)
part with the time-scale ratio gamma already folded into the algae equation,
so it is the right-hand side actually integrated by the simulator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import HypothesisError


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters.

    r      rescaled capture rate
    alpha  exchange rate between the algae bed and the overlying water
    gamma  time-scale ratio between the two species
    d      diffusivity ratio (mussel over algae)
    tau    digestion delay
    l      domain half-length; the spatial domain is (0, l*pi)

    All fields must be strictly positive except tau, which may be zero.
    Mode n of the Neumann Laplacian has wave number n/l.
    """

    r: float
    alpha: float
    gamma: float
    d: float = 1.0
    tau: float = 0.0
    l: float = 1.0

    def __post_init__(self) -> None:
        for name in ("r", "alpha", "gamma", "d", "l"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if not self.tau >= 0.0:
            raise ValueError(f"tau must be nonnegative, got {self.tau!r}")

    def wavenumber_sq(self, n: int) -> float:
        """Squared wave number (n/l)**2 of the n-th cosine mode."""
        return (n / self.l) ** 2


@dataclass(frozen=True)
class Equilibrium:
    """A spatially homogeneous steady state (m, a)."""

    m: float
    a: float


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the three structural hypothesis checks.

    h1: the coexistence state exists (0 < alpha < 1 < r < 1/alpha).
    h2: the homogeneous mode is delay-free stable (delta0^2 - rho0 < 0).
    h3: zero is excluded as an eigenvalue for every spatial mode.

    `details` records the evaluated quantities (or the reason a predicate
    could not be evaluated) as (name, value) pairs, value possibly NaN.
    """

    h1: bool
    h2: bool
    h3: bool
    details: tuple[tuple[str, float], ...]


def reaction_rhs(m_now, a_now, m_delayed, a_delayed, p: ModelParams):
    """Kinetic rates (dm/dt, da/dt) at the given current and delayed states.

    With matched arguments (m_delayed == m_now, a_delayed == a_now) this is
    the delay-free kinetics.  Accepts scalars or numpy arrays elementwise.
    """
    dm = m_now * (p.r * a_delayed - 1.0 / (1.0 + m_delayed))
    da = (p.alpha * (1.0 - a_now) - m_now * a_now) / p.gamma
    return dm, da


def boundary_equilibrium() -> Equilibrium:
    """The mussel-free steady state (0, 1)."""
    return Equilibrium(0.0, 1.0)


def hypothesis_h1(p: ModelParams) -> bool:
    """True iff 0 < alpha < 1 < r < 1/alpha (strict, exact comparisons)."""
    return 0.0 < p.alpha < 1.0 < p.r < 1.0 / p.alpha


def positive_equilibrium(p: ModelParams) -> Equilibrium:
    """The coexistence steady state (m*, a*).

    m* = alpha*(r - 1)/(1 - alpha*r) and a* = (1 - alpha*r)/(r*(1 - alpha));
    both components are strictly positive exactly when hypothesis_h1 holds.
    """
    if not hypothesis_h1(p):
        raise HypothesisError(
            "no positive equilibrium: need 0 < alpha < 1 < r < 1/alpha, "
            f"got alpha={p.alpha!r}, r={p.r!r}"
        )
    m_star = p.alpha * (p.r - 1.0) / (1.0 - p.alpha * p.r)
    a_star = (1.0 - p.alpha * p.r) / (p.r * (1.0 - p.alpha))
    return Equilibrium(m_star, a_star)


def delta0(p: ModelParams) -> float:
    """(1 - alpha*r)/(1 - alpha); equals r*a* whenever the coexistence state exists."""
    return (1.0 - p.alpha * p.r) / (1.0 - p.alpha)


def rho0(p: ModelParams) -> float:
    """r*(1 - alpha)/(gamma*(r - 1)); defined only for r != 1."""
    if p.r == 1.0:
        raise ZeroDivisionError("rho0 is undefined at r = 1")
    return p.r * (1.0 - p.alpha) / (p.gamma * (p.r - 1.0))


def check_hypotheses(p: ModelParams) -> HypothesisReport:
    """Evaluate the three structural hypotheses with strict comparisons.

    h2 is delta0(r)^2 - rho0(r) < 0.  h3 holds when either
    d*gamma*rho0 - delta0^2 > 0, or that quantity is negative and
    (d*gamma*rho0 - delta0^2)^2 - 4*d*D0/m*^2 < 0, where D0 is the
    zero-mode determinant alpha*r*(r - 1)*a*.

    Boundary cases (equalities) are reported false.  When r <= 1 makes
    rho0 undefined, or the coexistence state is missing, h2/h3 are
    reported false with the reason recorded in details.
    """
    details: list[tuple[str, float]] = [("alpha", p.alpha), ("r", p.r)]
    h1 = hypothesis_h1(p)
    if p.r <= 1.0:
        details.append(("rho0 undefined: r <= 1", math.nan))
        return HypothesisReport(h1, False, False, tuple(details))

    d0 = delta0(p)
    r0 = rho0(p)
    h2_value = d0 * d0 - r0
    h2 = h2_value < 0.0
    details.append(("delta0^2 - rho0", h2_value))

    if not h1:
        # r > 1 but alpha*r >= 1: no coexistence state, so the mode
        # determinants entering h3 are meaningless.
        details.append(("h3 unevaluated: no coexistence state", math.nan))
        return HypothesisReport(h1, h2, False, tuple(details))

    eq = positive_equilibrium(p)
    d_tilde_0 = p.alpha * p.r * (p.r - 1.0) * eq.a
    spread = p.d * p.gamma * r0 - d0 * d0
    disc = spread * spread - 4.0 * p.d * d_tilde_0 / (eq.m * eq.m)
    h3 = spread > 0.0 or (spread < 0.0 and disc < 0.0)
    details.append(("d*gamma*rho0 - delta0^2", spread))
    details.append(("(d*gamma*rho0 - delta0^2)^2 - 4*d*D0/m*^2", disc))
    return HypothesisReport(h1, h2, h3, tuple(details))
