"""Closed-form solutions of the hybrid flow and the pointlike coherence.

With the mirror started at a known phase-space point the whole evolution is
elementary: the mirror is a shifted harmonic oscillation, arm B rotates
freely, and arm A rotates at the instantaneous rate rho_omega -
sqrt(2)*kappa*q(tau), whose integral has the closed form used throughout.

The off-diagonal coherence picks up only the interaction part of the phase,

    Phi(tau) = Theta(tau) - rho_omega*tau
             = -kappa**2 * theta(tau) + a*q0 + b*pi0,
    a = -sqrt(2)*kappa*sin(tau),  b = -sqrt(2)*kappa*(1 - cos(tau)),
    theta(tau) = tau - sin(tau),

which is linear in (q0, pi0) and independent of rho_omega: the optical
frequency cancels exactly, so every coherence quantity downstream is
omega-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .params import DimensionlessParams

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MirrorPhasePoint:
    """Scaled initial mirror position and momentum."""

    q0: float
    pi0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.q0) and math.isfinite(self.pi0)):
            raise ConsistencyError(f"non-finite mirror point ({self.q0}, {self.pi0})")


@dataclass(frozen=True)
class OscillationParams:
    """Mirror oscillation amplitude (>= 0) and phase in (-pi, pi]."""

    amp: float
    phase: float

    def __post_init__(self) -> None:
        if self.amp < 0:
            raise ConsistencyError(f"amplitude must be >= 0, got {self.amp!r}")


@dataclass(frozen=True)
class CoherenceSample:
    """Complex off-diagonal element rho_AB for one trajectory."""

    re: float
    im: float

    def __post_init__(self) -> None:
        if self.re * self.re + self.im * self.im > 0.25 + 1e-12:
            raise ConsistencyError(
                f"|rho_AB| exceeds 1/2: ({self.re}, {self.im})"
            )

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


def theta(tau):
    """theta(tau) = tau - sin(tau), the deterministic phase kernel."""
    return tau - np.sin(tau)


def oscillation_from_ic(
    m: MirrorPhasePoint, p: DimensionlessParams
) -> OscillationParams:
    """Amplitude/phase of the mirror oscillation about q_eq = kappa/sqrt(2).

    Uses the hypotenuse / two-argument-arctangent form, total everywhere
    (the naive pi0/cos(phase) form is singular at phase = +-pi/2).  The
    degenerate amp = 0 case fixes phase = 0 by convention.
    """
    dq = m.q0 - p.q_eq
    amp = math.hypot(dq, m.pi0)
    if amp == 0.0:
        return OscillationParams(amp=0.0, phase=0.0)
    phase = math.atan2(dq, m.pi0)
    if phase == -math.pi:
        phase = math.pi
    return OscillationParams(amp=amp, phase=phase)


def mirror_trajectory(
    o: OscillationParams, p: DimensionlessParams, tau: float
) -> tuple[float, float]:
    """(q, pi) at time tau: q = A sin(tau+phi) + q_eq, pi = A cos(tau+phi)."""
    return (
        o.amp * math.sin(tau + o.phase) + p.q_eq,
        o.amp * math.cos(tau + o.phase),
    )


def accumulated_phase(
    o: OscillationParams, p: DimensionlessParams, tau: float
) -> float:
    """Arm-A rotation angle Theta(tau), accumulated unwrapped.

    Theta(tau) = (rho_omega - kappa**2) tau
                 + sqrt(2) kappa A [cos(tau+phi) - cos(phi)]
               = integral of (rho_omega - sqrt(2) kappa q(s)) ds.
    """
    k = p.kappa
    return (p.omega_ratio - k * k) * tau + _SQRT2 * k * o.amp * (
        math.cos(tau + o.phase) - math.cos(o.phase)
    )


def photon_arm_a(
    o: OscillationParams, p: DimensionlessParams, tau: float
) -> tuple[float, float]:
    """(aA, bA) = (cos Theta, -sin Theta); aA**2 + bA**2 = 1 exactly."""
    th = accumulated_phase(o, p, tau)
    return math.cos(th), -math.sin(th)


def photon_arm_b(p: DimensionlessParams, tau: float) -> tuple[float, float]:
    """(aB, bB) = (cos rho_omega tau, -sin rho_omega tau): free rotation."""
    ang = p.omega_ratio * tau
    return math.cos(ang), -math.sin(ang)


def interaction_phase(kappa: float, tau, q0, pi0):
    """Phi(tau; q0, pi0), vectorized over any mix of array arguments.

    Phi = -kappa**2 (tau - sin tau)
          - sqrt(2) kappa [sin(tau) (q0 - q_eq) + (1 - cos(tau)) pi0]
    with q_eq = kappa/sqrt(2) absorbed into the constant term, leaving the
    linear form -kappa**2 theta(tau) + a q0 + b pi0 used by the thermal
    averaging routes.
    """
    k2 = kappa * kappa
    s = np.sin(tau)
    omc = 1.0 - np.cos(tau)
    return -k2 * (tau - s) - _SQRT2 * kappa * (s * q0 + omc * pi0)


def rho_ab_pointlike(
    m: MirrorPhasePoint, p: DimensionlessParams, tau: float
) -> CoherenceSample:
    """rho_AB for pointlike mirror initial conditions.

    Equal to (1/2)(aA + i bA)(aB - i bB) = (1/2) exp(-i Phi); the modulus is
    exactly 1/2 for every (m, tau) and the value is independent of
    omega_ratio.
    """
    phi = float(interaction_phase(p.kappa, tau, m.q0, m.pi0))
    return CoherenceSample(re=0.5 * math.cos(phi), im=-0.5 * math.sin(phi))
