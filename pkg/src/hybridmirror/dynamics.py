"""Hybrid state, Hamiltonian flow, and numerical integration.

The six scaled canonical variables are (q, pi) for the mirror and
(aA, bA), (aB, bB) for the two photon arms.  The dimensionless Hamiltonian

    H = (pi**2 + q**2)/2 + (rho_omega/2)(nA + nB) - (sqrt(2) kappa / 2) q nA

with nA = aA**2 + bA**2, nB = aB**2 + bB**2 generates

    dq/dtau  = pi
    dpi/dtau = -q + (kappa/sqrt(2)) nA
    daA/dtau = (rho_omega - sqrt(2) kappa q) bA
    dbA/dtau = -(rho_omega - sqrt(2) kappa q) aA
    daB/dtau = rho_omega bB
    dbB/dtau = -rho_omega aB

The interaction sign is chosen so that exactly these equations are the
Hamiltonian flow; the mirror equilibrium then sits at q_eq = +kappa/sqrt(2).
nA and nB are constants of motion; the integrator reports their drift at
every output sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConfigurationError, IntegrationError
from .params import DimensionlessParams

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HybridState:
    """One point of the hybrid phase space (scaled units)."""

    q: float
    pi: float
    aA: float
    bA: float
    aB: float
    bB: float

    @classmethod
    def standard(cls, q: float = 0.0, pi: float = 0.0) -> "HybridState":
        """Fifty-fifty photon preparation (1,0),(1,0) over a mirror point."""
        return cls(q=q, pi=pi, aA=1.0, bA=0.0, aB=1.0, bB=0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.pi, self.aA, self.bA, self.aB, self.bB])

    @classmethod
    def from_array(cls, y: np.ndarray) -> "HybridState":
        return cls(*(float(v) for v in y))

    def reversed_momenta(self) -> "HybridState":
        """Momentum flip (q, -pi, a, -b): conjugates the flow direction."""
        return HybridState(self.q, -self.pi, self.aA, -self.bA, self.aB, -self.bB)


@dataclass(frozen=True)
class StateDerivative:
    """d/dtau of the six state components."""

    q: float
    pi: float
    aA: float
    bA: float
    aB: float
    bB: float


@dataclass(frozen=True)
class StepControl:
    """Integrator control: exactly one of fixed step or local tolerance.

    ``step`` is the maximum internal step (the interval between output
    samples is subdivided evenly).  ``tol`` is a local error target per unit
    tau for the step-halving estimate.
    """

    step: float | None = None
    tol: float | None = None

    def __post_init__(self) -> None:
        if (self.step is None) == (self.tol is None):
            raise ConfigurationError("specify exactly one of step= or tol=")
        if self.step is not None and not (self.step > 0):
            raise ConfigurationError(f"step must be > 0, got {self.step!r}")
        if self.tol is not None and not (self.tol > 0):
            raise ConfigurationError(f"tol must be > 0, got {self.tol!r}")


@dataclass(frozen=True)
class Trajectory:
    """Integration output on a uniform tau grid with per-sample diagnostics."""

    tau: np.ndarray          # (n,)
    states: np.ndarray       # (n, 6) rows (q, pi, aA, bA, aB, bB)
    n_a: np.ndarray          # (n,) aA**2 + bA**2
    n_b: np.ndarray          # (n,)
    energy: np.ndarray       # (n,) hybrid energy

    def __post_init__(self) -> None:
        n = len(self.tau)
        if self.states.shape != (n, 6):
            raise ConfigurationError("states shape must match tau grid")
        if n >= 2 and not np.all(np.diff(self.tau) > 0):
            raise ConfigurationError("tau grid must be strictly increasing")

    def state_at(self, i: int) -> HybridState:
        return HybridState.from_array(self.states[i])

    @property
    def final_state(self) -> HybridState:
        return self.state_at(len(self.tau) - 1)

    def conservation_drift(self) -> tuple[float, float, float]:
        """Max |nA - nA(0)|, |nB - nB(0)|, |E - E(0)| along the trajectory."""
        return (
            float(np.max(np.abs(self.n_a - self.n_a[0]))),
            float(np.max(np.abs(self.n_b - self.n_b[0]))),
            float(np.max(np.abs(self.energy - self.energy[0]))),
        )

    def to_csv(self, path: str) -> None:
        header = "tau,q,pi,aA,bA,aB,bB,nA,nB,energy"
        with open(path, "w", newline="\n") as fh:
            fh.write(header + "\n")
            for i in range(len(self.tau)):
                row = [self.tau[i], *self.states[i],
                       self.n_a[i], self.n_b[i], self.energy[i]]
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def hybrid_energy(s: HybridState, p: DimensionlessParams) -> float:
    """Dimensionless hybrid Hamiltonian H/(hbar Omega)."""
    n_a = s.aA * s.aA + s.bA * s.bA
    n_b = s.aB * s.aB + s.bB * s.bB
    return (
        0.5 * (s.pi * s.pi + s.q * s.q)
        + 0.5 * p.omega_ratio * (n_a + n_b)
        - 0.5 * _SQRT2 * p.kappa * s.q * n_a
    )


def eom_rhs(s: HybridState, p: DimensionlessParams) -> StateDerivative:
    """Right-hand side of the equations of motion (symplectic gradient)."""
    w_a = p.omega_ratio - _SQRT2 * p.kappa * s.q
    return StateDerivative(
        q=s.pi,
        pi=-s.q + (p.kappa / _SQRT2) * (s.aA * s.aA + s.bA * s.bA),
        aA=w_a * s.bA,
        bA=-w_a * s.aA,
        aB=p.omega_ratio * s.bB,
        bB=-p.omega_ratio * s.aB,
    )


def conserved_quantities(
    s: HybridState, p: DimensionlessParams
) -> tuple[float, float, float]:
    """(nA, nB, energy) diagnostics for one state."""
    n_a = s.aA * s.aA + s.bA * s.bA
    n_b = s.aB * s.aB + s.bB * s.bB
    return n_a, n_b, hybrid_energy(s, p)


# ---------------------------------------------------------------------------
# numba kernels: the state lives in six scalars, the RHS is inlined by the
# jit.  Both kernels return (states, ok, tau_reached); ok=False flags a
# non-finite state encountered at tau_reached.

@numba.njit(inline="always")
def _deriv(q, pi, aA, bA, aB, bB, kappa, rw):
    w_a = rw - 1.4142135623730951 * kappa * q
    return (
        pi,
        -q + (kappa / 1.4142135623730951) * (aA * aA + bA * bA),
        w_a * bA,
        -w_a * aA,
        rw * bB,
        -rw * aB,
    )


@numba.njit(inline="always")
def _rk4_step(q, pi, aA, bA, aB, bB, h, kappa, rw):
    k1 = _deriv(q, pi, aA, bA, aB, bB, kappa, rw)
    k2 = _deriv(
        q + 0.5 * h * k1[0], pi + 0.5 * h * k1[1],
        aA + 0.5 * h * k1[2], bA + 0.5 * h * k1[3],
        aB + 0.5 * h * k1[4], bB + 0.5 * h * k1[5], kappa, rw,
    )
    k3 = _deriv(
        q + 0.5 * h * k2[0], pi + 0.5 * h * k2[1],
        aA + 0.5 * h * k2[2], bA + 0.5 * h * k2[3],
        aB + 0.5 * h * k2[4], bB + 0.5 * h * k2[5], kappa, rw,
    )
    k4 = _deriv(
        q + h * k3[0], pi + h * k3[1],
        aA + h * k3[2], bA + h * k3[3],
        aB + h * k3[4], bB + h * k3[5], kappa, rw,
    )
    c = h / 6.0
    return (
        q + c * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        pi + c * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        aA + c * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        bA + c * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
        aB + c * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]),
        bB + c * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5]),
    )


@numba.njit(cache=True)
def _integrate_fixed(y0, kappa, rw, tau_grid, h_max):
    n = tau_grid.shape[0]
    out = np.empty((n, 6))
    q, pi, aA, bA, aB, bB = y0[0], y0[1], y0[2], y0[3], y0[4], y0[5]
    out[0, 0], out[0, 1], out[0, 2] = q, pi, aA
    out[0, 3], out[0, 4], out[0, 5] = bA, aB, bB
    for i in range(1, n):
        dt = tau_grid[i] - tau_grid[i - 1]
        nsub = int(np.ceil(dt / h_max))
        if nsub < 1:
            nsub = 1
        h = dt / nsub
        for _ in range(nsub):
            q, pi, aA, bA, aB, bB = _rk4_step(q, pi, aA, bA, aB, bB, h, kappa, rw)
        if not (
            np.isfinite(q) and np.isfinite(pi)
            and np.isfinite(aA) and np.isfinite(bA)
            and np.isfinite(aB) and np.isfinite(bB)
        ):
            return out, False, tau_grid[i]
        out[i, 0], out[i, 1], out[i, 2] = q, pi, aA
        out[i, 3], out[i, 4], out[i, 5] = bA, aB, bB
    return out, True, tau_grid[n - 1]


@numba.njit(cache=True)
def _integrate_adaptive(y0, kappa, rw, tau_grid, tol):
    # Step doubling: err = |y(h) - y(h/2, h/2)|_inf / 15, accepted against
    # tol per unit tau, classic 1/4-power controller, safety 0.9.
    n = tau_grid.shape[0]
    out = np.empty((n, 6))
    q, pi, aA, bA, aB, bB = y0[0], y0[1], y0[2], y0[3], y0[4], y0[5]
    out[0, 0], out[0, 1], out[0, 2] = q, pi, aA
    out[0, 3], out[0, 4], out[0, 5] = bA, aB, bB
    # start conservatively relative to both oscillation rates
    h = 0.1 / max(1.0, rw)
    for i in range(1, n):
        tau = tau_grid[i - 1]
        tau_end = tau_grid[i]
        while tau < tau_end:
            if h > tau_end - tau:
                h = tau_end - tau
            big = _rk4_step(q, pi, aA, bA, aB, bB, h, kappa, rw)
            hh = 0.5 * h
            mid = _rk4_step(q, pi, aA, bA, aB, bB, hh, kappa, rw)
            two = _rk4_step(mid[0], mid[1], mid[2], mid[3], mid[4], mid[5],
                            hh, kappa, rw)
            err = 0.0
            for k in range(6):
                d = abs(big[k] - two[k])
                if d > err:
                    err = d
            err /= 15.0
            budget = tol * h
            if err <= budget:
                q, pi, aA, bA, aB, bB = two
                tau += h
                if not (np.isfinite(q) and np.isfinite(aA) and np.isfinite(aB)):
                    return out, False, tau
                if err > 0.0:
                    factor = 0.9 * (budget / err) ** 0.25
                    if factor > 4.0:
                        factor = 4.0
                    h *= factor
                else:
                    h *= 4.0
            else:
                factor = 0.9 * (budget / err) ** 0.25
                if factor < 0.1:
                    factor = 0.1
                h *= factor
                if h <= 1e-14:
                    return out, False, tau
        out[i, 0], out[i, 1], out[i, 2] = q, pi, aA
        out[i, 3], out[i, 4], out[i, 5] = bA, aB, bB
    return out, True, tau_grid[n - 1]


def integrate(
    s0: HybridState,
    p: DimensionlessParams,
    tau_end: float,
    control: StepControl,
    points: int = 129,
) -> Trajectory:
    """Integrate the hybrid flow to tau_end on a uniform output grid.

    Parameters
    ----------
    s0 : HybridState
        Initial state.
    p : DimensionlessParams
        Coupling and frequency ratio (x_th is irrelevant here).
    tau_end : float
        Final scaled time, > 0.
    control : StepControl
        Fixed internal step or local tolerance.
    points : int, optional
        Output grid size (uniform over [0, tau_end], independent of the
        internal step).

    Raises
    ------
    ConfigurationError
        Bad tau_end or points.
    IntegrationError
        Non-finite state detected (names the tau reached).
    """
    if not (tau_end > 0 and math.isfinite(tau_end)):
        raise ConfigurationError(f"tau_end must be finite and > 0, got {tau_end!r}")
    if points < 2:
        raise ConfigurationError(f"points must be >= 2, got {points!r}")
    tau_grid = np.linspace(0.0, tau_end, points)
    y0 = s0.as_array()
    if control.step is not None:
        states, ok, reached = _integrate_fixed(
            y0, p.kappa, p.omega_ratio, tau_grid, control.step
        )
    else:
        states, ok, reached = _integrate_adaptive(
            y0, p.kappa, p.omega_ratio, tau_grid, control.tol
        )
    if not ok:
        raise IntegrationError(
            f"non-finite state at tau = {reached:.6g}", tau_reached=float(reached)
        )
    n_a = states[:, 2] ** 2 + states[:, 3] ** 2
    n_b = states[:, 4] ** 2 + states[:, 5] ** 2
    energy = (
        0.5 * (states[:, 1] ** 2 + states[:, 0] ** 2)
        + 0.5 * p.omega_ratio * (n_a + n_b)
        - 0.5 * _SQRT2 * p.kappa * states[:, 0] * n_a
    )
    return Trajectory(tau=tau_grid, states=states, n_a=n_a, n_b=n_b, energy=energy)
