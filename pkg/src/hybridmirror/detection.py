"""Averaged photon density matrix and detector probabilities.

In the {arm A, arm B} basis the thermally averaged reduced density matrix
is, in the interaction picture (optical phase removed),

    rho = [[1/2, c], [conj(c), 1/2]],   c = <rho_AB>,

and the two interferometer outputs project onto (|A> +- |B>)/sqrt(2), so

    P_{1,2} = Tr(rho P_{1,2}) = (1/2)[1 +- 2 Re c].

Both the literal trace contraction and the closed form are computed and
cross-checked on every call; they must agree to 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import MirrorPhasePoint, interaction_phase
from .decoherence import AveragedCoherence, MirrorModel
from .errors import ConsistencyError
from .params import DerivedParams

_PATH_AGREEMENT_TOL = 1e-12


@dataclass(frozen=True)
class AveragedDensityMatrix:
    """2x2 Hermitian density matrix with unit trace."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = self.matrix
        if m.shape != (2, 2):
            raise ConsistencyError(f"density matrix must be 2x2, got {m.shape}")
        if m[0, 0].real != 0.5 or m[1, 1].real != 0.5:
            raise ConsistencyError("diagonal must be (1/2, 1/2)")
        if m[0, 1] != np.conj(m[1, 0]):
            raise ConsistencyError("matrix must be Hermitian")

    def eigenvalues(self) -> tuple[float, float]:
        """(1/2 + |c|, 1/2 - |c|): always within [0, 1]."""
        c = abs(self.matrix[0, 1])
        return 0.5 + c, 0.5 - c


@dataclass(frozen=True)
class DetectorProbabilities:
    """Output-port probabilities with the exact-sum guarantee p1 + p2 = 1."""

    p1: float
    p2: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ConsistencyError(f"probabilities out of [0,1]: {self.p1}, {self.p2}")
        if self.p1 + self.p2 != 1.0:
            raise ConsistencyError(f"p1 + p2 != 1 exactly: {self.p1}, {self.p2}")


def averaged_density_matrix(c: AveragedCoherence) -> AveragedDensityMatrix:
    """Assemble rho from an averaged coherence.

    Raises ConsistencyError when |c| > 1/2 + 1e-9 (+ stderr slack): such a
    value cannot come from a correct average and signals an upstream bug.
    """
    slack = 1e-9 + 3.0 * (c.stderr_re + c.stderr_im)
    if math.hypot(c.re, c.im) > 0.5 + slack:
        raise ConsistencyError(
            f"|<rho_AB>| = {math.hypot(c.re, c.im)} exceeds 1/2 + {slack}"
        )
    z = complex(c.re, c.im)
    return AveragedDensityMatrix(
        matrix=np.array([[0.5 + 0.0j, z], [np.conj(z), 0.5 + 0.0j]])
    )


def detector_projectors() -> tuple[np.ndarray, np.ndarray]:
    """(P1, P2): projectors onto (|A> + |B>)/sqrt(2) and (|A> - |B>)/sqrt(2)."""
    p1 = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
    p2 = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    return p1, p2


def _coherence_for(model: MirrorModel, p: DerivedParams, tau: float) -> AveragedCoherence:
    if model.kind == "classical_pointlike":
        m = model.point if model.point is not None else MirrorPhasePoint(0.0, 0.0)
        phi = float(interaction_phase(p.kappa, tau, m.q0, m.pi0))
        return AveragedCoherence(
            re=0.5 * math.cos(phi), im=-0.5 * math.sin(phi),
            stderr_re=0.0, stderr_im=0.0, method="closed_form",
        )
    z2 = model.z2(p)
    damp = math.exp(-z2 * (1.0 - math.cos(tau)))
    ang = p.kappa2 * (tau - math.sin(tau))
    return AveragedCoherence(
        re=0.5 * math.cos(ang) * damp, im=0.5 * math.sin(ang) * damp,
        stderr_re=0.0, stderr_im=0.0, method="closed_form",
    )


def detection_probabilities(
    model: MirrorModel, p: DerivedParams, tau: float
) -> DetectorProbabilities:
    """P1, P2 at time tau for the given mirror model.

    Closed form: P_{1,2} = (1/2){1 +- cos[kappa^2 theta(tau)] e^{-z^2(1-cos tau)}}
    with z^2 = 0 (pointlike), z_cl^2, or z_qm^2; a pointlike model with an
    off-origin phase-space point uses its trajectory phase Phi(tau; m), of
    which the formula above is the origin special case.  The trace path
    Tr(rho P_i) with the explicit projector matrices must agree to 1e-12 or
    a ConsistencyError is raised.  p2 is constructed as 1 - p1, which makes
    p1 + p2 == 1 exact in floating point.
    """
    c = _coherence_for(model, p, tau)

    # closed form: 2 Re c is the full contrast term
    p1_closed = 0.5 * (1.0 + 2.0 * c.re)

    rho = averaged_density_matrix(c)
    proj1, _ = detector_projectors()
    p1_trace = float(np.trace(rho.matrix @ proj1).real)

    if abs(p1_closed - p1_trace) > _PATH_AGREEMENT_TOL:
        raise ConsistencyError(
            f"trace/closed-form detection paths disagree: "
            f"{p1_trace} vs {p1_closed} at tau={tau}"
        )
    p1 = min(1.0, max(0.0, p1_closed))
    return DetectorProbabilities(p1=p1, p2=1.0 - p1)
