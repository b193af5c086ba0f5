"""Thermal averaging of the coherence by three independent routes.

The mirror's initial conditions are drawn from the isotropic scaled
Boltzmann distribution f(q0, pi0) = (x_th/2pi) exp(-x_th (q0^2+pi0^2)/2),
i.e. a zero-mean Gaussian with Var = 1/x_th per axis.  Averaging the
pointlike coherence (1/2) exp(-i Phi) over it gives the closed form

    <rho_AB>(tau) = (1/2) exp(+i kappa^2 theta(tau)) exp(-z^2 (1 - cos tau))

with theta(tau) = tau - sin(tau) and z^2 = z_cl^2 = 2 kappa^2 / x_th for a
classical thermal mirror, or z_qm^2 = 2 kappa^2 (nbar + 1/2) for the
quantum-mirror reference (same functional form, different decoherence
strength).  The Monte Carlo and quadrature routes below recompute the same
average by brute force and are used to cross-validate the closed form,
including the sign of its phase.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import MirrorPhasePoint, interaction_phase, theta
from .errors import ConfigurationError, ConsistencyError, ParameterError
from .params import DerivedParams, DimensionlessParams, bose_occupation, x_th_from_temperature

_SQRT2 = math.sqrt(2.0)

# Monte Carlo chunk size: fixed, worker-independent, even (so chunk
# boundaries land on Philox 4-word counter blocks: 2 raw words per sample).
_CHUNK = 8192

# Per-factor oscillation cap for the variance-split quadrature (see
# averaged_rho_quadrature): an n>=40 Gauss-Hermite rule integrates
# exp(i*lam*t) exp(-t^2) to ~3e-16 for lam <= 5.
_LAMBDA_CAP = 5.0

_hermgauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


@dataclass(frozen=True)
class ThermalEnsemble:
    """Scaled Boltzmann ensemble of mirror initial conditions.

    x_th = hbar Omega / (k_B T) > 0; +inf encodes the T = 0 limit, where
    the ensemble degenerates to a delta at the phase-space origin.
    """

    x_th: float

    def __post_init__(self) -> None:
        if not (self.x_th > 0):
            raise ParameterError(f"x_th must be > 0, got {self.x_th!r}")

    @classmethod
    def from_temperature(cls, temperature: float, omega_mirror: float) -> "ThermalEnsemble":
        return cls(x_th=x_th_from_temperature(temperature, omega_mirror))

    @property
    def sigma(self) -> float:
        """Per-axis standard deviation 1/sqrt(x_th); 0 at T = 0."""
        return 0.0 if math.isinf(self.x_th) else 1.0 / math.sqrt(self.x_th)


@dataclass(frozen=True)
class AveragedCoherence:
    """Ensemble-averaged rho_AB with componentwise standard errors.

    stderr_re/stderr_im are 0 for the closed-form and quadrature routes;
    the Monte Carlo route reports sample standard deviation / sqrt(n).
    """

    re: float
    im: float
    stderr_re: float
    stderr_im: float
    method: str  # closed_form | monte_carlo | quadrature
    n_samples: int | None = None
    order: int | None = None

    def __post_init__(self) -> None:
        slack = 3.0 * (self.stderr_re + self.stderr_im) + 1e-12
        if self.re * self.re + self.im * self.im > 0.25 + slack:
            raise ConsistencyError(
                f"averaged |rho_AB| exceeds 1/2 beyond stderr slack: "
                f"({self.re}, {self.im}), method={self.method}"
            )

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


@dataclass(frozen=True)
class MirrorModel:
    """Which mirror description enters the visibility.

    kind is one of 'classical_pointlike' (exact phase-space point, no
    decoherence), 'classical_thermal', 'quantum_thermal'.  The temperature
    on thermal tags is provenance metadata; the z^2 actually used always
    comes from the DerivedParams argument of the consuming function, so
    there is a single source of truth.
    """

    kind: str
    point: MirrorPhasePoint | None = None
    temperature: float | None = None

    _KINDS = ("classical_pointlike", "classical_thermal", "quantum_thermal")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ParameterError(f"unknown mirror model kind {self.kind!r}")
        if self.kind == "classical_pointlike":
            if self.point is None:
                object.__setattr__(self, "point", MirrorPhasePoint(0.0, 0.0))
        elif self.temperature is not None and self.temperature < 0:
            raise ParameterError("thermal model temperature must be >= 0")

    @classmethod
    def pointlike(cls, q0: float = 0.0, pi0: float = 0.0) -> "MirrorModel":
        return cls(kind="classical_pointlike", point=MirrorPhasePoint(q0, pi0))

    @classmethod
    def classical_thermal(cls, temperature: float | None = None) -> "MirrorModel":
        return cls(kind="classical_thermal", temperature=temperature)

    @classmethod
    def quantum_thermal(cls, temperature: float | None = None) -> "MirrorModel":
        return cls(kind="quantum_thermal", temperature=temperature)

    @property
    def is_thermal(self) -> bool:
        return self.kind != "classical_pointlike"

    def z2(self, p: DerivedParams) -> float:
        """Decoherence strength z^2 for this model under the given params."""
        if self.kind == "classical_pointlike":
            return 0.0
        if self.kind == "classical_thermal":
            return p.z_cl2
        return p.z_qm2


def boltzmann_density(m: MirrorPhasePoint, e: ThermalEnsemble) -> float:
    """Scaled phase-space density (x_th/2pi) exp(-x_th (q0^2 + pi0^2)/2)."""
    if math.isinf(e.x_th):
        raise ParameterError("density undefined at T = 0 (delta distribution)")
    x = e.x_th
    return x / (2.0 * math.pi) * math.exp(-0.5 * x * (m.q0 * m.q0 + m.pi0 * m.pi0))


def _z2_for(e: ThermalEnsemble, p: DimensionlessParams, model: MirrorModel) -> float:
    k2 = p.kappa * p.kappa
    if math.isinf(e.x_th):
        return 0.0 if model.kind == "classical_thermal" else k2
    if model.kind == "classical_thermal":
        return 2.0 * k2 / e.x_th
    return 2.0 * k2 * (bose_occupation(e.x_th) + 0.5)


def averaged_rho_closed(
    e: ThermalEnsemble,
    p: DimensionlessParams,
    tau: float,
    model: MirrorModel | None = None,
) -> AveragedCoherence:
    """Closed-form thermal average (1/2) e^{+i kappa^2 theta} e^{-z^2(1-cos tau)}.

    model defaults to classical_thermal; quantum_thermal swaps z_cl^2 for
    z_qm^2.  At T = 0 the classical average reduces to the pointlike origin
    value (modulus 1/2, pure phase rotation) and the quantum one keeps the
    zero-point z_qm^2 = kappa^2.
    """
    if model is None:
        model = MirrorModel.classical_thermal()
    if not model.is_thermal:
        raise ParameterError("closed-form averaging needs a thermal model")
    k2 = p.kappa * p.kappa
    z2 = _z2_for(e, p, model)
    damp = math.exp(-z2 * (1.0 - math.cos(tau)))
    ang = k2 * (tau - math.sin(tau))
    return AveragedCoherence(
        re=0.5 * math.cos(ang) * damp,
        im=0.5 * math.sin(ang) * damp,
        stderr_re=0.0,
        stderr_im=0.0,
        method="closed_form",
    )


def _mc_chunk(
    seed: int,
    start: int,
    count: int,
    sigma: float,
    kappa: float,
    tau: float,
    re_out: np.ndarray,
    im_out: np.ndarray,
) -> None:
    """Fill samples [start, start+count) deterministically from the counter.

    Sample i consumes Philox raw words (2i, 2i+1); the generator is opened
    directly at word 2*start via its 256-bit block counter (4 words per
    block; `start` is a multiple of the even chunk size, so 2*start is
    block-aligned).  Box-Muller maps the two words to one Gaussian pair:
    u1 in (0, 1] (shifted so log never sees 0), u2 in [0, 1).
    """
    bg = np.random.Philox(key=seed, counter=[(2 * start) // 4, 0, 0, 0])
    raw = bg.random_raw(2 * count)
    w1 = raw[0::2]
    w2 = raw[1::2]
    u1 = ((w1 >> np.uint64(11)) + np.uint64(1)) * 2.0**-53
    u2 = (w2 >> np.uint64(11)) * 2.0**-53
    r = np.sqrt(-2.0 * np.log(u1))
    ang = (2.0 * math.pi) * u2
    q0 = sigma * (r * np.cos(ang))
    pi0 = sigma * (r * np.sin(ang))
    phi = interaction_phase(kappa, tau, q0, pi0)
    re_out[start:start + count] = 0.5 * np.cos(phi)
    im_out[start:start + count] = -0.5 * np.sin(phi)


def averaged_rho_monte_carlo(
    e: ThermalEnsemble,
    p: DimensionlessParams,
    tau: float,
    n: int,
    seed: int,
    workers: int = 1,
) -> AveragedCoherence:
    """Monte Carlo thermal average over n Gaussian draws.

    The output is a pure function of (inputs, seed): samples are addressed
    by a counter-based generator keyed on (seed, sample index) and reduced
    by compensated summation in fixed index order, so any worker count
    (and any scheduling) produces bit-identical results.
    """
    if n < 2:
        raise ConfigurationError(f"need n >= 2 samples, got {n!r}")
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers!r}")
    sigma = e.sigma
    kappa = p.kappa
    re_all = np.empty(n)
    im_all = np.empty(n)
    spans = [(s, min(_CHUNK, n - s)) for s in range(0, n, _CHUNK)]
    if workers == 1 or len(spans) == 1:
        for start, count in spans:
            _mc_chunk(seed, start, count, sigma, kappa, tau, re_all, im_all)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_mc_chunk, seed, start, count, sigma, kappa, tau,
                            re_all, im_all)
                for start, count in spans
            ]
            for f in futures:
                f.result()
    mean_re = math.fsum(re_all.tolist()) / n
    mean_im = math.fsum(im_all.tolist()) / n
    var_re = math.fsum(((re_all - mean_re) ** 2).tolist()) / (n - 1)
    var_im = math.fsum(((im_all - mean_im) ** 2).tolist()) / (n - 1)
    return AveragedCoherence(
        re=mean_re,
        im=mean_im,
        stderr_re=math.sqrt(var_re / n),
        stderr_im=math.sqrt(var_im / n),
        method="monte_carlo",
        n_samples=n,
    )


def _axis_factor(coef: float, sigma: float, nodes: np.ndarray,
                 weights: np.ndarray) -> complex:
    """Gauss-Hermite value of <exp(i*coef*x)> over N(0, sigma^2).

    The ensemble Gaussian is split into m equal convolution components
    N(0, sigma^2/m) (Gaussian stability, an elementary identity), and the
    characteristic integral factorizes over independent components because
    the phase is linear in x.  m is chosen so the per-component oscillation
    lam = |coef|*sqrt(2)*sigma/sqrt(m) stays below _LAMBDA_CAP, where the
    real-node rule is at machine precision; m depends only on (coef, sigma),
    never on the order, so convergence in the order stays monotone.  Plain
    single-component Gauss-Hermite cannot resolve lam >~ 2*sqrt(2n) at all
    (aliasing), which is why wide ensembles need the split.
    """
    lam = abs(coef) * _SQRT2 * sigma
    if lam == 0.0:
        # constant integrand; skipping the rule keeps the value exact
        return complex(1.0, 0.0)
    m = max(1, math.ceil((lam / _LAMBDA_CAP) ** 2))
    sigma_c = sigma / math.sqrt(m)
    s = complex(np.sum(weights * np.exp(1j * (coef * _SQRT2 * sigma_c) * nodes)))
    s /= math.sqrt(math.pi)
    return s**m


def averaged_rho_quadrature(
    e: ThermalEnsemble,
    p: DimensionlessParams,
    tau: float,
    order: int,
) -> AveragedCoherence:
    """Tensor-product Gauss-Hermite thermal average, matched to the ensemble.

    Integrates (1/2) exp(-i Phi(tau; q0, pi0)) against the Boltzmann
    Gaussian.  Phi is a constant plus a linear form in (q0, pi0), so the
    2-D integral factorizes into two 1-D Gaussian characteristic integrals,
    each evaluated with `order` real Gauss-Hermite nodes per convolution
    component (see _axis_factor).  Converges to averaged_rho_closed as the
    order grows; no domain truncation is involved.
    """
    if order < 2:
        raise ConfigurationError(f"quadrature order must be >= 2, got {order!r}")
    if order not in _hermgauss_cache:
        _hermgauss_cache[order] = np.polynomial.hermite.hermgauss(order)
    nodes, weights = _hermgauss_cache[order]
    kappa = p.kappa
    sigma = e.sigma
    # exp(-i Phi) = exp(+i kappa^2 theta) exp(i c_u q0) exp(i c_v pi0)
    c_u = _SQRT2 * kappa * math.sin(tau)
    c_v = _SQRT2 * kappa * (1.0 - math.cos(tau))
    k2theta = kappa * kappa * (tau - math.sin(tau))
    val = 0.5 * complex(math.cos(k2theta), math.sin(k2theta))
    val *= _axis_factor(c_u, sigma, nodes, weights)
    val *= _axis_factor(c_v, sigma, nodes, weights)
    return AveragedCoherence(
        re=val.real,
        im=val.imag,
        stderr_re=0.0,
        stderr_im=0.0,
        method="quadrature",
        order=order,
    )


def visibility(model: MirrorModel, p: DerivedParams, tau):
    """|<rho_AB>|: 1/2 for pointlike, (1/2) e^{-z^2 (1-cos tau)} thermal.

    Accepts scalar or array tau.
    """
    if model.kind == "classical_pointlike":
        return 0.5 * np.ones_like(np.asarray(tau, dtype=float)) if np.ndim(tau) else 0.5
    z2 = model.z2(p)
    out = 0.5 * np.exp(-z2 * (1.0 - np.cos(tau)))
    return out if np.ndim(tau) else float(out)


def eta_ratio(p: DerivedParams, tau):
    """Classical-over-quantum visibility ratio exp[(z_qm^2-z_cl^2)(1-cos tau)].

    >= 1 everywhere, exactly 1 at tau = 2 pi n; domain error at T = 0
    (classical visibility has no decoherence to compare).
    """
    if p.z_cl2 == 0.0 or math.isinf(p.x_th):
        raise ParameterError("eta ratio undefined at T = 0")
    out = np.exp((p.z_qm2 - p.z_cl2) * (1.0 - np.cos(tau)))
    return out if np.ndim(tau) else float(out)


@dataclass(frozen=True)
class ShortTimeReport:
    """Comparison of the exact visibility exponent with its Gaussian limit.

    max_rel_deviation is the largest relative difference between
    z^2 (1 - cos tau) and the short-time form (z tau)^2/2 over (0, tau_max];
    deviation_bound = tau_max^2/10 is the fourth-order remainder budget.
    tau_root is the bisection solution of z^2 (1 - cos tau) = 1/2 (the
    decoherence time in tau units), root_vs_tcl_rel_error compares it with
    1/z, and t_root is its SI time when an omega_mirror anchor exists.
    """

    max_rel_deviation: float
    deviation_bound: float
    tau_root: float | None
    root_vs_tcl_rel_error: float | None
    t_root: float | None


def gaussian_short_time_check(p: DerivedParams, tau_max: float) -> ShortTimeReport:
    """Validate the short-time Gaussian-decay picture of the exponent.

    Requires 0 < tau_max <= 0.1 (the approximation regime) and T > 0.
    """
    if not (0.0 < tau_max <= 0.1):
        raise ParameterError(f"tau_max must be in (0, 0.1], got {tau_max!r}")
    if p.z_cl2 == 0.0 or math.isinf(p.x_th):
        raise ParameterError("short-time check undefined at T = 0")
    z2 = p.z_cl2
    taus = np.linspace(0.0, tau_max, 257)[1:]
    exact = z2 * (1.0 - np.cos(taus))
    approx = 0.5 * z2 * taus * taus
    max_rel = float(np.max(np.abs(exact - approx) / approx))

    # Decoherence time: first crossing of exponent = 1/2, bisected on (0, pi].
    tau_root = None
    rel_err = None
    t_root = None
    if z2 * 2.0 >= 0.5:
        lo, hi = 0.0, math.pi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if z2 * (1.0 - math.cos(mid)) < 0.5:
                lo = mid
            else:
                hi = mid
        tau_root = 0.5 * (lo + hi)
        rel_err = abs(tau_root * math.sqrt(z2) - 1.0)
        if p.omega_mirror is not None:
            t_root = tau_root / p.omega_mirror
    return ShortTimeReport(
        max_rel_deviation=max_rel,
        deviation_bound=tau_max * tau_max / 10.0,
        tau_root=tau_root,
        root_vs_tcl_rel_error=rel_err,
        t_root=t_root,
    )


def phase_kappa2_theta(p: DerivedParams, tau):
    """Deterministic phase kappa^2 theta(tau) of the averaged coherence."""
    return p.kappa2 * theta(tau)
