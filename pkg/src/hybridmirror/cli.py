"""Command-line experiment runner.

Subcommands: derive, trajectory, visibility, detect, eta-sweep, validate,
mc-convergence.  Configuration comes from a JSON file (--config) with flag
overrides; flags mirror config keys one-to-one.  Exit status: 0 all internal
checks passed, 1 a check failed, 2 usage/config error, 3 I/O error.

All outputs (CSV, SVG, report JSON) are deterministic functions of the
config and seed: no timestamps, floats printed with shortest round-trip
decimals, Monte Carlo reduced in fixed order regardless of --workers.
The per-scenario report lists every emitted data file with its sha256.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .analytic import MirrorPhasePoint, mirror_trajectory, oscillation_from_ic, photon_arm_a, photon_arm_b, rho_ab_pointlike
from .decoherence import (
    MirrorModel,
    ThermalEnsemble,
    averaged_rho_closed,
    averaged_rho_monte_carlo,
    averaged_rho_quadrature,
    eta_ratio,
    phase_kappa2_theta,
    visibility,
)
from .detection import detection_probabilities
from .dynamics import HybridState, StepControl, integrate
from .errors import ConfigurationError, HybridMirrorError, ParameterError
from .params import (
    DerivedParams,
    DimensionlessParams,
    PhysicalParams,
    derive,
    derive_dimensionless,
    dimensionless_from_physical,
    x_th_from_temperature,
    z_ratio_deviation,
)
from .svgplot import line_plot

TAU_MAX_DEFAULT = 4.0 * math.pi
SCENARIOS = (
    "derive", "trajectory", "visibility", "detect",
    "eta-sweep", "validate", "mc-convergence",
)


@dataclass
class RunConfig:
    scenario: str
    si: dict | None = None
    dimensionless: dict | None = None
    tau_max: float = TAU_MAX_DEFAULT
    points: int = 2000
    samples: int = 100_000
    seed: int = 42
    order: int = 40
    workers: int = 1
    out: str = "out"
    svg: bool = False
    temperatures: list[float] | None = None
    trajectory: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)
    mc_ladder: list[int] = field(default_factory=lambda: [1_000, 10_000, 100_000])

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(f"scenario: unknown scenario {self.scenario!r}")
        if self.si is not None and self.dimensionless is not None:
            raise ConfigurationError(
                "si/dimensionless: exactly one parameter mode may be present"
            )
        if self.points < 2:
            raise ConfigurationError(f"points: must be >= 2, got {self.points}")
        if not (self.tau_max > 0):
            raise ConfigurationError(f"tau_max: must be > 0, got {self.tau_max}")
        if self.samples < 2:
            raise ConfigurationError(f"samples: must be >= 2, got {self.samples}")
        if self.order < 2:
            raise ConfigurationError(f"order: must be >= 2, got {self.order}")
        if self.workers < 1:
            raise ConfigurationError(f"workers: must be >= 1, got {self.workers}")
        if self.seed < 0:
            raise ConfigurationError(f"seed: must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    def __post_init__(self) -> None:
        # numpy scalars leak in from the comparisons; normalize for json
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "tolerance", float(self.tolerance))


@dataclass
class RunReport:
    scenario: str
    settings: dict
    derived: dict
    checks: list[Check]
    files: list[dict]
    passed: bool

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "settings": self.settings,
            "derived": self.derived,
            "checks": [
                {"name": c.name, "passed": c.passed, "value": c.value,
                 "tolerance": c.tolerance}
                for c in self.checks
            ],
            "passed": self.passed,
            "files": self.files,
        }
        return json.dumps(payload, indent=2, allow_nan=False)


# --------------------------------------------------------------------------
# parameter resolution

_DEFAULT_DIMENSIONLESS = {
    "kappa": 1.0,
    "omega_ratio": 10.0,
    "omega_mirror": 2.0 * math.pi * 500.0,
}
_DEFAULT_TEMPERATURES = [1e-3, 1e-4]


def _physical_from_config(si: dict) -> PhysicalParams:
    required = ("mass", "omega_mirror", "omega_photon", "length", "temperature")
    missing = [k for k in required if k not in si]
    if missing:
        raise ConfigurationError(f"si: missing field(s) {', '.join(missing)}")
    unknown = [k for k in si if k not in required]
    if unknown:
        raise ConfigurationError(f"si: unknown field(s) {', '.join(unknown)}")
    try:
        return PhysicalParams(**{k: float(si[k]) for k in required})
    except ParameterError as exc:
        raise ConfigurationError(f"si: {exc}") from exc


def _dimensionless_fields(cfg: RunConfig) -> dict:
    d = dict(_DEFAULT_DIMENSIONLESS if cfg.dimensionless is None else cfg.dimensionless)
    known = {"kappa", "omega_ratio", "omega_mirror", "x_th", "temperature"}
    unknown = [k for k in d if k not in known]
    if unknown:
        raise ConfigurationError(f"dimensionless: unknown field(s) {', '.join(unknown)}")
    d.setdefault("kappa", 1.0)
    d.setdefault("omega_ratio", 10.0)
    return d


def _single_derived(cfg: RunConfig) -> tuple[DerivedParams, DimensionlessParams]:
    """Resolve the one-ensemble parameter set (derive/trajectory scenarios)."""
    if cfg.si is not None:
        p = _physical_from_config(cfg.si)
        return derive(p), dimensionless_from_physical(p)
    d = _dimensionless_fields(cfg)
    omega = d.get("omega_mirror")
    if "x_th" in d:
        x_th = float(d["x_th"])
    elif "temperature" in d:
        if omega is None:
            raise ConfigurationError(
                "dimensionless: temperature needs omega_mirror to form x_th"
            )
        x_th = x_th_from_temperature(float(d["temperature"]), float(omega))
    else:
        x_th = math.inf
    try:
        dp = DimensionlessParams(
            kappa=float(d["kappa"]), omega_ratio=float(d["omega_ratio"]), x_th=x_th
        )
    except ParameterError as exc:
        raise ConfigurationError(f"dimensionless: {exc}") from exc
    return derive_dimensionless(dp, None if omega is None else float(omega)), dp


def _temperature_cases(cfg: RunConfig) -> list[tuple[str, float, DerivedParams]]:
    """(label, T, derived) per requested temperature for visibility/detect."""
    temps = cfg.temperatures
    if temps is None:
        if cfg.si is not None:
            temps = [float(cfg.si["temperature"])]
        else:
            temps = list(_DEFAULT_TEMPERATURES)
    cases = []
    for t in temps:
        if cfg.si is not None:
            base = _physical_from_config(cfg.si)
            p = PhysicalParams(
                mass=base.mass, omega_mirror=base.omega_mirror,
                omega_photon=base.omega_photon, length=base.length,
                temperature=float(t),
            )
            cases.append((f"T{t:.0e}", float(t), derive(p)))
        else:
            d = _dimensionless_fields(cfg)
            omega = d.get("omega_mirror")
            if omega is None:
                raise ConfigurationError(
                    "dimensionless: temperature sweep needs omega_mirror"
                )
            dp = DimensionlessParams(
                kappa=float(d["kappa"]), omega_ratio=float(d["omega_ratio"]),
                x_th=x_th_from_temperature(float(t), float(omega)),
            )
            cases.append((f"T{t:.0e}", float(t), derive_dimensionless(dp, float(omega))))
    return cases


def _derived_payload(p: DerivedParams) -> dict:
    return json.loads(p.to_json())


# --------------------------------------------------------------------------
# output helpers

def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    v if isinstance(v, str)
                    else repr(v) if isinstance(v, int)
                    else repr(float(v))
                    for v in row
                )
                + "\n"
            )


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(payload, indent=2, allow_nan=False) + "\n")


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def _tau_grid_with_revivals(tau_max: float, points: int) -> np.ndarray:
    """Uniform grid joined with the exact revival times 2*pi*n in range.

    The revival values are kept verbatim; uniform points within 1e-9 of a
    revival are dropped so the grid stays strictly increasing.
    """
    base = np.linspace(0.0, tau_max, points)
    revivals = [2.0 * math.pi * k for k in range(0, int(tau_max / (2.0 * math.pi)) + 1)
                if 2.0 * math.pi * k <= tau_max + 1e-12]
    keep = [v for v in base if all(abs(v - r) > 1e-9 for r in revivals)]
    return np.array(sorted(keep + revivals))


# --------------------------------------------------------------------------
# scenarios

def _scenario_derive(cfg: RunConfig, outdir: str):
    p, dp = _single_derived(cfg)
    path = os.path.join(outdir, "derived.json")
    with open(path, "w", newline="\n") as fh:
        fh.write(p.to_json() + "\n")
    checks = [
        Check("z_qm2_at_least_z_cl2", p.z_qm2 >= p.z_cl2, p.z_cl2 - p.z_qm2, 0.0),
        Check("z_qm2_zero_point_floor", p.z_qm2 >= p.kappa2,
              p.kappa2 - p.z_qm2, 0.0),
    ]
    return _derived_payload(p), checks, ["derived.json"]


def _scenario_trajectory(cfg: RunConfig, outdir: str):
    p, dp = _single_derived(cfg)
    t = cfg.trajectory
    q0 = float(t.get("q0", 0.0))
    pi0 = float(t.get("pi0", 0.0))
    if "step" in t:
        control = StepControl(step=float(t["step"]))
    else:
        control = StepControl(tol=float(t.get("tol", 1e-10)))
    s0 = HybridState.standard(q=q0, pi=pi0)
    traj = integrate(s0, dp, cfg.tau_max, control, points=cfg.points)
    path = os.path.join(outdir, "trajectory.csv")
    traj.to_csv(path)
    files = ["trajectory.csv"]

    # closed-form reference for the same initial conditions
    osc = oscillation_from_ic(MirrorPhasePoint(q0, pi0), dp)
    worst = 0.0
    for i, tau in enumerate(traj.tau):
        ref = (*mirror_trajectory(osc, dp, tau), *photon_arm_a(osc, dp, tau),
               *photon_arm_b(dp, tau))
        worst = max(worst, max(abs(a - b) for a, b in zip(traj.states[i], ref)))
    na_drift, nb_drift, e_drift = traj.conservation_drift()
    checks = [
        Check("numeric_vs_analytic", worst <= 1e-8, worst, 1e-8),
        Check("photon_norm_drift", max(na_drift, nb_drift) <= 1e-9,
              max(na_drift, nb_drift), 1e-9),
        Check("energy_drift", e_drift <= 1e-9, e_drift, 1e-9),
    ]
    if cfg.svg:
        svg = os.path.join(outdir, "trajectory.svg")
        line_plot(
            svg, traj.tau,
            [("q", traj.states[:, 0]), ("pi", traj.states[:, 1])],
            "mirror phase-space coordinates", "tau", "scaled value",
        )
        files.append("trajectory.svg")
    return _derived_payload(p), checks, files


def _scenario_visibility(cfg: RunConfig, outdir: str):
    cases = _temperature_cases(cfg)
    tau = _tau_grid_with_revivals(cfg.tau_max, cfg.points)
    files: list[str] = []
    checks: list[Check] = []
    derived_all: dict = {}
    summary: dict = {}
    revivals = [2.0 * math.pi * k
                for k in range(0, int(cfg.tau_max / (2.0 * math.pi)) + 1)]
    for label, temp, p in cases:
        derived_all[label] = _derived_payload(p)
        m_cl = MirrorModel.classical_thermal(temp)
        m_qm = MirrorModel.quantum_thermal(temp)
        vis_cl = visibility(m_cl, p, tau)
        vis_qm = visibility(m_qm, p, tau)
        eta = eta_ratio(p, tau)
        phase = phase_kappa2_theta(p, tau)
        name = f"visibility_{label}.csv"
        _write_csv(
            os.path.join(outdir, name),
            ["tau", "vis_pointlike", "vis_classical", "vis_quantum", "eta",
             "phase_kappa2_theta"],
            zip(tau, np.full_like(tau, 0.5), vis_cl, vis_qm, eta, phase),
        )
        files.append(name)
        summary[label] = {
            "t_cl": p.t_cl if p.t_cl is None or math.isfinite(p.t_cl) else None,
            "t_qm": p.t_qm,
            "z_cl": p.z_cl,
            "z_qm": p.z_qm,
            "eta_max": float(np.max(eta)),
        }
        rev_idx = [int(np.argmin(np.abs(tau - r))) for r in revivals]
        worst_rev = max(
            max(abs(vis_cl[i] - 0.5), abs(vis_qm[i] - 0.5)) for i in rev_idx
        )
        checks.append(
            Check(f"revival_peaks_{label}", worst_rev <= 1e-12, worst_rev, 1e-12)
        )
        order_slack = float(np.max(vis_qm - vis_cl))
        checks.append(
            Check(f"model_ordering_{label}", order_slack <= 1e-15, order_slack, 1e-15)
        )
        if cfg.svg:
            svg = f"visibility_{label}.svg"
            line_plot(
                os.path.join(outdir, svg), tau,
                [("pointlike", np.full_like(tau, 0.5)),
                 ("classical", vis_cl), ("quantum", vis_qm)],
                f"visibility, {label}", "tau", "|<rho_AB>|",
            )
            files.append(svg)
    _write_json(os.path.join(outdir, "visibility_summary.json"), summary)
    files.append("visibility_summary.json")
    return derived_all, checks, files


def _scenario_detect(cfg: RunConfig, outdir: str):
    cases = _temperature_cases(cfg)
    tau = _tau_grid_with_revivals(cfg.tau_max, cfg.points)
    files: list[str] = []
    checks: list[Check] = []
    derived_all: dict = {}
    for label, temp, p in cases:
        derived_all[label] = _derived_payload(p)
        models = [
            ("pointlike", MirrorModel.pointlike()),
            ("classical_thermal", MirrorModel.classical_thermal(temp)),
            ("quantum_thermal", MirrorModel.quantum_thermal(temp)),
        ]
        rows = []
        worst_sum = 0.0
        worst_zero = 0.0
        series = []
        for tag, model in models:
            p1s = []
            for tv in tau:
                pr = detection_probabilities(model, p, float(tv))
                rows.append((tv, pr.p1, pr.p2, tag))
                worst_sum = max(worst_sum, abs(pr.p1 + pr.p2 - 1.0))
                if tv == 0.0:
                    worst_zero = max(worst_zero, abs(pr.p1 - 1.0))
                p1s.append(pr.p1)
            series.append((f"P1 {tag}", p1s))
        name = f"detect_{label}.csv"
        _write_csv(os.path.join(outdir, name), ["tau", "p1", "p2", "model"], rows)
        files.append(name)
        checks.append(Check(f"p1_plus_p2_exact_{label}", worst_sum == 0.0,
                            worst_sum, 0.0))
        checks.append(Check(f"p1_at_zero_{label}", worst_zero == 0.0,
                            worst_zero, 0.0))
        if cfg.svg:
            svg = f"detect_{label}.svg"
            line_plot(
                os.path.join(outdir, svg), tau, series,
                f"detector probabilities, {label}", "tau", "P1",
            )
            files.append(svg)
    return derived_all, checks, files


def _scenario_eta_sweep(cfg: RunConfig, outdir: str):
    opts = cfg.eta
    t_min = float(opts.get("t_min", 1e-6))
    t_max = float(opts.get("t_max", 1e-3))
    n_temps = int(opts.get("n_temps", 25))
    if not (0 < t_min < t_max):
        raise ConfigurationError("eta: need 0 < t_min < t_max")
    if n_temps < 2:
        raise ConfigurationError("eta: n_temps must be >= 2")
    d = _dimensionless_fields(cfg) if cfg.si is None else None
    if cfg.si is not None:
        base = _physical_from_config(cfg.si)
        kappa = math.sqrt(derive(base).kappa2)
        omega = base.omega_mirror
        omega_ratio = base.omega_photon / base.omega_mirror
    else:
        omega = d.get("omega_mirror")
        if omega is None:
            raise ConfigurationError("dimensionless: eta-sweep needs omega_mirror")
        omega = float(omega)
        kappa = float(d["kappa"])
        omega_ratio = float(d["omega_ratio"])

    temps = np.logspace(math.log10(t_min), math.log10(t_max), n_temps)
    rows = []
    devs = []
    etas = []
    for t in temps:
        dp = DimensionlessParams(
            kappa=kappa, omega_ratio=omega_ratio,
            x_th=x_th_from_temperature(float(t), omega),
        )
        p = derive_dimensionless(dp, omega)
        dev = z_ratio_deviation(p)
        eta_m1 = math.expm1(2.0 * (p.z_qm2 - p.z_cl2))  # eta(pi) - 1
        rows.append((t, p.x_th, p.z_cl2, p.z_qm2, dev, eta_m1, p.t_cl, p.t_qm))
        devs.append(dev)
        etas.append(eta_m1)
    _write_csv(
        os.path.join(outdir, "eta_sweep.csv"),
        ["temperature", "x_th", "z_cl2", "z_qm2", "z_ratio_deviation",
         "eta_max_minus_one", "t_cl", "t_qm"],
        rows,
    )
    files = ["eta_sweep.csv"]
    summary = {
        "x_th_range": [rows[-1][1], rows[0][1]],
        "z_ratio_deviation_max": max(devs),
        "eta_max_minus_one_range": [min(etas), max(etas)],
    }
    _write_json(os.path.join(outdir, "eta_sweep_summary.json"), summary)
    files.append("eta_sweep_summary.json")
    checks = [
        Check("z_ratio_deviation_below_1e-4", max(devs) < 1e-4, max(devs), 1e-4),
        Check("eta_minus_one_positive", min(etas) > 0.0, -min(etas), 0.0),
        Check("eta_minus_one_below_1e-2", max(etas) < 1e-2, max(etas), 1e-2),
        Check(
            "eta_monotone_in_temperature",
            all(etas[i] > etas[i + 1] for i in range(len(etas) - 1)),
            float(max(etas[i + 1] - etas[i] for i in range(len(etas) - 1))),
            0.0,
        ),
    ]
    if cfg.svg:
        line_plot(
            os.path.join(outdir, "eta_sweep.svg"),
            np.log10(temps), [("eta(pi) - 1", etas)],
            "classical/quantum visibility gap", "log10(T [K])", "eta - 1",
        )
        files.append("eta_sweep.svg")
    payload = {
        "kappa": kappa, "omega_mirror": omega,
        "temperature_range": [t_min, t_max],
    }
    return payload, checks, files


# validation-suite parameter points: coupling 1, three stiffness ratios with
# fixed steps sized for a <=1e-8 global error, and the two ensemble widths
# exercised by the thermal cross-validation.
_VALIDATE_RHO_STEPS = ((1.0, 2e-3), (10.0, 5e-4), (1000.0, 2e-6))
_VALIDATE_X_TH = (0.5, 2.4e-2)


def _scenario_validate(cfg: RunConfig, outdir: str):
    checks: list[Check] = []

    # numeric integration against the closed forms
    point = MirrorPhasePoint(0.3, -0.7)
    for rho_w, h in _VALIDATE_RHO_STEPS:
        dp = DimensionlessParams(kappa=1.0, omega_ratio=rho_w)
        s0 = HybridState.standard(q=point.q0, pi=point.pi0)
        traj = integrate(s0, dp, TAU_MAX_DEFAULT, StepControl(step=h), points=65)
        osc = oscillation_from_ic(point, dp)
        worst = 0.0
        for i, tau in enumerate(traj.tau):
            ref = (*mirror_trajectory(osc, dp, tau),
                   *photon_arm_a(osc, dp, tau), *photon_arm_b(dp, tau))
            worst = max(worst, max(abs(a - b) for a, b in zip(traj.states[i], ref)))
        na_d, nb_d, _ = traj.conservation_drift()
        checks.append(Check(f"numeric_vs_analytic_rho{rho_w:g}",
                            worst <= 1e-8, worst, 1e-8))
        checks.append(Check(f"photon_norm_drift_rho{rho_w:g}",
                            max(na_d, nb_d) <= 1e-9, max(na_d, nb_d), 1e-9))

    # three-way thermal averaging
    dp = DimensionlessParams(kappa=1.0, omega_ratio=1.0)
    taus = np.linspace(0.0, TAU_MAX_DEFAULT, 20)
    worst_quad = 0.0
    worst_mc = -math.inf
    for x_th in _VALIDATE_X_TH:
        ens = ThermalEnsemble(x_th=x_th)
        for tau in taus:
            closed = averaged_rho_closed(ens, dp, float(tau))
            quad = averaged_rho_quadrature(ens, dp, float(tau), cfg.order)
            worst_quad = max(worst_quad, abs(closed.re - quad.re),
                             abs(closed.im - quad.im))
            mc = averaged_rho_monte_carlo(
                ens, dp, float(tau), cfg.samples, cfg.seed, workers=cfg.workers
            )
            worst_mc = max(worst_mc,
                           abs(closed.re - mc.re) - 4.0 * mc.stderr_re,
                           abs(closed.im - mc.im) - 4.0 * mc.stderr_im)
    checks.append(Check("closed_vs_quadrature", worst_quad <= 1e-10,
                        worst_quad, 1e-10))
    checks.append(Check("closed_vs_mc_4sigma", worst_mc <= 0.0, worst_mc, 0.0))

    # pointlike modulus over seeded random phase-space points
    rng = np.random.default_rng(cfg.seed)
    worst_mod = 0.0
    for _ in range(200):
        m = MirrorPhasePoint(*(rng.normal(0.0, 2.0, size=2)))
        tau = float(rng.uniform(0.0, TAU_MAX_DEFAULT))
        rho = rho_ab_pointlike(m, dp, tau)
        worst_mod = max(worst_mod, abs(rho.modulus - 0.5))
    checks.append(Check("pointlike_modulus", worst_mod <= 1e-12, worst_mod, 1e-12))

    # detection consistency (trace path is asserted inside the call)
    p_det = derive_dimensionless(
        DimensionlessParams(
            kappa=1.0, omega_ratio=10.0,
            x_th=x_th_from_temperature(1e-4, 2.0 * math.pi * 500.0),
        ),
        2.0 * math.pi * 500.0,
    )
    worst_sum = 0.0
    worst_zero = 0.0
    for model in (MirrorModel.pointlike(), MirrorModel.classical_thermal(1e-4),
                  MirrorModel.quantum_thermal(1e-4)):
        for tau in np.linspace(0.0, TAU_MAX_DEFAULT, 100):
            pr = detection_probabilities(model, p_det, float(tau))
            worst_sum = max(worst_sum, abs(pr.p1 + pr.p2 - 1.0))
            if tau == 0.0:
                worst_zero = max(worst_zero, abs(pr.p1 - 1.0))
    checks.append(Check("p1_plus_p2_exact", worst_sum == 0.0, worst_sum, 0.0))
    checks.append(Check("p1_at_zero", worst_zero == 0.0, worst_zero, 0.0))

    # Monte Carlo worker-count determinism (bitwise)
    ens = ThermalEnsemble(x_th=2.0)
    a = averaged_rho_monte_carlo(ens, dp, 1.0, 20_000, cfg.seed, workers=1)
    b = averaged_rho_monte_carlo(ens, dp, 1.0, 20_000, cfg.seed, workers=4)
    det = max(abs(a.re - b.re), abs(a.im - b.im),
              abs(a.stderr_re - b.stderr_re), abs(a.stderr_im - b.stderr_im))
    checks.append(Check("mc_worker_determinism", det == 0.0, det, 0.0))

    # quadrature order convergence at a visible-error point
    ens = ThermalEnsemble(x_th=0.05)
    closed = averaged_rho_closed(ens, dp, 1.0)
    errs = []
    for order in (10, 20, 40):
        q = averaged_rho_quadrature(ens, dp, 1.0, order)
        errs.append(math.hypot(q.re - closed.re, q.im - closed.im))
    ratio = max(errs[1] / errs[0], errs[2] / errs[1]) if errs[0] > 0 else 0.0
    checks.append(Check("quadrature_order_convergence", ratio < 1.0, ratio, 1.0))

    payload = {
        "kappa": 1.0,
        "omega_ratios": [r for r, _ in _VALIDATE_RHO_STEPS],
        "x_th_points": list(_VALIDATE_X_TH),
        "samples": cfg.samples,
        "order": cfg.order,
    }
    _write_json(os.path.join(outdir, "validate_summary.json"), {
        "checks_passed": sum(c.passed for c in checks),
        "checks_total": len(checks),
    })
    return payload, checks, ["validate_summary.json"]


def _scenario_mc_convergence(cfg: RunConfig, outdir: str):
    if len(cfg.mc_ladder) < 3:
        raise ConfigurationError("mc_ladder: need at least 3 rungs")
    ladder = sorted(int(n) for n in cfg.mc_ladder)
    dp = DimensionlessParams(kappa=1.0, omega_ratio=1.0)
    ens = ThermalEnsemble(x_th=2.0)
    tau = 1.0
    closed = averaged_rho_closed(ens, dp, tau)
    rows = []
    stderrs = []
    excess = []
    for n in ladder:
        mc = averaged_rho_monte_carlo(ens, dp, tau, n, cfg.seed,
                                      workers=cfg.workers)
        err_re = abs(mc.re - closed.re)
        err_im = abs(mc.im - closed.im)
        rows.append((n, mc.re, mc.im, mc.stderr_re, mc.stderr_im, err_re, err_im))
        stderrs.append(max(mc.stderr_re, mc.stderr_im))
        excess.append(max(err_re - 4.0 * mc.stderr_re,
                          err_im - 4.0 * mc.stderr_im))
    _write_csv(
        os.path.join(outdir, "mc_convergence.csv"),
        ["n", "mc_re", "mc_im", "stderr_re", "stderr_im", "err_re", "err_im"],
        rows,
    )
    nonincreasing = all(stderrs[i + 1] <= stderrs[i] for i in range(len(stderrs) - 1))
    worst_scale = 0.0
    for i in range(len(ladder) - 1):
        expected = math.sqrt(ladder[i + 1] / ladder[i])
        actual = stderrs[i] / stderrs[i + 1]
        worst_scale = max(worst_scale, actual / expected, expected / actual)
    checks = [
        Check("stderr_nonincreasing", nonincreasing,
              float(max(stderrs[i + 1] - stderrs[i]
                        for i in range(len(stderrs) - 1))), 0.0),
        Check("stderr_scaling_sqrt_n", worst_scale <= 1.5, worst_scale, 1.5),
        Check("error_within_4sigma", max(excess) <= 0.0, max(excess), 0.0),
    ]
    payload = {"x_th": 2.0, "kappa": 1.0, "tau": tau, "ladder": ladder}
    return payload, checks, ["mc_convergence.csv"]


_SCENARIO_FUNCS = {
    "derive": _scenario_derive,
    "trajectory": _scenario_trajectory,
    "visibility": _scenario_visibility,
    "detect": _scenario_detect,
    "eta-sweep": _scenario_eta_sweep,
    "validate": _scenario_validate,
    "mc-convergence": _scenario_mc_convergence,
}


def run(cfg: RunConfig) -> RunReport:
    """Execute one scenario; write its data files and report JSON."""
    outdir = cfg.out
    os.makedirs(outdir, exist_ok=True)
    derived, checks, files = _SCENARIO_FUNCS[cfg.scenario](cfg, outdir)
    manifest = [
        {"path": name, "sha256": _digest(os.path.join(outdir, name)),
         "bytes": os.path.getsize(os.path.join(outdir, name))}
        for name in files
    ]
    report = RunReport(
        scenario=cfg.scenario,
        # workers deliberately omitted: results are worker-invariant and the
        # report must be byte-identical across worker counts.
        settings={
            "seed": cfg.seed, "samples": cfg.samples, "order": cfg.order,
            "tau_max": cfg.tau_max, "points": cfg.points, "svg": cfg.svg,
        },
        derived=derived,
        checks=checks,
        files=manifest,
        passed=all(c.passed for c in checks),
    )
    report_path = os.path.join(outdir, f"{cfg.scenario.replace('-', '_')}_report.json")
    with open(report_path, "w", newline="\n") as fh:
        fh.write(report.to_json() + "\n")
    return report


def mc_convergence(cfg: RunConfig) -> RunReport:
    """Convenience wrapper: run the mc-convergence scenario."""
    if cfg.scenario != "mc-convergence":
        raise ConfigurationError("config scenario must be 'mc-convergence'")
    return run(cfg)


# --------------------------------------------------------------------------
# argument handling

def _build_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config: top level must be a JSON object")
    known = {
        "si", "dimensionless", "tau_max", "points", "samples", "seed",
        "order", "workers", "out", "svg", "temperatures", "trajectory",
        "eta", "mc_ladder",
    }
    unknown = [k for k in data if k not in known]
    if unknown:
        raise ConfigurationError(f"config: unknown key(s) {', '.join(sorted(unknown))}")
    if args.out is not None:
        data["out"] = args.out
    if args.seed is not None:
        data["seed"] = args.seed
    if args.samples is not None:
        data["samples"] = args.samples
    if args.order is not None:
        data["order"] = args.order
    if args.tau_max is not None:
        data["tau_max"] = args.tau_max
    if args.points is not None:
        data["points"] = args.points
    if args.workers is not None:
        data["workers"] = args.workers
    if args.svg:
        data["svg"] = True
    if args.temperature:
        data["temperatures"] = list(args.temperature)
    try:
        return RunConfig(scenario=args.scenario, **data)
    except TypeError as exc:
        raise ConfigurationError(f"config: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hybridmirror",
        description="Hybrid photon-mirror interferometer experiment runner.",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--order", type=int, help="quadrature order per axis")
    parser.add_argument("--tau-max", type=float, dest="tau_max",
                        help="time-grid upper end (scaled time)")
    parser.add_argument("--points", type=int, help="time-grid point count")
    parser.add_argument("--workers", type=int,
                        help="Monte Carlo worker threads (result-invariant)")
    parser.add_argument("--svg", action="store_true",
                        help="emit SVG plots next to the CSV files")
    parser.add_argument("--temperature", type=float, action="append",
                        help="temperature in K (repeatable)")
    args = parser.parse_args(argv)

    try:
        cfg = _build_config(args)
        report = run(cfg)
    except (ConfigurationError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except HybridMirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
