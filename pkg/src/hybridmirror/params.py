"""Physical inputs, SI <-> dimensionless conversion, and derived constants.

The interferometer is described either by full SI inputs (mirror mass M,
mirror frequency Omega, photon frequency omega, cavity length L, temperature
T) or by the reduced dimensionless triple (kappa, omega_ratio, x_th) that
actually controls every observable.  Internally everything runs in scaled
canonical units:

    tau = Omega * t
    q   = x * sqrt(M Omega / hbar)      pi = p / sqrt(M Omega hbar)
    a_i = X_i / sqrt(hbar)              b_i = P_i / sqrt(hbar)

so that the photon normalization reads a_i**2 + b_i**2 = 1 per arm and the
mirror equilibrium sits at q_eq = kappa / sqrt(2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import ParameterError

# CODATA-2018 exact values (J*s, J/K)
HBAR = 1.054571817e-34
KB = 1.380649e-23


def _require_finite_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Full SI description of the interferometer.

    Parameters
    ----------
    mass : float
        Mirror mass M (kg).
    omega_mirror : float
        Mirror angular frequency Omega (rad/s).
    omega_photon : float
        Photon angular frequency omega (rad/s).
    length : float
        Cavity arm length L (m).
    temperature : float
        Mirror bath temperature T (K); T = 0 is the zero-temperature limit.

    The constants ``hbar`` and ``k_b`` are fixed CODATA values and are not
    constructor arguments.
    """

    mass: float
    omega_mirror: float
    omega_photon: float
    length: float
    temperature: float
    hbar: float = field(default=HBAR, init=False, repr=False)
    k_b: float = field(default=KB, init=False, repr=False)

    def __post_init__(self) -> None:
        _require_finite_positive("mass", self.mass)
        _require_finite_positive("omega_mirror", self.omega_mirror)
        _require_finite_positive("omega_photon", self.omega_photon)
        _require_finite_positive("length", self.length)
        t = self.temperature
        if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0):
            raise ParameterError(f"temperature must be finite and >= 0, got {t!r}")


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced parameter triple (kappa, omega_ratio, x_th).

    kappa       : coupling, kappa**2 = hbar g**2 / (2 M Omega**3)
    omega_ratio : rho_omega = omega / Omega
    x_th        : hbar Omega / (k_B T); +inf encodes T = 0
    """

    kappa: float
    omega_ratio: float
    x_th: float = math.inf

    def __post_init__(self) -> None:
        # kappa = 0 is the valid uncoupled limit; SI derivation always
        # produces kappa > 0 but the reduced form need not
        if not (isinstance(self.kappa, (int, float)) and math.isfinite(self.kappa)
                and self.kappa >= 0):
            raise ParameterError(f"kappa must be finite and >= 0, got {self.kappa!r}")
        _require_finite_positive("omega_ratio", self.omega_ratio)
        if not (self.x_th > 0):  # inf allowed, nan rejected
            raise ParameterError(f"x_th must be > 0 (inf = T=0), got {self.x_th!r}")

    @property
    def q_eq(self) -> float:
        """Scaled equilibrium mirror displacement kappa/sqrt(2)."""
        return self.kappa / math.sqrt(2.0)


@dataclass(frozen=True)
class DerivedParams:
    """Every derived constant used downstream.

    ``g`` and ``omega_shift`` are None when constructed from reduced
    dimensionless inputs (they need omega and L individually); ``t_cl`` and
    ``t_qm`` are None without an ``omega_mirror`` anchor and ``t_cl`` is
    +inf at T = 0 (no classical decoherence).
    """

    kappa2: float
    x_th: float
    z_cl2: float
    z_qm2: float
    g: float | None = None
    omega_shift: float | None = None
    t_cl: float | None = None
    t_qm: float | None = None
    omega_mirror: float | None = None

    @property
    def kappa(self) -> float:
        return math.sqrt(self.kappa2)

    @property
    def z_cl(self) -> float:
        return math.sqrt(self.z_cl2)

    @property
    def z_qm(self) -> float:
        return math.sqrt(self.z_qm2)

    def to_json(self) -> str:
        """Serialize with the fixed key set; non-finite/None map to null."""
        def clean(v: float | None) -> float | None:
            if v is None or not math.isfinite(v):
                return None
            return v

        payload = {
            "g": clean(self.g),
            "kappa2": clean(self.kappa2),
            "omega_shift": clean(self.omega_shift),
            "x_th": clean(self.x_th),
            "z_cl2": clean(self.z_cl2),
            "z_qm2": clean(self.z_qm2),
            "t_cl": clean(self.t_cl),
            "t_qm": clean(self.t_qm),
        }
        return json.dumps(payload, indent=2, sort_keys=False)


def bose_occupation(x: float) -> float:
    """Mean thermal occupation 1/(e**x - 1), stable for x << 1.

    Parameters
    ----------
    x : float
        hbar Omega / (k_B T), must be > 0 and finite (the T = 0 limit is
        handled by callers, never passed here).
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0):
        raise ParameterError(f"bose_occupation requires finite x > 0, got {x!r}")
    if x > 700.0:
        # 1/(e^x - 1) = e^-x/(1 - e^-x); the denominator is 1.0 in doubles
        # here and expm1 itself would overflow
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def _z_pair(kappa2: float, x_th: float) -> tuple[float, float]:
    """(z_cl2, z_qm2) from the coupling and thermal ratio; x_th may be inf."""
    if math.isinf(x_th):
        return 0.0, kappa2
    z_cl2 = 2.0 * kappa2 / x_th
    z_qm2 = 2.0 * kappa2 * (bose_occupation(x_th) + 0.5)
    return z_cl2, z_qm2


def derive(p: PhysicalParams) -> DerivedParams:
    """Compute all derived constants from full SI inputs.

    T = 0 yields x_th = +inf, z_cl2 = 0, z_qm2 = kappa2 (zero-point floor)
    and t_cl = +inf.
    """
    g = p.omega_photon / p.length
    kappa2 = p.hbar * g * g / (2.0 * p.mass * p.omega_mirror**3)
    omega_shift = p.omega_photon + kappa2 * p.omega_mirror
    if p.temperature == 0.0:
        x_th = math.inf
    else:
        x_th = p.hbar * p.omega_mirror / (p.k_b * p.temperature)
    z_cl2, z_qm2 = _z_pair(kappa2, x_th)
    t_cl = math.inf if z_cl2 == 0.0 else 1.0 / (math.sqrt(z_cl2) * p.omega_mirror)
    t_qm = 1.0 / (math.sqrt(z_qm2) * p.omega_mirror)
    return DerivedParams(
        kappa2=kappa2, x_th=x_th, z_cl2=z_cl2, z_qm2=z_qm2,
        g=g, omega_shift=omega_shift, t_cl=t_cl, t_qm=t_qm,
        omega_mirror=p.omega_mirror,
    )


def derive_dimensionless(
    d: DimensionlessParams, omega_mirror: float | None = None
) -> DerivedParams:
    """Derived constants from the reduced triple.

    g and omega_shift stay None (they need omega and L individually);
    decoherence times need the omega_mirror anchor to carry SI seconds.
    """
    if omega_mirror is not None:
        _require_finite_positive("omega_mirror", omega_mirror)
    kappa2 = d.kappa * d.kappa
    z_cl2, z_qm2 = _z_pair(kappa2, d.x_th)
    t_cl = t_qm = None
    if omega_mirror is not None:
        t_cl = math.inf if z_cl2 == 0.0 else 1.0 / (math.sqrt(z_cl2) * omega_mirror)
        t_qm = math.inf if z_qm2 == 0.0 else 1.0 / (math.sqrt(z_qm2) * omega_mirror)
    return DerivedParams(
        kappa2=kappa2, x_th=d.x_th, z_cl2=z_cl2, z_qm2=z_qm2,
        t_cl=t_cl, t_qm=t_qm, omega_mirror=omega_mirror,
    )


def dimensionless_from_physical(p: PhysicalParams) -> DimensionlessParams:
    d = derive(p)
    return DimensionlessParams(
        kappa=math.sqrt(d.kappa2),
        omega_ratio=p.omega_photon / p.omega_mirror,
        x_th=d.x_th,
    )


def physical_from_dimensionless(
    d: DimensionlessParams, omega_mirror: float, length: float
) -> PhysicalParams:
    """Invert the reduction given the (Omega, L) anchors.

    Three dimensionless numbers cannot determine five SI inputs; Omega and L
    pin the scale, after which M = hbar g**2 / (2 kappa**2 Omega**3) and
    T = hbar Omega / (k_B x_th) are forced.
    """
    _require_finite_positive("omega_mirror", omega_mirror)
    _require_finite_positive("length", length)
    omega_photon = d.omega_ratio * omega_mirror
    g = omega_photon / length
    mass = HBAR * g * g / (2.0 * d.kappa**2 * omega_mirror**3)
    temperature = 0.0 if math.isinf(d.x_th) else HBAR * omega_mirror / (KB * d.x_th)
    return PhysicalParams(
        mass=mass, omega_mirror=omega_mirror, omega_photon=omega_photon,
        length=length, temperature=temperature,
    )


def x_th_from_temperature(temperature: float, omega_mirror: float) -> float:
    """hbar Omega / (k_B T); +inf at T = 0."""
    _require_finite_positive("omega_mirror", omega_mirror)
    if temperature < 0 or not math.isfinite(temperature):
        raise ParameterError(f"temperature must be finite and >= 0, got {temperature!r}")
    if temperature == 0.0:
        return math.inf
    return HBAR * omega_mirror / (KB * temperature)


def z_ratio_deviation(p: DerivedParams) -> float:
    """z_qm/z_cl - 1, always >= 0; domain error at T = 0 (z_cl = 0).

    Evaluated as expm1(log(z_qm2/z_cl2)/2) so the ~1e-11 deviations at the
    cold end of the experimentally relevant range survive cancellation.
    """
    if p.z_cl2 == 0.0 or math.isinf(p.x_th):
        raise ParameterError("z ratio undefined at T = 0 (z_cl = 0)")
    return math.expm1(0.5 * math.log(p.z_qm2 / p.z_cl2))


def high_temperature_expansion(p: DerivedParams) -> float:
    """Truncated high-T expansion z_cl2 * (1 + x_th**2 / 12).

    Verification helper against the exact z_qm2; only meaningful for
    x_th < 1.
    """
    if not (0.0 < p.x_th < 1.0):
        raise ParameterError(
            f"high-T expansion requires 0 < x_th < 1, got {p.x_th!r}"
        )
    return p.z_cl2 * (1.0 + p.x_th * p.x_th / 12.0)


def decoherence_times(p: DerivedParams) -> tuple[float, float]:
    """(t_cl, t_qm) in seconds; requires the omega_mirror anchor.

    t_cl = 1/(z_cl Omega) is +inf at T = 0; the ratio t_cl/t_qm equals
    z_qm/z_cl for any T > 0.
    """
    if p.omega_mirror is None:
        raise ParameterError("decoherence times need an omega_mirror anchor")
    t_cl = math.inf if p.z_cl2 == 0.0 else 1.0 / (p.z_cl * p.omega_mirror)
    t_qm = 1.0 / (p.z_qm * p.omega_mirror)
    return t_cl, t_qm
