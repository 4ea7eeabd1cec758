"""Material response and thermal occupation factors in reduced units.

Everything internal to this package is dimensionless: frequencies are
measured in units of the collision rate (x = omega*tau on the real axis,
xhat = xi*tau on the imaginary axis), in-plane wave vectors as p = c*Q*tau,
depths as zeta = z/lambdabar_p, and temperatures as theta = k_B*T*tau/hbar.
Conductivities are reduced by eps_0/tau, sigma_hat = sigma*tau/eps_0, so the
Drude model with dimensionless plasma frequency Omega_hat = Omega_p*tau reads

    sigma_hat(x) = Omega_hat**2 / (1 - i*x)

and the relative permittivity is eps_r = 1 + i*sigma_hat/x.  SI values enter
only through the anchor conversions in :mod:`lorentzdc.force`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA 2018 values (the first four are exact by definition).
HBAR = 1.054_571_817e-34          # J s
K_B = 1.380_649e-23               # J / K
C_LIGHT = 299_792_458.0           # m / s
E_CHARGE = 1.602_176_634e-19      # C
EPS_0 = 8.854_187_8128e-12        # F / m
M_ELECTRON = 9.109_383_7015e-31   # kg

MODEL_KINDS = ("drude", "plasma", "ideal")

# x/theta below which the Bose factor switches to its Laurent series; both
# branches agree to better than ten digits at the cut.
_BOSE_SERIES_CUT = 1e-4


@dataclass(frozen=True)
class MaterialModel:
    """Conductor model: Drude, lossless plasma, or ideal conductor.

    The ideal conductor shares the plasma model's purely imaginary AC
    response; what sets it apart is the singular zero-frequency conductivity
    weight, which the force module handles through a closed-form route
    instead of quadrature.
    """

    kind: str
    omega_p_tau: float = 210.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown material kind {self.kind!r}, expected one of {MODEL_KINDS}")
        if not self.omega_p_tau > 0.0:
            raise ValueError("omega_p_tau must be positive")

    @classmethod
    def drude(cls, omega_p_tau: float = 210.0) -> "MaterialModel":
        return cls("drude", omega_p_tau)

    @classmethod
    def plasma(cls, omega_p_tau: float = 210.0) -> "MaterialModel":
        return cls("plasma", omega_p_tau)

    @classmethod
    def ideal(cls, omega_p_tau: float = 210.0) -> "MaterialModel":
        return cls("ideal", omega_p_tau)


@dataclass(frozen=True)
class ReducedUnits:
    """Reduced temperature theta = k_B*T*tau/hbar, with an optional SI anchor.

    tau_seconds is used only when converting to or from SI; no kernel or
    integral ever consumes an SI quantity directly.
    """

    theta: float
    tau_seconds: float | None = None

    def __post_init__(self):
        if self.theta < 0.0:
            raise ValueError("theta must be non-negative")
        if self.tau_seconds is not None and not self.tau_seconds > 0.0:
            raise ValueError("tau_seconds must be positive")

    @property
    def temperature_kelvin(self) -> float:
        if self.tau_seconds is None:
            raise ValueError("no tau anchor set, cannot convert theta to kelvin")
        return self.theta * HBAR / (K_B * self.tau_seconds)


def _check_freq(value: float, name: str) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value}")


def conductivity(model: MaterialModel, x: float) -> complex:
    """Reduced conductivity sigma_hat = sigma*tau/eps_0 at real frequency x.

    Drude: Omega_hat^2/(1 - i x); plasma and ideal: i*Omega_hat^2/x (purely
    imaginary for x > 0; the singular x = 0 weight of the ideal conductor
    lives in the force module).
    """
    _check_freq(x, "x")
    w2 = model.omega_p_tau ** 2
    if model.kind == "drude":
        return w2 / (1.0 - 1j * x)
    return 1j * w2 / x


def conductivity_imaginary_axis(model: MaterialModel, xhat: float) -> float:
    """Reduced conductivity on the imaginary frequency axis, sigma_hat(i*xhat).

    Real and positive for all models: Omega_hat^2/(1 + xhat) for Drude,
    Omega_hat^2/xhat for plasma/ideal.
    """
    _check_freq(xhat, "xhat")
    w2 = model.omega_p_tau ** 2
    if model.kind == "drude":
        return w2 / (1.0 + xhat)
    return w2 / xhat


def permittivity(model: MaterialModel, freq: float, axis: str = "real") -> complex:
    """Relative permittivity eps_r = 1 + i*sigma_hat/x at a spectral point.

    On the imaginary axis (axis="imaginary") the result is real and > 1 for
    the Drude and plasma models.
    """
    if axis == "real":
        return 1.0 + 1j * conductivity(model, freq) / freq
    if axis == "imaginary":
        return 1.0 + conductivity_imaginary_axis(model, freq) / freq + 0j
    raise ValueError(f"axis must be 'real' or 'imaginary', got {axis!r}")


def bose(x: float, theta: float) -> float:
    """Bose-Einstein occupation nbar = 1/(exp(x/theta) - 1).

    theta = 0 returns 0 (quantum limit).  For x/theta < 1e-4 the Laurent
    series theta/x - 1/2 + x/(12 theta) is used to avoid cancellation.
    """
    _check_freq(x, "x")
    if theta < 0.0:
        raise ValueError("theta must be non-negative")
    if theta == 0.0:
        return 0.0
    u = x / theta
    if u < _BOSE_SERIES_CUT:
        return 1.0 / u - 0.5 + u / 12.0
    if u > 700.0:
        # exp(u) would overflow; nbar = exp(-u)/(1 - exp(-u)), and exp(-u)
        # underflows to an honest 0 beyond u ~ 745.
        em = math.exp(-u)
        return em / (1.0 - em)
    return 1.0 / math.expm1(u)


def coth_half(x: float, theta: float) -> float:
    """coth(x/(2 theta)) = 1 + 2*nbar(x, theta); exact identity by construction."""
    return 1.0 + 2.0 * bose(x, theta)


def current_spectrum(model: MaterialModel, x: float, theta: float) -> float:
    """Reduced Rytov current spectrum S_j = 2*x*Re(sigma_hat)*coth(x/(2 theta)).

    Identically zero for the plasma model at x > 0 (purely imaginary
    conductivity), nonnegative for Drude.
    """
    return 2.0 * x * conductivity(model, x).real * coth_half(x, theta)
