"""Pointwise integrands of the force integrals.

All kernels return the *bare* reduced integrand; the overall -hbar*mu_0/(2 pi)
force prefactor is applied in :mod:`lorentzdc.force`.  The depth enters
through exp(2 i q z) with z/(c tau) = zeta/Omega_hat, i.e. a factor
exp(2 i q zeta/Omega_hat) in reduced variables.

The real-axis kernels share one code path,

    Re[ x * sigma_part(x) * occupation * p * exp(2 i q zeta/Omega_hat) * (r_p + r_s) ],

where `occupation` is 2*nbar (thermal), coth(x/2 theta) (total) or 1
(quantum), and `sigma_part` selects the full conductivity (the main force
integrand), its real part only (current fluctuations alone) or i*Im sigma
only (field fluctuations alone).  The medium response inside q and the
Fresnel factors always uses the full conductivity; only the fluctuation
weight is decomposed.
"""

from __future__ import annotations

import numpy as np

from .medium import MaterialModel, bose, coth_half, conductivity, conductivity_imaginary_axis, permittivity
from .optics import fresnel_sum, wavevectors

CONDUCTIVITY_PARTS = ("full", "real_only", "imag_only")


def _sigma_part(sigma: complex, part: str) -> complex:
    if part == "full":
        return sigma
    if part == "real_only":
        return complex(sigma.real, 0.0)
    if part == "imag_only":
        return 1j * sigma.imag
    raise ValueError(f"part must be one of {CONDUCTIVITY_PARTS}, got {part!r}")


def _check_point(x: float, zeta: float) -> None:
    if not x > 0.0:
        raise ValueError("frequency must be positive")
    if not zeta > 0.0:
        raise ValueError("zeta must be positive")


def _real_axis_kernel(model, part, x, p, zeta, occupation):
    """Common real-axis integrand with a given occupation factor."""
    if occupation == 0.0:
        p = np.asarray(p, dtype=float)
        out = np.zeros_like(p)
        return float(out) if out.ndim == 0 else out
    sigma = conductivity(model, x)
    eps_r = 1.0 + 1j * sigma / x
    p = np.asarray(p, dtype=float)
    q, v = wavevectors(eps_r, x, p, "real")
    s = fresnel_sum(eps_r, q, v)
    phase = np.exp(2j * q * zeta / model.omega_p_tau)
    val = (x * _sigma_part(sigma, part) * occupation * p * phase * s).real
    return float(val) if val.ndim == 0 else val


def thermal_kernel(model: MaterialModel, part: str, x, p, zeta, theta):
    """Thermal force integrand (coth - 1 -> 2*nbar), selected conductivity part."""
    _check_point(x, zeta)
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    return _real_axis_kernel(model, part, x, p, zeta, 2.0 * bose(x, theta))


def total_kernel(model: MaterialModel, x, p, zeta, theta):
    """Full-coth integrand of the total force; part = full only."""
    _check_point(x, zeta)
    return _real_axis_kernel(model, "full", x, p, zeta, coth_half(x, theta))


def quantum_kernel_real(model: MaterialModel, x, p, zeta):
    """T = 0 integrand on the real axis (occupation 1); cross-validation oracle."""
    _check_point(x, zeta)
    return _real_axis_kernel(model, "full", x, p, zeta, 1.0)


def quantum_kernel_imag(model: MaterialModel, xhat, p, zeta):
    """Wick-rotated T = 0 integrand at imaginary frequency xi = xhat/tau.

    Everything is real here: sigma_hat(i xhat) > 0, the combined Fresnel sum
    is real, and the propagation factor is exp(-2*kappa*zeta/Omega_hat) with
    kappa^2 = eps_r(i xhat)*xhat^2 + p^2.  The sign is fixed by rotating the
    frequency contour into the first quadrant (omega = i xi brings a factor
    i * i*xi = -xi under the real part, cancelling the overall minus of the
    force prefactor); it is certified against the real-axis oracle.
    """
    _check_point(xhat, zeta)
    sigma = conductivity_imaginary_axis(model, xhat)
    eps_r = 1.0 + sigma / xhat
    p = np.asarray(p, dtype=float)
    kappa = np.sqrt(eps_r * xhat * xhat + p * p)
    vmag = np.sqrt(xhat * xhat + p * p)
    s = 2.0 * vmag * kappa * (eps_r - 1.0) / ((eps_r * vmag + kappa) * (kappa + vmag))
    val = xhat * sigma * p * np.exp(-2.0 * kappa * zeta / model.omega_p_tau) * s
    return float(val) if val.ndim == 0 else val


def ideal_kernel(qhat, zeta):
    """Ideal-conductor integrand exp(-2*Qhat*zeta)*Qhat*kappa/(kappa + Qhat).

    Qhat is the wavevector in units of 1/lambdabar_p and
    kappa = sqrt(1 + Qhat^2); nonnegative for all arguments.
    """
    if not zeta > 0.0:
        raise ValueError("zeta must be positive")
    qhat = np.asarray(qhat, dtype=float)
    if np.any(qhat < 0):
        raise ValueError("qhat must be non-negative")
    kappa = np.sqrt(1.0 + qhat * qhat)
    val = np.exp(-2.0 * qhat * zeta) * qhat * kappa / (kappa + qhat)
    return float(val) if val.ndim == 0 else val


def spectral_density(model: MaterialModel, x, zeta, theta, quad=None):
    """p-integrated thermal kernel at fixed x: the force spectrum over frequency.

    Carries no force prefactor; integrating over x and multiplying by
    -1/(2 pi) reproduces the reduced thermal force.
    """
    from . import quadrature  # local import to keep the module graph acyclic

    spec = quad if quad is not None else quadrature.QuadratureSpec()
    res = quadrature.q_integral(model, "full", x, zeta, theta, spec, weight="thermal")
    if not res.converged:
        raise quadrature.QuadratureError(
            f"p-integral did not converge at x={x}, zeta={zeta} "
            f"(error estimate {res.error_estimate:.3e})"
        )
    return res.value


__all__ = [
    "CONDUCTIVITY_PARTS",
    "thermal_kernel",
    "total_kernel",
    "quantum_kernel_real",
    "quantum_kernel_imag",
    "ideal_kernel",
    "spectral_density",
    "permittivity",
]
