"""Normal wavevectors, inner-side Fresnel coefficients, and tensor identities.

Reduced variables throughout: freq is x = omega*tau (real axis) or
xhat = xi*tau (imaginary axis), p = c*Q*tau.  The medium normal wavevector
obeys q^2 = eps_r*x^2 - p^2 (real axis) with the branch Re q >= 0, Im q >= 0,
which guarantees decaying exponentials exp(2 i q z) inside the conductor.
On the imaginary axis q^2 = -(eps_r*xhat^2 + p^2), so q and v come out purely
imaginary with positive imaginary part and all reflection amplitudes real.

The reflection coefficients are those of the *inner* side of the
metal-vacuum interface:

    r_p = (eps_r*v - q)/(eps_r*v + q),   r_s = (q - v)/(q + v),

and the cancellation-free combination used by all force kernels is

    r_p + r_s = 2*v*q*(eps_r - 1)/((eps_r*v + q)*(q + v)).

The tensor-trace and angular-average helpers are verification oracles for
the polarization algebra feeding the force integrand; they never enter force
values.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

AXES = ("real", "imaginary")

# Test hook: when True the branch choice is deliberately wrong (sign-flipped).
# Used only by the selftest to prove the oracle suite catches a bad branch.
_BRANCH_PERTURBED = False


class PoleError(ArithmeticError):
    """Exact degeneracy eps_r*v + q = 0 or q + v = 0 in a Fresnel denominator."""


@dataclass(frozen=True)
class SpectralPoint:
    """Reduced frequency and in-plane wavevector with an axis tag."""

    freq: float
    p: float
    axis: str = "real"

    def __post_init__(self):
        if not self.freq > 0.0:
            raise ValueError("freq must be positive")
        if self.p < 0.0:
            raise ValueError("p must be non-negative")
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")


@dataclass(frozen=True)
class LayerResponse:
    """Normal wavevectors and inner reflection amplitudes at one spectral point."""

    q: complex
    v: complex
    r_p: complex
    r_s: complex


@contextmanager
def perturbed_branch():
    """Invert the square-root branch choice (selftest hook, not thread-safe)."""
    global _BRANCH_PERTURBED
    _BRANCH_PERTURBED = True
    try:
        yield
    finally:
        _BRANCH_PERTURBED = False


def _branch_sqrt(w):
    """Square root with Re >= 0, flipping the principal branch if needed."""
    r = np.sqrt(np.asarray(w, dtype=complex))
    r = np.where(r.real < 0.0, -r, r)
    if _BRANCH_PERTURBED:
        r = np.conj(r)
    return r


def _freq_squared(freq, axis):
    # omega^2 = x^2 on the real axis, (i*xhat)^2 = -xhat^2 on the imaginary one
    if axis == "real":
        return freq * freq
    if axis == "imaginary":
        return -freq * freq
    raise ValueError(f"axis must be one of {AXES}")


def wavevectors(eps_r, freq, p, axis="real"):
    """Vectorized (q, v) for scalar eps_r/freq and scalar or array p."""
    p = np.asarray(p, dtype=float)
    f2 = _freq_squared(freq, axis)
    q = _branch_sqrt(eps_r * f2 - p * p)
    v = _branch_sqrt(f2 - p * p + 0j)
    return q, v


def normal_wavevectors(eps_r: complex, point: SpectralPoint) -> tuple[complex, complex]:
    """Medium and vacuum normal wavevectors at one spectral point."""
    q, v = wavevectors(eps_r, point.freq, point.p, point.axis)
    return complex(q), complex(v)


def fresnel_inner(eps_r, q, v):
    """Inner-side Fresnel amplitudes (r_p, r_s)."""
    dp = eps_r * v + q
    ds = q + v
    if np.any(dp == 0) or np.any(ds == 0):
        raise PoleError("degenerate Fresnel denominator (eps_r*v + q or q + v vanishes)")
    r_p = (eps_r * v - q) / dp
    r_s = (q - v) / ds
    return r_p, r_s


def fresnel_sum(eps_r, q, v):
    """r_p + r_s in the cancellation-free form 2*v*q*(eps_r-1)/((eps_r*v+q)(q+v))."""
    dp = eps_r * v + q
    ds = q + v
    if np.any(dp == 0) or np.any(ds == 0):
        raise PoleError("degenerate Fresnel denominator (eps_r*v + q or q + v vanishes)")
    return 2.0 * v * q * (eps_r - 1.0) / (dp * ds)


def layer_response(eps_r: complex, point: SpectralPoint) -> LayerResponse:
    """Bundle wavevectors and reflection amplitudes for one spectral point."""
    q, v = normal_wavevectors(eps_r, point)
    r_p, r_s = fresnel_inner(eps_r, q, v)
    return LayerResponse(q=q, v=v, r_p=complex(r_p), r_s=complex(r_s))


def reflection_tensor_trace(eps_r, q, v, p):
    """Trace of the reflected transverse tensor, r_s + r_p*(q^2 - p^2)/k^2.

    The medium wavenumber satisfies k^2 = eps_r*x^2 = q^2 + p^2, so no
    explicit frequency is needed.
    """
    r_p, r_s = fresnel_inner(eps_r, q, v)
    k2 = q * q + p * p
    return r_s + r_p * (q * q - p * p) / k2


def angular_average_vector(eps_r, q, v, p):
    """z-component of the in-plane angular average of the reflected tensor algebra.

    Assembles trace*q + 2*q*r_p*p^2/k^2, which must equal q*(r_p + r_s);
    exposed as a test oracle for the polarization-vector derivation chain.
    """
    r_p, _ = fresnel_inner(eps_r, q, v)
    k2 = q * q + p * p
    return reflection_tensor_trace(eps_r, q, v, p) * q + 2.0 * q * r_p * p * p / k2


def diffusion_frequency(p, omega_p_tau):
    """Magnetic-diffusion frequency x = p^2/Omega_hat^2 (reduced omega = Q^2/(mu_0 sigma_0))."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("p must be non-negative")
    out = p * p / omega_p_tau ** 2
    return float(out) if out.ndim == 0 else out
