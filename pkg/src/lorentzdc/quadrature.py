"""Adaptive quadrature and the composed wavevector/frequency integrators.

The elementary rule is an embedded Gauss-Legendre pair (15-point high rule,
7-point low rule) applied per panel, with bisection of the worst panel until
the summed error estimate meets max(rel_tol*|value|, abs_tol) or the
subdivision budget runs out.  Integrands are evaluated on arrays of nodes
(vectorized), one call per refinement step, which keeps the numpy overhead
per panel small.

Semi-infinite integrals are summed over consecutive segments whose length is
tied to a caller-supplied decay scale; the sum stops once two consecutive
segments contribute less than tail_epsilon of the accumulated absolute
value.  Segments that stop shrinking trip a non-decay failure flag instead
of looping forever.

`q_integral` and `omega_integral` encode the physically informed splitting:
the wavevector integral splits at the light cone p = x (branch point of the
vacuum wavevector) and truncates where the damping bound
|exp(2 i q zeta/Omega_hat)| < tail_epsilon, using Im q >= sqrt(p^2 -
x^2*Re eps_r); the frequency integral splits at the Drude knee x = 1 and the
thermal knee x = theta, with the upper cutoff set by the exponential decay
of the Bose factor.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

from .medium import MaterialModel, permittivity
from . import kernels


class QuadratureError(RuntimeError):
    """Raised when a caller requires a converged integral and did not get one."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances, subdivision limits and tail-truncation policy."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_epsilon: float = 1e-12

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if not self.tail_epsilon > 0.0:
            raise ValueError("tail_epsilon must be positive")


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    failed_slices: tuple = ()

    def require(self, context: str = "integral") -> "IntegrationResult":
        if not self.converged:
            raise QuadratureError(
                f"{context} did not converge (value {self.value:.6e}, "
                f"error estimate {self.error_estimate:.3e}, "
                f"{self.evaluations} evaluations)"
            )
        return self


# Embedded pair: 15-point Gauss-Legendre with a 7-point companion rule.
_HI_X, _HI_W = np.polynomial.legendre.leggauss(15)
_LO_X, _LO_W = np.polynomial.legendre.leggauss(7)
_NODES = np.concatenate([_HI_X, _LO_X])
_N_HI = len(_HI_X)
_N_NODES = len(_NODES)


def _as_vectorized(f, vectorized):
    if vectorized:
        return f
    return lambda xs: np.array([f(float(x)) for x in np.asarray(xs, dtype=float)])


def _eval_panels(fvec, lows, highs):
    """High/low rule values and error estimates for a batch of panels."""
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    half = 0.5 * (highs - lows)
    mid = 0.5 * (highs + lows)
    xs = mid[:, None] + half[:, None] * _NODES[None, :]
    ys = np.asarray(fvec(xs.ravel()), dtype=float).reshape(xs.shape)
    hi = half * (ys[:, :_N_HI] @ _HI_W)
    lo = half * (ys[:, _N_HI:] @ _LO_W)
    return hi, np.abs(hi - lo)


def integrate_adaptive(f, a, b, spec: QuadratureSpec, points=(), vectorized=True) -> IntegrationResult:
    """Adaptive embedded-rule integration of f over [a, b].

    `points` are optional interior split locations (known kinks/knees);
    `vectorized` declares whether f accepts an ndarray of abscissas.
    Deterministic for a given f and spec.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    fvec = _as_vectorized(f, vectorized)

    edges = sorted({a, b, *(float(p) for p in points if a < p < b)})
    lows = np.array(edges[:-1])
    highs = np.array(edges[1:])
    vals, errs = _eval_panels(fvec, lows, highs)
    evaluations = lows.size * _N_NODES

    heap = []
    counter = 0
    for lo, hi_edge, v, e in zip(lows, highs, vals, errs):
        heapq.heappush(heap, (-e, counter, lo, hi_edge, v))
        counter += 1
    total = float(vals.sum())
    err_total = float(errs.sum())
    frozen_err = 0.0
    min_width = 1e-13 * (b - a)
    splits = 0

    while heap and splits < spec.max_subdivisions:
        if err_total <= max(spec.rel_tol * abs(total), spec.abs_tol):
            break
        neg_err, _, lo, hi_edge, v = heapq.heappop(heap)
        if hi_edge - lo <= min_width:
            frozen_err += -neg_err
            continue
        mid = 0.5 * (lo + hi_edge)
        cv, ce = _eval_panels(fvec, [lo, mid], [mid, hi_edge])
        evaluations += 2 * _N_NODES
        splits += 1
        total += float(cv.sum()) - v
        err_total += float(ce.sum()) - (-neg_err)
        heapq.heappush(heap, (-ce[0], counter, lo, mid, cv[0]))
        counter += 1
        heapq.heappush(heap, (-ce[1], counter, mid, hi_edge, cv[1]))
        counter += 1

    converged = bool(err_total <= max(spec.rel_tol * abs(total), spec.abs_tol))
    return IntegrationResult(total, err_total, evaluations, converged)


def integrate_semi_infinite(f, a, spec: QuadratureSpec, decay_scale, vectorized=True) -> IntegrationResult:
    """Integrate f over [a, inf) by segment summation.

    The integrand must eventually decay at least exponentially with a scale
    of order `decay_scale`.  Segments of length 3*decay_scale are summed
    until two consecutive segments contribute less than tail_epsilon of the
    accumulated absolute value; non-shrinking segments raise the failure
    flag (converged = False).
    """
    if not decay_scale > 0.0:
        raise ValueError("decay_scale must be positive")
    fvec = _as_vectorized(f, vectorized)
    seg_len = 3.0 * decay_scale

    total = 0.0
    abs_total = 0.0
    err_total = 0.0
    evaluations = 0
    segments_ok = True
    small_streak = 0
    history: list[float] = []
    max_segments = 600

    k = 0
    while True:
        lo = a + k * seg_len
        seg_spec = replace(
            spec,
            abs_tol=max(spec.abs_tol, 0.1 * spec.rel_tol * abs_total),
            max_subdivisions=max(spec.max_subdivisions // 8, 50),
        )
        res = integrate_adaptive(fvec, lo, lo + seg_len, seg_spec)
        total += res.value
        abs_total += abs(res.value)
        err_total += res.error_estimate
        evaluations += res.evaluations
        segments_ok = segments_ok and bool(res.converged)
        history.append(abs(res.value))

        if abs(res.value) < spec.tail_epsilon * (abs_total + spec.abs_tol):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0

        k += 1
        if k >= 50 and history[-1] > 0.5 * history[-26]:
            # contributions are not shrinking: not an (eventually) decaying tail
            return IntegrationResult(total, err_total + history[-1], evaluations, False)
        if k >= max_segments:
            return IntegrationResult(total, err_total + history[-1], evaluations, False)

    return IntegrationResult(total, err_total, evaluations, segments_ok)


# --- composed integrators -------------------------------------------------

_WEIGHTS = ("thermal", "total", "quantum")


def _p_max_real_axis(x, re_eps, zeta, omega_p_tau, tail_epsilon):
    # |exp(2 i q zeta/Omega_hat)| < tail_epsilon once
    # sqrt(p^2 - x^2*Re eps_r) > Omega_hat*log(1/eps)/(2 zeta); factor 1.5 margin
    base = omega_p_tau * math.log(1.0 / tail_epsilon) / (2.0 * zeta)
    return 1.5 * math.sqrt(base * base + x * x * max(re_eps, 0.0))


def q_integral(model: MaterialModel, part: str, x, zeta, theta, spec: QuadratureSpec,
               axis: str = "real", weight: str = "thermal") -> IntegrationResult:
    """Wavevector integral of the force kernel at fixed frequency.

    On the real axis the domain splits at the light cone p = x and truncates
    at the damping-bound p_max; for the lossless models the thermal kernel
    vanishes identically beyond the light cone, so only [0, x] is computed.
    On the imaginary axis there is no interior branch point and the integral
    runs as a semi-infinite segment sum.
    """
    if axis == "imaginary":
        if weight != "quantum":
            raise ValueError("imaginary-axis q_integral is defined for the quantum weight only")
        omega_p_tau = model.omega_p_tau
        kappa0 = math.sqrt(permittivity(model, x, "imaginary").real) * x
        s_far = omega_p_tau / (2.0 * zeta)
        decay = max(s_far, math.sqrt(2.0 * s_far * kappa0))
        return integrate_semi_infinite(
            lambda p: kernels.quantum_kernel_imag(model, x, p, zeta), 0.0, spec, decay
        )

    if weight not in _WEIGHTS:
        raise ValueError(f"weight must be one of {_WEIGHTS}")
    if weight == "thermal":
        integrand = lambda p: kernels.thermal_kernel(model, part, x, p, zeta, theta)
    elif weight == "total":
        integrand = lambda p: kernels.total_kernel(model, x, p, zeta, theta)
    else:
        integrand = lambda p: kernels.quantum_kernel_real(model, x, p, zeta)

    eps_r = permittivity(model, x, "real")
    omega_p_tau = model.omega_p_tau

    # propagating sector [0, x]; knee where Re q^2 crosses zero (UV only)
    inner_points = []
    if 0.0 < eps_r.real < 1.0:
        inner_points.append(x * math.sqrt(eps_r.real))
    lower = integrate_adaptive(integrand, 0.0, x, spec, points=inner_points)

    lossless_thermal = model.kind in ("plasma", "ideal") and weight == "thermal"
    p_max = _p_max_real_axis(x, eps_r.real, zeta, omega_p_tau, spec.tail_epsilon)
    if lossless_thermal or p_max <= x:
        # beyond the light cone the lossless thermal kernel is exactly zero
        # (real eps_r, purely imaginary q and v make the bracket real while
        # x*sigma_hat is purely imaginary); and if the damping bound is
        # already met at p = x nothing survives out there either.
        return lower

    p_skin = x * math.sqrt(abs(eps_r))
    outer_points = [p for p in (p_skin, 4.0 * p_skin) if x < p < p_max]
    upper = integrate_adaptive(integrand, x, p_max, spec, points=outer_points)

    return IntegrationResult(
        lower.value + upper.value,
        lower.error_estimate + upper.error_estimate,
        lower.evaluations + upper.evaluations,
        lower.converged and upper.converged,
    )


def omega_integral(g, hints: dict, spec: QuadratureSpec) -> IntegrationResult:
    """Frequency integral over converged slices produced by `g`.

    `g` maps a frequency to an IntegrationResult (a wavevector slice).
    hints = {"kind": "thermal", "theta": ...} integrates the thermally
    weighted real axis on [theta*1e-6, theta*(log(1/tail_eps) + 8)] with
    interior splits at the Drude knee x = 1 and at x = theta.
    hints = {"kind": "quantum_imaginary", "omega_p_tau": ..., "zeta": ...}
    covers [0, Omega_hat*max(1, 1/zeta)] with splits at the scales
    {1, Omega_hat} and continues with a semi-infinite segment sum.
    Any non-converged slice marks the overall result non-converged and is
    listed in failed_slices.
    """
    cache: dict[float, IntegrationResult] = {}
    failures: list[float] = []

    def slice_value(x: float) -> float:
        x = float(x)
        res = cache.get(x)
        if res is None:
            res = g(x)
            cache[x] = res
            if not res.converged:
                failures.append(x)
        return res.value

    def fvec(xs):
        return np.array([slice_value(x) for x in np.asarray(xs, dtype=float)])

    kind = hints["kind"]
    if kind == "thermal":
        theta = float(hints["theta"])
        x_min = theta * 1e-6
        x_max = theta * (math.log(1.0 / spec.tail_epsilon) + 8.0)
        points = [p for p in (1.0, theta) if x_min < p < x_max]
        result = integrate_adaptive(fvec, x_min, x_max, spec, points=points)
    elif kind == "quantum_imaginary":
        omega_p_tau = float(hints["omega_p_tau"])
        zeta = float(hints["zeta"])
        x_hi = omega_p_tau * max(1.0, 1.0 / zeta)
        head = integrate_adaptive(fvec, 0.0, x_hi, spec,
                                  points=[p for p in (1.0, omega_p_tau) if p < x_hi])
        tail = integrate_semi_infinite(fvec, x_hi, spec, omega_p_tau / (2.0 * zeta))
        result = IntegrationResult(
            head.value + tail.value,
            head.error_estimate + tail.error_estimate,
            head.evaluations + tail.evaluations,
            head.converged and tail.converged,
        )
    else:
        raise ValueError(f"unknown omega_integral kind {kind!r}")

    slice_evals = sum(r.evaluations for r in cache.values())
    # propagated slice error ~ domain span times the mean per-slice error
    span = max(cache) - min(cache) if len(cache) > 1 else 1.0
    slice_err = span * sum(r.error_estimate for r in cache.values()) / max(len(cache), 1)
    return IntegrationResult(
        result.value,
        result.error_estimate + slice_err,
        result.evaluations + slice_evals,
        result.converged and not failures,
        failed_slices=tuple(sorted(failures)),
    )
