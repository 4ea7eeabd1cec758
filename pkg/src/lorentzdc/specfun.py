"""Special functions needed by the closed-form results."""

from __future__ import annotations

import math

# Recurrence threshold for the digamma asymptotic series.  With terms through
# 1/(252 u^6) the first neglected term is 1/(240 u^8), which stays below
# 1e-12 only for u >= 16; we shift a little further for margin.
_PSI_ASYMPTOTIC_MIN = 20.0


def digamma(u: float) -> float:
    """Digamma function psi(u) for real u > 0.

    Uses the recurrence psi(u) = psi(u+1) - 1/u to push the argument to the
    asymptotic regime, then

        psi(u) ~ ln u - 1/(2u) - 1/(12u^2) + 1/(120u^4) - 1/(252u^6).

    Arguments u <= 0 are rejected (the reflection formula is out of scope).
    """
    if not u > 0.0:
        raise ValueError(f"digamma requires u > 0, got {u}")
    acc = 0.0
    while u < _PSI_ASYMPTOTIC_MIN:
        acc -= 1.0 / u
        u += 1.0
    r = 1.0 / u
    r2 = r * r
    series = math.log(u) - 0.5 * r - r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 / 252.0))
    return acc + series
