"""Closed-form evaluators of the non-asymptotic estimation guarantees.

Two families: the least-squares error bound with its burn-in horizon, and the
set-membership diameter machinery (failure probability, block-length choice,
and the explicit diameter bound for linearly tight noise q_w(l) = c_w l).
Everything is a pure function of a :class:`BoundInputs` record; the large
products are evaluated in log space so that no admissible parameter set
overflows.  Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bmsb import BmsbEstimate

LOG_544 = math.log(544.0)


@dataclass(frozen=True)
class BoundInputs:
    """Inputs shared by the bound evaluators.

    ``confidence`` is the delta of the least-squares bounds and the epsilon
    of the set-membership bounds; ``block_length`` (m) only matters for the
    set-membership family.
    """

    n_x: int
    n_phi: int
    sigma_w: float
    confidence: float
    bmsb: BmsbEstimate
    c_w: float | None = None
    horizon: int | None = None
    block_length: int | None = None

    def __post_init__(self):
        if not (0.0 < self.confidence < 1.0):
            raise ValueError("confidence parameter must lie strictly in (0, 1)")
        if min(self.n_x, self.n_phi) < 1:
            raise ValueError("dimensions must be positive")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon T must be >= 1")
        if self.sigma_w < 0:
            raise ValueError("sigma_w must be nonnegative")


@dataclass(frozen=True)
class SmeConstants:
    a1: float
    a2: float
    a3: float
    a4: float


def sme_constants(bmsb: BmsbEstimate, n_x: int) -> SmeConstants:
    """a1 = s p / 4, a2 = 64 b^2/(s p)^2, a3 = p^2/8, a4 = 16 b sqrt(n_x)/(s p)."""
    s, p, b = bmsb.s_phi, bmsb.p_phi, bmsb.b_phi
    return SmeConstants(
        a1=s * p / 4.0,
        a2=64.0 * b * b / (s * s * p * p),
        a3=p * p / 8.0,
        a4=16.0 * b * math.sqrt(n_x) / (s * p),
    )


def _lse_log_terms(inputs: BoundInputs) -> tuple[float, float, float]:
    delta = inputs.confidence
    s, p = inputs.bmsb.s_phi, inputs.bmsb.p_phi
    log_inv_delta = math.log(1.0 / delta)
    log_ratio = math.log(10.0 / p)
    log_moment = math.log(inputs.bmsb.b_bar_phi / (delta * s * s))
    return log_inv_delta, log_ratio, log_moment


def lse_burn_in(inputs: BoundInputs) -> int:
    """Minimum horizon before the least-squares error bound is claimed."""
    p = inputs.bmsb.p_phi
    log_inv_delta, log_ratio, log_moment = _lse_log_terms(inputs)
    value = (10.0 / p) * (
        log_inv_delta + 2.0 * inputs.n_phi * log_ratio + inputs.n_phi * log_moment
    )
    return int(math.ceil(value))


def lse_error_bound(inputs: BoundInputs) -> float:
    """High-probability spectral-norm error bound at horizon T.

    Valid only past the burn-in horizon, scaling as 1/sqrt(T).
    """
    if inputs.horizon is None:
        raise ValueError("horizon T is required")
    burn_in = lse_burn_in(inputs)
    if inputs.horizon < burn_in:
        raise ValueError(
            f"T={inputs.horizon} is below the burn-in horizon {burn_in}; "
            "the bound is not claimed there"
        )
    s, p = inputs.bmsb.s_phi, inputs.bmsb.p_phi
    log_inv_delta, log_ratio, log_moment = _lse_log_terms(inputs)
    numerator = (
        inputs.n_x
        + log_inv_delta
        + inputs.n_phi * log_ratio
        + inputs.n_phi * log_moment
    )
    return (90.0 * inputs.sigma_w / p) * math.sqrt(
        numerator / (inputs.horizon * s * s)
    )


def q_w(c_w: float, ell: float) -> float:
    """Linear boundary-visit probability, clamped into [0, 1]."""
    return min(c_w * ell, 1.0)


def sme_failure_prob(inputs: BoundInputs, diameter_threshold: float) -> float:
    """Upper bound on P(diam of the membership set > diameter_threshold).

    Two log-space terms: a block-excitation failure term decaying in the
    block length m, and a boundary-visit term decaying geometrically in the
    number of blocks ceil(T/m).  The result is clamped to [0, inf); it can
    exceed 1 (a vacuous bound) for weak constants.
    """
    T, m = inputs.horizon, inputs.block_length
    if T is None or m is None:
        raise ValueError("both horizon T and block length m are required")
    if not (T > m >= 1):
        raise ValueError(f"need T > m >= 1, got T={T}, m={m}")
    if inputs.c_w is None or inputs.c_w <= 0:
        raise ValueError("a positive tightness coefficient c_w is required")
    k = sme_constants(inputs.bmsb, inputs.n_x)
    n_x, n_phi = inputs.n_x, inputs.n_phi

    if k.a2 * n_phi <= 1.0:
        term1 = 0.0
    else:
        log1 = (
            LOG_544
            + math.log(T / m)
            + 2.5 * math.log(n_phi)
            + math.log(math.log(k.a2 * n_phi))
            + n_phi * math.log(k.a2)
            - k.a3 * m
        )
        term1 = math.exp(log1)

    q = q_w(inputs.c_w, k.a1 * diameter_threshold / (4.0 * math.sqrt(n_x)))
    if q >= 1.0 or k.a4 * n_x * n_phi <= 1.0:
        term2 = 0.0
    else:
        blocks = math.ceil(T / m)
        log2 = (
            LOG_544
            + 2.5 * math.log(n_x)
            + 2.5 * math.log(n_phi)
            + math.log(math.log(k.a4 * n_x * n_phi))
            + n_x * n_phi * math.log(k.a4)
            + blocks * math.log1p(-q)
        )
        term2 = math.exp(log2)
    return max(term1 + term2, 0.0)


def sme_m_choice(inputs: BoundInputs) -> int:
    """Block length making the excitation-failure term at most epsilon."""
    if inputs.horizon is None:
        raise ValueError("horizon T is required")
    k = sme_constants(inputs.bmsb, inputs.n_x)
    n_phi = inputs.n_phi
    if k.a2 * n_phi <= 1.0:
        raise ValueError(
            f"a2 * n_phi = {k.a2 * n_phi:.3e} <= 1: the iterated logarithm "
            "in the block-length formula is undefined"
        )
    eps = inputs.confidence
    value = (1.0 / k.a3) * (
        math.log(inputs.horizon / eps)
        + n_phi * math.log(k.a2)
        + 2.5 * math.log(n_phi)
        + math.log(math.log(k.a2 * n_phi))
        + LOG_544
    )
    return int(math.ceil(value))


def sme_diameter_bound(inputs: BoundInputs) -> float:
    """Diameter bound holding with probability >= 1 - 2 epsilon.

    Requires the block length from :func:`sme_m_choice` (or larger), a
    horizon T > m, and a linearly tight noise coefficient c_w; scales as
    m / T.
    """
    T, m = inputs.horizon, inputs.block_length
    if T is None or m is None:
        raise ValueError("both horizon T and block length m are required")
    if not T > m:
        raise ValueError(f"need T > m, got T={T}, m={m}")
    if inputs.c_w is None or inputs.c_w <= 0:
        raise ValueError("a positive tightness coefficient c_w is required")
    k = sme_constants(inputs.bmsb, inputs.n_x)
    n_x, n_phi = inputs.n_x, inputs.n_phi
    if k.a4 * n_x * n_phi <= 1.0:
        raise ValueError(
            f"a4 * n_x * n_phi = {k.a4 * n_x * n_phi:.3e} <= 1: the iterated "
            "logarithm in the diameter bound is undefined"
        )
    eps = inputs.confidence
    bracket = (
        math.log(1.0 / eps)
        + n_x * n_phi * math.log(k.a4)
        + 2.5 * math.log(n_x * n_phi)
        + math.log(math.log(k.a4 * n_x * n_phi))
        + LOG_544
    )
    return (4.0 * math.sqrt(n_x) * m) / (inputs.c_w * k.a1 * T) * bracket
