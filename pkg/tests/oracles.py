"""Independent reference implementations used as test oracles.

Everything here is written against the formulas directly, at high precision
where it matters, and never calls into the package's own evaluation paths.
"""

import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def lse_burn_in_mp(n_phi, delta, s, p, b_bar):
    v = (10 / mp.mpf(p)) * (
        mp.log(1 / mp.mpf(delta))
        + 2 * n_phi * mp.log(10 / mp.mpf(p))
        + n_phi * mp.log(mp.mpf(b_bar) / (mp.mpf(delta) * mp.mpf(s) ** 2))
    )
    return mp.ceil(v)


def lse_error_bound_mp(n_x, n_phi, sigma_w, delta, s, p, b_bar, T):
    num = (
        n_x
        + mp.log(1 / mp.mpf(delta))
        + n_phi * mp.log(10 / mp.mpf(p))
        + n_phi * mp.log(mp.mpf(b_bar) / (mp.mpf(delta) * mp.mpf(s) ** 2))
    )
    return (90 * mp.mpf(sigma_w) / mp.mpf(p)) * mp.sqrt(
        num / (mp.mpf(T) * mp.mpf(s) ** 2)
    )


def sme_constants_mp(n_x, s, p, b):
    s, p, b = mp.mpf(s), mp.mpf(p), mp.mpf(b)
    return (
        s * p / 4,
        64 * b**2 / (s**2 * p**2),
        p**2 / 8,
        16 * b * mp.sqrt(n_x) / (s * p),
    )


def sme_failure_prob_mp(n_x, n_phi, s, p, b, c_w, T, m, delta):
    a1, a2, a3, a4 = sme_constants_mp(n_x, s, p, b)
    term1 = (
        544
        * (mp.mpf(T) / m)
        * mp.mpf(n_phi) ** mp.mpf("2.5")
        * mp.log(a2 * n_phi)
        * a2**n_phi
        * mp.exp(-a3 * m)
    )
    q = min(mp.mpf(c_w) * a1 * mp.mpf(delta) / (4 * mp.sqrt(n_x)), mp.mpf(1))
    if q >= 1:
        term2 = mp.mpf(0)
    else:
        term2 = (
            544
            * mp.mpf(n_x) ** mp.mpf("2.5")
            * mp.mpf(n_phi) ** mp.mpf("2.5")
            * mp.log(a4 * n_x * n_phi)
            * a4 ** (n_x * n_phi)
            * (1 - q) ** mp.ceil(mp.mpf(T) / m)
        )
    return max(term1 + term2, mp.mpf(0))


def sme_m_choice_mp(n_x, n_phi, s, p, b, T, eps):
    _, a2, a3, _ = sme_constants_mp(n_x, s, p, b)
    v = (1 / a3) * (
        mp.log(mp.mpf(T) / mp.mpf(eps))
        + n_phi * mp.log(a2)
        + mp.mpf("2.5") * mp.log(n_phi)
        + mp.log(mp.log(a2 * n_phi))
        + mp.log(544)
    )
    return mp.ceil(v)


def sme_diameter_bound_mp(n_x, n_phi, s, p, b, c_w, T, m, eps):
    a1, _, _, a4 = sme_constants_mp(n_x, s, p, b)
    bracket = (
        mp.log(1 / mp.mpf(eps))
        + n_x * n_phi * mp.log(a4)
        + mp.mpf("2.5") * mp.log(mp.mpf(n_x) * n_phi)
        + mp.log(mp.log(a4 * n_x * n_phi))
        + mp.log(544)
    )
    return (4 * mp.sqrt(n_x) * mp.mpf(m)) / (mp.mpf(c_w) * a1 * mp.mpf(T)) * bracket


def scalar_lse_ratio(states):
    """Closed-form scalar least squares: sum(x_t x_{t+1}) / sum(x_t^2)."""
    x = np.asarray(states, dtype=float)
    return float(np.dot(x[:-1], x[1:]) / np.dot(x[:-1], x[:-1]))


def brute_force_lp_max(c, a, b, tol=1e-9):
    """2D LP oracle: enumerate all constraint-pair intersections.

    Returns (status, value): 'optimal' with the best feasible vertex value,
    'infeasible' when no intersection point satisfies every constraint.
    Callers must supply instances known to be bounded in the direction c.
    """
    c = np.asarray(c, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    best = None
    for i, j in itertools.combinations(range(a.shape[0]), 2):
        sub = a[[i, j]]
        det = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
        if abs(det) < 1e-12:
            continue
        pt = np.linalg.solve(sub, b[[i, j]])
        if np.all(a @ pt <= b + tol):
            val = float(c @ pt)
            if best is None or val > best:
                best = val
    if best is None:
        return "infeasible", None
    return "optimal", best


def shoelace_area(vertices):
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def truncated_gaussian_interval_prob(lo, hi, sigma, bound):
    """P(lo <= w <= hi) for a centered Gaussian truncated to [-bound, bound]."""
    lo = max(lo, -bound)
    hi = min(hi, bound)
    if hi <= lo:
        return 0.0
    phi = lambda x: 0.5 * (1 + mp.erf(mp.mpf(x) / (sigma * mp.sqrt(2))))
    mass = phi(bound) - phi(-bound)
    return float((phi(hi) - phi(lo)) / mass)


def uniform_interval_prob(lo, hi, bound):
    lo = max(lo, -bound)
    hi = min(hi, bound)
    return max(hi - lo, 0.0) / (2.0 * bound)


def ks_two_sample_statistic(a, b):
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    both = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, both, side="right") / a.size
    cdf_b = np.searchsorted(b, both, side="right") / b.size
    return float(np.abs(cdf_a - cdf_b).max())
