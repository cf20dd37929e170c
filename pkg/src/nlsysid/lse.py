"""Masked least-squares estimation of the unknown parameter entries.

The squared one-step prediction residual decouples across state rows, so each
row's unknown entries are solved from its own reduced normal equations after
subtracting the known-entry contribution from the targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ParameterMatrix, SystemModel, Trajectory

SINGULARITY_TOL = 1e-10


class InsufficientDataError(ValueError):
    """Fewer samples than unknowns in some row."""


@dataclass(frozen=True)
class LseResult:
    estimate: ParameterMatrix
    row_condition_numbers: np.ndarray   # cond of each reduced Gram (nan if no unknowns)
    pinv_fallback_rows: tuple[int, ...]
    absolute_error: float
    normalized_error: float


def solve_lse(traj: Trajectory, model: SystemModel) -> LseResult:
    """Fill the masked entries by row-wise least squares over the trajectory.

    Each row solves its reduced normal equations by a symmetric
    positive-definite factorization; a Gram matrix singular beyond
    SINGULARITY_TOL falls back to the minimum-norm pseudo-inverse solution
    (flagged in the result).
    """
    theta = model.theta
    d_max = int(theta.unknowns_per_row.max())
    if traj.length < d_max:
        raise InsufficientDataError(
            f"T={traj.length} is below the largest per-row unknown count {d_max}"
        )
    phi = traj.features
    targets = traj.states[1:]
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(targets))):
        raise ValueError("trajectory contains non-finite values")

    n_x = theta.entries.shape[0]
    estimate = theta.entries.copy()
    conds = np.full(n_x, np.nan)
    fallback: list[int] = []

    for j in range(n_x):
        cols = np.flatnonzero(theta.mask[j])
        if cols.size == 0:
            continue
        known_row = theta.entries[j].copy()
        known_row[cols] = 0.0
        y = targets[:, j] - phi @ known_row
        a = phi[:, cols]
        gram = a.T @ a
        cross = a.T @ y
        sv = np.linalg.svd(gram, compute_uv=False)
        conds[j] = np.inf if sv[-1] == 0.0 else float(sv[0] / sv[-1])
        if sv[0] == 0.0 or sv[-1] / sv[0] < SINGULARITY_TOL:
            sol = np.linalg.pinv(a) @ y
            fallback.append(j)
        else:
            try:
                chol = np.linalg.cholesky(gram)
                sol = np.linalg.solve(chol.T, np.linalg.solve(chol, cross))
            except np.linalg.LinAlgError:
                sol = np.linalg.pinv(a) @ y
                fallback.append(j)
        estimate[j, cols] = sol

    result_matrix = ParameterMatrix(estimate, theta.mask.copy())
    absolute, normalized = _errors(estimate, model)
    return LseResult(
        estimate=result_matrix,
        row_condition_numbers=conds,
        pinv_fallback_rows=tuple(fallback),
        absolute_error=absolute,
        normalized_error=normalized,
    )


def _errors(estimate: np.ndarray, model: SystemModel) -> tuple[float, float]:
    diff = estimate - model.theta.entries
    absolute = float(np.linalg.norm(diff, 2))
    return absolute, absolute / float(np.linalg.norm(model.theta.entries, 2))


def estimation_error(result: LseResult, model: SystemModel) -> tuple[float, float]:
    """Spectral-norm error against the true parameters, raw and normalized.

    Known entries agree exactly between estimate and truth, so this equals
    the error over the unknown entries embedded at their positions.
    """
    return _errors(result.estimate.entries, model)
