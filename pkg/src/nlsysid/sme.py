"""Online set-membership estimation over streamed half-spaces.

Each datum (x_next, phi) constrains every state row's unknown entries to a
slab |x_next^j - theta_row . phi| <= w_max, so the uncertainty set is a
Cartesian product of per-row H-polytopes and its Frobenius diameter is the
root-sum-square of the row diameters.  Rows start from a prior box
[-R0, R0]^d so the set is bounded before the data excite every direction.

A new slab face is appended only when it can actually cut the current row
polytope (checked against the polytope's bounding box); skipped faces are
implied by existing constraints, so the represented set is unchanged and
pruning cadence has no semantic effect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .geometry import HPolytope
from .models import SystemModel

DEFAULT_PRIOR_HALF_WIDTH = 100.0
DEFAULT_PRUNE_INTERVAL = 25
_ZERO_NORMAL_TOL = 0.0  # exact zero test; any nonzero feature defines a face


class NoiseBoundViolationError(RuntimeError):
    """A datum is inconsistent with the configured disturbance bound."""


@dataclass
class _Row:
    cols: np.ndarray            # masked feature columns of this state row
    known: np.ndarray           # full row with unknown entries zeroed
    poly: HPolytope
    box_lo: np.ndarray
    box_hi: np.ndarray
    since_prune: int = 0        # faces inserted since the last redundancy sweep


@dataclass
class SmeState:
    rows: list[_Row | None]     # None where the row has no unknowns
    w_max: float
    prior_half_width: float
    prune_interval: int
    steps_absorbed: int = 0

    @property
    def row_polytopes(self) -> list[HPolytope | None]:
        return [r.poly if r is not None else None for r in self.rows]


def sme_init(
    model: SystemModel,
    w_max: float,
    prior_half_width: float = DEFAULT_PRIOR_HALF_WIDTH,
    prune_interval: int = DEFAULT_PRUNE_INTERVAL,
) -> SmeState:
    """Prior-only state: one [-R0, R0]^d box per state row with unknowns."""
    if not w_max > 0:
        raise ValueError("w_max must be > 0")
    if not prior_half_width > 0:
        raise ValueError("prior half-width must be > 0")
    rows: list[_Row | None] = []
    for j in range(model.dims.n_x):
        cols = np.flatnonzero(model.theta.mask[j])
        if cols.size == 0:
            rows.append(None)
            continue
        d = cols.size
        lo = np.full(d, -prior_half_width)
        hi = np.full(d, prior_half_width)
        known = model.theta.entries[j].copy()
        known[cols] = 0.0
        rows.append(
            _Row(cols=cols, known=known, poly=HPolytope.box(lo, hi),
                 box_lo=lo.copy(), box_hi=hi.copy())
        )
    return SmeState(
        rows=rows,
        w_max=float(w_max),
        prior_half_width=float(prior_half_width),
        prune_interval=int(prune_interval),
    )


def _box_support(row: _Row, normal: np.ndarray) -> float:
    # upper bound on max normal.theta over the row polytope via its box
    return float(
        np.sum(np.where(normal >= 0.0, normal * row.box_hi, normal * row.box_lo))
    )


def _refresh_box(row: _Row) -> None:
    row.box_lo, row.box_hi = geometry.bounding_box(row.poly)


def _insert_face(row: _Row, normal: np.ndarray, offset: float) -> bool:
    """Add one half-space unless it is implied by the current set.

    Returns True when the constraint was appended.  Raises
    NoiseBoundViolationError when the intersection would be empty.
    """
    if _box_support(row, normal) <= offset:
        return False  # cannot cut: the whole box already satisfies it
    floor = geometry.lp_maximize(-normal, row.poly)
    if floor.status != geometry.OPTIMAL:
        raise RuntimeError("row polytope must be bounded and nonempty")
    if -floor.value > offset + geometry.FEASIBILITY_TOL:
        raise NoiseBoundViolationError(
            "datum excludes the entire parameter set; the configured "
            "disturbance bound is below the true noise level"
        )
    row.poly.add_constraint(normal, offset)
    row.since_prune += 1
    return True


def sme_update(
    state: SmeState, x_next, features, model: SystemModel
) -> SmeState:
    """Absorb one datum: intersect every row set with its two slab faces.

    Mutates and returns the state.  Every prune_interval updates, rows that
    actually gained constraints are re-pruned.
    """
    x_next = np.asarray(x_next, dtype=float).ravel()
    features = np.asarray(features, dtype=float).ravel()
    if x_next.size != model.dims.n_x or features.size != model.dims.n_phi:
        raise ValueError("datum dimension mismatch")
    w = state.w_max
    for j, row in enumerate(state.rows):
        if row is None:
            continue
        a = features[row.cols]
        c = float(x_next[j] - features @ row.known)
        if np.all(a == _ZERO_NORMAL_TOL):
            # uninformative datum: 0 . theta <= c +/- w_max
            if abs(c) > w + geometry.FEASIBILITY_TOL:
                raise NoiseBoundViolationError(
                    f"row {j}: residual {c:.3e} violates the bound {w:.3e} "
                    "on a zero-feature datum"
                )
            continue
        inserted = _insert_face(row, a, c + w)
        inserted |= _insert_face(row, -a, w - c)
        if inserted:
            _refresh_box(row)
    state.steps_absorbed += 1
    if state.steps_absorbed % state.prune_interval == 0:
        for row in state.rows:
            # a row whose constraint set did not grow is already swept
            if row is not None and row.since_prune > 0:
                row.poly = geometry.prune(row.poly)
                row.poly.pruned_at = state.steps_absorbed
                row.since_prune = 0
    return state


def sme_absorb_trajectory(state: SmeState, traj, model: SystemModel) -> SmeState:
    """Feed every step of a trajectory through sme_update."""
    for t in range(traj.length):
        sme_update(state, traj.states[t + 1], traj.features[t], model)
    return state


def sme_diameter(state: SmeState) -> float:
    """Frobenius diameter: root-sum-square of exact per-row diameters."""
    total = 0.0
    for row in state.rows:
        if row is None:
            continue
        diam, _ = geometry.diameter(row.poly)
        total += diam * diam
    return float(np.sqrt(total))


def sme_contains_truth(state: SmeState, model: SystemModel) -> bool:
    """True iff every row polytope contains the true unknown subvector."""
    for j, row in enumerate(state.rows):
        if row is None:
            continue
        truth = model.theta.entries[j, row.cols]
        if not geometry.contains(row.poly, truth):
            return False
    return True


def _locate(state: SmeState, flat_index: int) -> tuple[int, int]:
    """Map a row-major unknown-entry index to (state row, position in row)."""
    k = flat_index
    for j, row in enumerate(state.rows):
        if row is None:
            continue
        if k < row.cols.size:
            return j, k
        k -= row.cols.size
    raise IndexError(f"unknown-entry index {flat_index} out of range")


def sme_project_2d(
    state: SmeState, pair: tuple[int, int], n_directions: int = 64
) -> tuple[np.ndarray, bool]:
    """2D shadow of the uncertainty set on two unknown-entry coordinates.

    Same-row pairs with row dimension <= 2 project exactly; higher row
    dimensions are outer-approximated by support half-spaces in
    ``n_directions`` planar directions (flagged via the returned bool,
    True = exact).  Cross-row pairs are products of 1D intervals, hence
    exact rectangles.
    """
    i, j = pair
    if i == j:
        raise ValueError("projection needs two distinct coordinates")
    row_i, pos_i = _locate(state, i)
    row_j, pos_j = _locate(state, j)

    if row_i != row_j:
        spans = []
        for r, p in ((row_i, pos_i), (row_j, pos_j)):
            poly = state.rows[r].poly
            e = np.zeros(poly.dim)
            e[p] = 1.0
            hi = geometry.support(poly, e)
            lo = -geometry.support(poly, -e)
            spans.append((lo, hi))
        (x0, x1), (y0, y1) = spans
        verts = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
        return verts, True

    poly = state.rows[row_i].poly
    if poly.dim == 2:
        verts = geometry.vertices_2d(poly)
        if (pos_i, pos_j) == (1, 0):
            verts = verts[:, ::-1][::-1]  # swap axes, keep counterclockwise
        return verts, True

    angles = np.linspace(0.0, 2.0 * np.pi, n_directions, endpoint=False)
    normals = np.zeros((n_directions, poly.dim))
    normals[:, pos_i] = np.cos(angles)
    normals[:, pos_j] = np.sin(angles)
    offsets = np.array([geometry.support(poly, v) for v in normals])
    shadow = HPolytope(np.column_stack([np.cos(angles), np.sin(angles)]), offsets)
    return geometry.vertices_2d(shadow), False
