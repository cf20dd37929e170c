"""H-polytope machinery: dense simplex LP, pruning, vertices, diameters.

A polytope is stored as the intersection of half-spaces ``a . x <= b``.  The
linear programs solved here are tiny (dimension <= 7 in every intended use),
so the solver is a dense two-phase tableau simplex with Bland's anti-cycling
rule: robustness over speed.  All tolerances are centralized below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEASIBILITY_TOL = 1e-9  # constraint satisfaction slack
DEDUP_TOL = 1e-8        # vertex merge radius
PRUNE_MARGIN = 1e-9     # strict-redundancy margin
_PIVOT_TOL = 1e-11
_MAX_PIVOTS = 1_000_000

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


class LpStallError(RuntimeError):
    """Simplex exceeded its pivot budget."""


@dataclass(frozen=True)
class LpResult:
    status: str
    value: float | None = None
    point: np.ndarray | None = None


@dataclass
class HPolytope:
    """Finite half-space intersection {x in R^d : A x <= b}."""

    a: np.ndarray  # (m, d) constraint normals
    b: np.ndarray  # (m,) offsets
    pruned_at: int = -1
    _bounded: bool | None = field(default=None, repr=False)

    def __post_init__(self):
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        if self.a.shape[0] != self.b.shape[0]:
            raise ValueError("constraint count mismatch between normals and offsets")
        if self.a.shape[0] == 0:
            raise ValueError("constraint list must be nonempty")
        norms = np.linalg.norm(self.a, axis=1)
        if np.any(norms <= 0.0):
            raise ValueError("every constraint normal must be nonzero")

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    @property
    def n_constraints(self) -> int:
        return self.a.shape[0]

    @classmethod
    def box(cls, lower, upper) -> "HPolytope":
        """Axis-aligned box {lower <= x <= upper}."""
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        d = lower.size
        eye = np.eye(d)
        return cls(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))

    def add_constraint(self, normal, offset: float) -> None:
        normal = np.asarray(normal, dtype=float).reshape(1, -1)
        if np.linalg.norm(normal) <= 0.0:
            raise ValueError("constraint normal must be nonzero")
        self.a = np.vstack([self.a, normal])
        self.b = np.append(self.b, float(offset))
        self._bounded = None

    def copy(self) -> "HPolytope":
        return HPolytope(self.a.copy(), self.b.copy(), self.pruned_at, self._bounded)


# ---------------------------------------------------------------------------
# dense simplex
# ---------------------------------------------------------------------------

def _simplex_min(tab, basis, costs, n_cols):
    """Minimize costs.x on the tableau in place; Bland's rule throughout.

    tab   -- (m, n_cols+1) rows [B^-1 A | B^-1 b], b column already >= 0
    basis -- length-m array of basic column indices (identity start)
    """
    m = tab.shape[0]
    for _ in range(_MAX_PIVOTS):
        # reduced costs r = c - c_B . (B^-1 A)
        r = costs[:n_cols] - costs[basis] @ tab[:, :n_cols]
        improving = np.flatnonzero(r < -_PIVOT_TOL)
        if improving.size == 0:
            return OPTIMAL
        entering = int(improving[0])  # Bland: lowest improving index
        col = tab[:, entering]
        rows = np.flatnonzero(col > _PIVOT_TOL)
        if rows.size == 0:
            return UNBOUNDED
        ratios = tab[rows, -1] / col[rows]
        ties = rows[ratios <= ratios.min() + _PIVOT_TOL]
        leaving = int(ties[np.argmin(basis[ties])])  # Bland: lowest basic index
        pivot_row = tab[leaving] / tab[leaving, entering]
        tab -= np.outer(col, pivot_row)
        tab[leaving] = pivot_row
        basis[leaving] = entering
    raise LpStallError(
        f"simplex stalled after {_MAX_PIVOTS} pivots "
        f"(m={m}, n={n_cols})"
    )


def lp_maximize(c, poly: HPolytope) -> LpResult:
    """Maximize c.x over the polytope with a two-phase dense simplex.

    Free variables are split x = x+ - x-; slack variables complete the
    standard form.  Returns optimal value and an optimizer point, or the
    unbounded/infeasible status.
    """
    c = np.asarray(c, dtype=float).ravel()
    if c.size != poly.dim:
        raise ValueError("objective dimension mismatch")
    a, b = poly.a, poly.b
    m, d = a.shape

    # standard form columns: [x+ (d) | x- (d) | slack (m) | artificial (k)]
    body = np.hstack([a, -a, np.eye(m)])
    rhs = b.copy()
    flip = rhs < 0.0
    body[flip, :] *= -1.0
    rhs[flip] *= -1.0
    art_rows = np.flatnonzero(flip)
    n_art = art_rows.size
    n_real = 2 * d + m

    tab = np.hstack([body, np.zeros((m, n_art)), rhs[:, None]])
    basis = np.empty(m, dtype=int)
    basis[:] = 2 * d + np.arange(m)  # slack columns
    for k, i in enumerate(art_rows):
        tab[i, n_real + k] = 1.0
        basis[i] = n_real + k

    if n_art:
        phase1 = np.zeros(n_real + n_art)
        phase1[n_real:] = 1.0
        status = _simplex_min(tab, basis, phase1, n_real + n_art)
        if status != OPTIMAL:
            raise LpStallError("phase-1 simplex did not terminate at an optimum")
        obj = phase1[basis] @ tab[:, -1]
        if obj > FEASIBILITY_TOL:
            return LpResult(INFEASIBLE)
        # drive remaining artificials out of the basis; drop redundant rows
        drop_rows = []
        for i in range(m):
            if basis[i] >= n_real:
                row = tab[i, :n_real]
                piv_candidates = np.flatnonzero(np.abs(row) > _PIVOT_TOL)
                if piv_candidates.size == 0:
                    drop_rows.append(i)
                    continue
                j = int(piv_candidates[0])
                piv = tab[i, j]
                tab[i, :] /= piv
                for r_ in range(m):
                    if r_ != i and abs(tab[r_, j]) > 0.0:
                        tab[r_, :] -= tab[r_, j] * tab[i, :]
                basis[i] = j
        if drop_rows:
            keep_rows = np.setdiff1d(np.arange(m), drop_rows)
            tab = tab[keep_rows]
            basis = basis[keep_rows]
        tab = np.hstack([tab[:, :n_real], tab[:, -1:]])

    phase2 = np.zeros(n_real)
    phase2[:d] = -c      # minimize -c.x+ + c.x-
    phase2[d : 2 * d] = c
    status = _simplex_min(tab, basis, phase2, n_real)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, value=np.inf)

    x_full = np.zeros(n_real)
    for i in range(tab.shape[0]):
        if basis[i] < n_real:
            x_full[basis[i]] = tab[i, -1]
    point = x_full[:d] - x_full[d : 2 * d]
    return LpResult(OPTIMAL, value=float(c @ point), point=point)


def support(poly: HPolytope, direction) -> float:
    """Support function h(v) = max v.x over the polytope."""
    res = lp_maximize(direction, poly)
    if res.status == INFEASIBLE:
        raise ValueError("support function of an empty polytope")
    if res.status == UNBOUNDED:
        return np.inf
    return res.value


def contains(poly: HPolytope, x, tol: float = FEASIBILITY_TOL) -> bool:
    """Membership test a.x <= b + tol for every constraint."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != poly.dim:
        raise ValueError("point dimension mismatch")
    return bool(np.all(poly.a @ x <= poly.b + tol))


def is_bounded(poly: HPolytope) -> bool:
    """Bounded iff the LP is bounded in every signed coordinate direction."""
    if poly._bounded is None:
        bounded = True
        for k in range(poly.dim):
            for sign in (1.0, -1.0):
                e = np.zeros(poly.dim)
                e[k] = sign
                if lp_maximize(e, poly).status == UNBOUNDED:
                    bounded = False
                    break
            if not bounded:
                break
        poly._bounded = bounded
    return poly._bounded


def bounding_box(poly: HPolytope) -> tuple[np.ndarray, np.ndarray]:
    """Tight axis-aligned bounds (lower, upper) via 2d support LPs."""
    lo = np.empty(poly.dim)
    hi = np.empty(poly.dim)
    for k in range(poly.dim):
        e = np.zeros(poly.dim)
        e[k] = 1.0
        hi[k] = support(poly, e)
        lo[k] = -support(poly, -e)
    return lo, hi


def prune(poly: HPolytope) -> HPolytope:
    """Remove every constraint that is strictly implied by the others.

    Constraint i is dropped iff maximizing a_i.x subject to all other
    (currently kept) constraints stays below b_i - margin; the result is
    set-equal to the input.
    """
    keep = np.ones(poly.n_constraints, dtype=bool)
    for i in range(poly.n_constraints):
        others = keep.copy()
        others[i] = False
        if not others.any():
            continue
        sub = HPolytope(poly.a[others], poly.b[others])
        res = lp_maximize(poly.a[i], sub)
        if res.status == OPTIMAL and res.value < poly.b[i] - PRUNE_MARGIN:
            keep[i] = False
    out = HPolytope(poly.a[keep], poly.b[keep], pruned_at=poly.pruned_at)
    out._bounded = poly._bounded
    return out


def _merge_close(points: np.ndarray, radius: float) -> np.ndarray:
    """Greedy dedup of row vectors within the given merge radius."""
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > radius for q in kept):
            kept.append(p)
    return np.array(kept) if kept else np.empty((0, points.shape[1]))


def vertices_2d(poly: HPolytope) -> np.ndarray:
    """Vertices of a bounded 2D polytope, counterclockwise.

    All pairwise constraint intersections are tested for feasibility,
    deduplicated, and sorted around the centroid.
    """
    if poly.dim != 2:
        raise ValueError("vertices_2d requires a 2-dimensional polytope")
    if not is_bounded(poly):
        raise ValueError("vertices_2d requires a bounded polytope")
    a, b = poly.a, poly.b
    m = a.shape[0]
    i_idx, j_idx = np.triu_indices(m, k=1)
    det = a[i_idx, 0] * a[j_idx, 1] - a[i_idx, 1] * a[j_idx, 0]
    scale = np.linalg.norm(a[i_idx], axis=1) * np.linalg.norm(a[j_idx], axis=1)
    ok = np.abs(det) > 1e-12 * np.maximum(scale, 1.0)
    if not ok.any():
        return np.empty((0, 2))
    i_idx, j_idx, det = i_idx[ok], j_idx[ok], det[ok]
    px = (b[i_idx] * a[j_idx, 1] - b[j_idx] * a[i_idx, 1]) / det
    py = (a[i_idx, 0] * b[j_idx] - a[j_idx, 0] * b[i_idx]) / det
    cand = np.column_stack([px, py])
    feas = np.all(cand @ a.T <= b + FEASIBILITY_TOL, axis=1)
    verts = _merge_close(cand[feas], DEDUP_TOL)
    if verts.shape[0] <= 2:
        return verts
    centroid = verts.mean(axis=0)
    ang = np.arctan2(verts[:, 1] - centroid[1], verts[:, 0] - centroid[0])
    return verts[np.argsort(ang)]


def _vertices_3d(poly: HPolytope) -> np.ndarray:
    a, b = poly.a, poly.b
    m = a.shape[0]
    pts = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                sub = a[[i, j, k]]
                if abs(np.linalg.det(sub)) <= 1e-12 * max(
                    np.prod(np.linalg.norm(sub, axis=1)), 1.0
                ):
                    continue
                p = np.linalg.solve(sub, b[[i, j, k]])
                if np.all(a @ p <= b + FEASIBILITY_TOL):
                    pts.append(p)
    if not pts:
        return np.empty((0, 3))
    return _merge_close(np.array(pts), DEDUP_TOL)


def _interval_1d(poly: HPolytope) -> tuple[float, float]:
    hi = support(poly, np.array([1.0]))
    lo = -support(poly, np.array([-1.0]))
    return lo, hi


def _max_pairwise_distance(points: np.ndarray) -> float:
    if points.shape[0] == 0:
        return 0.0
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=2)).max())


def diameter(
    poly: HPolytope, directions: int = 2000, seed: int = 0
) -> tuple[float, bool]:
    """Euclidean diameter with an exactness certificate.

    d <= 3: enumerate vertices, return the exact max pairwise distance
    (certified_exact True).  d > 3: lower-bound the diameter by the largest
    width h(v) + h(-v) over `directions` random unit directions plus the 2d
    signed coordinate axes (certified_exact False).
    """
    if not is_bounded(poly):
        raise ValueError("diameter requires a bounded polytope")
    d = poly.dim
    if d == 1:
        lo, hi = _interval_1d(poly)
        return max(hi - lo, 0.0), True
    if d == 2:
        return _max_pairwise_distance(vertices_2d(poly)), True
    if d == 3:
        return _max_pairwise_distance(_vertices_3d(poly)), True

    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(directions, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    axes = np.vstack([np.eye(d), -np.eye(d)])
    best = 0.0
    for v in np.vstack([axes, dirs]):
        width = support(poly, v) + support(poly, -v)
        if width > best:
            best = width
    return best, False
