"""Linearly parameterized nonlinear systems and forward simulation.

A system evolves as ``x_{t+1} = theta . phi(x_t, u_t) + w_t`` where ``phi`` is
a known vector of nonlinear features, ``theta`` carries the system parameters
with a boolean mask marking the entries to be estimated, and ``w_t`` is a
bounded disturbance.  Built-in models: an inverted-rod pendulum, a quaternion
quadrotor, and a scalar linear test system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .noise import NoiseSpec, SeedStream, sample_many

OPEN_LOOP_NOISE = "open-loop-noise"
FEEDBACK_PLUS_NOISE = "feedback-plus-noise"

DEFAULT_GUARD_RADIUS = 100.0
HARD_NORM_CEILING = 1e6


class DivergenceError(RuntimeError):
    """State norm crossed the hard ceiling during simulation."""


@dataclass(frozen=True)
class Dimensions:
    n_x: int
    n_u: int
    n_phi: int

    def __post_init__(self):
        if min(self.n_x, self.n_u, self.n_phi) < 1:
            raise ValueError("all dimensions must be strictly positive")


@dataclass(frozen=True)
class FeatureMap:
    """Deterministic feature vector of (state, input).

    ``evaluate`` maps a single (x, u) pair to a length-n_phi vector;
    ``evaluate_batch``, when provided, maps stacked (N, n_x), (N, n_u)
    arrays to (N, n_phi) and must agree with ``evaluate`` row-wise.
    """

    dims: Dimensions
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    labels: tuple[str, ...]
    evaluate_batch: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if len(self.labels) != self.dims.n_phi:
            raise ValueError("label count must equal n_phi")

    def batch(self, states: np.ndarray, inputs: np.ndarray) -> np.ndarray:
        if self.evaluate_batch is not None:
            return self.evaluate_batch(states, inputs)
        return np.array([self.evaluate(x, u) for x, u in zip(states, inputs)])


@dataclass(frozen=True)
class ParameterMatrix:
    """System parameters with a boolean mask of unknown (to-estimate) entries."""

    entries: np.ndarray  # (n_x, n_phi)
    mask: np.ndarray     # same shape; True marks an unknown entry

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))
        if self.entries.shape != self.mask.shape:
            raise ValueError("entries and mask must share a shape")

    @property
    def unknowns_per_row(self) -> np.ndarray:
        return self.mask.sum(axis=1)

    @property
    def total_unknowns(self) -> int:
        return int(self.mask.sum())

    def unknown_positions(self) -> list[tuple[int, int]]:
        """(row, col) of each unknown entry in row-major order."""
        rows, cols = np.nonzero(self.mask)
        return list(zip(rows.tolist(), cols.tolist()))

    def unknown_values(self) -> np.ndarray:
        return self.entries[self.mask]


@dataclass(frozen=True)
class ControlPolicy:
    """Input law u_t = feedback(x_t) + eta_t with eta from a bounded spec."""

    kind: str
    feedback: Callable[[np.ndarray], np.ndarray]
    noise: NoiseSpec
    feedback_batch: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in (OPEN_LOOP_NOISE, FEEDBACK_PLUS_NOISE):
            raise ValueError(f"unknown policy kind {self.kind!r}")

    def batch(self, states: np.ndarray) -> np.ndarray:
        if self.kind == OPEN_LOOP_NOISE:
            return np.zeros((states.shape[0], self.noise.dimension))
        if self.feedback_batch is not None:
            return self.feedback_batch(states)
        return np.array([self.feedback(x) for x in states])


def open_loop_policy(noise: NoiseSpec) -> ControlPolicy:
    dim = noise.dimension
    return ControlPolicy(
        kind=OPEN_LOOP_NOISE,
        feedback=lambda x: np.zeros(dim),
        noise=noise,
        feedback_batch=lambda xs: np.zeros((xs.shape[0], dim)),
    )


@dataclass(frozen=True)
class SystemModel:
    name: str
    feature_map: FeatureMap
    theta: ParameterMatrix
    default_x0: np.ndarray
    unknown_labels: tuple[str, ...]   # physical-parameter label per masked entry
    unknown_scales: tuple[float, ...] # physical value = scale * entry
    params: dict = field(default_factory=dict)

    @property
    def dims(self) -> Dimensions:
        return self.feature_map.dims

    def physical_parameters(self, entries: np.ndarray | None = None) -> dict[str, float]:
        """Physical parameters recovered from (estimated) matrix entries.

        Labels shared by several masked entries (the quadrotor's mass
        parameter appears once per velocity row) are averaged.
        """
        if entries is None:
            entries = self.theta.entries
        sums: dict[str, float] = {}
        counts: dict[str, int] = {}
        for (r, c), label, scale in zip(
            self.theta.unknown_positions(), self.unknown_labels, self.unknown_scales
        ):
            sums[label] = sums.get(label, 0.0) + scale * entries[r, c]
            counts[label] = counts.get(label, 0) + 1
        return {k: sums[k] / counts[k] for k in sums}


@dataclass
class Trajectory:
    """Simulated record of one run: states, inputs, disturbances, features."""

    states: np.ndarray        # (T+1, n_x)
    inputs: np.ndarray        # (T, n_u)
    disturbances: np.ndarray  # (T, n_x)
    features: np.ndarray      # (T, n_phi), phi(x_t, u_t) cached per step
    guard_tripped: bool

    @property
    def length(self) -> int:
        return self.inputs.shape[0]


def eval_features(fmap: FeatureMap, x, u) -> np.ndarray:
    """Evaluate the feature vector with dimension checks."""
    x = np.asarray(x, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if x.size != fmap.dims.n_x or u.size != fmap.dims.n_u:
        raise ValueError(
            f"dimension mismatch: got ({x.size}, {u.size}), "
            f"expected ({fmap.dims.n_x}, {fmap.dims.n_u})"
        )
    phi = np.asarray(fmap.evaluate(x, u), dtype=float).ravel()
    if phi.size != fmap.dims.n_phi:
        raise ValueError("feature map returned a vector of the wrong length")
    return phi


def step(model: SystemModel, x, u, w) -> np.ndarray:
    """One transition theta . phi(x, u) + w."""
    w = np.asarray(w, dtype=float).ravel()
    if w.size != model.dims.n_x:
        raise ValueError("disturbance dimension mismatch")
    phi = eval_features(model.feature_map, x, u)
    return model.theta.entries @ phi + w


def simulate(
    model: SystemModel,
    policy: ControlPolicy,
    noise: NoiseSpec,
    T: int,
    seed,
    x0: np.ndarray | None = None,
    guard_radius: float = DEFAULT_GUARD_RADIUS,
    hard_ceiling: float = HARD_NORM_CEILING,
) -> Trajectory:
    """Roll the system forward T steps from the model's initial state.

    Disturbances and input noise come from the independent substreams
    "disturbance" and "input-noise" of the given seed (an int root or a
    SeedStream), so identical arguments reproduce the trajectory exactly.
    ``guard_tripped`` records whether the state 2-norm ever exceeded
    ``guard_radius`` (a boundedness monitor, not an abort); crossing
    ``hard_ceiling`` aborts with DivergenceError.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if noise.dimension != model.dims.n_x:
        raise ValueError("disturbance spec dimension must equal n_x")
    if policy.noise.dimension != model.dims.n_u:
        raise ValueError("input-noise spec dimension must equal n_u")
    stream = seed if isinstance(seed, SeedStream) else SeedStream(int(seed))
    w_all = sample_many(noise, T, stream.child("disturbance"))
    eta_all = sample_many(policy.noise, T, stream.child("input-noise"))

    n_x, n_u, n_phi = model.dims.n_x, model.dims.n_u, model.dims.n_phi
    states = np.empty((T + 1, n_x))
    inputs = np.empty((T, n_u))
    features = np.empty((T, n_phi))
    states[0] = model.default_x0 if x0 is None else np.asarray(x0, dtype=float)

    fmap_eval = model.feature_map.evaluate
    theta = model.theta.entries
    open_loop = policy.kind == OPEN_LOOP_NOISE
    feedback = policy.feedback
    guard_tripped = False

    for t in range(T):
        x = states[t]
        u = eta_all[t] if open_loop else feedback(x) + eta_all[t]
        phi = fmap_eval(x, u)
        x_next = theta @ phi + w_all[t]
        inputs[t] = u
        features[t] = phi
        states[t + 1] = x_next
        norm = math.sqrt(float(x_next @ x_next))
        if norm > guard_radius:
            guard_tripped = True
            if norm > hard_ceiling:
                raise DivergenceError(
                    f"state norm {norm:.3e} exceeded the hard ceiling "
                    f"{hard_ceiling:.1e} at step {t}"
                )
    return Trajectory(states, inputs, w_all, features, guard_tripped)


def check_feature_independence(
    model: SystemModel,
    box: float = 1.0,
    points_per_feature: int = 10,
    seed: int = 0,
) -> float:
    """Smallest singular value of the column-normalized sampled feature matrix.

    Samples >= 10 n_phi random points from a bounded box of states and
    inputs; values above ~1e-8 certify numerical linear independence of the
    feature components.
    """
    dims = model.dims
    n = points_per_feature * dims.n_phi
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-box, box, size=(n, dims.n_x))
    us = rng.uniform(-box, box, size=(n, dims.n_u))
    phi = model.feature_map.batch(xs, us)
    norms = np.linalg.norm(phi, axis=0)
    norms[norms == 0.0] = 1.0
    return float(np.linalg.svd(phi / norms, compute_uv=False)[-1])


# ---------------------------------------------------------------------------
# pendulum
# ---------------------------------------------------------------------------

def pendulum_model(
    m: float = 0.1, l: float = 0.5, dt: float = 0.01, g: float = 9.81
) -> SystemModel:
    """Forward-Euler pendulum: state (alpha, alpha_dot), torque input.

    Features (alpha, alpha_dot, sin alpha, u); the two unknown entries carry
    the physical parameters theta1 = 1/l and theta2 = 1/(m l^2).
    """
    if min(m, l, dt, g) <= 0:
        raise ValueError("pendulum parameters must be positive")

    def evaluate(x, u):
        return np.array([x[0], x[1], math.sin(x[0]), u[0]])

    def evaluate_batch(xs, us):
        return np.column_stack([xs[:, 0], xs[:, 1], np.sin(xs[:, 0]), us[:, 0]])

    dims = Dimensions(n_x=2, n_u=1, n_phi=4)
    fmap = FeatureMap(
        dims, evaluate, ("alpha", "alpha_dot", "sin_alpha", "u"), evaluate_batch
    )
    entries = np.array(
        [
            [1.0, dt, 0.0, 0.0],
            [0.0, 1.0, -g * dt / l, dt / (m * l * l)],
        ]
    )
    mask = np.zeros_like(entries, dtype=bool)
    mask[1, 2] = True
    mask[1, 3] = True
    return SystemModel(
        name="pendulum",
        feature_map=fmap,
        theta=ParameterMatrix(entries, mask),
        default_x0=np.zeros(2),
        unknown_labels=("theta1", "theta2"),
        unknown_scales=(-1.0 / (g * dt), 1.0 / dt),
        params={"m": m, "l": l, "dt": dt, "g": g},
    )


def pendulum_policy(k: float, noise: NoiseSpec) -> ControlPolicy:
    """Rate feedback u = -k alpha_dot + eta."""
    return ControlPolicy(
        kind=FEEDBACK_PLUS_NOISE,
        feedback=lambda x: np.array([-k * x[1]]),
        noise=noise,
        feedback_batch=lambda xs: -k * xs[:, 1:2],
    )


# ---------------------------------------------------------------------------
# quadrotor
# ---------------------------------------------------------------------------

def _normalized_quaternion(q: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(q)
    return q / n if n > 1e-12 else q


def _rotation_ez(q: np.ndarray) -> np.ndarray:
    # third column of the attitude matrix: body-z thrust axis in world frame
    q0, q1, q2, q3 = q
    return np.array(
        [
            2.0 * (q0 * q2 - q1 * q3),
            2.0 * (q2 * q3 - q0 * q1),
            q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3,
        ]
    )


def _omega_times_q(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    w1, w2, w3 = w
    q0, q1, q2, q3 = q
    return np.array(
        [
            -w1 * q1 - w2 * q2 - w3 * q3,
            w1 * q0 + w3 * q2 - w2 * q3,
            w2 * q0 - w3 * q1 + w1 * q3,
            w3 * q0 + w2 * q1 - w1 * q2,
        ]
    )


QUADROTOR_FEATURE_LABELS = (
    "p1", "p2", "p3",
    "v1", "v2", "v3",
    "q0", "q1", "q2", "q3",
    "w1", "w2", "w3",
    "1",
    "Qez_fu_1", "Qez_fu_2", "Qez_fu_3",
    "Omega_q_0", "Omega_q_1", "Omega_q_2", "Omega_q_3",
    "tau1", "tau2", "tau3",
    "w2w3", "w1w3", "w1w2",
)


def quadrotor_model(
    m: float = 0.468,
    i_xx: float = 4.856e-3,
    i_yy: float = 4.856e-3,
    i_zz: float = 8.801e-3,
    dt: float = 0.01,
    g: float = 9.81,
) -> SystemModel:
    """Forward-Euler quadrotor: 13 states (p, v, q, omega), 4 inputs (f_u, tau).

    The feature vector collects the state components, a constant gravity
    channel, the world-frame thrust direction scaled by f_u (cubic in the
    quaternion and thrust), the quaternion kinematics products, the torques,
    and the gyroscopic cross-products.  Seven physical parameters are
    unknown: 1/m on the velocity rows, and the inertia parameters
    (1/I_xx, (I_yy-I_zz)/I_xx, 1/I_yy, (I_zz-I_xx)/I_yy, 1/I_zz,
    (I_xx-I_yy)/I_zz) on the angular-rate rows.

    The quaternion is renormalized inside the feature evaluation, so stored
    states keep the raw one-step update and the recurrence stays exact.
    """
    if min(m, i_xx, i_yy, i_zz, dt, g) <= 0:
        raise ValueError("quadrotor parameters must be positive")

    def evaluate(x, u):
        p, v = x[0:3], x[3:6]
        q = _normalized_quaternion(x[6:10])
        w = x[10:13]
        f_u, tau = u[0], u[1:4]
        phi = np.empty(27)
        phi[0:3] = p
        phi[3:6] = v
        phi[6:10] = q
        phi[10:13] = w
        phi[13] = 1.0
        phi[14:17] = _rotation_ez(q) * f_u
        phi[17:21] = _omega_times_q(w, q)
        phi[21:24] = tau
        phi[24] = w[1] * w[2]
        phi[25] = w[0] * w[2]
        phi[26] = w[0] * w[1]
        return phi

    def evaluate_batch(xs, us):
        n = xs.shape[0]
        q = xs[:, 6:10]
        qn = np.linalg.norm(q, axis=1, keepdims=True)
        q = np.where(qn > 1e-12, q / np.where(qn > 1e-12, qn, 1.0), q)
        q0, q1, q2, q3 = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
        w1, w2, w3 = xs[:, 10], xs[:, 11], xs[:, 12]
        f_u = us[:, 0]
        phi = np.empty((n, 27))
        phi[:, 0:6] = xs[:, 0:6]
        phi[:, 6:10] = q
        phi[:, 10:13] = xs[:, 10:13]
        phi[:, 13] = 1.0
        phi[:, 14] = 2.0 * (q0 * q2 - q1 * q3) * f_u
        phi[:, 15] = 2.0 * (q2 * q3 - q0 * q1) * f_u
        phi[:, 16] = (q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3) * f_u
        phi[:, 17] = -w1 * q1 - w2 * q2 - w3 * q3
        phi[:, 18] = w1 * q0 + w3 * q2 - w2 * q3
        phi[:, 19] = w2 * q0 - w3 * q1 + w1 * q3
        phi[:, 20] = w3 * q0 + w2 * q1 - w1 * q2
        phi[:, 21:24] = us[:, 1:4]
        phi[:, 24] = w2 * w3
        phi[:, 25] = w1 * w3
        phi[:, 26] = w1 * w2
        return phi

    dims = Dimensions(n_x=13, n_u=4, n_phi=27)
    fmap = FeatureMap(dims, evaluate, QUADROTOR_FEATURE_LABELS, evaluate_batch)

    theta = np.zeros((13, 27))
    mask = np.zeros((13, 27), dtype=bool)
    for i in range(3):  # position rows: p' = p + dt v
        theta[i, i] = 1.0
        theta[i, 3 + i] = dt
    for i in range(3):  # velocity rows: v' = v + dt (1/m) Q e_z f_u (- g dt on z)
        theta[3 + i, 3 + i] = 1.0
        theta[3 + i, 14 + i] = dt / m
        mask[3 + i, 14 + i] = True
    theta[5, 13] = -g * dt
    for i in range(4):  # quaternion rows: q' = q + (dt/2) Omega q
        theta[6 + i, 6 + i] = 1.0
        theta[6 + i, 17 + i] = dt / 2.0
    # angular-rate rows: Euler's equations, unknown inertia parameters
    theta[10, 10] = 1.0
    theta[10, 21] = dt / i_xx
    theta[10, 24] = dt * (i_yy - i_zz) / i_xx
    theta[11, 11] = 1.0
    theta[11, 22] = dt / i_yy
    theta[11, 25] = dt * (i_zz - i_xx) / i_yy
    theta[12, 12] = 1.0
    theta[12, 23] = dt / i_zz
    theta[12, 26] = dt * (i_xx - i_yy) / i_zz
    mask[10, 21] = mask[10, 24] = True
    mask[11, 22] = mask[11, 25] = True
    mask[12, 23] = mask[12, 26] = True

    x0 = np.zeros(13)
    x0[6] = 1.0  # identity quaternion: the zero-attitude rest state

    labels = (
        "theta1", "theta1", "theta1",
        "theta2", "theta3", "theta4", "theta5", "theta6", "theta7",
    )
    scales = (1.0 / dt,) * 9
    return SystemModel(
        name="quadrotor",
        feature_map=fmap,
        theta=ParameterMatrix(theta, mask),
        default_x0=x0,
        unknown_labels=labels,
        unknown_scales=scales,
        params={
            "m": m, "i_xx": i_xx, "i_yy": i_yy, "i_zz": i_zz, "dt": dt, "g": g,
        },
    )


def _euler_angles(q: np.ndarray) -> tuple[float, float, float]:
    q0, q1, q2, q3 = q
    roll = math.atan2(2.0 * (q0 * q1 + q2 * q3), 1.0 - 2.0 * (q1 * q1 + q2 * q2))
    pitch = math.asin(max(-1.0, min(1.0, 2.0 * (q0 * q2 - q3 * q1))))
    yaw = math.atan2(2.0 * (q0 * q3 + q1 * q2), 1.0 - 2.0 * (q2 * q2 + q3 * q3))
    return roll, pitch, yaw


def quadrotor_policy(
    noise: NoiseSpec,
    m: float = 0.468,
    g: float = 9.81,
    kp_z: float = 0.75,
    kd_z: float = 1.25,
    kp_att: float = 0.03,
    kd_att: float = 0.00875,
) -> ControlPolicy:
    """Altitude and attitude PD loops regulating hover at the origin.

    f_u = m (g + kp_z (0 - z) + kd_z (0 - z_dot)); each torque is
    kp (0 - angle) - kd rate with the Euler angles read off the
    (normalized) quaternion and the body rates as angle rates.
    """

    def feedback(x):
        z, z_dot = x[2], x[5]
        q = _normalized_quaternion(x[6:10])
        w = x[10:13]
        roll, pitch, yaw = _euler_angles(q)
        f_u = m * (g + kp_z * (0.0 - z) + kd_z * (0.0 - z_dot))
        tau = np.array(
            [
                kp_att * (0.0 - roll) - kd_att * w[0],
                kp_att * (0.0 - pitch) - kd_att * w[1],
                kp_att * (0.0 - yaw) - kd_att * w[2],
            ]
        )
        return np.concatenate([[f_u], tau])

    return ControlPolicy(kind=FEEDBACK_PLUS_NOISE, feedback=feedback, noise=noise)


# ---------------------------------------------------------------------------
# scalar linear test model
# ---------------------------------------------------------------------------

def linear_scalar_model(a: float = 0.9) -> SystemModel:
    """x' = a x + w with the single feature (x); the input is inert."""
    dims = Dimensions(n_x=1, n_u=1, n_phi=1)
    fmap = FeatureMap(
        dims,
        lambda x, u: np.array([x[0]]),
        ("x",),
        lambda xs, us: xs[:, 0:1].copy(),
    )
    return SystemModel(
        name="linear-scalar",
        feature_map=fmap,
        theta=ParameterMatrix(np.array([[a]]), np.array([[True]])),
        default_x0=np.zeros(1),
        unknown_labels=("theta",),
        unknown_scales=(1.0,),
        params={"a": a},
    )


BUILTIN_MODELS = {
    "pendulum": pendulum_model,
    "quadrotor": quadrotor_model,
    "linear-scalar": linear_scalar_model,
}


def build_model(name: str, **params) -> SystemModel:
    """Instantiate a built-in model by name with keyword overrides."""
    if name not in BUILTIN_MODELS:
        raise ValueError(
            f"unknown model {name!r}; built-ins: {sorted(BUILTIN_MODELS)}"
        )
    return BUILTIN_MODELS[name](**params)
