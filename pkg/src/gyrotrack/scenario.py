"""End-to-end tracking experiments.

A scenario pairs a rotor-driven plant with a reference attitude produced
by a second ("dummy") rotor body flying under a chosen torque program.
Reference and plant are co-integrated in one combined state so the
controller always sees exact reference values, never interpolated ones.

Because the control torques are internal, any admissible reference must
carry the same spatial angular momentum as the plant; `consistent_rotor_velocity`
computes the dummy body's initial rotor rates that put it on the plant's
momentum level set.

The bundled benchmark parameter set (`benchmark_config`) exercises three
reference torque programs: zero, constant (0.2, 0.1, 0.2) N·m, and the
sinusoid (sin t, cos t, sin t) N·m.
"""

import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np

from .control import (FeasibilityVerdict, GainSet, NavigationWeights,
                      _loop_kernel, gain_derive, gain_feasible, pd_variant,
                      q_matrix, synthesize_gains, BENCHMARK_MU_HESS,
                      BENCHMARK_LAMBDA_SUP)
from .dynamics import InertiaParams, momentum_body, rotor_accels
from .errors import SingularRotorInertiaError
from .integrators import IntegratorConfig, Trajectory, integrate
from .so3 import cross3


@dataclass(frozen=True)
class ReferenceProgram:
    """Torque program driving the reference body's rotors.

    kind "zero" ignores the amplitude; "constant" applies it verbatim;
    "sinusoid" applies amplitude * (sin t, cos t, sin t).
    """

    kind: str = "zero"
    amplitude: np.ndarray = None

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "sinusoid"):
            raise ValueError(f"unknown program kind '{self.kind}'")
        amp = np.zeros(3) if self.amplitude is None \
            else np.asarray(self.amplitude, dtype=float)
        if amp.shape != (3,) or not np.isfinite(amp).all():
            raise ValueError("amplitude must be a finite 3-vector")
        object.__setattr__(self, "amplitude", amp)

    def torque(self, t):
        if self.kind == "zero":
            return np.zeros(3)
        if self.kind == "constant":
            return self.amplitude
        s, c = np.sin(t), np.cos(t)
        return self.amplitude * np.array([s, c, s])

    def torque_series(self, times):
        """Vectorized torque samples, shape (len(times), 3)."""
        n = len(times)
        if self.kind == "zero":
            return np.zeros((n, 3))
        if self.kind == "constant":
            return np.tile(self.amplitude, (n, 1))
        s, c = np.sin(times), np.cos(times)
        return self.amplitude * np.stack([s, c, s], axis=1)


@dataclass(frozen=True)
class BodySetup:
    """Inertia parameters plus initial conditions for one rotor body.

    OmegaR0 may be None on the reference body, meaning "derive from the
    plant's momentum level set".
    """

    params: InertiaParams
    R0: np.ndarray
    Omega0: np.ndarray
    OmegaR0: np.ndarray = None
    Theta0: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "R0", np.asarray(self.R0, dtype=float))
        object.__setattr__(self, "Omega0", np.asarray(self.Omega0, dtype=float))
        if self.OmegaR0 is not None:
            object.__setattr__(self, "OmegaR0",
                               np.asarray(self.OmegaR0, dtype=float))
        theta = np.zeros(3) if self.Theta0 is None \
            else np.asarray(self.Theta0, dtype=float)
        object.__setattr__(self, "Theta0", theta)


@dataclass(frozen=True)
class ScenarioConfig:
    plant: BodySetup
    reference: BodySetup
    program: ReferenceProgram
    weights: NavigationWeights
    gains: GainSet
    integrator: IntegratorConfig


@dataclass
class ClosedLoopTrajectory:
    """Plant + reference trajectories with per-sample control records."""

    times: np.ndarray
    R: np.ndarray
    Theta: np.ndarray
    Omega: np.ndarray
    OmegaR: np.ndarray
    R_d: np.ndarray
    Theta_d: np.ndarray
    Omega_d: np.ndarray
    OmegaR_d: np.ndarray
    Omega_d_dot: np.ndarray
    xi_I: np.ndarray
    u_ext: np.ndarray          # realized carrier-body torque, N·m
    u_int: np.ndarray          # rotor torque, N·m (zero for external runs)
    actuation: str = "internal"

    def __len__(self):
        return len(self.times)

    def plant_trajectory(self):
        return Trajectory(times=self.times, R=self.R, Theta=self.Theta,
                          Omega=self.Omega, OmegaR=self.OmegaR)

    def reference_trajectory(self):
        return Trajectory(times=self.times, R=self.R_d, Theta=self.Theta_d,
                          Omega=self.Omega_d, OmegaR=self.OmegaR_d,
                          omega_dot=self.Omega_d_dot)


@dataclass
class RunMetrics:
    """Per-sample diagnostics of a closed-loop run.

    momentum_drift is the worst sup-norm deviation of the plant's spatial
    angular momentum from its initial value; ortho_drift the worst
    Frobenius defect ||R^T R - 1|| over every stored rotation.
    """

    psi_e: np.ndarray
    geo_err: np.ndarray
    effort_l2: np.ndarray
    effort_uext_l2: np.ndarray
    ecl: np.ndarray
    ecl_bound: np.ndarray
    momentum_drift_series: np.ndarray
    momentum_drift: float
    ortho_drift: float
    feasibility: FeasibilityVerdict


# ---------------------------------------------------------------------------
# benchmark parameter set
# ---------------------------------------------------------------------------

BENCHMARK_PLANT_I = np.array([[4.0, 1.0, 1.0],
                              [1.0, 5.2, 2.0],
                              [1.0, 2.0, 6.3]])
BENCHMARK_PLANT_K = (5.0, 6.0, 7.0)
BENCHMARK_PLANT_R0 = np.array([[0.36, 0.48, -0.8],
                               [-0.8, 0.6, 0.0],
                               [0.48, 0.64, 0.6]])
BENCHMARK_PLANT_IOMEGA0 = np.array([1.0, 2.2, 5.1])   # Omega0 = I^{-1} @ this
BENCHMARK_PLANT_OMEGAR0 = np.array([0.5, 1.9, 1.5])
BENCHMARK_REF_I = np.diag([1.0, 1.2, 2.0])
BENCHMARK_REF_K = (4.0, 3.0, 2.0)
BENCHMARK_REF_IOMEGA0 = np.array([-0.8, -0.3, -0.5])  # Omega_d0 = I_d^{-1} @ this
BENCHMARK_GAINS = (1.0, 3.0, 1.0)                     # (k_p, k_d, k_I)
BENCHMARK_KAPPA = 0.6
_PROGRAM_AMPLITUDES = {
    "zero": np.zeros(3),
    "constant": np.array([0.2, 0.1, 0.2]),
    "sinusoid": np.ones(3),
}


def benchmark_plant():
    params = InertiaParams(BENCHMARK_PLANT_I, BENCHMARK_PLANT_K)
    omega0 = np.linalg.solve(BENCHMARK_PLANT_I, BENCHMARK_PLANT_IOMEGA0)
    return BodySetup(params=params, R0=BENCHMARK_PLANT_R0, Omega0=omega0,
                     OmegaR0=BENCHMARK_PLANT_OMEGAR0)


def benchmark_reference():
    params = InertiaParams(BENCHMARK_REF_I, BENCHMARK_REF_K)
    omega0 = np.linalg.solve(BENCHMARK_REF_I, BENCHMARK_REF_IOMEGA0)
    return BodySetup(params=params, R0=np.eye(3), Omega0=omega0, OmegaR0=None)


def benchmark_gains():
    """The bundled (1, 3, 1) gain triple with its certification inputs.

    These gains fail their own feasibility inequalities (k_p never clears
    2 kappa k_d^2 for any admissible kappa); runs record that verdict.
    """
    kp, kd, ki = BENCHMARK_GAINS
    return gain_derive(kp, kd, ki, BENCHMARK_KAPPA,
                       BENCHMARK_MU_HESS, BENCHMARK_LAMBDA_SUP)


def certified_gains(kd=3.0):
    """A gain set for the benchmark plant that passes certification."""
    return synthesize_gains(BENCHMARK_PLANT_I, kd=kd)


def benchmark_config(program="zero", gains=None, step=1e-3, duration=30.0,
                     scheme="rk4_munthe_kaas"):
    """Assemble a full benchmark scenario for one of the torque programs."""
    if program not in _PROGRAM_AMPLITUDES:
        raise ValueError(f"unknown benchmark program '{program}'")
    if gains is None:
        gains = benchmark_gains()
    elif gains == "certified":
        gains = certified_gains()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # identity P: repeated eigenvalues
        weights = NavigationWeights(np.eye(3))
    return ScenarioConfig(
        plant=benchmark_plant(),
        reference=benchmark_reference(),
        program=ReferenceProgram(program, _PROGRAM_AMPLITUDES[program]),
        weights=weights,
        gains=gains,
        integrator=IntegratorConfig(step=step, duration=duration,
                                    scheme=scheme, reproject=True),
    )


# ---------------------------------------------------------------------------
# momentum-consistent initialization
# ---------------------------------------------------------------------------

def consistent_rotor_velocity(ref_params, r_d0, omega_d0, mu_spatial):
    """Initial rotor rates putting the reference on a given momentum level.

        OmegaR_d(0) = K_d^{-1} (R_d(0)^T mu - (I_d + K_d) Omega_d(0))

    Feeding the result back through the momentum map reproduces mu exactly.
    """
    k_diag = np.diag(ref_params.rotor_inertia)
    if np.abs(k_diag).min() < 1e-15:
        raise SingularRotorInertiaError("rotor inertia matrix is singular")
    r_d0 = np.asarray(r_d0, dtype=float)
    residual = r_d0.T @ np.asarray(mu_spatial, dtype=float) \
        - ref_params.locked @ np.asarray(omega_d0, dtype=float)
    return residual / k_diag


def plant_spatial_momentum(setup):
    """Spatial angular momentum of a body setup at its initial state."""
    pi0 = momentum_body(setup.params, setup.Omega0, setup.OmegaR0)
    return setup.R0 @ pi0


def resolve_reference(cfg):
    """Fill a derive-from-momentum reference rotor velocity, if requested."""
    if cfg.reference.OmegaR0 is not None:
        return cfg
    mu = plant_spatial_momentum(cfg.plant)
    omega_r0 = consistent_rotor_velocity(cfg.reference.params,
                                         cfg.reference.R0,
                                         cfg.reference.Omega0, mu)
    reference = dataclasses.replace(cfg.reference, OmegaR0=omega_r0)
    return dataclasses.replace(cfg, reference=reference)


def on_reference_variant(cfg):
    """Start the plant exactly on the reference (zero initial error)."""
    cfg = resolve_reference(cfg)
    plant = dataclasses.replace(cfg.plant, R0=cfg.reference.R0.copy(),
                                Omega0=cfg.reference.Omega0.copy())
    return dataclasses.replace(cfg, plant=plant)


# ---------------------------------------------------------------------------
# reference generation
# ---------------------------------------------------------------------------

def make_reference(cfg):
    """Integrate the reference body alone under its torque program.

    The returned trajectory carries Omega_d_dot sampled from the vector
    field at every stored state (not finite-differenced), as the tracking
    feed-forward needs it.
    """
    cfg = resolve_reference(cfg)
    ref = cfg.reference
    program = cfg.program

    def field(t, rots, vec):
        omega, omega_r = vec[3:6], vec[6:9]
        d_omega, d_omega_r = rotor_accels(ref.params, omega, omega_r,
                                          program.torque(t))
        vdot = np.empty(9)
        vdot[0:3] = omega_r
        vdot[3:6] = d_omega
        vdot[6:9] = d_omega_r
        return (omega,), vdot

    vec0 = np.concatenate([ref.Theta0, ref.Omega0, ref.OmegaR0])
    hist = integrate(field, ((ref.R0,), vec0), cfg.integrator)
    omega = hist.vectors[:, 3:6]
    omega_r = hist.vectors[:, 6:9]
    omega_dot = _rotor_accel_series(ref.params, omega, omega_r,
                                    program.torque_series(hist.times))[0]
    return Trajectory(times=hist.times, R=hist.rotations[0],
                      Theta=hist.vectors[:, 0:3], Omega=omega,
                      OmegaR=omega_r, omega_dot=omega_dot)


def _rotor_accel_series(params, omega, omega_r, u_int):
    """Vectorized block solve over stacked samples."""
    pi = omega @ params.locked.T + omega_r @ params.rotor_inertia.T
    rhs = np.concatenate([np.cross(pi, omega), u_int], axis=1)
    acc = rhs @ params._block_inv.T
    return acc[:, :3], acc[:, 3:]


# ---------------------------------------------------------------------------
# closed-loop runs
# ---------------------------------------------------------------------------

def _closed_loop_field(cfg, actuation):
    """Combined plant + reference + integral-state vector field."""
    plant, ref = cfg.plant.params, cfg.reference.params
    program = cfg.program
    gains = cfg.gains
    p_mat = cfg.weights.P
    i_metric = plant.body_inertia
    i_inv = plant.body_inertia_inv
    rotor_k = plant.rotor_diag

    if actuation == "internal":
        # vec: Theta 0:3 | Omega 3:6 | OmegaR 6:9 | Theta_d 9:12
        #      | Omega_d 12:15 | OmegaR_d 15:18 | xi_I 18:21
        def field(t, rots, vec):
            r, r_d = rots
            omega, omega_r = vec[3:6], vec[6:9]
            omega_d, omega_rd = vec[12:15], vec[15:18]
            xi = vec[18:21]
            d_omega_d, d_omega_rd = rotor_accels(ref, omega_d, omega_rd,
                                                 program.torque(t))
            u, xi_dot = _loop_kernel(i_metric, i_inv, p_mat, gains, r,
                                     omega, r_d, omega_d, d_omega_d, xi)
            u_int = -(i_metric @ u) + cross3(rotor_k * (omega + omega_r), omega)
            d_omega, d_omega_r = rotor_accels(plant, omega, omega_r, u_int)
            vdot = np.empty(21)
            vdot[0:3] = omega_r
            vdot[3:6] = d_omega
            vdot[6:9] = d_omega_r
            vdot[9:12] = omega_rd
            vdot[12:15] = d_omega_d
            vdot[15:18] = d_omega_rd
            vdot[18:21] = xi_dot
            return (omega, omega_d), vdot
        return field

    # external actuation: the carrier body alone, torqued directly
    # vec: Omega 0:3 | Theta_d 3:6 | Omega_d 6:9 | OmegaR_d 9:12 | xi_I 12:15
    def field(t, rots, vec):
        r, r_d = rots
        omega = vec[0:3]
        omega_d, omega_rd = vec[6:9], vec[9:12]
        xi = vec[12:15]
        d_omega_d, d_omega_rd = rotor_accels(ref, omega_d, omega_rd,
                                             program.torque(t))
        u, xi_dot = _loop_kernel(i_metric, i_inv, p_mat, gains, r, omega,
                                 r_d, omega_d, d_omega_d, xi)
        vdot = np.empty(15)
        vdot[0:3] = i_inv @ cross3(i_metric @ omega, omega) + u
        vdot[3:6] = omega_rd
        vdot[6:9] = d_omega_d
        vdot[9:12] = d_omega_rd
        vdot[12:15] = xi_dot
        return (omega, omega_d), vdot
    return field


def run_closed_loop(cfg, actuation="internal"):
    """Simulate the tracking loop; returns (ClosedLoopTrajectory, RunMetrics).

    actuation "internal" drives the rotor plant through the torque
    conversion; "external" drives the bare carrier body directly (used by
    the equivalence checks).  The feasibility verdict of cfg.gains is
    recorded in the metrics either way.
    """
    if actuation not in ("internal", "external"):
        raise ValueError("actuation must be 'internal' or 'external'")
    cfg = resolve_reference(cfg)
    plant, ref = cfg.plant, cfg.reference
    field = _closed_loop_field(cfg, actuation)
    xi0 = np.zeros(3)

    if actuation == "internal":
        vec0 = np.concatenate([plant.Theta0, plant.Omega0, plant.OmegaR0,
                               ref.Theta0, ref.Omega0, ref.OmegaR0, xi0])
    else:
        vec0 = np.concatenate([plant.Omega0, ref.Theta0, ref.Omega0,
                               ref.OmegaR0, xi0])
    hist = integrate(field, ((plant.R0, ref.R0), vec0), cfg.integrator)

    n = len(hist.times)
    if actuation == "internal":
        theta, omega, omega_r = (hist.vectors[:, 0:3], hist.vectors[:, 3:6],
                                 hist.vectors[:, 6:9])
        theta_d, omega_d, omega_rd = (hist.vectors[:, 9:12],
                                      hist.vectors[:, 12:15],
                                      hist.vectors[:, 15:18])
        xi = hist.vectors[:, 18:21]
    else:
        theta = np.zeros((n, 3))
        omega = hist.vectors[:, 0:3]
        omega_r = np.zeros((n, 3))
        theta_d, omega_d, omega_rd = (hist.vectors[:, 3:6],
                                      hist.vectors[:, 6:9],
                                      hist.vectors[:, 9:12])
        xi = hist.vectors[:, 12:15]

    omega_d_dot, _ = _rotor_accel_series(ref.params, omega_d, omega_rd,
                                         cfg.program.torque_series(hist.times))
    traj = ClosedLoopTrajectory(
        times=hist.times, R=hist.rotations[0], Theta=theta, Omega=omega,
        OmegaR=omega_r, R_d=hist.rotations[1], Theta_d=theta_d,
        Omega_d=omega_d, OmegaR_d=omega_rd, Omega_d_dot=omega_d_dot,
        xi_I=xi, u_ext=np.empty((n, 3)), u_int=np.empty((n, 3)),
        actuation=actuation)
    metrics = _compute_metrics(cfg, traj)
    return traj, metrics


def _compute_metrics(cfg, traj):
    """Per-sample control records and diagnostics (vectorized post-pass).

    Also fills traj.u_ext / traj.u_int in place from the stored states.
    """
    plant = cfg.plant.params
    gains = cfg.gains
    p_mat = cfg.weights.P
    i_metric = plant.body_inertia
    i_inv = plant.body_inertia_inv
    r, r_d = traj.R, traj.R_d
    omega, omega_d = traj.Omega, traj.Omega_d

    e = np.einsum("nij,nkj->nik", r_d, r)               # R_d R^T
    eta = np.einsum("nij,nj->ni", r, omega_d - omega)
    pe = np.einsum("ij,njk->nik", p_mat, e)
    dpsi = np.stack([pe[:, 2, 1] - pe[:, 1, 2],
                     pe[:, 0, 2] - pe[:, 2, 0],
                     pe[:, 1, 0] - pe[:, 0, 1]], axis=1)
    psi = np.trace(p_mat) - np.einsum("ij,nji->n", p_mat, e)

    skew = 0.5 * np.stack([e[:, 2, 1] - e[:, 1, 2],
                           e[:, 0, 2] - e[:, 2, 0],
                           e[:, 1, 0] - e[:, 0, 1]], axis=1)
    geo = np.arctan2(np.linalg.norm(skew, axis=1),
                     0.5 * (np.einsum("nii->n", e) - 1.0))

    # commanded acceleration, realized torque, rotor torque
    i_eta = eta @ i_metric.T
    conn = -np.cross(i_eta, eta) @ i_inv.T
    fb = conn + (gains.kp * dpsi) @ i_inv.T + gains.kd * eta + gains.ki * traj.xi_I
    euler = np.cross(omega @ i_metric.T, omega) @ i_inv.T
    u = traj.Omega_d_dot + np.cross(omega, omega_d) - euler \
        + np.einsum("nji,nj->ni", r, fb)
    torque = u @ i_metric.T
    traj.u_ext[:] = torque
    if traj.actuation == "internal":
        gyro = (omega + traj.OmegaR) @ plant.rotor_inertia.T
        traj.u_int[:] = -torque + np.cross(gyro, omega)
    else:
        traj.u_int[:] = 0.0

    # conservation diagnostics
    if traj.actuation == "internal":
        pi = omega @ plant.locked.T + traj.OmegaR @ plant.rotor_inertia.T
    else:
        pi = omega @ i_metric.T
    spatial = np.einsum("nij,nj->ni", r, pi)
    drift_series = np.abs(spatial - spatial[0]).max(axis=1)
    ortho = 0.0
    for rot in (r, r_d):
        gram = np.einsum("nji,njk->nik", rot, rot) - np.eye(3)
        ortho = max(ortho, float(np.sqrt((gram ** 2).sum(axis=(1, 2))).max()))

    # energy function and decay bound
    xi = traj.xi_I
    quad_eta = np.einsum("ni,ij,nj->n", eta, i_metric, eta)
    quad_xi = np.einsum("ni,ij,nj->n", xi, i_metric, xi)
    quad_grad = np.einsum("ni,ij,nj->n", dpsi, i_inv, dpsi)
    ecl = (0.5 * quad_eta + gains.kp * psi + 0.5 * gains.tau * quad_xi
           + gains.alpha * (dpsi * eta).sum(axis=1)
           + gains.beta * np.einsum("ni,ij,nj->n", xi, i_metric, eta)
           + gains.delta * (dpsi * xi).sum(axis=1))
    q = q_matrix(gains)
    v1, v2, v3 = np.sqrt(quad_eta), np.sqrt(quad_grad), np.sqrt(quad_xi)
    bound = -(q[0, 0] * v1 ** 2 + q[1, 1] * v2 ** 2 + q[2, 2] * v3 ** 2
              + 2.0 * q[0, 2] * v1 * v3)

    return RunMetrics(
        psi_e=psi,
        geo_err=geo,
        effort_l2=np.linalg.norm(
            traj.u_int if traj.actuation == "internal" else traj.u_ext, axis=1),
        effort_uext_l2=np.linalg.norm(traj.u_ext, axis=1),
        ecl=ecl,
        ecl_bound=bound,
        momentum_drift_series=drift_series,
        momentum_drift=float(drift_series.max()),
        ortho_drift=ortho,
        feasibility=gain_feasible(gains),
    )


# ---------------------------------------------------------------------------
# certification diagnostics
# ---------------------------------------------------------------------------

def certified_region_mask(cfg, traj):
    """Samples where the gain-certification argument applies.

    The energy decay bound `ecl_rate_bound` is derived under two
    state-dependent conditions: the navigation-function Hessian at E is
    positive definite with metric operator norm at most mu_hess, and the
    signed Hessian inequality

        Hess_E(eta, alpha*eta + delta*xi_I) <= mu_hess <eta, alpha*eta + delta*xi_I>

    holds at the sample.  Returns the boolean array marking samples where
    both conditions are met; outside them the bound carries no guarantee.
    """
    from .control import _hessian_series

    gains = cfg.gains
    p_mat = cfg.weights.P
    i_metric = cfg.plant.params.body_inertia
    r, r_d = traj.R, traj.R_d
    e = np.einsum("nij,nkj->nik", r_d, r)
    eta = np.einsum("nij,nj->ni", r, traj.Omega_d - traj.Omega)
    w = gains.alpha * eta + gains.delta * traj.xi_I

    h = _hessian_series(p_mat, i_metric, e)
    # metric operator spectrum via the symmetrized form I^{-1/2} H I^{-1/2}
    evals, evecs = np.linalg.eigh(i_metric)
    i_mhalf = evecs @ np.diag(evals ** -0.5) @ evecs.T
    spectrum = np.linalg.eigvalsh(
        np.einsum("ij,njk,kl->nil", i_mhalf, h, i_mhalf))
    shape_ok = (spectrum[:, 0] > 0.0) & (spectrum[:, -1] <= gains.mu_hess)

    lhs = (np.einsum("nij,nj->ni", h, eta) * w).sum(axis=1)
    rhs = gains.mu_hess * np.einsum("ni,ij,nj->n", eta, i_metric, w)
    return shape_ok & (lhs <= rhs + 1e-12)


# ---------------------------------------------------------------------------
# control-effort comparison
# ---------------------------------------------------------------------------

@dataclass
class EffortComparison:
    """Paired closed-loop runs of the proposed law and a baseline."""

    times: np.ndarray
    proposed: RunMetrics
    baseline: RunMetrics
    proposed_integral: float     # integral of ||u_int|| dt
    baseline_integral: float


def _pd_only(cfg):
    """Default baseline: identical P/k_p/k_d, integral channel removed."""
    return dataclasses.replace(cfg, gains=pd_variant(cfg.gains))


def compare_efforts(cfg, alternate_law=_pd_only):
    """Run the proposed law and an alternate one on the same reference.

    ``alternate_law`` maps the scenario config to the baseline's config;
    it must keep P, k_p, k_d (and the reference) unchanged for the effort
    comparison to be meaningful.  Both runs see identical initial states.
    """
    cfg = resolve_reference(cfg)
    _, metrics_a = run_closed_loop(cfg)
    _, metrics_b = run_closed_loop(alternate_law(cfg))
    dt = cfg.integrator.step
    return EffortComparison(
        times=cfg.integrator.step * np.arange(cfg.integrator.n_steps + 1),
        proposed=metrics_a,
        baseline=metrics_b,
        proposed_integral=float(np.trapezoid(metrics_a.effort_l2, dx=dt)),
        baseline_integral=float(np.trapezoid(metrics_b.effort_l2, dx=dt)),
    )
