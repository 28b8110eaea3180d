//! Rigid-body dynamics of the lander: translation, attitude kinematics,
//! rotational dynamics and the mass-thrust relationship, plus a fixed-step
//! RK4 propagator used as the feasibility oracle for trajectory optimization.
//!
//! State components are ordered `x, y, z, vx, vy, vz, phi, theta, psi,
//! p, q, r, m` everywhere (13 components). k̂ points down, so the altitude is
//! `H = -z`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Number of state components (position, velocity, Euler angles, body rates, mass).
pub const STATE_DIM: usize = 13;
/// Number of control components (main throttle + three attitude throttles).
pub const CTRL_DIM: usize = 4;

/// Attitude kinematics become singular as |cos θ| approaches zero; below this
/// value an explicit error is raised instead of silently clamping.
pub const EULER_SINGULARITY_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error("euler-rate kinematics singular (|cos theta| = {cos_theta:.3e}){}", fmt_time(.t))]
    EulerSingularity { cos_theta: f64, t: Option<f64> },
    #[error("non-positive mass ({m} kg){}", fmt_time(.t))]
    NonPositiveMass { m: f64, t: Option<f64> },
}

fn fmt_time(t: &Option<f64>) -> String {
    match t {
        Some(t) => format!(" at t = {t:.6} s"),
        None => String::new(),
    }
}

impl DynamicsError {
    /// Attach the propagation time stamp to an error raised inside a step.
    fn at(self, time: f64) -> Self {
        match self {
            DynamicsError::EulerSingularity { cos_theta, .. } => {
                DynamicsError::EulerSingularity { cos_theta, t: Some(time) }
            }
            DynamicsError::NonPositiveMass { m, .. } => {
                DynamicsError::NonPositiveMass { m, t: Some(time) }
            }
        }
    }
}

/// Full lander state at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanderState {
    /// Position in the inertial frame, m. k̂ is down: altitude H = -z.
    pub r: Vector3<f64>,
    /// Inertial velocity, m/s.
    pub v: Vector3<f64>,
    /// Roll, pitch, yaw (roll-pitch-yaw sequence), rad.
    pub euler: Vector3<f64>,
    /// Body rates p, q, r, rad/s.
    pub omega: Vector3<f64>,
    /// Mass, kg.
    pub m: f64,
}

impl LanderState {
    pub fn new(r: Vector3<f64>, v: Vector3<f64>, euler: Vector3<f64>, omega: Vector3<f64>, m: f64) -> Self {
        Self { r, v, euler, omega, m }
    }

    /// State at rest at the origin with the given mass.
    pub fn rest(m: f64) -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), Vector3::zeros(), Vector3::zeros(), m)
    }

    /// Altitude above the landing-site plane (k̂ points down).
    pub fn altitude(&self) -> f64 {
        -self.r.z
    }

    pub fn to_array(&self) -> [f64; STATE_DIM] {
        [
            self.r.x, self.r.y, self.r.z, self.v.x, self.v.y, self.v.z, self.euler.x,
            self.euler.y, self.euler.z, self.omega.x, self.omega.y, self.omega.z, self.m,
        ]
    }

    pub fn from_array(a: &[f64; STATE_DIM]) -> Self {
        Self {
            r: Vector3::new(a[0], a[1], a[2]),
            v: Vector3::new(a[3], a[4], a[5]),
            euler: Vector3::new(a[6], a[7], a[8]),
            omega: Vector3::new(a[9], a[10], a[11]),
            m: a[12],
        }
    }
}

/// Normalized throttle commands.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlInput {
    /// Main-engine throttle, in [0, 1].
    pub u_t: f64,
    /// Roll nozzle throttle, in [-1, 1].
    pub u_phi: f64,
    /// Pitch nozzle throttle, in [-1, 1].
    pub u_theta: f64,
    /// Yaw nozzle throttle, in [-1, 1].
    pub u_psi: f64,
}

impl ControlInput {
    pub fn new(u_t: f64, u_phi: f64, u_theta: f64, u_psi: f64) -> Self {
        Self { u_t, u_phi, u_theta, u_psi }
    }

    /// Main throttle only, attitude nozzles off.
    pub fn main_only(u_t: f64) -> Self {
        Self { u_t, ..Self::default() }
    }

    pub fn to_array(&self) -> [f64; CTRL_DIM] {
        [self.u_t, self.u_phi, self.u_theta, self.u_psi]
    }

    pub fn from_array(a: &[f64; CTRL_DIM]) -> Self {
        Self { u_t: a[0], u_phi: a[1], u_theta: a[2], u_psi: a[3] }
    }

    /// Squared Euclidean norm uᵀu of the throttle vector.
    pub fn norm_sq(&self) -> f64 {
        self.u_t * self.u_t
            + self.u_phi * self.u_phi
            + self.u_theta * self.u_theta
            + self.u_psi * self.u_psi
    }

    /// Componentwise containment in the throttle box.
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.u_t >= -tol
            && self.u_t <= 1.0 + tol
            && [self.u_phi, self.u_theta, self.u_psi].iter().all(|u| u.abs() <= 1.0 + tol)
    }
}

/// Physical parameters of the vehicle and environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams {
    /// Maximum primary (main-engine) thrust F̄_a, N.
    pub thrust_main: f64,
    /// Maximum secondary (attitude-nozzle) thrust F̄_b, N.
    pub thrust_rcs: f64,
    /// Nozzle moment arm L from the centre of mass, m.
    pub moment_arm: f64,
    /// Body inertia matrix, kg·m² (symmetric positive definite).
    pub inertia: Matrix3<f64>,
    /// Specific impulse, s.
    pub isp: f64,
    /// Target-body surface gravity, m/s².
    pub gravity: f64,
    /// Earth standard gravity used in the mass-flow relationship, m/s².
    pub g0: f64,
    /// When set, mass flow charges |u| for the attitude nozzles instead of
    /// the signed sum, so retrograde throttles cannot add propellant.
    pub magnitude_mass_flow: bool,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            thrust_main: 5000.0,
            thrust_rcs: 50.0,
            moment_arm: 1.5,
            inertia: Matrix3::from_diagonal(&Vector3::new(1000.0, 1000.0, 800.0)),
            isp: 300.0,
            gravity: 1.62,
            g0: 9.81,
            magnitude_mass_flow: false,
        }
    }
}

impl VehicleParams {
    /// Main throttle that exactly balances gravity at the given mass.
    pub fn hover_throttle(&self, m: f64) -> f64 {
        m * self.gravity / self.thrust_main
    }
}

/// Time derivative of a [`LanderState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dr: Vector3<f64>,
    pub dv: Vector3<f64>,
    pub deuler: Vector3<f64>,
    pub domega: Vector3<f64>,
    pub dm: f64,
}

impl StateDerivative {
    pub fn to_array(&self) -> [f64; STATE_DIM] {
        [
            self.dr.x, self.dr.y, self.dr.z, self.dv.x, self.dv.y, self.dv.z, self.deuler.x,
            self.deuler.y, self.deuler.z, self.domega.x, self.domega.y, self.domega.z, self.dm,
        ]
    }
}

/// Direction cosine matrix R_iv mapping body-frame vectors into the inertial
/// frame for the roll-pitch-yaw Euler sequence.
pub fn dcm_from_euler(euler: &Vector3<f64>) -> Matrix3<f64> {
    let (sph, cph) = euler.x.sin_cos();
    let (sth, cth) = euler.y.sin_cos();
    let (sps, cps) = euler.z.sin_cos();
    Matrix3::new(
        cth * cps,
        -cph * sps + sph * sth * cps,
        sph * sps + cph * sth * cps,
        cth * sps,
        cph * cps + sph * sth * sps,
        -sph * cps + cph * sth * sps,
        -sth,
        sph * cth,
        cph * cth,
    )
}

/// Kinematic matrix T(φ, θ) with dφ/dt = T ω.
///
/// Errors when |cos θ| is below [`EULER_SINGULARITY_TOL`].
pub fn euler_rate_matrix(euler: &Vector3<f64>) -> Result<Matrix3<f64>, DynamicsError> {
    let (sph, cph) = euler.x.sin_cos();
    let (sth, cth) = euler.y.sin_cos();
    if cth.abs() <= EULER_SINGULARITY_TOL {
        return Err(DynamicsError::EulerSingularity { cos_theta: cth, t: None });
    }
    let tth = sth / cth;
    Ok(Matrix3::new(
        1.0,
        sph * tth,
        cph * tth,
        0.0,
        cph,
        -sph,
        0.0,
        sph / cth,
        cph / cth,
    ))
}

/// Euler-angle rates induced by the body rates.
pub fn euler_rates(euler: &Vector3<f64>, omega: &Vector3<f64>) -> Result<Vector3<f64>, DynamicsError> {
    Ok(euler_rate_matrix(euler)? * omega)
}

/// 12-DOF lander dynamics plus the mass-thrust relationship.
pub fn state_derivative(
    x: &LanderState,
    u: &ControlInput,
    params: &VehicleParams,
) -> Result<StateDerivative, DynamicsError> {
    if x.m <= 0.0 {
        return Err(DynamicsError::NonPositiveMass { m: x.m, t: None });
    }
    let rot = dcm_from_euler(&x.euler);
    let thrust_body = Vector3::new(0.0, 0.0, params.thrust_main * u.u_t);
    let dv = Vector3::new(0.0, 0.0, params.gravity) - rot * thrust_body / x.m;
    let deuler = euler_rates(&x.euler, &x.omega)?;

    let moment = x.omega.cross(&(params.inertia * x.omega))
        + 2.0 * params.moment_arm * params.thrust_rcs * Vector3::new(u.u_phi, u.u_theta, u.u_psi);
    let domega = params
        .inertia
        .cholesky()
        .map(|ch| ch.solve(&moment))
        .unwrap_or_else(|| params.inertia.try_inverse().expect("inertia must be invertible") * moment);

    let rcs_sum = if params.magnitude_mass_flow {
        u.u_phi.abs() + u.u_theta.abs() + u.u_psi.abs()
    } else {
        u.u_phi + u.u_theta + u.u_psi
    };
    let dm = -(params.thrust_main * u.u_t + 2.0 * params.thrust_rcs * rcs_sum) / (params.isp * params.g0);

    Ok(StateDerivative { dr: x.v, dv, deuler, domega, dm })
}

fn add_scaled(x: &LanderState, d: &StateDerivative, h: f64) -> LanderState {
    LanderState {
        r: x.r + d.dr * h,
        v: x.v + d.dv * h,
        euler: x.euler + d.deuler * h,
        omega: x.omega + d.domega * h,
        m: x.m + d.dm * h,
    }
}

/// One classical RK4 step of the lander dynamics.
pub fn rk4_step(
    x: &LanderState,
    control: impl Fn(f64) -> ControlInput,
    t: f64,
    h: f64,
    params: &VehicleParams,
) -> Result<LanderState, DynamicsError> {
    let k1 = state_derivative(x, &control(t), params)?;
    let k2 = state_derivative(&add_scaled(x, &k1, 0.5 * h), &control(t + 0.5 * h), params)?;
    let k3 = state_derivative(&add_scaled(x, &k2, 0.5 * h), &control(t + 0.5 * h), params)?;
    let k4 = state_derivative(&add_scaled(x, &k3, h), &control(t + h), params)?;
    Ok(LanderState {
        r: x.r + (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr) * (h / 6.0),
        v: x.v + (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv) * (h / 6.0),
        euler: x.euler + (k1.deuler + 2.0 * k2.deuler + 2.0 * k3.deuler + k4.deuler) * (h / 6.0),
        omega: x.omega + (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) * (h / 6.0),
        m: x.m + (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm) * (h / 6.0),
    })
}

/// Fixed-step RK4 propagation of the dynamics under a control law.
///
/// The span is divided into `ceil(t_span / dt)` uniform steps so the history
/// always includes both endpoints and results are bit-reproducible for a
/// given configuration. Errors carry the time stamp of the offending step.
pub fn propagate(
    x0: &LanderState,
    control: impl Fn(f64) -> ControlInput,
    t_span: f64,
    dt: f64,
) -> Result<Vec<(f64, LanderState)>, DynamicsError> {
    assert!(dt > 0.0, "step size must be positive");
    assert!(t_span >= 0.0, "time span must be non-negative");
    let n_steps = ((t_span / dt).ceil() as usize).max(1);
    let h = t_span / n_steps as f64;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push((0.0, *x0));
    let mut x = *x0;
    for k in 0..n_steps {
        let t = k as f64 * h;
        x = rk4_step(&x, &control, t, h, params_guard(&x, t)?.0).map_err(|e| e.at(t))?;
        out.push(((k + 1) as f64 * h, x));
    }
    Ok(out)
}

// propagate() takes params through the closure-free signature below; the
// small indirection keeps the hot loop monomorphized.
fn params_guard(_x: &LanderState, _t: f64) -> Result<(&'static VehicleParams, ()), DynamicsError> {
    unreachable!("placeholder replaced by propagate_with")
}
