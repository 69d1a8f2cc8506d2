//! Pilot-wave trajectories: the guidance velocity field, an adaptive
//! fourth-order integrator over it, which-slit classification by backward
//! tracing, and the separatrix search on the screen.
//!
//! The guidance field diverges at wavefunction nodes; every operation here
//! fails loudly with a node error instead of regularizing.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::wavepacket::{GridState, PacketState, SlitState};

/// Relative node threshold: |ψ| below this times the state's peak magnitude
/// counts as a node.
pub const NODE_THRESHOLD: f64 = 1e-12;

/// Anything the guidance equation can consume: amplitude, gradient, a peak
/// scale for node detection, and the particle parameters.
pub trait PilotState: Sync {
    fn amplitude(&self, x: f64, y: f64, t: f64) -> Result<Complex64>;
    fn amplitude_gradient(&self, x: f64, y: f64, t: f64) -> Result<(Complex64, [Complex64; 2])>;
    /// Upper bound for max|ψ(·, t)|, the node-threshold reference.
    fn peak_magnitude(&self, t: f64) -> f64;
    fn mass(&self) -> f64;
    fn hbar(&self) -> f64;
}

impl PilotState for SlitState {
    fn amplitude(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        Ok(self.evaluate(x, y, t))
    }

    fn amplitude_gradient(&self, x: f64, y: f64, t: f64) -> Result<(Complex64, [Complex64; 2])> {
        Ok(self.evaluate_gradient(x, y, t))
    }

    fn peak_magnitude(&self, t: f64) -> f64 {
        self.peak_magnitude(t)
    }

    fn mass(&self) -> f64 {
        self.mass
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl PilotState for PacketState {
    fn amplitude(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        Ok(self.packet.evolve(t, self.mass, self.hbar).value(x, y))
    }

    fn amplitude_gradient(&self, x: f64, y: f64, t: f64) -> Result<(Complex64, [Complex64; 2])> {
        Ok(self
            .packet
            .evolve(t, self.mass, self.hbar)
            .value_gradient(x, y))
    }

    fn peak_magnitude(&self, t: f64) -> f64 {
        self.packet.evolve(t, self.mass, self.hbar).amplitude.norm()
    }

    fn mass(&self) -> f64 {
        self.mass
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Which slit a trajectory crossed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichWay {
    /// Right slit (x > 0 on the slit plane).
    A,
    /// Left slit (x < 0 on the slit plane).
    B,
    Undecided,
}

impl std::fmt::Display for WhichWay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WhichWay::A => write!(f, "A"),
            WhichWay::B => write!(f, "B"),
            WhichWay::Undecided => write!(f, "undecided"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// A time-ordered configuration-space path with its slit label and the
/// gauge line integral assigned to it.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub which_way: WhichWay,
    /// ∫ A·dx along the path (esu); assigned from the flux configuration by
    /// label, since the factor depends only on the end points in the
    /// flux-free region.
    pub line_integral: f64,
}

impl Trajectory {
    pub fn start(&self) -> TrajectoryPoint {
        self.points[0]
    }

    pub fn end(&self) -> TrajectoryPoint {
        *self.points.last().expect("trajectory has at least one point")
    }

    /// Assigns the gauge line integral from the flux configuration by the
    /// trajectory's slit label, evaluated at its latest point. Requires a
    /// decided label.
    pub fn assign_line_integral(&mut self, flux: &crate::abdensity::FluxConfig) -> Result<()> {
        let p = self
            .points
            .iter()
            .max_by(|a, b| a.t.total_cmp(&b.t))
            .expect("trajectory has at least one point");
        self.line_integral = match self.which_way {
            WhichWay::A => flux.line_integral_a(p.x, p.y, p.t),
            WhichWay::B => flux.line_integral_b(p.x, p.y, p.t),
            WhichWay::Undecided => {
                return Err(Error::Undecided {
                    x_at_slit_plane: f64::NAN,
                })
            }
        };
        Ok(())
    }
}

/// Step-size control for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationControl {
    /// Target local error per unit time (step-halving estimate).
    pub tol: f64,
    pub dt_init: f64,
    pub dt_min: f64,
    pub max_steps: usize,
}

impl Default for IntegrationControl {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            dt_init: 5e-3,
            dt_min: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

/// Guidance velocity v = (ħ/m) Im(∇ψ/ψ).
pub fn velocity(state: &dyn PilotState, x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
    let (psi, grad) = state.amplitude_gradient(x, y, t)?;
    let threshold = NODE_THRESHOLD * state.peak_magnitude(t);
    let magnitude = psi.norm();
    if magnitude < threshold {
        return Err(Error::Node {
            x,
            y,
            t,
            magnitude,
            threshold,
            partial: None,
        });
    }
    let factor = state.hbar() / state.mass();
    Ok([
        factor * (grad[0] / psi).im,
        factor * (grad[1] / psi).im,
    ])
}

fn rk4_step(
    state: &dyn PilotState,
    x: f64,
    y: f64,
    t: f64,
    dt: f64,
) -> Result<[f64; 2]> {
    let k1 = velocity(state, x, y, t)?;
    let k2 = velocity(state, x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], t + 0.5 * dt)?;
    let k3 = velocity(state, x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], t + 0.5 * dt)?;
    let k4 = velocity(state, x + dt * k3[0], y + dt * k3[1], t + dt)?;
    Ok([
        x + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Adaptive RK4 core with step-doubling error control; `on_step` receives
/// every accepted point including the endpoint.
fn integrate_core(
    state: &dyn PilotState,
    x0: f64,
    y0: f64,
    t0: f64,
    t1: f64,
    ctrl: &IntegrationControl,
    mut on_step: impl FnMut(f64, f64, f64),
) -> Result<[f64; 2]> {
    let (mut x, mut y, mut t) = (x0, y0, t0);
    on_step(t, x, y);
    if t1 == t0 {
        return Ok([x, y]);
    }
    let direction = (t1 - t0).signum();
    let mut dt = ctrl.dt_init.abs().min((t1 - t0).abs()) * direction;
    let mut steps = 0usize;
    while (t1 - t) * direction > 0.0 {
        if steps >= ctrl.max_steps {
            return Err(Error::Accuracy(format!(
                "trajectory integration exceeded {} steps",
                ctrl.max_steps
            )));
        }
        steps += 1;
        if (t + dt - t1) * direction > 0.0 {
            dt = t1 - t;
        }
        let full = rk4_step(state, x, y, t, dt)?;
        let halfway = rk4_step(state, x, y, t, dt / 2.0)?;
        let refined = rk4_step(state, halfway[0], halfway[1], t + dt / 2.0, dt / 2.0)?;
        let err = ((full[0] - refined[0]).powi(2) + (full[1] - refined[1]).powi(2)).sqrt();
        let budget = ctrl.tol * dt.abs();
        if err <= budget || dt.abs() <= ctrl.dt_min {
            t += dt;
            x = refined[0];
            y = refined[1];
            on_step(t, x, y);
        }
        // PI-free step update with safety factor, clamped
        let scale = if err > 0.0 {
            0.9 * (budget / err).powf(0.25)
        } else {
            5.0
        };
        dt *= scale.clamp(0.2, 5.0);
        if dt.abs() < ctrl.dt_min {
            dt = ctrl.dt_min * direction;
        }
    }
    Ok([x, y])
}

/// Integrates the guidance equation from (x0, y0, t0) to t1 (backward when
/// t1 < t0), recording every accepted step. A node encountered mid-flight
/// returns the partial trajectory inside the error.
pub fn integrate(
    state: &dyn PilotState,
    x0: f64,
    y0: f64,
    t0: f64,
    t1: f64,
    ctrl: &IntegrationControl,
) -> Result<Trajectory> {
    let mut points = Vec::new();
    let outcome = integrate_core(state, x0, y0, t0, t1, ctrl, |t, x, y| {
        points.push(TrajectoryPoint { t, x, y })
    });
    match outcome {
        Ok(_) => {
            let which_way = slit_label_from_path(&points);
            Ok(Trajectory {
                points,
                which_way,
                line_integral: 0.0,
            })
        }
        Err(Error::Node {
            x,
            y,
            t,
            magnitude,
            threshold,
            ..
        }) => Err(Error::Node {
            x,
            y,
            t,
            magnitude,
            threshold,
            partial: Some(Box::new(Trajectory {
                points,
                which_way: WhichWay::Undecided,
                line_integral: 0.0,
            })),
        }),
        Err(e) => Err(e),
    }
}

/// Fixed-step RK4 over a shared uniform time grid; useful for ensembles
/// that must be compared at equal times.
pub fn integrate_fixed(
    state: &dyn PilotState,
    x0: f64,
    y0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Trajectory> {
    let mut points = vec![TrajectoryPoint {
        t: t0,
        x: x0,
        y: y0,
    }];
    let dt = (t1 - t0) / steps as f64;
    let (mut x, mut y) = (x0, y0);
    for i in 0..steps {
        let t = t0 + i as f64 * dt;
        let next = rk4_step(state, x, y, t, dt)?;
        x = next[0];
        y = next[1];
        points.push(TrajectoryPoint {
            t: t0 + (i + 1) as f64 * dt,
            x,
            y,
        });
    }
    let which_way = slit_label_from_path(&points);
    Ok(Trajectory {
        points,
        which_way,
        line_integral: 0.0,
    })
}

/// Decidable only when the path actually touches the slit plane t = 0.
fn slit_label_from_path(points: &[TrajectoryPoint]) -> WhichWay {
    for p in [points.first(), points.last()].into_iter().flatten() {
        if p.t == 0.0 {
            if p.x > 0.0 {
                return WhichWay::A;
            }
            if p.x < 0.0 {
                return WhichWay::B;
            }
        }
    }
    WhichWay::Undecided
}

/// Classifies the trajectory through (x, y, t) by backward-integrating to
/// the slit plane: A for x(0) > 0, B for x(0) < 0.
pub fn which_way(
    state: &dyn PilotState,
    x: f64,
    y: f64,
    t: f64,
    ctrl: &IntegrationControl,
) -> Result<WhichWay> {
    let end = integrate_core(state, x, y, t, 0.0, ctrl, |_, _, _| {})?;
    classify_slit_plane_x(end[0])
}

fn classify_slit_plane_x(x0: f64) -> Result<WhichWay> {
    // an exactly vanishing slit-plane coordinate cannot be labelled
    if x0.abs() < 1e-300 {
        return Err(Error::Undecided {
            x_at_slit_plane: x0,
        });
    }
    Ok(if x0 > 0.0 { WhichWay::A } else { WhichWay::B })
}

/// Bisection for the screen point separating slit-A arrivals from slit-B
/// arrivals along the line (t, y), within |x_hi − x_lo| < tol.
pub fn separatrix(
    state: &dyn PilotState,
    t: f64,
    y: f64,
    x_lo: f64,
    x_hi: f64,
    tol: f64,
    ctrl: &IntegrationControl,
) -> Result<f64> {
    if !(x_hi > x_lo) || !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "separatrix bracket must be increasing with positive tolerance, got [{x_lo}, {x_hi}], tol {tol}"
        )));
    }
    let mut lo = x_lo;
    let mut hi = x_hi;
    let label_lo = which_way(state, lo, y, t, ctrl)?;
    let label_hi = which_way(state, hi, y, t, ctrl)?;
    if label_lo == label_hi {
        return Err(Error::NoBracket(label_lo));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match which_way(state, mid, y, t, ctrl) {
            Ok(label) if label == label_lo => lo = mid,
            Ok(_) => hi = mid,
            // landing on the slit-plane axis mid-bisection IS the boundary
            Err(Error::Undecided { .. }) => return Ok(mid),
            Err(e) => return Err(e),
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Draws positions from |ψ(·, 0)|² by mixture proposal over the branch
/// packets plus rejection on the exact interference density.
pub fn sample_initial_positions(
    state: &SlitState,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<[f64; 2]> {
    struct Component {
        weight: f64,
        center: [f64; 2],
        sigma: f64,
        peak_sq: f64, // |amplitude * branch factor|^2
    }
    let mut components = Vec::new();
    for (packets, factor) in [
        (&state.branch_a, state.factor_a),
        (&state.branch_b, state.factor_b),
    ] {
        for p in packets.iter() {
            let peak_sq = (factor * p.amplitude).norm_sqr();
            let sigma = (1.0 / (4.0 * p.width.re)).sqrt();
            components.push(Component {
                // 2D Gaussian mass of |psi_k|^2
                weight: peak_sq * std::f64::consts::PI / (2.0 * p.width.re),
                center: p.center,
                sigma,
                peak_sq,
            });
        }
    }
    let total_weight: f64 = components.iter().map(|c| c.weight).sum();
    let k = components.len() as f64;

    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        // pick a component by weight
        let mut pick = rng.gen::<f64>() * total_weight;
        let mut chosen = &components[0];
        for c in &components {
            if pick < c.weight {
                chosen = c;
                break;
            }
            pick -= c.weight;
        }
        let normal = Normal::new(0.0, chosen.sigma).expect("positive sigma");
        let x = chosen.center[0] + normal.sample(rng);
        let y = chosen.center[1] + normal.sample(rng);
        // accept with |sum|^2 / (K * sum of |components|^2)
        let mut env = 0.0;
        for c in &components {
            let dx = x - c.center[0];
            let dy = y - c.center[1];
            env += c.peak_sq * (-(dx * dx + dy * dy) / (2.0 * c.sigma * c.sigma)).exp();
        }
        let target = state.evaluate(x, y, 0.0).norm_sqr() * 2.0; // undo the 1/sqrt(2)
        if env > 0.0 && rng.gen::<f64>() * k * env < target {
            out.push([x, y]);
        }
    }
    out
}

/// One forward-ensemble member: launch point, arrival point, slit label.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleArrival {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub which_way: WhichWay,
}

/// Launches `count` trajectories from points sampled out of
/// |launch_state(·, 0)|² and runs them forward to t_end under `guidance`.
/// The slit label is the sign of the launch x.
///
/// The two states usually coincide; they differ when a dressed state
/// guides an ensemble whose equilibrium weights are the undressed ones
/// (the scale factor cancels against 𝟙² on the slit plane, where the
/// branches are disjoint).
pub fn forward_ensemble(
    launch_state: &SlitState,
    guidance: &SlitState,
    count: usize,
    seed: u64,
    t_end: f64,
    ctrl: &IntegrationControl,
) -> Result<Vec<EnsembleArrival>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let starts = sample_initial_positions(launch_state, count, &mut rng);
    starts
        .par_iter()
        .map(|&[x0, y0]| {
            let end = integrate_core(guidance, x0, y0, 0.0, t_end, ctrl, |_, _, _| {})?;
            Ok(EnsembleArrival {
                start: [x0, y0],
                end,
                which_way: classify_slit_plane_x(x0)?,
            })
        })
        .collect()
}

impl PilotState for GridState {
    fn amplitude(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        self.check_time(t)?;
        self.field.evaluate(x, y)
    }

    fn amplitude_gradient(&self, x: f64, y: f64, t: f64) -> Result<(Complex64, [Complex64; 2])> {
        self.check_time(t)?;
        Ok((
            self.field.evaluate(x, y)?,
            [self.grad_x.evaluate(x, y)?, self.grad_y.evaluate(x, y)?],
        ))
    }

    fn peak_magnitude(&self, _t: f64) -> f64 {
        self.field
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    fn mass(&self) -> f64 {
        self.mass
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }
}
