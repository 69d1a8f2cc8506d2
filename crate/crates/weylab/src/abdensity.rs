//! Gauge- and scale-dressed recombination of the two slit branches, and the
//! trajectory-dependent equilibrium density it predicts.
//!
//! All loop dependence reduces to the single flux Φ_L: the phase angle
//! θ = (q/ħc) Φ_L and the scale exponent σ = (e_I/ħc) Φ_L. Gauge functions
//! live in [`FluxConfig`] purely so invariance can be exercised; the density
//! formulas never consult them.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bohmian::{self, IntegrationControl, WhichWay};
use crate::constants::{Particle, PhysicalConstants};
use crate::error::{Error, Result};
use crate::wavepacket::SlitState;

/// The vector potential outside the solenoid, abstracted to what the theory
/// consumes: the loop flux Φ_L and per-slit line-integral functions
/// I_A(x, y, t), I_B(x, y, t) with I_B − I_A = Φ_L everywhere (enforced by
/// construction).
#[derive(Clone)]
pub struct FluxConfig {
    loop_flux: f64,
    gauge_a: Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for FluxConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FluxConfig")
            .field("loop_flux", &self.loop_flux)
            .field("gauge_a", &"<fn>")
            .finish()
    }
}

impl FluxConfig {
    /// Default gauge I_A ≡ 0.
    pub fn new(loop_flux: f64) -> Self {
        Self {
            loop_flux,
            gauge_a: Arc::new(|_, _, _| 0.0),
        }
    }

    /// Same loop flux, arbitrary gauge function for the slit-A line
    /// integral.
    pub fn with_gauge(
        loop_flux: f64,
        gauge_a: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            loop_flux,
            gauge_a: Arc::new(gauge_a),
        }
    }

    pub fn loop_flux(&self) -> f64 {
        self.loop_flux
    }

    /// ∫ A·dx along a path through slit A ending at (x, y, t).
    pub fn line_integral_a(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.gauge_a)(x, y, t)
    }

    /// ∫ A·dx through slit B; differs from the A path by the loop flux.
    pub fn line_integral_b(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.gauge_a)(x, y, t) + self.loop_flux
    }
}

/// θ and σ, the only two numbers the loop contributes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dressing {
    /// Phase angle θ = (q/ħc) Φ_L.
    pub theta: f64,
    /// Scale exponent σ = (e_I/ħc) Φ_L.
    pub sigma: f64,
}

impl Dressing {
    pub fn new(particle: &Particle, flux: &FluxConfig, consts: &PhysicalConstants) -> Self {
        let hbar_c = consts.hbar_c();
        Self {
            theta: particle.charge * flux.loop_flux() / hbar_c,
            sigma: particle.imaginary_coupling(consts) * flux.loop_flux() / hbar_c,
        }
    }

    /// e^{iθ} e^{−σ}, the factor the B branch acquires in the gauge where
    /// the A-path line integral vanishes.
    pub fn loop_factor(&self) -> Complex64 {
        Complex64::new(-self.sigma, self.theta).exp()
    }
}

/// Folds the loop factor into branch B, producing the analytic dressed
/// state in the canonical gauge (I_A ≡ 0). This is the state that guides
/// the trajectories.
pub fn dress(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
) -> SlitState {
    let d = Dressing::new(particle, flux, consts);
    state
        .clone()
        .with_branch_factors(Complex64::new(1.0, 0.0), d.loop_factor())
}

/// ψ'_AB(x, y, t) from the per-branch factors with the gauge functions
/// evaluated pointwise: (ψ_A e^{(iq−e_I)I_A/ħc} + ψ_B e^{(iq−e_I)I_B/ħc})/√2.
pub fn dressed_amplitude(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
) -> Complex64 {
    let a = state.branch_a_amplitude(x, y, t) * path_factor(particle, consts, flux.line_integral_a(x, y, t));
    let b = state.branch_b_amplitude(x, y, t) * path_factor(particle, consts, flux.line_integral_b(x, y, t));
    (a + b) / std::f64::consts::SQRT_2
}

/// Same amplitude, factored over the A path: the loop factor moves onto
/// ψ_B and the common A-path factor multiplies the whole bracket.
pub fn dressed_amplitude_factored_a(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
) -> Complex64 {
    let d = Dressing::new(particle, flux, consts);
    let bracket = (state.branch_a_amplitude(x, y, t)
        + state.branch_b_amplitude(x, y, t) * d.loop_factor())
        / std::f64::consts::SQRT_2;
    bracket * path_factor(particle, consts, flux.line_integral_a(x, y, t))
}

/// Same amplitude, factored over the B path: the inverse loop factor moves
/// onto ψ_A.
pub fn dressed_amplitude_factored_b(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
) -> Complex64 {
    let d = Dressing::new(particle, flux, consts);
    let inverse = Complex64::new(d.sigma, -d.theta).exp();
    let bracket = (state.branch_a_amplitude(x, y, t) * inverse
        + state.branch_b_amplitude(x, y, t))
        / std::f64::consts::SQRT_2;
    bracket * path_factor(particle, consts, flux.line_integral_b(x, y, t))
}

fn path_factor(particle: &Particle, consts: &PhysicalConstants, line_integral: f64) -> Complex64 {
    let hbar_c = consts.hbar_c();
    Complex64::new(
        -particle.imaginary_coupling(consts) * line_integral / hbar_c,
        particle.charge * line_integral / hbar_c,
    )
    .exp()
}

/// The branch-resolved equilibrium density formula, given the slit label:
///
/// * crossed A: |ψ_A + ψ_B e^{iθ} e^{−σ}|² / 2
/// * crossed B: |ψ_A e^{−iθ} e^{+σ} + ψ_B|² / 2
///
/// ψ_A, ψ_B are the undressed branch amplitudes.
pub fn branch_density(
    psi_a: Complex64,
    psi_b: Complex64,
    dressing: &Dressing,
    label: WhichWay,
) -> f64 {
    let d = dressing;
    match label {
        WhichWay::A => {
            (psi_a + psi_b * Complex64::new(-d.sigma, d.theta).exp()).norm_sqr() / 2.0
        }
        WhichWay::B => {
            (psi_a * Complex64::new(d.sigma, -d.theta).exp() + psi_b).norm_sqr() / 2.0
        }
        WhichWay::Undecided => f64::NAN,
    }
}

/// Equilibrium density of the pilot theory at one point: classifies the
/// trajectory through (x, y, t) against the dressed state, then applies the
/// matching branch formula. Returns the density together with the label.
#[allow(clippy::too_many_arguments)]
pub fn density_pilot(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
    ctrl: &IntegrationControl,
) -> Result<(f64, WhichWay)> {
    let guidance = dress(state, particle, flux, consts);
    let label = bohmian::which_way(&guidance, x, y, t, ctrl)?;
    Ok((density_pilot_with_label(state, particle, flux, consts, x, y, t, label), label))
}

/// The branch formula with the label supplied by the caller.
#[allow(clippy::too_many_arguments)]
pub fn density_pilot_with_label(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
    label: WhichWay,
) -> f64 {
    let dressing = Dressing::new(particle, flux, consts);
    branch_density(
        state.branch_a_amplitude(x, y, t),
        state.branch_b_amplitude(x, y, t),
        &dressing,
        label,
    )
}

/// Primal route to the same density: |ψ'_AB|²/𝟙²[C_label] with the gauge
/// functions actually evaluated. Algebraically identical to
/// [`density_pilot_with_label`]; kept as the cross-check that the reduction
/// to Φ_L is right.
#[allow(clippy::too_many_arguments)]
pub fn density_from_history(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
    label: WhichWay,
) -> f64 {
    let amplitude = dressed_amplitude(state, particle, flux, consts, x, y, t);
    let line_integral = match label {
        WhichWay::A => flux.line_integral_a(x, y, t),
        WhichWay::B => flux.line_integral_b(x, y, t),
        WhichWay::Undecided => return f64::NAN,
    };
    let scale = crate::constants::scale_factor(particle, line_integral, consts);
    amplitude.norm_sqr() / (scale * scale)
}

/// Density of a purely Hermitian treatment: only the charge phase survives,
/// |ψ_A + ψ_B e^{iθ}|²/2. Flux-independent for a neutral particle.
pub fn density_orthodox(
    state: &SlitState,
    charge: f64,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
) -> f64 {
    let theta = charge * flux.loop_flux() / consts.hbar_c();
    let psi_a = state.branch_a_amplitude(x, y, t);
    let psi_b = state.branch_b_amplitude(x, y, t);
    (psi_a + psi_b * Complex64::new(0.0, theta).exp()).norm_sqr() / 2.0
}

/// Which-way-averaged density: p_A times the A-branch expression plus
/// (1 − p_A) times the B-branch expression. What a formulation without
/// single trajectories would predict.
#[allow(clippy::too_many_arguments)]
pub fn density_averaged(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    x: f64,
    y: f64,
    t: f64,
    p_a: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_a) {
        return Err(Error::Domain(format!(
            "branch probability must lie in [0, 1], got {p_a}"
        )));
    }
    let dressing = Dressing::new(particle, flux, consts);
    let psi_a = state.branch_a_amplitude(x, y, t);
    let psi_b = state.branch_b_amplitude(x, y, t);
    Ok(p_a * branch_density(psi_a, psi_b, &dressing, WhichWay::A)
        + (1.0 - p_a) * branch_density(psi_a, psi_b, &dressing, WhichWay::B))
}

/// One sample of a screen scan.
#[derive(Debug, Clone, Copy)]
pub struct ScreenSample {
    pub x: f64,
    pub orthodox: f64,
    pub pilot: f64,
    pub averaged: f64,
    pub which_way: WhichWay,
    /// Within the separatrix bisection tolerance; the pilot value is NaN.
    pub ambiguous: bool,
}

/// Orthodox and pilot densities along a screen line, with the separatrix.
#[derive(Debug, Clone)]
pub struct ScreenProfile {
    pub t: f64,
    pub y: f64,
    pub separatrix: f64,
    pub separatrix_tol: f64,
    pub samples: Vec<ScreenSample>,
}

/// Scans the screen line (fixed t, y) over the given x samples. The
/// separatrix is located by bisection between the first and last sample;
/// points within its tolerance are flagged ambiguous instead of valued.
#[allow(clippy::too_many_arguments)]
pub fn screen_profile(
    state: &SlitState,
    particle: &Particle,
    flux: &FluxConfig,
    consts: &PhysicalConstants,
    t: f64,
    y: f64,
    xs: &[f64],
    p_a: f64,
    ctrl: &IntegrationControl,
) -> Result<ScreenProfile> {
    if xs.len() < 2 {
        return Err(Error::Domain("screen scan needs at least two samples".into()));
    }
    let guidance = dress(state, particle, flux, consts);
    let separatrix_tol = 1e-6;
    let separatrix = bohmian::separatrix(
        &guidance,
        t,
        y,
        xs[0],
        *xs.last().unwrap(),
        separatrix_tol,
        ctrl,
    )?;
    let dressing = Dressing::new(particle, flux, consts);
    let samples: Result<Vec<ScreenSample>> = xs
        .par_iter()
        .map(|&x| {
            let psi_a = state.branch_a_amplitude(x, y, t);
            let psi_b = state.branch_b_amplitude(x, y, t);
            let orthodox = density_orthodox(state, particle.charge, flux, consts, x, y, t);
            let averaged = p_a * branch_density(psi_a, psi_b, &dressing, WhichWay::A)
                + (1.0 - p_a) * branch_density(psi_a, psi_b, &dressing, WhichWay::B);
            if (x - separatrix).abs() < separatrix_tol {
                return Ok(ScreenSample {
                    x,
                    orthodox,
                    pilot: f64::NAN,
                    averaged,
                    which_way: WhichWay::Undecided,
                    ambiguous: true,
                });
            }
            let label = bohmian::which_way(&guidance, x, y, t, ctrl)?;
            Ok(ScreenSample {
                x,
                orthodox,
                pilot: branch_density(psi_a, psi_b, &dressing, label),
                averaged,
                which_way: label,
                ambiguous: false,
            })
        })
        .collect();
    Ok(ScreenProfile {
        t,
        y,
        separatrix,
        separatrix_tol,
        samples: samples?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn demo_state() -> SlitState {
        SlitState::double_slit(1.5, 8.0, 5.0, 8.0 / std::f64::consts::PI)
    }

    fn natural() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn neutral_unit_mass() -> Particle {
        Particle::new(1.0, 0.0).unwrap()
    }

    fn quarter_pi_flux() -> FluxConfig {
        FluxConfig::new(std::f64::consts::FRAC_PI_4)
    }

    #[test]
    fn dressing_reduces_to_identity_without_couplings() {
        let consts = natural();
        let particle = Particle::with_imaginary_coupling(1.0, 0.0, 0.0).unwrap();
        let flux = quarter_pi_flux();
        let d = Dressing::new(&particle, &flux, &consts);
        assert_eq!(d.theta, 0.0);
        assert_eq!(d.sigma, 0.0);
        let state = demo_state();
        let dressed = dress(&state, &particle, &flux, &consts);
        let (x, y, t) = (0.7, 3.1, 0.6);
        assert_eq!(dressed.evaluate(x, y, t), state.evaluate(x, y, t));
    }

    #[test]
    fn zero_loop_flux_with_common_gauge_is_a_pure_global_factor() {
        let consts = natural();
        let particle = neutral_unit_mass();
        let flux = FluxConfig::with_gauge(0.0, |x, y, t| 0.3 * x - 0.1 * y + 0.2 * t);
        let state = demo_state();
        let (x, y, t) = (0.4, 3.3, 0.65);
        let dressed = dressed_amplitude(&state, &particle, &flux, &consts, x, y, t);
        let bare = state.evaluate(x, y, t);
        // common line integral on both branches: a single scale factor
        let scale =
            crate::constants::scale_factor(&particle, flux.line_integral_a(x, y, t), &consts);
        assert_relative_eq!(dressed.norm(), bare.norm() * scale, max_relative = 1e-12);
        // density is unchanged by it
        let pilot = density_from_history(&state, &particle, &flux, &consts, x, y, t, WhichWay::A);
        assert_relative_eq!(pilot, bare.norm_sqr(), max_relative = 1e-12);
    }

    #[test]
    fn both_factorizations_agree_pointwise() {
        let consts = natural();
        let particle = Particle::new(1.0, 0.8).unwrap(); // charged and scaled
        let flux = FluxConfig::with_gauge(std::f64::consts::FRAC_PI_4, |x, y, t| {
            0.2 * (x * 1.3).sin() + 0.05 * y * y - 0.1 * t * x
        });
        let state = demo_state();
        let mut seed = 0x5deece66du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = 6.0 * next() - 3.0;
            let y = 3.5 + 2.0 * next() - 1.0;
            let t = 0.7 * next();
            let direct = dressed_amplitude(&state, &particle, &flux, &consts, x, y, t);
            let via_a = dressed_amplitude_factored_a(&state, &particle, &flux, &consts, x, y, t);
            let via_b = dressed_amplitude_factored_b(&state, &particle, &flux, &consts, x, y, t);
            let scale = direct.norm().max(1e-30);
            assert!((direct - via_a).norm() <= 1e-12 * scale);
            assert!((direct - via_b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn pilot_density_amplifies_the_empty_packet_by_the_loop_exponential() {
        // e = 0, sigma = pi/4: the B-branch formula multiplies psi_A by
        // e^{+pi/4} ~ 2.193, the A-branch formula divides psi_B by it.
        let consts = natural();
        let particle = neutral_unit_mass();
        let flux = quarter_pi_flux();
        let d = Dressing::new(&particle, &flux, &consts);
        assert_relative_eq!(d.sigma, std::f64::consts::FRAC_PI_4, max_relative = 1e-15);
        assert_relative_eq!(
            (d.sigma).exp(),
            2.193280050738015,
            max_relative = 1e-12
        );
        let state = demo_state();
        let (x, y, t) = (-0.9, 3.5, 0.7);
        let psi_a = state.branch_a_amplitude(x, y, t);
        let psi_b = state.branch_b_amplitude(x, y, t);
        let b_side = branch_density(psi_a, psi_b, &d, WhichWay::B);
        let direct = (psi_a * d.sigma.exp() + psi_b).norm_sqr() / 2.0;
        assert_relative_eq!(b_side, direct, max_relative = 1e-14);
        let a_side = branch_density(psi_a, psi_b, &d, WhichWay::A);
        let direct_a = (psi_a + psi_b * (-d.sigma).exp()).norm_sqr() / 2.0;
        assert_relative_eq!(a_side, direct_a, max_relative = 1e-14);
    }

    #[test]
    fn hermitian_coupling_makes_the_branches_agree_with_orthodox() {
        // e_I = 0: both branch expressions collapse to the orthodox density
        let consts = natural();
        let particle = Particle::with_imaginary_coupling(1.0, 0.8, 0.0).unwrap();
        let flux = quarter_pi_flux();
        let dressing = Dressing::new(&particle, &flux, &consts);
        let state = demo_state();
        for &(x, y) in &[(0.3, 3.2), (-1.7, 3.8), (2.2, 3.5)] {
            let psi_a = state.branch_a_amplitude(x, y, 0.7);
            let psi_b = state.branch_b_amplitude(x, y, 0.7);
            let a = branch_density(psi_a, psi_b, &dressing, WhichWay::A);
            let b = branch_density(psi_a, psi_b, &dressing, WhichWay::B);
            let orthodox = density_orthodox(&state, particle.charge, &flux, &consts, x, y, 0.7);
            assert_relative_eq!(a, orthodox, max_relative = 1e-12);
            assert_relative_eq!(b, orthodox, max_relative = 1e-12);
        }
    }

    #[test]
    fn neutral_particle_orthodox_density_ignores_the_flux() {
        let consts = natural();
        let state = demo_state();
        let (x, y, t) = (0.8, 3.4, 0.7);
        let zero = density_orthodox(&state, 0.0, &FluxConfig::new(0.0), &consts, x, y, t);
        let piflux = density_orthodox(&state, 0.0, &quarter_pi_flux(), &consts, x, y, t);
        assert_eq!(zero, piflux);
    }

    #[test]
    fn half_flux_quantum_shifts_fringes_by_half_a_period() {
        // oracle: the far-field fringe pattern; a theta = pi phase moves
        // every interference maximum onto a former minimum. Verified by
        // locating the central fringe peaks of both curves and comparing
        // the shift against half the local fringe spacing.
        let consts = PhysicalConstants::codata2018();
        let state = demo_state();
        let charge = consts.e;
        let half_quantum = crate::constants::flux_quantum(&consts) / 2.0;
        let flux = FluxConfig::new(half_quantum);
        let theta = charge * flux.loop_flux() / consts.hbar_c();
        assert_relative_eq!(theta, std::f64::consts::PI, max_relative = 1e-12);

        let sample_peak = |flux: &FluxConfig| -> f64 {
            // scan the central region for the highest orthodox fringe
            let mut best = (0.0, f64::MIN);
            for i in 0..2001 {
                let x = -1.0 + 2.0 * i as f64 / 2000.0;
                let d = density_orthodox(&state, charge, flux, &consts, x, 3.5, 0.7);
                if d > best.1 {
                    best = (x, d);
                }
            }
            best.0
        };
        let zero_peak = sample_peak(&FluxConfig::new(0.0));
        let shifted_peak = sample_peak(&flux);

        // fringe spacing from the zero-flux curve: distance between the
        // central peak and its neighbor
        let mut next_peak = f64::MAX;
        for i in 0..4001 {
            let x = zero_peak + 0.02 + 1.5 * i as f64 / 4000.0;
            let dm = density_orthodox(&state, charge, &FluxConfig::new(0.0), &consts, x - 5e-4, 3.5, 0.7);
            let d0 = density_orthodox(&state, charge, &FluxConfig::new(0.0), &consts, x, 3.5, 0.7);
            let dp = density_orthodox(&state, charge, &FluxConfig::new(0.0), &consts, x + 5e-4, 3.5, 0.7);
            if d0 > dm && d0 > dp {
                next_peak = x;
                break;
            }
        }
        let period = next_peak - zero_peak;
        let shift = (shifted_peak - zero_peak).abs();
        assert_relative_eq!(shift, period / 2.0, max_relative = 0.02);
    }

    #[test]
    fn averaged_density_endpoints_and_reduction() {
        let consts = natural();
        let particle = neutral_unit_mass();
        let flux = quarter_pi_flux();
        let state = demo_state();
        let (x, y, t) = (0.5, 3.3, 0.7);
        let dressing = Dressing::new(&particle, &flux, &consts);
        let psi_a = state.branch_a_amplitude(x, y, t);
        let psi_b = state.branch_b_amplitude(x, y, t);

        let all_a = density_averaged(&state, &particle, &flux, &consts, x, y, t, 1.0).unwrap();
        assert_relative_eq!(
            all_a,
            branch_density(psi_a, psi_b, &dressing, WhichWay::A),
            max_relative = 1e-14
        );

        // p_A = 1/2 with e_I = 0 is exactly the orthodox density
        let hermitian = Particle::with_imaginary_coupling(1.0, 0.4, 0.0).unwrap();
        let mixed =
            density_averaged(&state, &hermitian, &flux, &consts, x, y, t, 0.5).unwrap();
        let orthodox = density_orthodox(&state, hermitian.charge, &flux, &consts, x, y, t);
        assert_relative_eq!(mixed, orthodox, max_relative = 1e-12);

        assert!(density_averaged(&state, &particle, &flux, &consts, x, y, t, 1.5).is_err());
    }

    #[test]
    fn averaged_and_pilot_densities_differ_somewhere() {
        // the 50/50 mixture cannot reproduce the per-label density on both
        // sides of the separatrix at once
        let consts = natural();
        let particle = neutral_unit_mass();
        let flux = quarter_pi_flux();
        let state = demo_state();
        let ctrl = IntegrationControl::default();
        let mut max_gap = 0.0f64;
        for i in 0..21 {
            let x = -2.5 + 5.0 * i as f64 / 20.0;
            let (pilot, _) =
                density_pilot(&state, &particle, &flux, &consts, x, 3.5, 0.7, &ctrl).unwrap();
            let avg =
                density_averaged(&state, &particle, &flux, &consts, x, 3.5, 0.7, 0.5).unwrap();
            max_gap = max_gap.max((pilot - avg).abs());
        }
        assert!(max_gap > 1e-3, "max |pilot - averaged| = {max_gap:.3e}");
    }

    #[test]
    fn gauge_shift_leaves_density_bit_identical() {
        let consts = natural();
        let particle = neutral_unit_mass();
        let state = demo_state();
        let phi = std::f64::consts::FRAC_PI_4;
        let reference = FluxConfig::new(phi);
        let (x, y, t) = (0.9, 3.6, 0.7);
        let base = density_pilot_with_label(&state, &particle, &reference, &consts, x, y, t, WhichWay::A);
        for k in 0..20 {
            let a = 0.1 * (k as f64 + 1.0);
            let gauged = FluxConfig::with_gauge(phi, move |x, y, t| {
                a * (x + 2.0 * y).cos() + 0.3 * a * t
            });
            let shifted =
                density_pilot_with_label(&state, &particle, &gauged, &consts, x, y, t, WhichWay::A);
            assert_eq!(base.to_bits(), shifted.to_bits());
        }
    }

    #[test]
    fn history_route_matches_the_loop_reduced_formula() {
        // |psi'|^2 / scale^2 with real gauge functions in play equals the
        // branch formula that only sees the loop flux
        let consts = natural();
        let particle = Particle::new(1.0, 0.6).unwrap();
        let flux = FluxConfig::with_gauge(0.9, |x, y, t| 0.4 * x * y - 0.2 * t + 0.1);
        let state = demo_state();
        for &label in &[WhichWay::A, WhichWay::B] {
            for &(x, y) in &[(0.4, 3.2), (-1.2, 3.7), (1.8, 3.4)] {
                let primal =
                    density_from_history(&state, &particle, &flux, &consts, x, y, 0.7, label);
                let reduced = density_pilot_with_label(
                    &state, &particle, &flux, &consts, x, y, 0.7, label,
                );
                assert_relative_eq!(primal, reduced, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn screen_profile_scans_and_flags() {
        let consts = natural();
        let particle = neutral_unit_mass();
        let flux = quarter_pi_flux();
        let state = demo_state();
        let xs: Vec<f64> = (0..161).map(|i| -4.0 + 8.0 * i as f64 / 160.0).collect();
        let profile = screen_profile(
            &state,
            &particle,
            &flux,
            &consts,
            0.7,
            3.5,
            &xs,
            0.5,
            &IntegrationControl::default(),
        )
        .unwrap();
        // suppressed branch B: separatrix moves off-center toward B (left)
        assert!(
            profile.separatrix < -1e-3,
            "separatrix at {}",
            profile.separatrix
        );
        for s in &profile.samples {
            if s.ambiguous {
                assert!(s.pilot.is_nan());
                continue;
            }
            let expected = if s.x < profile.separatrix {
                WhichWay::B
            } else {
                WhichWay::A
            };
            assert_eq!(s.which_way, expected, "at x = {}", s.x);
            assert!(s.pilot >= 0.0 && s.orthodox >= 0.0 && s.averaged >= 0.0);
        }

        // zero-flux control collapses pilot onto orthodox pointwise
        let control = screen_profile(
            &state,
            &particle,
            &FluxConfig::new(0.0),
            &consts,
            0.7,
            3.5,
            &xs,
            0.5,
            &IntegrationControl::default(),
        )
        .unwrap();
        for s in &control.samples {
            if !s.ambiguous {
                assert!((s.pilot - s.orthodox).abs() < 1e-10);
            }
        }
    }
}
