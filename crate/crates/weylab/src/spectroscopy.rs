//! First-order time-dependent perturbation theory for the complex-coupled
//! oscillator driven by a monochromatic plane wave, with the perturbation
//! acting over the symmetric window (−t, +t).
//!
//! The interaction carries two plane-wave matrix elements per transition:
//! the element of e^{+i(ω/c)k̂·x} ε̂·∇ enters the resonant (ω ≈ +ω^R_np)
//! term and is written `v_bar`; the element of e^{−i(ω/c)k̂·x} ε̂·∇ enters
//! the antiresonant term and is written `v`. Both are conjugation-free
//! bilinear forms over the analytically continued eigenfunctions, so
//! `v_bar` is not the complex conjugate of `v`.
//!
//! Physical imaginary couplings put ω^I/ω^R near 1e-21, invisible next to
//! f64 rounding; quantitative tests therefore run at exaggerated ratios
//! (1e-3 to 1e-6) where every formula is exact in the ratio, and the
//! physical value enters through analytic scaling statements only.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::oscillator;

/// Small-t form is trusted while |ω^I t| stays below this.
pub const SMALL_T_LIMIT: f64 = 1e-2;
/// Long-t form is trusted once |ω^I t| exceeds this.
pub const LONG_T_MIN: f64 = 0.5;

/// Monochromatic plane wave: amplitude, angular frequency, propagation and
/// polarization directions (orthonormal pair).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    pub amplitude: f64,
    pub omega: f64,
    pub k_hat: [f64; 3],
    pub polarization: [f64; 3],
}

impl DriveField {
    pub fn new(amplitude: f64, omega: f64, k_hat: [f64; 3], polarization: [f64; 3]) -> Result<Self> {
        let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (norm(k_hat) - 1.0).abs() > 1e-12 || (norm(polarization) - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(
                "k_hat and polarization must be unit vectors".into(),
            ));
        }
        let dot = k_hat[0] * polarization[0] + k_hat[1] * polarization[1] + k_hat[2] * polarization[2];
        if dot.abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "polarization must be transverse, eps.k = {dot:.3e}"
            )));
        }
        if !(omega >= 0.0) || !(amplitude >= 0.0) {
            return Err(Error::Domain("amplitude and omega must be >= 0".into()));
        }
        Ok(Self {
            amplitude,
            omega,
            k_hat,
            polarization,
        })
    }

    /// Copy with a different scan frequency.
    pub fn at_omega(&self, omega: f64) -> Self {
        Self { omega, ..*self }
    }
}

/// Quadrature settings for the matrix-element integrals: composite Simpson
/// with interval doubling until the relative change drops below `rel_tol`.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub initial_panels: usize,
    pub max_doublings: usize,
    pub rel_tol: f64,
    /// Absolute floor for integrals that vanish (orthogonality, parity);
    /// sized for O(1)-normalized integrands.
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            initial_panels: 256,
            max_doublings: 8,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
        }
    }
}

fn simpson(f: &impl Fn(f64) -> Complex64, lo: f64, hi: f64, panels: usize) -> Complex64 {
    let n = 2 * panels;
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// Adaptive-by-doubling Simpson quadrature. `max_doublings = 0` runs the
/// rule once at the initial resolution without a convergence check.
pub fn integrate_1d(
    f: impl Fn(f64) -> Complex64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut panels = spec.initial_panels;
    let mut prev = simpson(&f, lo, hi, panels);
    if spec.max_doublings == 0 {
        return Ok(prev);
    }
    for _ in 0..spec.max_doublings {
        panels *= 2;
        let cur = simpson(&f, lo, hi, panels);
        if (cur - prev).norm() <= spec.rel_tol * cur.norm() + spec.abs_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy(format!(
        "quadrature did not converge after {panels} panels"
    )))
}

/// Half-width of the integration window for oscillator states up to n.
fn quadrature_halfwidth(n_max: usize, omega: Complex64, mass: f64, hbar: f64) -> f64 {
    let length = (hbar / (mass * omega.re)).sqrt();
    length * ((2.0 * n_max as f64 + 1.0).sqrt() + 10.0)
}

/// 1D building blocks: ∫ φ_n e^{iκu} φ_p du and ∫ φ_n e^{iκu} φ_p' du.
fn axis_integrals(
    n: usize,
    p: usize,
    omega: Complex64,
    kappa: f64,
    mass: f64,
    hbar: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    if !(omega.re > 0.0) {
        return Err(Error::Domain(format!(
            "matrix elements need Re(omega) > 0, got {omega}"
        )));
    }
    let half = quadrature_halfwidth(n.max(p), omega, mass, hbar);
    let plain = integrate_1d(
        |u| {
            let fn_n = oscillator::eigenfunction_1d(n, omega, u, mass, hbar).unwrap();
            let fn_p = oscillator::eigenfunction_1d(p, omega, u, mass, hbar).unwrap();
            fn_n * Complex64::new(0.0, kappa * u).exp() * fn_p
        },
        -half,
        half,
        spec,
    )?;
    let deriv = integrate_1d(
        |u| {
            let fn_n = oscillator::eigenfunction_1d(n, omega, u, mass, hbar).unwrap();
            let dp = oscillator::eigenfunction_1d_deriv(p, omega, u, mass, hbar).unwrap();
            fn_n * Complex64::new(0.0, kappa * u).exp() * dp
        },
        -half,
        half,
        spec,
    )?;
    Ok((plain, deriv))
}

/// One plane-wave element ⟨n| e^{i s (ω/c) k̂·x} ε̂·∇ |p⟩ as a bilinear form,
/// factored over the three axes. `sign` = ±1 selects the exponential.
#[allow(clippy::too_many_arguments)]
fn plane_wave_element(
    n: &[usize; 3],
    p: &[usize; 3],
    omega: &[Complex64; 3],
    drive: &DriveField,
    sign: f64,
    mass: f64,
    consts: &PhysicalConstants,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let kappa0 = drive.omega / consts.c;
    let mut plain = [Complex64::new(0.0, 0.0); 3];
    let mut deriv = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        let kappa = sign * kappa0 * drive.k_hat[j];
        let (pl, de) = axis_integrals(n[j], p[j], omega[j], kappa, mass, consts.hbar, spec)?;
        plain[j] = pl;
        deriv[j] = de;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        if drive.polarization[j] == 0.0 {
            continue;
        }
        let mut term = Complex64::new(drive.polarization[j], 0.0) * deriv[j];
        for l in 0..3 {
            if l != j {
                term *= plain[l];
            }
        }
        total += term;
    }
    Ok(total)
}

/// Both plane-wave matrix elements for the transition p⃗ → n⃗:
/// `(v, v_bar)` = (element of e^{−i(ω/c)k̂·x} ε̂·∇, element of
/// e^{+i(ω/c)k̂·x} ε̂·∇).
pub fn matrix_elements(
    n: &[usize; 3],
    p: &[usize; 3],
    omega: &[Complex64; 3],
    drive: &DriveField,
    mass: f64,
    consts: &PhysicalConstants,
) -> Result<(Complex64, Complex64)> {
    let spec = QuadratureSpec::default();
    let v = plane_wave_element(n, p, omega, drive, -1.0, mass, consts, &spec)?;
    let v_bar = plane_wave_element(n, p, omega, drive, 1.0, mass, consts, &spec)?;
    Ok((v, v_bar))
}

/// Matrix elements at a fixed Simpson resolution, for convergence studies.
#[allow(clippy::too_many_arguments)]
pub fn matrix_elements_at_resolution(
    n: &[usize; 3],
    p: &[usize; 3],
    omega: &[Complex64; 3],
    drive: &DriveField,
    mass: f64,
    consts: &PhysicalConstants,
    panels: usize,
) -> Result<(Complex64, Complex64)> {
    let fixed = QuadratureSpec {
        initial_panels: panels,
        max_doublings: 0,
        rel_tol: f64::INFINITY,
        abs_tol: f64::INFINITY,
    };
    let v = plane_wave_element(n, p, omega, drive, -1.0, mass, consts, &fixed)?;
    let v_bar = plane_wave_element(n, p, omega, drive, 1.0, mass, consts, &fixed)?;
    Ok((v, v_bar))
}

/// A transition p⃗ → n⃗ with everything the lineshape formulas consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPair {
    pub initial: [usize; 3],
    pub target: [usize; 3],
    /// ω^R_np = (E^R_n − E^R_p)/ħ; antisymmetric under swapping the states.
    pub omega_real: f64,
    /// ω^I_np = (E^I_n − E^I_p)/ħ, carried with its sign (positive for
    /// upward transitions, negative for downward).
    pub omega_imag: f64,
    /// Antiresonant element (goes with the ω ≈ −ω^R_np term).
    pub v: Complex64,
    /// Resonant element (goes with the ω ≈ +ω^R_np term).
    pub v_bar: Complex64,
    /// E^I_n of the target level (erg).
    pub target_energy_imag: f64,
    /// ∫ |φ_n|² d³x of the target level.
    pub target_norm_sq: f64,
}

impl TransitionPair {
    /// Builds the pair from oscillator levels: transition frequencies from
    /// the complex spectrum, matrix elements by quadrature, and the target
    /// level's imaginary energy and modulus norm.
    pub fn from_levels(
        initial: [usize; 3],
        target: [usize; 3],
        omega: [Complex64; 3],
        drive: &DriveField,
        mass: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        let mut nu = Complex64::new(0.0, 0.0);
        for j in 0..3 {
            nu += (target[j] as f64 - initial[j] as f64) * omega[j];
        }
        let (v, v_bar) = matrix_elements(&target, &initial, &omega, drive, mass, consts)?;
        let energy = oscillator::eigenvalue(&target, &omega, consts.hbar);
        let spec = QuadratureSpec::default();
        let mut norm_sq = 1.0;
        for j in 0..3 {
            let half = quadrature_halfwidth(target[j], omega[j], mass, consts.hbar);
            let integral = integrate_1d(
                |u| {
                    let f = oscillator::eigenfunction_1d(target[j], omega[j], u, mass, consts.hbar)
                        .unwrap();
                    Complex64::new(f.norm_sqr(), 0.0)
                },
                -half,
                half,
                &spec,
            )?;
            norm_sq *= integral.re;
        }
        Ok(Self {
            initial,
            target,
            omega_real: nu.re,
            omega_imag: nu.im,
            v,
            v_bar,
            target_energy_imag: energy.im,
            target_norm_sq: norm_sq,
        })
    }

    /// A bare pair with prescribed frequencies and elements; spatial factors
    /// default to the trivial ones (zero imaginary target energy, unit
    /// norm). Used for formula-level scans.
    pub fn synthetic(omega_real: f64, omega_imag: f64, v: Complex64, v_bar: Complex64) -> Self {
        Self {
            initial: [0; 3],
            target: [0; 3],
            omega_real,
            omega_imag,
            v,
            v_bar,
            target_energy_imag: 0.0,
            target_norm_sq: 1.0,
        }
    }
}

/// (e^{zt} − e^{−zt})/z, series-protected near z = 0.
fn exp_diff_over(z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    if zt.norm() < 1e-4 {
        let zt2 = zt * zt;
        2.0 * t * (Complex64::new(1.0, 0.0) + zt2 / 6.0 + zt2 * zt2 / 120.0)
    } else {
        ((zt).exp() - (-zt).exp()) / z
    }
}

/// Exact first-order coefficient for the window (−t, t):
///
/// c¹ = (e_C A₀ / 2mc) [ D(i(ω^R+ω) − ω^I) v + D(i(ω^R−ω) − ω^I) v̄ ],
/// with D(z) = (e^{zt} − e^{−zt})/z.
pub fn c1(
    t: f64,
    pair: &TransitionPair,
    drive: &DriveField,
    e_complex: Complex64,
    mass: f64,
    consts: &PhysicalConstants,
) -> Complex64 {
    let prefactor = e_complex * drive.amplitude / (2.0 * mass * consts.c);
    let z_plus = Complex64::new(-pair.omega_imag, pair.omega_real + drive.omega);
    let z_minus = Complex64::new(-pair.omega_imag, pair.omega_real - drive.omega);
    prefactor * (exp_diff_over(z_plus, t) * pair.v + exp_diff_over(z_minus, t) * pair.v_bar)
}

/// Whether an asymptotic form was used inside its regime of validity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeFlag {
    Ok,
    OutOfRegime,
}

impl std::fmt::Display for RegimeFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeFlag::Ok => write!(f, "ok"),
            RegimeFlag::OutOfRegime => write!(f, "out_of_regime"),
        }
    }
}

fn dominant_branch(pair: &TransitionPair, omega: f64) -> (f64, Complex64) {
    let plus = pair.omega_real + omega;
    let minus = pair.omega_real - omega;
    if plus.abs() < minus.abs() {
        (plus, pair.v)
    } else {
        (minus, pair.v_bar)
    }
}

/// Small-ω^I t lineshape: prefactor × [sin²(Δt) + (ω^I t)²]/[Δ² + (ω^I)²]
/// × |element|², with the branch, Δ, and element selected by which
/// resonance the drive sits near. Algebraically stable at Δ = ω^I = 0
/// (limit t²).
pub fn c1_squared_small_t(
    t: f64,
    pair: &TransitionPair,
    drive: &DriveField,
    e_complex: Complex64,
    mass: f64,
    consts: &PhysicalConstants,
) -> (f64, RegimeFlag) {
    let (delta, element) = dominant_branch(pair, drive.omega);
    let prefactor = e_complex.norm_sqr() * drive.amplitude * drive.amplitude
        / (mass * mass * consts.c * consts.c);
    let numerator = (delta * t).sin().powi(2) + (pair.omega_imag * t).powi(2);
    let denominator = delta * delta + pair.omega_imag * pair.omega_imag;
    let shape = if denominator == 0.0 {
        t * t
    } else {
        numerator / denominator
    };
    let flag = if (pair.omega_imag * t).abs() <= SMALL_T_LIMIT {
        RegimeFlag::Ok
    } else {
        RegimeFlag::OutOfRegime
    };
    (prefactor * shape * element.norm_sqr(), flag)
}

/// Long-time lineshape: half the prefactor × cosh(2ω^I t)/[Δ² + (ω^I)²]
/// × |element|² — a Cauchy-Lorentz profile in the drive frequency.
pub fn c1_squared_long_t(
    t: f64,
    pair: &TransitionPair,
    drive: &DriveField,
    e_complex: Complex64,
    mass: f64,
    consts: &PhysicalConstants,
) -> (f64, RegimeFlag) {
    let (delta, element) = dominant_branch(pair, drive.omega);
    let prefactor = e_complex.norm_sqr() * drive.amplitude * drive.amplitude
        / (2.0 * mass * mass * consts.c * consts.c);
    let denominator = delta * delta + pair.omega_imag * pair.omega_imag;
    let shape = (2.0 * pair.omega_imag * t).cosh() / denominator;
    let flag = if (pair.omega_imag * t).abs() >= LONG_T_MIN {
        RegimeFlag::Ok
    } else {
        RegimeFlag::OutOfRegime
    };
    (prefactor * shape * element.norm_sqr(), flag)
}

/// Full width at half maximum of the long-time Cauchy-Lorentz profile:
/// 2|ω^I_np|.
pub fn lorentzian_width(pair: &TransitionPair) -> f64 {
    2.0 * pair.omega_imag.abs()
}

/// Transition probability with the pre-interaction history entering as a
/// frequency-independent scale:
///
/// P = |c¹|² e^{2E^I_n t/ħ} (∫|φ_n|² d³x) / history_scale².
pub fn transition_probability(
    t: f64,
    pair: &TransitionPair,
    drive: &DriveField,
    e_complex: Complex64,
    mass: f64,
    history_scale: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(history_scale > 0.0) {
        return Err(Error::Domain(format!(
            "history scale must be > 0, got {history_scale}"
        )));
    }
    let coeff = c1(t, pair, drive, e_complex, mass, consts);
    Ok(coeff.norm_sqr() * (2.0 * pair.target_energy_imag * t / consts.hbar).exp()
        * pair.target_norm_sq
        / (history_scale * history_scale))
}

/// One row of a resonance scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub omega: f64,
    pub c1_squared: f64,
    pub probability: f64,
    pub regime: RegimeFlag,
}

/// Frequency grid symmetric about `center`, with `center` present exactly
/// (2·per_side + 1 points).
pub fn centered_grid(center: f64, half_width: f64, per_side: usize) -> Vec<f64> {
    let step = half_width / per_side as f64;
    (-(per_side as i64)..=per_side as i64)
        .map(|i| center + i as f64 * step)
        .collect()
}

/// Evaluates one scan row at the given drive frequency. The probability
/// column applies the history and spatial factors of the pair to the same
/// lineshape shown in the c1_squared column.
#[allow(clippy::too_many_arguments)]
pub fn scan_row(
    pair: &TransitionPair,
    drive: &DriveField,
    omega: f64,
    t: f64,
    e_complex: Complex64,
    mass: f64,
    history_scale: f64,
    long_time: bool,
    consts: &PhysicalConstants,
) -> Result<ScanRow> {
    if !(history_scale > 0.0) {
        return Err(Error::Domain(format!(
            "history scale must be > 0, got {history_scale}"
        )));
    }
    let d = drive.at_omega(omega);
    let (c1_squared, regime) = if long_time {
        c1_squared_long_t(t, pair, &d, e_complex, mass, consts)
    } else {
        c1_squared_small_t(t, pair, &d, e_complex, mass, consts)
    };
    let probability = c1_squared * (2.0 * pair.target_energy_imag * t / consts.hbar).exp()
        * pair.target_norm_sq
        / (history_scale * history_scale);
    Ok(ScanRow {
        omega,
        c1_squared,
        probability,
        regime,
    })
}

/// Complex coupling whose oscillator frequency ratio ω^I/ω^R equals
/// `ratio` exactly: |e_C| = magnitude, arg(e_C) = 2 atan(ratio).
pub fn coupling_for_frequency_ratio(magnitude: f64, ratio: f64) -> Complex64 {
    Complex64::from_polar(magnitude, 2.0 * ratio.atan())
}

/// One basis coefficient of the truncated interaction-picture solution.
#[derive(Debug, Clone, Copy)]
pub struct BasisCoefficient {
    pub n: [usize; 3],
    pub coefficient: Complex64,
}

/// Direct numerical integration of the interaction-picture system
///
/// iħ ċ_n = Σ_m H'_nm(τ) e^{iω^R_nm τ − ω^I_nm τ} c_m
///
/// over the window (−t, t) with c_m(−t) = δ_{m,p}, on the basis
/// n_j ≤ max_n_j. The truncation must keep the boundary population below
/// 1e-8 or an accuracy error is returned. Fixed-step RK4 with step `dt`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_exact(
    t: f64,
    initial: [usize; 3],
    max_n: [usize; 3],
    omega: [Complex64; 3],
    drive: &DriveField,
    e_complex: Complex64,
    mass: f64,
    dt: f64,
    consts: &PhysicalConstants,
) -> Result<Vec<BasisCoefficient>> {
    // enumerate the basis lexicographically
    let mut basis = Vec::new();
    for nx in 0..=max_n[0] {
        for ny in 0..=max_n[1] {
            for nz in 0..=max_n[2] {
                basis.push([nx, ny, nz]);
            }
        }
    }
    let dim = basis.len();
    let index_of = |n: &[usize; 3]| -> Option<usize> {
        if n.iter().zip(&max_n).any(|(v, m)| v > m) {
            return None;
        }
        Some(n[0] * (max_n[1] + 1) * (max_n[2] + 1) + n[1] * (max_n[2] + 1) + n[2])
    };
    let p_index = index_of(&initial).ok_or_else(|| {
        Error::Domain("initial state lies outside the truncated basis".into())
    })?;

    // per-axis integral tables for both exponential signs
    let spec = QuadratureSpec::default();
    let kappa0 = drive.omega / consts.c;
    let mut plain = [[Vec::<Vec<Complex64>>::new(), Vec::new()], [Vec::new(), Vec::new()], [Vec::new(), Vec::new()]];
    let mut deriv = plain.clone();
    for j in 0..3 {
        for (si, sign) in [1.0f64, -1.0].iter().enumerate() {
            let kappa = sign * kappa0 * drive.k_hat[j];
            let size = max_n[j] + 1;
            let mut pl = vec![vec![Complex64::new(0.0, 0.0); size]; size];
            let mut de = pl.clone();
            for a in 0..size {
                for b in 0..size {
                    let (p_ab, d_ab) =
                        axis_integrals(a, b, omega[j], kappa, mass, consts.hbar, &spec)?;
                    pl[a][b] = p_ab;
                    de[a][b] = d_ab;
                }
            }
            plain[j][si] = pl;
            deriv[j][si] = de;
        }
    }
    // dense element matrices for e^{+i...} (index 0) and e^{-i...} (index 1)
    let element = |s: &[usize; 3], r: &[usize; 3], si: usize| -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..3 {
            if drive.polarization[j] == 0.0 {
                continue;
            }
            let mut term = Complex64::new(drive.polarization[j], 0.0) * deriv[j][si][s[j]][r[j]];
            for l in 0..3 {
                if l != j {
                    term *= plain[l][si][s[l]][r[l]];
                }
            }
            total += term;
        }
        total
    };
    let mut m_plus = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut m_minus = m_plus.clone();
    for (si, s) in basis.iter().enumerate() {
        for (ri, r) in basis.iter().enumerate() {
            m_plus[si * dim + ri] = element(s, r, 0);
            m_minus[si * dim + ri] = element(s, r, 1);
        }
    }

    // level frequencies E/hbar, split
    let freq: Vec<Complex64> = basis
        .iter()
        .map(|n| oscillator::eigenvalue(n, &omega, consts.hbar) / consts.hbar)
        .collect();

    let prefactor = e_complex * drive.amplitude / (2.0 * mass * consts.c);
    let rhs = |tau: f64, c: &[Complex64], out: &mut [Complex64]| {
        // u_s = exp((i er_s - ei_s) tau); interaction phases factorize as
        // u_s / u_r
        let u: Vec<Complex64> = freq
            .iter()
            .map(|f| (Complex64::new(-f.im, f.re) * tau).exp())
            .collect();
        let g_minus = Complex64::new(0.0, -drive.omega * tau).exp();
        let g_plus = g_minus.conj();
        let d: Vec<Complex64> = c.iter().zip(&u).map(|(ci, ui)| ci / ui).collect();
        for s in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            let row_p = &m_plus[s * dim..(s + 1) * dim];
            let row_m = &m_minus[s * dim..(s + 1) * dim];
            for r in 0..dim {
                acc += (g_minus * row_p[r] + g_plus * row_m[r]) * d[r];
            }
            out[s] = prefactor * u[s] * acc;
        }
    };

    let steps = ((2.0 * t / dt).ceil() as usize).max(1);
    let h = 2.0 * t / steps as f64;
    let mut c = vec![Complex64::new(0.0, 0.0); dim];
    c[p_index] = Complex64::new(1.0, 0.0);
    let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    let mut tau = -t;
    for _ in 0..steps {
        rhs(tau, &c, &mut k1);
        for i in 0..dim {
            tmp[i] = c[i] + 0.5 * h * k1[i];
        }
        rhs(tau + 0.5 * h, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = c[i] + 0.5 * h * k2[i];
        }
        rhs(tau + 0.5 * h, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = c[i] + h * k3[i];
        }
        rhs(tau + h, &tmp, &mut k4);
        for i in 0..dim {
            c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        tau += h;
    }

    // truncation check: population on the basis boundary
    let mut tail = 0.0;
    for (i, n) in basis.iter().enumerate() {
        let boundary = (0..3).any(|j| max_n[j] > 0 && n[j] == max_n[j]);
        if boundary {
            tail += c[i].norm_sqr();
        }
    }
    if tail > 1e-8 {
        return Err(Error::Accuracy(format!(
            "truncation tail population {tail:.3e} exceeds 1e-8; enlarge the basis"
        )));
    }

    Ok(basis
        .into_iter()
        .zip(c)
        .map(|(n, coefficient)| BasisCoefficient { n, coefficient })
        .collect())
}

/// Convenience: pulls one coefficient out of an [`integrate_exact`] result.
pub fn coefficient_of(coeffs: &[BasisCoefficient], n: &[usize; 3]) -> Option<Complex64> {
    coeffs
        .iter()
        .find(|c| &c.n == n)
        .map(|c| c.coefficient)
}
