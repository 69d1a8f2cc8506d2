//! Three-dimensional harmonic oscillator with a complex gauge coupling.
//!
//! Coupling the oscillator potential through e_C = q + i e_I turns the
//! frequencies complex, ω_j = √(e_C λ_j²/m), and with them the energy
//! eigenvalues E_n = ħ Σ_j ω_j (n_j + ½). The eigenfunctions keep the
//! familiar Gaussian-times-Hermite form with every square root taken on
//! the principal branch, which reduces continuously to the textbook real
//! pair as e_I → 0.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// ω_j = √(e_C λ_j²/m), principal branch (Re ω > 0).
pub fn complex_frequency(lambda: f64, e_complex: Complex64, mass: f64) -> Result<Complex64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass must be > 0, got {mass}")));
    }
    if !(e_complex.re > 0.0) {
        return Err(Error::Domain(format!(
            "Re(e_C) must be > 0, got {}",
            e_complex.re
        )));
    }
    Ok((e_complex * lambda * lambda / mass).sqrt())
}

/// E_n = ħ Σ_j ω_j (n_j + ½).
pub fn eigenvalue(n: &[usize; 3], omega: &[Complex64; 3], hbar: f64) -> Complex64 {
    let mut e = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        e += omega[j] * (n[j] as f64 + 0.5);
    }
    hbar * e
}

/// One oscillator level: frequencies, occupation numbers, and the energy
/// stored exactly as ħ Σ ω_j (n_j + ½).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLevel {
    pub omega: [Complex64; 3],
    pub n: [usize; 3],
    pub energy: Complex64,
}

impl ComplexLevel {
    pub fn new(omega: [Complex64; 3], n: [usize; 3], hbar: f64) -> Result<Self> {
        for (j, w) in omega.iter().enumerate() {
            if !(w.re > 0.0) {
                return Err(Error::Domain(format!(
                    "Re(omega_{j}) must be > 0, got {}",
                    w.re
                )));
            }
        }
        Ok(Self {
            omega,
            n,
            energy: eigenvalue(&n, &omega, hbar),
        })
    }

    pub fn energy_re(&self) -> f64 {
        self.energy.re
    }

    pub fn energy_im(&self) -> f64 {
        self.energy.im
    }
}

/// Hermite polynomial H_n at a complex argument, by the three-term
/// recurrence H_{k+1} = 2 z H_k − 2 k H_{k−1}.
///
/// Stable for moderate n; overflows for large n together with large |z|
/// (H_n grows like (2z)^n).
pub fn hermite(n: usize, z: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut prev = Complex64::new(1.0, 0.0); // H_0
    let mut cur = 2.0 * z; // H_1
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Normalization constant (mω/πħ)^{1/4} / √(2ⁿ n!), analytically continued
/// to complex ω with the principal branch.
pub fn normalization(n: usize, omega: Complex64, mass: f64, hbar: f64) -> Complex64 {
    let quarter_root = (mass * omega / (std::f64::consts::PI * hbar)).powf(0.25);
    quarter_root / (2f64.powi(n as i32) * factorial(n)).sqrt()
}

/// One-dimensional eigenfunction φ_n(x) = 𝒩_n exp(−mωx²/2ħ) H_n(√(mω/ħ) x).
pub fn eigenfunction_1d(
    n: usize,
    omega: Complex64,
    x: f64,
    mass: f64,
    hbar: f64,
) -> Result<Complex64> {
    check_branch(omega)?;
    let scale = (mass * omega / hbar).sqrt();
    let gauss = (-mass * omega * x * x / (2.0 * hbar)).exp();
    Ok(normalization(n, omega, mass, hbar) * gauss * hermite(n, scale * x))
}

/// dφ_n/dx, using H_n' = 2n H_{n−1}.
pub fn eigenfunction_1d_deriv(
    n: usize,
    omega: Complex64,
    x: f64,
    mass: f64,
    hbar: f64,
) -> Result<Complex64> {
    check_branch(omega)?;
    let scale = (mass * omega / hbar).sqrt();
    let z = scale * x;
    let gauss = (-mass * omega * x * x / (2.0 * hbar)).exp();
    let poly = if n == 0 {
        -mass * omega / hbar * x * hermite(0, z)
    } else {
        -mass * omega / hbar * x * hermite(n, z) + scale * 2.0 * (n as f64) * hermite(n - 1, z)
    };
    Ok(normalization(n, omega, mass, hbar) * gauss * poly)
}

/// Product eigenfunction φ_n⃗(x⃗) = Π_j φ_{n_j}(x_j).
pub fn eigenfunction(
    n: &[usize; 3],
    omega: &[Complex64; 3],
    x: &[f64; 3],
    mass: f64,
    hbar: f64,
) -> Result<Complex64> {
    let mut value = Complex64::new(1.0, 0.0);
    for j in 0..3 {
        value *= eigenfunction_1d(n[j], omega[j], x[j], mass, hbar)?;
    }
    Ok(value)
}

fn check_branch(omega: Complex64) -> Result<()> {
    if !(omega.re > 0.0) {
        return Err(Error::Domain(format!(
            "omega = {omega} lies on the wrong side of the principal branch cut (need Re > 0)"
        )));
    }
    Ok(())
}
