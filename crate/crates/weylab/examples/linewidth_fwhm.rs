//! Imaginary energy corrections show up as a Lorentzian linewidth: in the
//! long-time limit the lineshape is Cauchy-Lorentz with FWHM = 2 omega^I.
//! Locates the half-maximum points numerically and compares.
//!
//! Run with: cargo run -p weylab --example linewidth_fwhm

use num_complex::Complex64;
use weylab::constants::PhysicalConstants;
use weylab::spectroscopy::{c1_squared_long_t, lorentzian_width, DriveField, TransitionPair};

fn main() {
    let consts = PhysicalConstants::natural();
    let omega_r = 1.0;
    let omega_i = 1e-3; // exaggerated test ratio; physical is ~1e-21
    let pair = TransitionPair::synthetic(
        omega_r,
        omega_i,
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    );
    let drive = DriveField::new(1.0, omega_r, [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
    let e_c = Complex64::new(1.0, 0.0);
    let t = 600.0; // omega_I * t = 0.6: long-time regime

    let curve = |w: f64| c1_squared_long_t(t, &pair, &drive.at_omega(w), e_c, 1.0, &consts).0;

    let peak = curve(omega_r);
    let half = peak / 2.0;
    let bisect = |mut lo: f64, mut hi: f64| {
        let rising = curve(lo) > half;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (curve(mid) > half) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let upper = bisect(omega_r, omega_r + 10.0 * omega_i);
    let lower = bisect(omega_r, omega_r - 10.0 * omega_i);

    println!("long-time lineshape at omega_I/omega_R = {omega_i:e}, t = {t}");
    println!("peak value at omega_R: {peak:.6e}");
    println!("half-maximum points:   omega_R + {:.9e}", upper - omega_r);
    println!("                       omega_R - {:.9e}", omega_r - lower);
    println!("measured FWHM:         {:.9e}", upper - lower);
    println!("2 * omega_I:           {:.9e}", lorentzian_width(&pair));
    println!(
        "relative mismatch:     {:.1e}",
        ((upper - lower) - lorentzian_width(&pair)).abs() / lorentzian_width(&pair)
    );

    println!();
    println!("profile (one # per 2% of peak):");
    for k in -8..=8 {
        let w = omega_r + k as f64 * omega_i / 2.0;
        let bar = "#".repeat((curve(w) / peak * 50.0).round() as usize);
        println!("omega_R {:+.4e}: {bar}", w - omega_r);
    }
}
