//! History independence of spectral frequencies: the resonance curve peaks
//! at omega = omega^R_np no matter what scale factor the particle's past
//! attached to it. Intensities, by contrast, carry the history.
//!
//! Run with: cargo run -p weylab --example resonance_scan

use num_complex::Complex64;
use weylab::constants::PhysicalConstants;
use weylab::spectroscopy::{centered_grid, scan_row, DriveField, TransitionPair};

fn main() {
    let consts = PhysicalConstants::natural();
    let omega_r = 1.0;
    // physical-scale imaginary part and a unit resonant element
    let pair = TransitionPair::synthetic(
        omega_r,
        1e-21 * omega_r,
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    );
    let drive = DriveField::new(1.0, omega_r, [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
    let e_c = Complex64::new(1.0, 0.0);
    let t = 10.0;

    let omegas = centered_grid(omega_r, 0.5 * omega_r, 100);
    println!("resonance scan, omega in [{:.2}, {:.2}], t = {t}", omegas[0], omegas.last().unwrap());
    println!();
    println!("{:>12} {:>14} {:>14} {:>14}", "history", "peak omega", "peak P", "P(omega_R)/4?");

    let mut peaks = Vec::new();
    for history in [0.5, 1.0, 2.0] {
        let mut best = (0.0, f64::MIN);
        for &w in &omegas {
            let row = scan_row(&pair, &drive, w, t, e_c, 1.0, history, false, &consts).unwrap();
            if row.probability > best.1 {
                best = (w, row.probability);
            }
        }
        peaks.push(best);
        println!(
            "{:>12} {:>14.6} {:>14.6e} {:>14}",
            history,
            best.0,
            best.1,
            if history == 2.0 { "yes: 1/scale^2" } else { "" }
        );
    }

    println!();
    assert!(peaks.iter().all(|p| p.0 == omega_r));
    println!("peak location is history-independent (always omega = omega^R = {omega_r});");
    println!(
        "peak intensity is history-dependent: doubling the scale divides P by {:.3}",
        peaks[1].1 / peaks[2].1
    );

    // a small ascii rendering of the lineshape around the peak
    println!();
    for &w in omegas.iter().step_by(10) {
        let row = scan_row(&pair, &drive, w, t, e_c, 1.0, 1.0, false, &consts).unwrap();
        let bar = "#".repeat((row.c1_squared / 2.0).round() as usize);
        println!("omega = {w:<8.3} |c1|^2 = {:>9.3e} {bar}", row.c1_squared);
    }
}
