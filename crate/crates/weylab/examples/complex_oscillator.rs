//! The complex-frequency oscillator: spectrum with imaginary energy
//! corrections and an eigenfunction residual check.
//!
//! Run with: cargo run -p weylab --example complex_oscillator

use num_complex::Complex64;
use weylab::oscillator::{complex_frequency, eigenfunction_1d, eigenvalue, hermite};

fn main() {
    // an exaggerated imaginary coupling so the split is visible in print
    let e_c = Complex64::new(1.0, 2.0e-3);
    let mass = 1.0;
    let hbar = 1.0;
    let omega = [
        complex_frequency(1.0, e_c, mass).unwrap(),
        complex_frequency(1.3, e_c, mass).unwrap(),
        complex_frequency(1.7, e_c, mass).unwrap(),
    ];
    println!("e_C = {e_c}");
    for (j, w) in omega.iter().enumerate() {
        println!(
            "omega_{j} = {:.9} + {:.3e} i   (omega_I/omega_R = {:.3e})",
            w.re,
            w.im,
            w.im / w.re
        );
    }

    println!();
    println!("{:>10} {:>16} {:>14}", "(n)", "Re E", "Im E");
    for n in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 1], [3, 2, 1]] {
        let e = eigenvalue(&n, &omega, hbar);
        println!("{:>10} {:>16.9} {:>14.3e}", format!("{n:?}"), e.re, e.im);
    }

    // Hermite values at a complex point
    println!();
    let z = Complex64::new(0.8, 0.4);
    println!("Hermite polynomials at z = {z}:");
    for n in 0..5 {
        println!("  H_{n}(z) = {}", hermite(n, z));
    }

    // pointwise Schroedinger residual of an eigenfunction, via central
    // differences
    let n = 2usize;
    let w = omega[0];
    let e_n = hbar * w * (n as f64 + 0.5);
    let h = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..61 {
        let x = -3.0 + 6.0 * i as f64 / 60.0;
        let phi = |u: f64| eigenfunction_1d(n, w, u, mass, hbar).unwrap();
        let lap = (phi(x - h) - 2.0 * phi(x) + phi(x + h)) / (h * h);
        let residual = -hbar * hbar / (2.0 * mass) * lap + 0.5 * mass * w * w * x * x * phi(x)
            - e_n * phi(x);
        worst = worst.max(residual.norm());
    }
    println!();
    println!(
        "max |(H - E) phi_{n}| on [-3, 3] by finite differences: {worst:.3e} \
         (O(h^2) stencil, h = {h})"
    );
}
