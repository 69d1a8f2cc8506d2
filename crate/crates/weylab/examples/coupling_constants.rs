//! Prints the coupling constants of the theory and the flux scales an
//! experiment would need.
//!
//! Run with: cargo run -p weylab --example coupling_constants

use weylab::constants::{self, Particle, PhysicalConstants};

fn main() {
    let c = PhysicalConstants::codata2018();

    println!("CGS-Gaussian coupling constants");
    println!("-------------------------------");
    println!("alpha   (phase coupling)        = {:.9e}", constants::alpha(&c));
    println!("alpha_G (gravitational)         = {:.9e}", constants::alpha_g(&c));
    println!("alpha_S (scale coupling)        = {:.9e}", constants::alpha_s(&c));
    println!(
        "alpha_S / alpha                 = {:.9e}   (scale effects ~1e-22 of phase effects)",
        constants::alpha_s(&c) / constants::alpha(&c)
    );
    println!(
        "sqrt(alpha * alpha_G)           = {:.9e}   (same number, independent route)",
        (constants::alpha(&c) * constants::alpha_g(&c)).sqrt()
    );
    println!();

    let electron = Particle::new(c.m_e, c.e).unwrap();
    println!(
        "electron imaginary coupling e_I = {:.9e} esu   (e_I/e = {:.3e})",
        electron.imaginary_coupling(&c),
        electron.imaginary_coupling(&c) / c.e
    );
    println!(
        "flux quantum hc/e               = {:.9e} G cm^2",
        constants::flux_quantum(&c)
    );
    println!();

    println!("What a 10% amplitude change takes");
    println!("---------------------------------");
    for (label, mass) in [("electron", c.m_e), ("heavy molecule (1e-19 g)", 1.0e-19)] {
        let flux = constants::flux_for_scale(mass, 1.1, &c).unwrap();
        let particle = Particle::new(mass, 0.0).unwrap();
        println!(
            "{label:>26}: flux = {flux:.6e} esu, m*flux = {:.6e} g esu, \
             check exp(-e_I flux / hbar c) = {:.6}",
            mass * flux,
            constants::scale_factor(&particle, flux, &c)
        );
    }
}
