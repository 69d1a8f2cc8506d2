//! The split-step spectral solver as an independent arbiter: propagates
//! the double-slit state on a grid and compares against the closed-form
//! Gaussian evolution, pointwise.
//!
//! Run with: cargo run -p weylab --example grid_cross_check

use weylab::wavepacket::{evolve_grid, sample, GridSpec, SlitState};

fn main() {
    let state = SlitState::double_slit(1.5, 8.0, 5.0, 8.0 / std::f64::consts::PI);
    let grid = GridSpec::new((-18.0, 18.0), (-18.0, 18.0), 512, 512).unwrap();
    let t = 0.7;
    let steps = 140;

    println!(
        "grid: [{}, {}]^2, {}x{}, dt = {:.4e}",
        grid.x_min,
        grid.x_max,
        grid.nx,
        grid.ny,
        t / steps as f64
    );

    let initial = sample(&state, &grid, 0.0);
    println!("initial norm   = {:.12}", initial.norm());

    let evolved = evolve_grid(&initial, t / steps as f64, steps, 1.0, 1.0, None).expect("evolve");
    println!("evolved norm   = {:.12}  (free evolution is exactly unitary)", evolved.norm());
    println!(
        "spectral tail  = {:.3e}  (must stay below 1e-6)",
        evolved.spectral_tail_fraction()
    );

    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let analytic = state.evaluate(grid.x_at(ix), grid.y_at(iy), t);
            peak = peak.max(analytic.norm());
            worst = worst.max((analytic - evolved.value_at(ix, iy)).norm());
        }
    }
    println!();
    println!("max pointwise |psi_grid - psi_analytic| at t = {t}: {worst:.3e}");
    println!("peak |psi| at that time:                          {peak:.3e}");
    println!("=> the two representations agree to ~{:.1e} of the peak", worst / peak);
}
