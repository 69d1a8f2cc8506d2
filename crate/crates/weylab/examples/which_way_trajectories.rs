//! Pilot trajectories through the double slit: launches an ensemble from
//! the initial |psi|^2, shows the no-crossing property, and classifies
//! screen points by backward tracing.
//!
//! Run with: cargo run -p weylab --example which_way_trajectories

use weylab::bohmian::{self, IntegrationControl, WhichWay};
use weylab::wavepacket::SlitState;

fn main() {
    let state = SlitState::double_slit(1.5, 8.0, 5.0, 8.0 / std::f64::consts::PI);
    let ctrl = IntegrationControl::default();

    // a fan of trajectories from the slit plane, all starting at y = 0
    println!("trajectory fan (t = 0 -> 0.7), x at selected times:");
    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "x(0)", "x(0.2)", "x(0.4)", "x(0.6)", "x(0.7)");
    let mut fan = Vec::new();
    for i in 0..9 {
        let x0 = -2.0 + 4.0 * i as f64 / 8.0;
        if x0 == 0.0 {
            continue; // the symmetry axis is the separatrix itself
        }
        let traj = bohmian::integrate_fixed(&state, x0, 0.0, 0.0, 0.7, 350).unwrap();
        let at = |t: f64| {
            traj.points
                .iter()
                .min_by(|a, b| {
                    (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap()
                })
                .unwrap()
                .x
        };
        println!(
            "{:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            x0,
            at(0.2),
            at(0.4),
            at(0.6),
            at(0.7)
        );
        fan.push(traj);
    }

    // no-crossing: x-order is preserved at every shared step
    let steps = fan[0].points.len();
    let ordered = (0..steps).all(|s| {
        fan.windows(2)
            .all(|pair| pair[0].points[s].x < pair[1].points[s].x)
    });
    println!();
    println!("x-order preserved at all {steps} shared time steps: {ordered}");

    // backward classification of screen points
    println!();
    println!("which-way labels on the screen (t = 0.7, y = 3.5):");
    for x in [-2.5, -1.0, -0.3, 0.3, 1.0, 2.5] {
        let label = bohmian::which_way(&state, x, 3.5, 0.7, &ctrl).unwrap();
        let side = match label {
            WhichWay::A => "right slit",
            WhichWay::B => "left slit",
            WhichWay::Undecided => "separatrix",
        };
        println!("  x = {x:>5.2}  ->  {label}  ({side})");
    }

    let sep = bohmian::separatrix(&state, 0.7, 3.5, -2.0, 2.0, 1e-9, &ctrl).unwrap();
    println!();
    println!("flux-free separatrix: x = {sep:.2e} (symmetric state keeps it at 0)");

    // per-trajectory gauge line integrals under a loop flux: the A path
    // carries none in the canonical gauge, the B path carries the loop
    let consts = weylab::constants::PhysicalConstants::natural();
    let particle = weylab::constants::Particle::new(1.0, 0.0).unwrap();
    let flux = weylab::abdensity::FluxConfig::new(std::f64::consts::FRAC_PI_4);
    println!();
    println!("scale factor accumulated along each path (loop flux pi/4):");
    for x0 in [1.2, -1.2] {
        let mut traj = bohmian::integrate_fixed(&state, x0, 0.0, 0.0, 0.7, 350).unwrap();
        traj.assign_line_integral(&flux).unwrap();
        let scale = weylab::constants::scale_factor(&particle, traj.line_integral, &consts);
        println!(
            "  slit {}: line integral = {:.6}, scale 1[C] = {scale:.6}",
            traj.which_way, traj.line_integral
        );
    }
}
