//! Batch command-line front end. Five subcommands, each emitting one CSV
//! table (stdout by default, or atomically to `--out`):
//!
//! * `constants`    — coupling constants and derived ratios
//! * `ab`           — double-slit screen profile, orthodox vs pilot density
//! * `trajectories` — a seeded ensemble of pilot trajectories
//! * `oscillator`   — complex level spectrum or eigenfunction samples
//! * `spectrum`     — resonance scan of the first-order lineshape
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error. Failures are
//! reported on stderr as `ERROR <code> <message>`. `WEYLAB_THREADS` caps
//! the worker pool.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::abdensity::{self, FluxConfig};
use crate::bohmian::{self, IntegrationControl, WhichWay};
use crate::constants::{self, Particle, PhysicalConstants};
use crate::error::Error;
use crate::oscillator;
use crate::spectroscopy::{self, DriveField, TransitionPair};
use crate::wavepacket::SlitState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// CGS-Gaussian with CODATA 2018 values.
    Cgs,
    /// Natural simulation units m = G = hbar = c = 1.
    Natural,
}

impl Units {
    pub fn constants(self) -> PhysicalConstants {
        match self {
            Units::Cgs => PhysicalConstants::codata2018(),
            Units::Natural => PhysicalConstants::natural(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "weylab",
    about = "Pilot-wave double-slit densities and complex-frequency oscillator spectroscopy",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coupling constants table (name,value,unit).
    Constants(ConstantsArgs),
    /// Double-slit screen profile: orthodox, pilot, and averaged densities.
    Ab(AbArgs),
    /// Seeded trajectory ensemble through the double slit.
    Trajectories(TrajectoriesArgs),
    /// Complex oscillator spectrum or eigenfunction samples.
    Oscillator(OscillatorArgs),
    /// Resonance scan of the first-order transition lineshape.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_enum, default_value = "cgs")]
    pub units: Units,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AbArgs {
    /// Loop flux around the solenoid (esu in cgs, dimensionless in natural
    /// units).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    pub flux: f64,
    /// Particle charge (esu).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub charge: f64,
    /// Particle mass (g, or 1 in natural units).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mass: f64,
    /// Override the derived imaginary coupling e_I = m sqrt(G).
    #[arg(long = "eI-override", allow_hyphen_values = true)]
    pub e_i_override: Option<f64>,
    /// Detection time.
    #[arg(long, default_value_t = 0.7)]
    pub t: f64,
    /// Screen line y-coordinate.
    #[arg(long, default_value_t = 3.5)]
    pub y: f64,
    /// Screen x-range as lo:hi.
    #[arg(long, default_value = "-4:4", value_parser = parse_range, allow_hyphen_values = true)]
    pub x_range: (f64, f64),
    /// Number of screen samples.
    #[arg(long, default_value_t = 161)]
    pub samples: usize,
    /// Branch-A weight of the averaged comparison density.
    #[arg(long, default_value_t = 0.5)]
    pub p_a: f64,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoriesArgs {
    /// Number of trajectories.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// RNG seed for the initial |psi|^2 sampling.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Final time.
    #[arg(long, default_value_t = 0.7)]
    pub t: f64,
    /// Fixed integrator step.
    #[arg(long, default_value_t = 2e-3)]
    pub dt: f64,
    /// Emit every k-th step.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    /// Loop flux dressing the guidance state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub flux: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub charge: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mass: f64,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OscillatorArgs {
    /// Potential couplings lambda_x,lambda_y,lambda_z.
    #[arg(long, default_value = "1,1,1", value_parser = parse_triple_f64)]
    pub lambda: [f64; 3],
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Real part of the gauge coupling.
    #[arg(long, default_value_t = 1.0)]
    pub e_real: f64,
    /// Imaginary part of the gauge coupling (e_I).
    #[arg(long, default_value_t = 0.0)]
    pub e_imag: f64,
    /// Enumerate levels with n_x, n_y, n_z up to this bound.
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    /// Sample the eigenfunction of --state along x instead of listing levels.
    #[arg(long, value_parser = parse_triple_usize)]
    pub state: Option<[usize; 3]>,
    /// Sampling range lo:hi for --state.
    #[arg(long, default_value = "-5:5", value_parser = parse_range, allow_hyphen_values = true)]
    pub x_range: (f64, f64),
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Target level n_x,n_y,n_z.
    #[arg(long, default_value = "1,0,0", value_parser = parse_triple_usize)]
    pub n: [usize; 3],
    /// Initial level p_x,p_y,p_z.
    #[arg(long, default_value = "0,0,0", value_parser = parse_triple_usize)]
    pub p: [usize; 3],
    #[arg(long, default_value = "1,1,1", value_parser = parse_triple_f64)]
    pub lambda: [f64; 3],
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Magnitude of the gauge coupling.
    #[arg(long, default_value_t = 1.0)]
    pub e_magnitude: f64,
    /// Exaggerated omega_I/omega_R ratio of the oscillator frequencies.
    #[arg(long, default_value_t = 1e-3)]
    pub ratio_imag: f64,
    /// Drive amplitude.
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    /// Interaction half-window (the perturbation acts over (-t, t)).
    #[arg(long, default_value_t = 10.0)]
    pub t: f64,
    /// Scan range lo:hi; default is a symmetric window around the
    /// resonance with the resonant frequency on the grid.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub omega_range: Option<(f64, f64)>,
    /// Number of scan samples (forced odd for a centered default grid).
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Pre-interaction history scale dividing the probability.
    #[arg(long, default_value_t = 1.0)]
    pub history_scale: f64,
    /// Use the long-time Cauchy-Lorentz form instead of the small-t form.
    #[arg(long, default_value_t = false)]
    pub long_time: bool,
    /// Override the resonant matrix element V-bar.
    #[arg(long, allow_hyphen_values = true)]
    pub vbar_override: Option<f64>,
    /// Override the antiresonant matrix element V.
    #[arg(long, allow_hyphen_values = true)]
    pub v_override: Option<f64>,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad hi: {e}"))?;
    if !(hi > lo) {
        return Err(format!("range must be increasing, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_triple_f64(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|e| format!("bad value: {e}"))?;
    }
    Ok(out)
}

fn parse_triple_usize(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated integers, got '{s}'"));
    }
    let mut out = [0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|e| format!("bad value: {e}"))?;
    }
    Ok(out)
}

/// Default double-slit preparation: packets of width 8 at x = ±1.5 with
/// transverse wavevector 5 and prefactor 8/π, in natural units.
pub fn default_slit_state() -> SlitState {
    SlitState::double_slit(1.5, 8.0, 5.0, 8.0 / std::f64::consts::PI)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run_main() -> i32 {
    if let Ok(threads) = std::env::var("WEYLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n > 0 {
                // ignore failure when a global pool already exists
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(Failure::Numerical(msg)) => {
            eprintln!("ERROR 1 {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ERROR 2 {msg}");
            2
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Constants(args) => {
            let csv = constants_csv(args.units);
            emit(args.out.as_deref(), &csv)
        }
        Command::Ab(args) => {
            let csv = ab_csv(&args)?;
            emit(args.out.as_deref(), &csv)
        }
        Command::Trajectories(args) => {
            let csv = trajectories_csv(&args)?;
            emit(args.out.as_deref(), &csv)
        }
        Command::Oscillator(args) => {
            let csv = oscillator_csv(&args)?;
            emit(args.out.as_deref(), &csv)
        }
        Command::Spectrum(args) => {
            let csv = spectrum_csv(&args)?;
            emit(args.out.as_deref(), &csv)
        }
    }
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => write_atomic(path, contents).map_err(|e| Failure::Numerical(e.to_string())),
    }
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// half-written table.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    use std::io::Write;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

pub fn constants_csv(units: Units) -> String {
    let c = units.constants();
    let (flux_unit, charge_unit) = match units {
        Units::Cgs => ("G cm^2", "esu"),
        Units::Natural => ("1", "1"),
    };
    let electron = Particle::new(c.m_e, c.e).expect("positive mass");
    let mut rows: Vec<(String, f64, &str)> = vec![
        ("speed_of_light".into(), c.c, if units == Units::Cgs { "cm/s" } else { "1" }),
        ("hbar".into(), c.hbar, if units == Units::Cgs { "erg s" } else { "1" }),
        ("planck_h".into(), c.h, if units == Units::Cgs { "erg s" } else { "1" }),
        ("g_newton".into(), c.g_newton, if units == Units::Cgs { "cm^3 g^-1 s^-2" } else { "1" }),
        ("elementary_charge".into(), c.e, charge_unit),
        ("electron_mass".into(), c.m_e, if units == Units::Cgs { "g" } else { "1" }),
        ("alpha".into(), constants::alpha(&c), "1"),
        ("alpha_gravitational".into(), constants::alpha_g(&c), "1"),
        ("alpha_scale".into(), constants::alpha_s(&c), "1"),
        (
            "alpha_scale_over_alpha".into(),
            constants::alpha_s(&c) / constants::alpha(&c),
            "1",
        ),
        (
            "imaginary_coupling_electron".into(),
            electron.imaginary_coupling(&c),
            charge_unit,
        ),
        ("flux_quantum".into(), constants::flux_quantum(&c), flux_unit),
        (
            "mass_flux_product_ten_percent".into(),
            constants::flux_for_scale(1.0, 1.1, &c).expect("valid"),
            if units == Units::Cgs { "g esu" } else { "1" },
        ),
    ];
    if units == Units::Cgs {
        rows.push((
            "flux_ten_percent_heavy_molecule".into(),
            constants::flux_for_scale(1.0e-19, 1.1, &c).expect("valid"),
            "esu",
        ));
    }
    let mut out = String::from("name,value,unit\n");
    for (name, value, unit) in rows {
        let _ = writeln!(out, "{name},{},{unit}", num(value));
    }
    out
}

fn ab_csv(args: &AbArgs) -> Result<String, Failure> {
    let consts = args.units.constants();
    if !(args.mass > 0.0) {
        return Err(Failure::Usage(format!(
            "mass must be > 0, got {}",
            args.mass
        )));
    }
    if args.samples < 2 {
        return Err(Failure::Usage("need at least 2 samples".into()));
    }
    if !(0.0..=1.0).contains(&args.p_a) {
        return Err(Failure::Usage(format!(
            "p-a must lie in [0, 1], got {}",
            args.p_a
        )));
    }
    let particle = match args.e_i_override {
        Some(e_i) => Particle::with_imaginary_coupling(args.mass, args.charge, e_i),
        None => Particle::new(args.mass, args.charge),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let flux = FluxConfig::new(args.flux);
    let state = default_slit_state();
    let xs: Vec<f64> = (0..args.samples)
        .map(|i| {
            args.x_range.0
                + (args.x_range.1 - args.x_range.0) * i as f64 / (args.samples - 1) as f64
        })
        .collect();
    let profile = abdensity::screen_profile(
        &state,
        &particle,
        &flux,
        &consts,
        args.t,
        args.y,
        &xs,
        args.p_a,
        &IntegrationControl::default(),
    )?;
    let mut out = String::from("x,density_orthodox,density_pilot,which_way,density_averaged\n");
    for s in &profile.samples {
        let label = match s.which_way {
            WhichWay::A => "A",
            WhichWay::B => "B",
            WhichWay::Undecided => "ambiguous",
        };
        let _ = writeln!(
            out,
            "{},{},{},{label},{}",
            num(s.x),
            num(s.orthodox),
            num(s.pilot),
            num(s.averaged)
        );
    }
    Ok(out)
}

fn trajectories_csv(args: &TrajectoriesArgs) -> Result<String, Failure> {
    use rand::SeedableRng;
    let consts = args.units.constants();
    if !(args.mass > 0.0) {
        return Err(Failure::Usage(format!(
            "mass must be > 0, got {}",
            args.mass
        )));
    }
    if args.count == 0 || args.dt <= 0.0 || args.t <= 0.0 || args.stride == 0 {
        return Err(Failure::Usage(
            "count, dt, t and stride must all be positive".into(),
        ));
    }
    let particle = Particle::new(args.mass, args.charge).map_err(|e| Failure::Usage(e.to_string()))?;
    let flux = FluxConfig::new(args.flux);
    let state = default_slit_state();
    let guidance = abdensity::dress(&state, &particle, &flux, &consts);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    // equilibrium launch weights are the undressed |psi(0)|^2: the branch
    // scale cancels against the history factor on the slit plane
    let starts = bohmian::sample_initial_positions(&state, args.count, &mut rng);
    let steps = (args.t / args.dt).ceil() as usize;
    let mut out = String::from("trajectory_id,t,x,y,which_way\n");
    for (id, &[x0, y0]) in starts.iter().enumerate() {
        let traj = bohmian::integrate_fixed(&guidance, x0, y0, 0.0, args.t, steps)?;
        let label = match traj.which_way {
            WhichWay::A => "A",
            WhichWay::B => "B",
            WhichWay::Undecided => "ambiguous",
        };
        for (k, p) in traj.points.iter().enumerate() {
            if k % args.stride == 0 || k == traj.points.len() - 1 {
                let _ = writeln!(out, "{id},{},{},{},{label}", num(p.t), num(p.x), num(p.y));
            }
        }
    }
    Ok(out)
}

fn oscillator_csv(args: &OscillatorArgs) -> Result<String, Failure> {
    let consts = args.units.constants();
    let e_c = Complex64::new(args.e_real, args.e_imag);
    let mut omega = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        omega[j] = oscillator::complex_frequency(args.lambda[j], e_c, args.mass)?;
    }
    match args.state {
        None => {
            let mut out = String::from("nx,ny,nz,energy_re,energy_im\n");
            for nx in 0..=args.max_n {
                for ny in 0..=args.max_n {
                    for nz in 0..=args.max_n {
                        let e = oscillator::eigenvalue(&[nx, ny, nz], &omega, consts.hbar);
                        let _ = writeln!(out, "{nx},{ny},{nz},{},{}", num(e.re), num(e.im));
                    }
                }
            }
            Ok(out)
        }
        Some(state) => {
            if args.samples < 2 {
                return Err(Failure::Usage("need at least 2 samples".into()));
            }
            let mut out = String::from("x,psi_re,psi_im\n");
            for i in 0..args.samples {
                let x = args.x_range.0
                    + (args.x_range.1 - args.x_range.0) * i as f64 / (args.samples - 1) as f64;
                let v = oscillator::eigenfunction(
                    &state,
                    &omega,
                    &[x, 0.0, 0.0],
                    args.mass,
                    consts.hbar,
                )?;
                let _ = writeln!(out, "{},{},{}", num(x), num(v.re), num(v.im));
            }
            Ok(out)
        }
    }
}

fn spectrum_csv(args: &SpectrumArgs) -> Result<String, Failure> {
    let consts = args.units.constants();
    if args.samples < 3 {
        return Err(Failure::Usage("need at least 3 samples".into()));
    }
    let e_c = spectroscopy::coupling_for_frequency_ratio(args.e_magnitude, args.ratio_imag);
    let mut omega = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        omega[j] = oscillator::complex_frequency(args.lambda[j], e_c, args.mass)?;
    }
    let drive = DriveField::new(args.a0, 1.0, [0.0, 1.0, 0.0], [1.0, 0.0, 0.0])
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let mut pair =
        TransitionPair::from_levels(args.p, args.n, omega, &drive, args.mass, &consts)?;
    if let Some(v_bar) = args.vbar_override {
        pair.v_bar = Complex64::new(v_bar, 0.0);
    }
    if let Some(v) = args.v_override {
        pair.v = Complex64::new(v, 0.0);
    }
    if pair.omega_real <= 0.0 {
        return Err(Failure::Usage(
            "scan requires an upward transition (omega_real > 0); swap --n and --p".into(),
        ));
    }
    let omegas: Vec<f64> = match args.omega_range {
        Some((lo, hi)) => (0..args.samples)
            .map(|i| lo + (hi - lo) * i as f64 / (args.samples - 1) as f64)
            .collect(),
        None => {
            let per_side = args.samples / 2;
            spectroscopy::centered_grid(pair.omega_real, 0.5 * pair.omega_real, per_side)
        }
    };
    let mut out = String::from("omega,c1sq,probability,regime_flag\n");
    for &w in &omegas {
        let row = spectroscopy::scan_row(
            &pair,
            &drive,
            w,
            args.t,
            e_c,
            args.mass,
            args.history_scale,
            args.long_time,
            &consts,
        )?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(row.omega),
            num(row.c1_squared),
            num(row.probability),
            row.regime
        );
    }
    Ok(out)
}
