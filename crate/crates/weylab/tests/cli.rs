//! End-to-end checks of the `weylab` binary: exit codes, CSV contracts,
//! and determinism.

use std::process::Command;

fn weylab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weylab"))
}

fn run_ok(args: &[&str]) -> String {
    let out = weylab().args(args).output().expect("spawn weylab");
    assert!(
        out.status.success(),
        "weylab {args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

#[test]
fn constants_table() {
    let text = run_ok(&["constants"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["name", "value", "unit"]);
    let find = |name: &str| -> f64 {
        rows.iter()
            .find(|r| r[0] == name)
            .unwrap_or_else(|| panic!("row {name} missing"))[1]
            .parse()
            .unwrap()
    };
    assert!((find("alpha_scale_over_alpha") / 4.9e-22 - 1.0).abs() < 0.01);
    assert!((find("flux_quantum") / 4.14e-7 - 1.0).abs() < 0.005);
    assert!((find("imaginary_coupling_electron") / 2.35e-31 - 1.0).abs() < 0.01);

    // natural-unit mode is honored
    let natural = run_ok(&["constants", "--units", "natural"]);
    let (_, rows_n) = parse_csv(&natural);
    let hbar: f64 = rows_n.iter().find(|r| r[0] == "hbar").unwrap()[1]
        .parse()
        .unwrap();
    assert_eq!(hbar, 1.0);
}

#[test]
fn ab_profile_differs_from_control_iff_flux_is_nonzero() {
    let on = run_ok(&[
        "ab",
        "--flux",
        "0.7853981633974483",
        "--t",
        "0.7",
        "--y",
        "3.5",
        "--units",
        "natural",
        "--samples",
        "41",
    ]);
    let (header, rows) = parse_csv(&on);
    assert_eq!(
        header,
        [
            "x",
            "density_orthodox",
            "density_pilot",
            "which_way",
            "density_averaged"
        ]
    );
    assert_eq!(rows.len(), 41);
    let max_gap = rows
        .iter()
        .filter(|r| r[3] != "ambiguous")
        .map(|r| {
            let orthodox: f64 = r[1].parse().unwrap();
            let pilot: f64 = r[2].parse().unwrap();
            (orthodox - pilot).abs()
        })
        .fold(0.0f64, f64::max);
    assert!(max_gap > 1e-3, "flux run looks like the control: {max_gap:e}");
    // labels switch from B to A exactly once along the scan
    let labels: Vec<&str> = rows
        .iter()
        .map(|r| r[3].as_str())
        .filter(|l| *l != "ambiguous")
        .collect();
    let switches = labels.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(switches, 1);

    let off = run_ok(&[
        "ab",
        "--flux",
        "0",
        "--t",
        "0.7",
        "--y",
        "3.5",
        "--units",
        "natural",
        "--samples",
        "41",
    ]);
    let (_, rows_off) = parse_csv(&off);
    let max_gap_off = rows_off
        .iter()
        .filter(|r| r[3] != "ambiguous")
        .map(|r| {
            let orthodox: f64 = r[1].parse().unwrap();
            let pilot: f64 = r[2].parse().unwrap();
            (orthodox - pilot).abs()
        })
        .fold(0.0f64, f64::max);
    assert!(
        max_gap_off < 1e-10,
        "zero-flux control split by {max_gap_off:e}"
    );
}

#[test]
fn usage_errors_exit_2() {
    let out = weylab()
        .args(["ab", "--mass", "-1"])
        .output()
        .expect("spawn weylab");
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ERROR 2"), "stderr: {stderr}");

    // unknown flags are also usage errors (clap's own exit code)
    let out = weylab()
        .args(["ab", "--no-such-flag"])
        .output()
        .expect("spawn weylab");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trajectories_are_seed_deterministic() {
    let args = [
        "trajectories",
        "--count",
        "8",
        "--seed",
        "5",
        "--t",
        "0.5",
        "--stride",
        "50",
    ];
    let one = run_ok(&args);
    let two = run_ok(&args);
    assert_eq!(one, two, "same seed must give byte-identical output");

    let (header, rows) = parse_csv(&one);
    assert_eq!(header, ["trajectory_id", "t", "x", "y", "which_way"]);
    assert!(rows.len() > 8);
    for r in &rows {
        assert!(r[4] == "A" || r[4] == "B");
    }

    let other = run_ok(&[
        "trajectories",
        "--count",
        "8",
        "--seed",
        "6",
        "--t",
        "0.5",
        "--stride",
        "50",
    ]);
    assert_ne!(one, other, "different seeds should differ");
}

#[test]
fn oscillator_levels_and_samples() {
    let text = run_ok(&[
        "oscillator",
        "--max-n",
        "2",
        "--e-imag",
        "1e-3",
        "--units",
        "natural",
    ]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["nx", "ny", "nz", "energy_re", "energy_im"]);
    assert_eq!(rows.len(), 27);
    // ground state: E ~ (3/2) hbar omega with a positive imaginary part
    let ground = &rows[0];
    let re: f64 = ground[3].parse().unwrap();
    let im: f64 = ground[4].parse().unwrap();
    assert!((re - 1.5).abs() < 1e-3);
    assert!(im > 0.0);

    let samples = run_ok(&[
        "oscillator",
        "--state",
        "1,0,0",
        "--samples",
        "11",
        "--x-range",
        "-3:3",
    ]);
    let (header, rows) = parse_csv(&samples);
    assert_eq!(header, ["x", "psi_re", "psi_im"]);
    assert_eq!(rows.len(), 11);
    // odd state vanishes at the origin
    let mid: f64 = rows[5][1].parse().unwrap();
    assert!(mid.abs() < 1e-12);
}

#[test]
fn spectrum_peaks_at_the_resonant_sample() {
    let text = run_ok(&[
        "spectrum",
        "--ratio-imag",
        "1e-21",
        "--vbar-override",
        "1",
        "--v-override",
        "0",
        "--t",
        "10",
        "--samples",
        "201",
    ]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["omega", "c1sq", "probability", "regime_flag"]);
    assert_eq!(rows.len(), 201);
    let mut best = (0usize, f64::MIN);
    for (i, r) in rows.iter().enumerate() {
        let c1sq: f64 = r[1].parse().unwrap();
        if c1sq > best.1 {
            best = (i, c1sq);
        }
        assert_eq!(r[3], "ok");
    }
    // the default grid centers the resonance on the middle sample
    assert_eq!(best.0, 100, "peak at row {} instead of 100", best.0);
    let peak_omega: f64 = rows[best.0][0].parse().unwrap();
    let omega_r = 1.0; // natural units, unit couplings
    assert!((peak_omega - omega_r).abs() < 1e-12);
}

#[test]
fn out_flag_writes_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.csv");
    let out = weylab()
        .args(["constants", "--out", path.to_str().unwrap()])
        .output()
        .expect("spawn weylab");
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("name,value,unit\n"));
    // no stray temp files left behind
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path() != path)
        .collect();
    assert!(leftovers.is_empty(), "leftover files: {leftovers:?}");
}
