//! Simulation library for a pilot-wave quantum theory with a complex
//! electromagnetic gauge coupling e_C = q + i e_I, where the imaginary part
//! e_I = m √G attaches a path-dependent amplitude scale to the wavefunction
//! alongside the usual Aharonov-Bohm phase.
//!
//! The crate covers the theory's quantitative predictions end to end:
//!
//! * [`constants`] — coupling strengths, flux thresholds, and the scale
//!   analogue of the fine-structure constant;
//! * [`wavepacket`] — the double-slit wavefunction, analytically and on a
//!   split-step spectral grid;
//! * [`bohmian`] — guidance-equation trajectories, which-slit
//!   classification, and the screen separatrix;
//! * [`abdensity`] — the which-way-dependent equilibrium density and its
//!   orthodox and trajectory-averaged comparisons;
//! * [`oscillator`] — the complex-frequency harmonic oscillator;
//! * [`spectroscopy`] — non-Hermitian first-order perturbation theory:
//!   resonance curves, history (in)dependence, and Lorentzian linewidths;
//! * [`cli`] — the batch command-line front end.
//!
//! Start with the runnable examples (`cargo run -p weylab --example ...`)
//! for one walk-through per capability.

pub mod abdensity;
pub mod bohmian;
pub mod cli;
pub mod constants;
pub mod error;
pub mod oscillator;
pub mod spectroscopy;
pub mod wavepacket;

pub use error::{Error, Result};
