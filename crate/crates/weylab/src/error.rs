//! Error types shared across the crate.

use crate::bohmian::Trajectory;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input violated a precondition (nonpositive mass, out-of-range
    /// probability, query outside a grid domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The wavefunction magnitude fell below the node threshold, where the
    /// guidance velocity is undefined. Carries the partial trajectory when
    /// the node was hit mid-integration.
    #[error("node encountered at ({x:.6}, {y:.6}, t = {t:.6}): |psi| = {magnitude:.3e} < {threshold:.3e}")]
    Node {
        x: f64,
        y: f64,
        t: f64,
        magnitude: f64,
        threshold: f64,
        partial: Option<Box<Trajectory>>,
    },

    /// Backward tracing ended on the slit plane without a definite x-sign.
    #[error("which-way undecided: trajectory reaches the slit plane at x = {x_at_slit_plane:.3e}")]
    Undecided { x_at_slit_plane: f64 },

    /// Bisection was asked to find a separatrix but both bracket endpoints
    /// classify to the same slit.
    #[error("no separatrix bracket: both endpoints classify as slit {0}")]
    NoBracket(crate::bohmian::WhichWay),

    /// A numerical procedure failed to reach its documented accuracy
    /// (quadrature non-convergence, spectral aliasing, truncation tail, ...).
    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
