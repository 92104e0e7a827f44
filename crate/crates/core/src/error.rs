//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("matrix is not unitary (max deviation {deviation:.3e}, tolerance {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("mode {mode} lies outside window {window}")]
    ModeOutsideWindow { mode: String, window: String },

    #[error("states live on different windows")]
    WindowMismatch,

    #[error("element `{element}` maps mode {mode} outside window {window}")]
    ImageEscapesWindow {
        element: String,
        mode: String,
        window: String,
    },

    #[error("amplitude leaked out of the window for input mode {mode} (column norm {norm:.6})")]
    Leakage { mode: String, norm: f64 },

    #[error("{name} must be a power of two, got {value}")]
    NotPowerOfTwo { name: &'static str, value: i64 },

    #[error("parameter out of regime: {0}")]
    Regime(String),

    #[error("path permutation is not a bijection: {0:?}")]
    NotBijection(Vec<usize>),

    #[error("element `{0}` requires a window with polarization enabled")]
    PolarizationRequired(&'static str),

    #[error("swap input outside its valid subspace: {0}")]
    SwapInvalidInput(String),

    #[error("netlist document error at {at}: {message}")]
    Schema { at: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(at: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            at: at.into(),
            message: message.into(),
        }
    }
}
