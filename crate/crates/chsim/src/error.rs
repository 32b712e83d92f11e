use thiserror::Error;

/// Errors produced by the solver and its I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid run configuration (bad grid size, malformed config file, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Two values that must live on the same grid do not.
    #[error("grid mismatch: {expected} vs {got} nodes")]
    GridMismatch { expected: usize, got: usize },

    /// A field picked up a NaN or infinity.
    #[error("corrupt state at t = {t}: {context}")]
    CorruptState { t: f64, context: String },

    /// An operation's mathematical precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Plot emission failed. Plots are best effort; callers downgrade this
    /// to a warning.
    #[error("plot error: {0}")]
    Plot(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for the CLI: configuration problems exit 2,
    /// everything else exits 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
