use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or kernel parameter lies outside the open unit disk.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input is too small or empty for the requested computation.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Closed-form derivatives are only provided up to a fixed order.
    #[error("derivative order {order} exceeds supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },
    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The Neumann iteration grew for too many consecutive steps.
    #[error("Neumann iteration diverged after {} steps", log.len())]
    Diverged { log: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;
