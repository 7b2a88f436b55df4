use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A closure or search would exceed the configured element cap.
    #[error("order cap exceeded: {what} needs {needed}, cap is {cap}")]
    OrderCap { what: &'static str, needed: u64, cap: u64 },
    /// Input failed a structural check (non-invertible generator, broken table, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// A precondition on the arguments does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numeric routine could not reach the requested precision.
    #[error("precision {requested:e} unreachable; best value {best} with error bound {bound:e}")]
    Precision { requested: f64, best: f64, bound: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
