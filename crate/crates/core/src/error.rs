use thiserror::Error;

/// Errors raised by the library.
///
/// `Domain` and `SizeCap` are caller mistakes; `Assertion` means a checked
/// mathematical invariant failed at runtime.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    SizeCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("promise violated: {0}")]
    Promise(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::SizeCap { what, value, cap })
    } else {
        Ok(())
    }
}
