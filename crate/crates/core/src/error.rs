//! Error taxonomy shared by every module in the crate.
//!
//! Three failure classes cover the whole surface: a *configuration* that can
//! never be valid (rejected before any computation), an *input* that does not
//! match its contract (length mismatches, empty blocks), and *degenerate*
//! numerical situations that make a requested quantity undefined (an
//! estimation window with zero reference energy, a suppression ratio over a
//! silent signal).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter set that is invalid regardless of the data fed to it.
    Config(String),
    /// Data that violates an operation's preconditions.
    Input(String),
    /// A window whose reference energy is exactly zero; the Wiener weight
    /// is undefined there.
    DegenerateWindow { start: usize, len: usize },
    /// A metric whose defining ratio is 0/0 (for example suppression of a
    /// signal with no power at all).
    UndefinedMetric(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::DegenerateWindow { start, len } => write!(
                f,
                "degenerate window: zero reference energy over samples {start}..{}",
                start + len
            ),
            Error::UndefinedMetric(msg) => write!(f, "undefined metric: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
