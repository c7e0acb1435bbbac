use core::fmt;

/// Errors raised by the toolkit. Every fallible operation in the crate
/// returns this type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Expression text does not match the grammar.
    Syntax { pos: usize, msg: &'static str },
    /// Exponent after `^` is negative, fractional or too large.
    BadExponent { pos: usize },
    /// Coordinate or derivative axis outside `0..dim`.
    AxisOutOfRange { axis: usize, dim: usize },
    DimensionMismatch { expected: usize, found: usize },
    /// A plane wave is not periodic on the integration box.
    NotBoxCompatible { axis: usize, wave: f64, side: f64 },
    InvalidBox,
    /// An operation required a pure polynomial (no plane-wave factors).
    NotPolynomial,
    InvalidGaussian(&'static str),
    NotAntisymmetric { row: usize, col: usize },
    InvalidConfig(&'static str),
    TooFewFactors,
    /// No Gevrey bound can be derived for the inputs, so no remainder
    /// estimate is available.
    RemainderUnavailable,
    RemainderAboveTolerance { order: usize, bound: f64, tol: f64 },
    InvalidMass(f64),
    /// The momentum tail is above tolerance at the largest admissible cutoff.
    TailUnattainable { cutoff: f64, tail: f64 },
    TooManyPoints(usize),
    LengthMismatch { left: usize, right: usize },
    BoxMismatch,
    TooFewPairs(usize),
    RapidityOutOfRange(f64),
    GridTooCoarse { probe: [f64; 2], nyquist: f64 },
    ReferenceUnreliable { bound: f64, tol: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            Error::BadExponent { pos } => {
                write!(f, "syntax error at position {pos}: exponent must be a non-negative integer")
            }
            Error::AxisOutOfRange { axis, dim } => {
                write!(f, "coordinate index {axis} out of range for dimension {dim}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotBoxCompatible { axis, wave, side } => write!(
                f,
                "wave component {wave} on axis {axis} is not a multiple of 2pi/{side}"
            ),
            Error::InvalidBox => f.write_str("box side lengths must be positive and finite"),
            Error::NotPolynomial => f.write_str("expected a pure polynomial expression"),
            Error::InvalidGaussian(msg) => write!(f, "invalid gaussian test function: {msg}"),
            Error::NotAntisymmetric { row, col } => {
                write!(f, "theta is not antisymmetric at ({row}, {col})")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::TooFewFactors => f.write_str("a star product needs at least two factors"),
            Error::RemainderUnavailable => {
                f.write_str("no Gevrey bound available for these factors; remainder unknown")
            }
            Error::RemainderAboveTolerance { order, bound, tol } => write!(
                f,
                "remainder bound {bound:e} still above tolerance {tol:e} at order {order}"
            ),
            Error::InvalidMass(m) => write!(f, "mass must be positive and finite, got {m}"),
            Error::TailUnattainable { cutoff, tail } => write!(
                f,
                "momentum tail {tail:e} above tolerance at cutoff {cutoff}"
            ),
            Error::TooManyPoints(n) => write!(f, "{n}-point functions are not supported (max 4)"),
            Error::LengthMismatch { left, right } => {
                write!(f, "sequence lengths differ: {left} vs {right}")
            }
            Error::BoxMismatch => f.write_str("noncommuting factors must share one box"),
            Error::TooFewPairs(n) => write!(f, "need at least 3 test pairs, got {n}"),
            Error::RapidityOutOfRange(r) => write!(f, "rapidity {r} outside [-2, 2]"),
            Error::GridTooCoarse { probe, nyquist } => write!(
                f,
                "probe ({}, {}) beyond the translation grid resolution {nyquist}",
                probe[0], probe[1]
            ),
            Error::ReferenceUnreliable { bound, tol } => write!(
                f,
                "reference remainder bound {bound:e} exceeds {tol:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
