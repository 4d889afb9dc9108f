//! Error taxonomy shared by every module in the crate.
//!
//! Constructors and model kernels return [`Error`] values instead of panicking so that
//! callers (the CLI in particular) can map each failure class to a distinct diagnostic
//! and exit code. Variants carry enough context to reproduce the failing call.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building scenarios or evaluating models.
#[derive(Debug, Error)]
pub enum Error {
    /// Link geometry violated a constructor precondition (negative height, negative
    /// ground separation, coincident transceivers, nonpositive wavelength).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Spherical placement violated a constructor precondition.
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    /// Panel description violated a constructor precondition (odd or tiny grid,
    /// nonpositive pitch, negative height, coefficient grid of the wrong length).
    #[error("invalid panel: {0}")]
    InvalidPanel(String),

    /// Reflection coefficient outside the passive range or not finite.
    #[error("invalid reflection coefficient: {0}")]
    InvalidReflection(String),

    /// Radiation pattern parameter out of range.
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// Gain values must be finite when given in dB.
    #[error("invalid gains: {0}")]
    InvalidGains(String),

    /// The two-path phase difference `4 pi X / (lambda d)` is undefined at `d = 0`.
    #[error("ground separation is zero, so the two-path phase difference is undefined")]
    ZeroGroundSeparation,

    /// Element index lies outside the panel grid.
    #[error("element index (n = {n}, m = {m}) outside a grid of {rows} rows x {cols} columns")]
    ElementIndexOutOfRange { n: i32, m: i32, rows: u32, cols: u32 },

    /// Two points coincide, so a direction or distance between them is undefined.
    #[error("points coincide, so the distance and direction are undefined")]
    CoincidentPoints,

    /// Conversion to dBm requires a strictly positive power in watts.
    #[error("power must be strictly positive to convert to dBm, got {0} W")]
    NonpositivePower(f64),

    /// Scenario-level validation failed; every violation is listed.
    #[error("scenario validation failed: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),

    /// A closed-form kernel was asked to evaluate a panel whose elements do not share
    /// one reflection coefficient.
    #[error("closed-form kernels require a uniform reflection coefficient across the panel")]
    NonUniformCoefficients,

    /// Preset lookup failed.
    #[error("unknown preset '{name}'; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    /// Sweep description failed validation before any row was evaluated.
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    /// A single sweep row failed; the variant and swept value identify the row.
    #[error("sweep row failed (variant '{variant}', {param} = {value}): {source}")]
    SweepRow {
        variant: String,
        param: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}
