//! Error type shared across the simulator.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A device was driven outside its electrical limits.
    #[error("attenuator current {current_ma} mA outside [0, {max_ma}] mA")]
    CurrentOutOfRange { current_ma: f64, max_ma: f64 },

    #[error("optical power must be non-negative, got {0} W")]
    NegativePower(f64),

    #[error("heater voltage {voltage} V outside [0, {max}] V")]
    HeaterOverLimit { voltage: f64, max: f64 },

    #[error("invalid device parameter: {0}")]
    InvalidParams(String),

    /// Beam/aperture combinations the imaging model does not cover.
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("invalid routing plan: {0}")]
    InvalidPlan(String),

    #[error("invalid chip state: {0}")]
    InvalidState(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("weight {0} exceeds unity transmission")]
    WeightAboveUnity(f64),

    /// Threshold fitting saw no sample for a class.
    #[error("class {0} absent from the fitted stream")]
    IncompleteFit(u8),

    #[error("invalid dataset spec: {0}")]
    InvalidDataset(String),

    #[error("scene value {0} outside [0, 1]")]
    SceneOutOfRange(f64),

    #[error("unknown glyph variant {index} for letter '{letter}'")]
    UnknownVariant { letter: char, index: usize },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
