use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fundamental angular frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("signals have different fundamental frequencies ({left} vs {right} rad/s)")]
    MismatchedFrequency { left: f64, right: f64 },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid network element: {0}")]
    InvalidElement(String),

    #[error("singular admittance at harmonic order {order}")]
    SingularAdmittance { order: u32 },

    #[error("admittance table has no entry for harmonic order {order}")]
    MissingTableOrder { order: u32 },

    #[error("source voltage has zero rms value")]
    ZeroSource,

    #[error("apparent power is zero")]
    ZeroApparentPower,

    #[error("source voltage has no AC content")]
    NoAcContent,

    #[error("harmonic order {order} is absent from the source voltage")]
    HarmonicAbsent { order: u32 },

    #[error("{samples} samples cannot resolve harmonic order {max_order} (need more than {})", 2 * max_order)]
    TooFewSamples { samples: usize, max_order: u32 },

    #[error("numerical consistency check failed: {0}")]
    NumericalInconsistency(String),

    #[error("unsupported compensator order: series LC needs exactly two reactive harmonics, found {harmonics}")]
    UnsupportedCompensatorOrder { harmonics: usize },

    #[error("nonphysical compensator (L = {inductance}, C = {capacitance})")]
    NonphysicalCompensator { inductance: f64, capacitance: f64 },

    #[error("compensator branch current deviates from the target by {deviation:e} (relative)")]
    CompensatorMismatch { deviation: f64 },
}
