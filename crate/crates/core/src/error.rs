use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The thermal series needs more terms than the configured cap allows.
    #[error(
        "series truncation needs {needed} terms but max_terms is {cap} \
         (beta*omega = {beta_omega} is too small for tail tolerance {tolerance:e})"
    )]
    TruncationOverflow {
        needed: usize,
        cap: usize,
        beta_omega: f64,
        tolerance: f64,
    },

    #[error("the cosine form of L3 requires g = 1 and omega = 1 (got g = {g}, omega = {omega})")]
    Normalization { g: f64, omega: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision budget of {digits} decimal digits cannot certify the result: {reason}")]
    Precision { digits: u32, reason: String },

    #[error("step {dt} is degenerate: {m}*dt is a multiple of 2*pi")]
    DegenerateStep { dt: f64, m: i64 },

    #[error("scale factor s = {s} lies outside the admissible window ({lo}, {hi}) for dt = {dt}")]
    BoundsViolation { s: f64, lo: f64, hi: f64, dt: f64 },

    #[error("Fock truncation n_max = {n_max} leaves thermal weight {weight:e} above tolerance {tolerance:e}")]
    TruncationTooSmall {
        n_max: usize,
        weight: f64,
        tolerance: f64,
    },

    #[error("point cloud is empty")]
    EmptyCloud,
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
