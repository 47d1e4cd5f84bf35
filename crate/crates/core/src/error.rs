use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element is not in the identity component (signs {sx}, {sy}); no real logarithm")]
    Orientation { sx: i8, sy: i8 },

    #[error("point maps to the line at infinity (w = {w:e})")]
    AtInfinity { w: f64 },

    #[error("matrix is singular (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("holonomy is not complete: {tag}")]
    IncompleteHolonomy { tag: String },

    #[error("point ({x}, {y}) lies outside the model domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("points are too close to antipodal for a unique spherical midpoint (d = {dist})")]
    AntipodalAmbiguity { dist: f64 },

    #[error("segment has zero length")]
    DegenerateSegment,

    #[error("segments are not congruent: {len_a} vs {len_b}")]
    LengthMismatch { len_a: f64, len_b: f64 },

    #[error("holonomy is not a translation torus: {tag}")]
    NotTranslation { tag: String },

    #[error("opposite sides of the parallelogram are not congruent: {len_a} vs {len_b}")]
    SideMismatch { len_a: f64, len_b: f64 },

    #[error("time schedule is empty")]
    EmptySchedule,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("side pairing moves its midline (residual {residual:e})")]
    InvarianceViolation { residual: f64 },

    #[error("holonomy is not a shear torus: {tag}")]
    NotShear { tag: String },

    #[error("basis is not closed under the bracket (residual {residual:e})")]
    NotClosed { residual: f64 },

    #[error("basis is linearly dependent")]
    DegenerateBasis,

    #[error("invalid diagonal path: exponents ({pe}, {qe}) must satisfy pe >= qe >= 0")]
    InvalidPath { pe: f64, qe: f64 },

    #[error("holonomy does not extend to the {orbifold} group: {detail}")]
    NotExtendable { orbifold: String, detail: String },

    #[error("conjugator diag({alpha}, {beta}, 1) must satisfy alpha >= beta >= 1")]
    InvalidConjugator { alpha: f64, beta: f64 },

    #[error("unknown orbifold tag {0:?}")]
    UnknownOrbifold(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Orientation { .. } => "OrientationError",
            Error::AtInfinity { .. } => "AtInfinity",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::IncompleteHolonomy { .. } => "IncompleteHolonomy",
            Error::OutsideDomain { .. } => "OutsideDomain",
            Error::AntipodalAmbiguity { .. } => "AntipodalAmbiguity",
            Error::DegenerateSegment => "DegenerateSegment",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotTranslation { .. } => "NotTranslation",
            Error::SideMismatch { .. } => "SideMismatch",
            Error::EmptySchedule => "EmptySchedule",
            Error::InvalidSchedule(_) => "InvalidSchedule",
            Error::InvarianceViolation { .. } => "InvarianceViolation",
            Error::NotShear { .. } => "NotShear",
            Error::NotClosed { .. } => "NotClosed",
            Error::DegenerateBasis => "DegenerateBasis",
            Error::InvalidPath { .. } => "InvalidPath",
            Error::NotExtendable { .. } => "NotExtendable",
            Error::InvalidConjugator { .. } => "InvalidConjugator",
            Error::UnknownOrbifold(_) => "UnknownOrbifold",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
