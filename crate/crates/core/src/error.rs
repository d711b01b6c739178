use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("series coefficient t^{requested} requested beyond tracked precision {precision}")]
    PrecisionExhausted { requested: i64, precision: i64 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("curve degree {0} is below 4")]
    DegreeTooSmall(u32),
    #[error("curve is singular at {witness}")]
    SingularCurve { witness: String },
    #[error("curve failed the irreducibility screen: {0}")]
    ReducibleCurve(String),
    #[error("only {found} rational points found, {requested} requested")]
    NotEnoughPoints { found: usize, requested: usize },
    #[error("no usable chart at {0}")]
    ChartFailure(String),
    #[error("point {0} does not lie on the curve")]
    PointNotOnCurve(String),
    #[error("Mittag-Leffler system inconsistent: the form is not in the kernel of the cup product")]
    NotInKernel,
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("auxiliary normalization point is a pole")]
    AuxPointIsPole,
    #[error("class has no tail representative; a cocycle-level representative is required")]
    NeedsTailRepresentative,
    #[error("no adjoint form G solves the division identity for pair ({0}, {1})")]
    DivisionObstruction(usize, usize),
    #[error("phi does not lie in W")]
    PhiNotInW,
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("string index {0} lies outside W")]
    IndexOutsideW(usize),
    #[error("string has length {0}, at least 3 required")]
    StringTooShort(usize),
    #[error("no rational base point found (common-zero system has {residual_dim} independent conditions)")]
    BasePointNotFound { residual_dim: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable variant name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::InvalidField(_) => "InvalidField",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::DegreeTooSmall(_) => "DegreeTooSmall",
            Error::SingularCurve { .. } => "SingularCurve",
            Error::ReducibleCurve(_) => "ReducibleCurve",
            Error::NotEnoughPoints { .. } => "NotEnoughPoints",
            Error::ChartFailure(_) => "ChartFailure",
            Error::PointNotOnCurve(_) => "PointNotOnCurve",
            Error::NotInKernel => "NotInKernel",
            Error::GenericityFailure(_) => "GenericityFailure",
            Error::AuxPointIsPole => "AuxPointIsPole",
            Error::NeedsTailRepresentative => "NeedsTailRepresentative",
            Error::DivisionObstruction(..) => "DivisionObstruction",
            Error::PhiNotInW => "PhiNotInW",
            Error::CertificateFailure(_) => "CertificateFailure",
            Error::IndexOutsideW(_) => "IndexOutsideW",
            Error::StringTooShort(_) => "StringTooShort",
            Error::BasePointNotFound { .. } => "BasePointNotFound",
            Error::Precondition(_) => "Precondition",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }

    /// A mathematical inconsistency: always a bug, never bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_) | Error::DivisionObstruction(..) | Error::CertificateFailure(_))
    }

    /// The equation was parsed but does not define an accepted curve.
    pub fn is_curve_rejection(&self) -> bool {
        matches!(
            self,
            Error::NotHomogeneous | Error::DegreeTooSmall(_) | Error::SingularCurve { .. } | Error::ReducibleCurve(_)
        )
    }
}
