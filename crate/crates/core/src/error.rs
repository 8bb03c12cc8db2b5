use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown root system kind `{0}`")]
    UnknownKind(String),
    #[error("invalid multiplicity: {0}")]
    InvalidMultiplicity(String),
    #[error("vector is not a root of this system")]
    NotARoot,
    #[error("weight is not dominant")]
    NotDominant,
    #[error("operands belong to different root systems")]
    MixedSystems,
    #[error("exponential polynomial is not Weyl invariant")]
    NotInvariant,
    #[error("pole of the c-function at {0}")]
    PoleOfC(String),
    #[error("Gram matrix singular while orthogonalizing (this is a bug)")]
    SingularGram,
    #[error("shift-operator ansatz insufficient: {0}")]
    AnsatzInsufficient(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("quadrature under-resolved: {0}")]
    UnderResolved(String),
    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("radius not small: requested {requested} exceeds the admissible {admissible}")]
    RadiusNotSmall { requested: f64, admissible: f64 },
    #[error("operation unsupported for this system: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("exact identity failed: {0}")]
    IdentityFailed(String),
    #[error("point outside the admissible domain S: {0}")]
    OutsideDomain(String),
}

impl Error {
    /// CLI exit code classes: 2 config, 3 numerical gate, 1 everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownKind(_)
            | Error::InvalidMultiplicity(_)
            | Error::InvalidConfig(_)
            | Error::RadiusNotSmall { .. }
            | Error::OutsideDomain(_)
            | Error::NotDominant
            | Error::NotARoot => 2,
            Error::UnderResolved(_) | Error::TruncationInsufficient(_) => 3,
            _ => 1,
        }
    }
}
