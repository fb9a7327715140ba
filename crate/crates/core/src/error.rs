use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exterior power Λ^{k} of a {dim}-dimensional space is zero")]
    ExteriorDegree { k: usize, dim: usize },

    #[error("weight character is not an effective sl2 character")]
    NotACharacter,

    #[error("profile is not divisible: degree {degree} needs a block of size {block} that is not present")]
    NotDivisible { degree: usize, block: usize },

    #[error("deconvolution factor must be one trivial block in degree 0, found {0}")]
    FactorNotUnital(String),

    #[error("inconsistent dual complex: {0}")]
    InconsistentComplex(String),

    #[error("cell `{cell}` has no Betti number for degree {degree}")]
    MissingStratumData { cell: String, degree: usize },

    #[error("ideal rank still growing in degree {degree} after {samples} isotropic samples (rank {rank})")]
    NotStabilized {
        degree: usize,
        samples: usize,
        rank: usize,
    },

    #[error("quadratic form has no rational isotropic vectors: {0}")]
    NoIsotropicVectors(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid fixture: {0}")]
    InvalidFixture(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
