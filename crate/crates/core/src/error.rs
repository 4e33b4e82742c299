use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // lattice / fan input
    #[error("zero vector cannot generate a ray")]
    ZeroVector,
    #[error("ray {index} is not primitive: {ray}")]
    NonPrimitiveRay { index: usize, ray: String },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("fan has no rays")]
    EmptyRays,
    #[error("ray {index} has {found} entries, lattice rank is {expected}")]
    RayDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("lattice rank must be positive")]
    ZeroLatticeRank,
    #[error("ray index {index} out of range (fan has {count} rays)")]
    RayIndexOutOfRange { index: usize, count: usize },
    #[error("ray {index} is not used by any maximal cone")]
    UnusedRay { index: usize },
    #[error("maximal cone {cone} is empty")]
    EmptyCone { cone: usize },
    #[error("maximal cone {cone} is not simplicial: its rays are linearly dependent")]
    NonSimplicialCone { cone: usize },
    #[error("maximal cone {cone} is contained in maximal cone {other}")]
    NonMaximalCone { cone: usize, other: usize },
    #[error("fan declared complete fails a necessary condition: {reason}")]
    NotComplete { reason: String },

    // domain preconditions
    #[error("fan has a torus factor (rays span rank {span} < {rank}); the homogeneous quotient presentation is inapplicable")]
    TorusFactor { span: usize, rank: usize },
    #[error("{operation} requires a complete fan ({hypothesis})")]
    RequiresComplete {
        operation: &'static str,
        hypothesis: &'static str,
    },
    #[error("{0}")]
    Dimension(String),
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u64, right: u64 },
    #[error("{divisor} does not divide {multiple}")]
    NotDivisor { divisor: u64, multiple: u64 },
    #[error("level must be positive")]
    ZeroLevel,
    #[error("branch {branch} out of range 0..{count}")]
    InvalidBranch { branch: u64, count: u64 },
    #[error("modulus {rho} has no exact rational root of order {root}")]
    InexactRoot { rho: String, root: u64 },
    #[error("negative power of a zero coordinate")]
    ZeroInverse,
    #[error("point lies in the discriminant locus (zero coordinates {0:?})")]
    InDiscriminant(Vec<usize>),
    #[error("symmetry enumeration exceeds {0} permutations")]
    SymmetryTooLarge(u128),

    // parsing
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Input/parse problems as opposed to violated mathematical preconditions.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::TorusFactor { .. }
                | Error::RequiresComplete { .. }
                | Error::LevelMismatch { .. }
                | Error::NotDivisor { .. }
                | Error::InvalidBranch { .. }
                | Error::InexactRoot { .. }
                | Error::ZeroInverse
                | Error::InDiscriminant(_)
                | Error::SymmetryTooLarge(_)
                | Error::Dimension(_)
                | Error::ZeroLevel
        )
    }
}
