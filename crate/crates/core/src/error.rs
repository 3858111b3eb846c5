use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::lambda::LocalizedScalar;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Inverted base `N` must be positive.
    InvalidBase,
    /// Two operands live over different localizations.
    RingMismatch { left: u64, right: u64 },
    ZeroDenominator,
    /// A fraction whose denominator has a prime not inverted in the ring.
    NotInRing { numerator: BigInt, denominator: BigInt, base: u64 },
    NotSquare { rows: usize, cols: usize },
    DimensionMismatch { expected: usize, found: usize },
    /// The determinant (or norm) is not a unit; carries it as witness.
    NotInvertible { witness: LocalizedScalar },
    /// An integer that must be invertible in the ring is not.
    OrderNotInvertible { order: u64, base: u64 },
    /// The W-action on an indexed module family is inconsistent.
    CocycleViolation(String),
    InvalidGroup(String),
    InvalidSubgroup(String),
    /// The quotient by this kernel is not cyclic.
    NotCyclicQuotient,
    InvalidWeightFunction(String),
    /// A lattice failed to reach full rank.
    RankDeficient { achieved: usize, needed: usize },
    /// A `lambda_{-1}` weight that is fixed by the cyclic group.
    FixedWeight { residues: Vec<usize>, image_norm: LocalizedScalar },
    EmptySpace,
    /// A requested coefficient ring does not contain the required one.
    InvalidOverride { requested: u64, required: u64 },
    /// An isomorphism predicted by the theory failed to materialize.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBase => write!(f, "inverted base must be a positive integer"),
            Error::RingMismatch { left, right } => {
                write!(f, "ring mismatch: Z[1/{left}] vs Z[1/{right}]")
            }
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::NotInRing { numerator, denominator, base } => {
                write!(f, "{numerator}/{denominator} is not an element of Z[1/{base}]")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotInvertible { witness } => write!(f, "not invertible (witness {witness})"),
            Error::OrderNotInvertible { order, base } => {
                write!(f, "{order} is not invertible in Z[1/{base}]")
            }
            Error::CocycleViolation(msg) => write!(f, "cocycle violation: {msg}"),
            Error::InvalidGroup(msg) => write!(f, "invalid group: {msg}"),
            Error::InvalidSubgroup(msg) => write!(f, "invalid subgroup: {msg}"),
            Error::NotCyclicQuotient => write!(f, "quotient is not cyclic"),
            Error::InvalidWeightFunction(msg) => write!(f, "invalid weight function: {msg}"),
            Error::RankDeficient { achieved, needed } => {
                write!(f, "lattice has rank {achieved}, needed {needed}")
            }
            Error::FixedWeight { residues, image_norm } => write!(
                f,
                "weights {residues:?} are fixed by the cyclic group (image norm {image_norm})"
            ),
            Error::EmptySpace => write!(f, "the space has no orbits"),
            Error::InvalidOverride { requested, required } => {
                write!(f, "override {requested} is not a multiple of {required}")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
