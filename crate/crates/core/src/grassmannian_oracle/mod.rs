//! Brute-force check of the fixed-point theory over finite fields.
//!
//! A finite abelian group acts semisimply on `F_q^N` through a sum of declared
//! irreducible blocks. The points of `GL(N) / GL(n) x GL(N-n)` fixed by the
//! group are the invariant splittings `V + W`; they are finite in number
//! exactly when no subset of blocks of total dimension `n` separates two
//! isomorphic blocks, and then correspond to those subsets. Over a finite field
//! "infinitely many" shows up as a count that exceeds the subset count and
//! grows with `q`. The tangent space at `(V, W)` is `Hom(V, W) + Hom(W, V)`,
//! and an isolated fixed point has no equivariant tangent vectors.
//!
//! Only the linear algebra is modelled: the group is a small cyclic group or a
//! product of two, standing in for the global Galois-type group.

pub mod field;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod splittings;

use thiserror::Error;

pub use rep::{parse_rep_spec, rep_spec_from_json, BlockSpec, FqMatrixRep, GroupSpec, RepSpec};
pub use report::{check_finiteness_criterion, FieldRow, FinitenessReport, Verdict};
pub use splittings::{
    enumerate_splittings, gaussian_binomial, tangent_dimension, verify_splitting, InvariantSplitting,
    TangentDimension,
};

/// Size caps for the exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_dim: usize,
    pub max_q: u32,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_dim: 6, max_q: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("q = {q} is not prime")]
    NotPrime { q: u32 },
    #[error("q = {q} exceeds the cap {max}")]
    FieldCap { q: u32, max: u32 },
    #[error("dimension {dim} exceeds the cap {max}")]
    DimensionCap { dim: usize, max: usize },
    #[error("q = {q} divides the group order {order}")]
    NotSemisimple { q: u32, order: u64 },
    #[error("block {index} is declared of dimension {dim} but its Frobenius orbit over F_{q} has size {orbit}")]
    BlockNotIrreducible { index: usize, q: u32, dim: usize, orbit: usize },
    #[error("blocks {first} and {second}: tags disagree with isomorphism (isomorphic: {isomorphic})")]
    TagMismatch { first: usize, second: usize, isomorphic: bool },
    #[error("generator shape: {0}")]
    GeneratorShape(String),
    #[error("group relation violated: {0}")]
    RelationViolated(String),
    #[error("block {tag:?} occurs {found} times in the generators, declared {expected}")]
    InconsistentBlocks { tag: String, expected: usize, found: usize },
    #[error("need 2n <= N, got n = {n}, N = {dim}")]
    InvalidN { n: usize, dim: usize },
    #[error("invalid splitting: {0}")]
    InvalidSplit(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl OracleError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        OracleError::Schema { path: path.into(), message: message.into() }
    }

    pub fn code(&self) -> &'static str {
        match self {
            OracleError::Schema { .. } => "schema_violation",
            OracleError::NotPrime { .. } => "not_prime",
            OracleError::FieldCap { .. } => "field_cap",
            OracleError::DimensionCap { .. } => "dimension_cap",
            OracleError::NotSemisimple { .. } => "not_semisimple",
            OracleError::BlockNotIrreducible { .. } => "block_not_irreducible",
            OracleError::TagMismatch { .. } => "tag_mismatch",
            OracleError::GeneratorShape(_) => "generator_shape",
            OracleError::RelationViolated(_) => "relation_violated",
            OracleError::InconsistentBlocks { .. } => "inconsistent_blocks",
            OracleError::InvalidN { .. } => "invalid_n",
            OracleError::InvalidSplit(_) => "invalid_split",
            OracleError::SelfCheck(_) => "self_check",
        }
    }

    /// JSON path of the offending input field, `$` when not tied to one.
    pub fn path(&self) -> String {
        match self {
            OracleError::Schema { path, .. } => path.clone(),
            OracleError::NotPrime { .. } | OracleError::FieldCap { .. } | OracleError::NotSemisimple { .. } => {
                "$.q".into()
            }
            OracleError::BlockNotIrreducible { index, .. } => format!("$.blocks[{index}]"),
            OracleError::TagMismatch { second, .. } => format!("$.blocks[{second}].tag"),
            OracleError::GeneratorShape(_) | OracleError::RelationViolated(_) => "$.generators".into(),
            OracleError::InvalidN { .. } => "$.n".into(),
            _ => "$".into(),
        }
    }
}
