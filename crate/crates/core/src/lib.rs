//! Set families in the Kneser cube that avoid a fixed configuration.
//!
//! The Kneser cube on `[n]` has every subset of `[n]` as a vertex, with two
//! distinct subsets adjacent exactly when they are disjoint. A family is
//! `G`-free when the subgraph it induces contains no copy of `G`. This crate
//! provides:
//!
//! * bitmask sets and explicit families with closure and shadow operators
//!   ([`sets`], [`binomial`], [`monotone`]);
//! * copy detection for arbitrary small patterns, the disjoint-tuple criterion
//!   and the good-set auditors ([`pattern`], [`freeness`], [`good`]);
//! * generators for the extremal constructions ([`constructions`]) and their
//!   exact coefficients ([`coefficients`]);
//! * ordered partitions and the partition-ratio audits ([`partitions`]);
//! * an exact branch-and-bound for the largest free family, Kneser graph
//!   embeddings, fractional chromatic numbers by exact simplex, and the
//!   blow-up/shrink homomorphism machinery ([`solver`]).
//!
//! All counts are arbitrary precision and all ratios are exact rationals. The
//! binary entropy function is the only floating point surface.

pub mod binomial;
pub mod coefficients;
pub mod constructions;
mod error;
pub mod freeness;
pub mod good;
pub mod monotone;
pub mod partitions;
pub mod pattern;
pub mod sets;
pub mod solver;

pub use error::{Error, Result};

pub use binomial::{binary_entropy, binom, binom_partial_sum, geometric_bound, GeometricBound};
pub use coefficients::{alpha, beta, beta_via_sum, table1, Table1Row};
pub use constructions::{ConstructionKind, ConstructionSpec, Params};
pub use freeness::{complete_multipartite, disjoint_tuple, find_copy, kneser_adjacent, Witness};
pub use good::{audit_good, good_family, GoodReport};
pub use partitions::{count_ordered, rho_vector, PartitionType, RhoVector};
pub use pattern::PatternGraph;
pub use sets::{Family, SetMask, MAX_CUBE_N, MAX_N};
pub use solver::{
    blow_up, chi_f, emb, shrink_injective, solve_vex, solve_vex_with, Homomorphism, VexOptions, VexOutcome, VexResult,
};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision non-negative integer used for every combinatorial count.
pub type Count = num_bigint::BigUint;

/// Serializes any `Display` value as a JSON string; used for exact integers
/// and fractions.
pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
