//! Exact solvers: extremal free families, Kneser embeddings, fractional
//! chromatic number and homomorphism transforms.

mod chif;
mod emb;
mod hom;
mod lp;
mod vex;

pub use chif::{chi_f, chi_f_certified, maximal_independent_sets, ChiFCertificate, WeightedSet};
pub use emb::{emb, emb_with_witness, entropy_limit_report, kneser_graph_copy, EntropyReport, EntropyRow};
pub use hom::{blow_up, shrink_injective, Homomorphism, HomomorphismJson};
pub use vex::{solve_vex, solve_vex_with, VexOptions, VexOutcome, VexResult, VEX_GUARANTEED_N};
