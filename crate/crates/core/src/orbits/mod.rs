//! Hitting sets of scaled orbits and the combinatorics run on them.
//!
//! A hitting set `{n : lambda_n T^n x in B(y, eps)}` is computed once by an
//! [`OrbitScanner`] and stored as a bitset. Density estimates, arithmetic and
//! polynomial progression searches, and multiple-recurrence witnesses all work
//! from that bitset.

mod bitset;
mod density;
mod patterns;
mod scan;
mod witness;

pub use bitset::Bitset;
pub use density::{default_window_start, density_stats, DensityStats};
pub use patterns::{
    ap_k_members, default_k_max, find_ap, find_poly_pattern, APWitness, IntPolynomial, PolyWitness,
};
pub use scan::{hitting_set, recurrence_scan, HittingSet, OrbitScanner, Provenance};
pub use witness::{mr_witness_search, MRWitness, MrDiagnostics, MrParams, MrSearch};
