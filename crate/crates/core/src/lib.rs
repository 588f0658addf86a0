//! Exact counting, constructive enumeration, and Monte Carlo study of the
//! factorizations of a permutation into two involutions.
//!
//! A permutation `σ` with `c_k` cycles of length `k` has
//! `N(σ) = ∏_k Σ_j k^{c_k - j} c_k! / (2^j j! (c_k - 2j)!)` ordered pairs of
//! involutions `(τ1, τ2)` with `τ2 ∘ τ1 = σ`. This crate computes that number
//! exactly, lists the pairs, checks both against brute force, and samples the
//! distribution of `ln N` over uniform random permutations.

pub mod counting;
pub mod factorize;
pub mod oracle;
pub mod permutation;
pub mod report;
pub mod sampling;
pub mod stats;

pub use counting::{
    chm_asymptotic, count_factorizations, hermite_factor, inner_factor, involution_count,
    log_count, mean_factorizations, product_of_cycle_lengths, BigCount, ExactRational,
};
pub use factorize::{enumerate_factorizations, is_exchanging, InvolutionPair};
pub use permutation::{compose, CycleDecomposition, CycleType, Permutation, PermutationError};
pub use sampling::{sample_cycle_type, sample_permutation, SeededRng};
pub use stats::{clt_experiment, sandwich_check, tail_experiment, CltReport, Statistic, TailReport};
