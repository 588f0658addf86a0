//! Brute-force ground truth for small degrees.
//!
//! Nothing here uses the product formula: involutions are listed directly
//! and factorizations are counted by composing every ordered pair.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::counting::{count_factorizations, BigCount};
use crate::permutation::Permutation;

/// Default upper bound on the degree accepted by exhaustive routines.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degree {n} exceeds the exhaustive limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

fn check_limit(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::LimitExceeded { n, limit })
    } else {
        Ok(())
    }
}

/// All involutions of `{0, …, n-1}`, with the default limit.
pub fn all_involutions(n: usize) -> Result<std::vec::IntoIter<Permutation>, OracleError> {
    all_involutions_with_limit(n, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Point `n-1` is either fixed or swapped with one earlier point; recurse on
/// what remains.
pub fn all_involutions_with_limit(
    n: usize,
    limit: usize,
) -> Result<std::vec::IntoIter<Permutation>, OracleError> {
    check_limit(n, limit)?;
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    let mut free = vec![true; n];
    involutions_rec(n, &mut images, &mut free, &mut out);
    Ok(out.into_iter())
}

fn involutions_rec(
    top: usize,
    images: &mut Vec<usize>,
    free: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let Some(x) = (0..top).rev().find(|&x| free[x]) else {
        out.push(Permutation::from_images_unchecked(images.clone()));
        return;
    };
    free[x] = false;
    images[x] = x;
    involutions_rec(x, images, free, out);
    for y in 0..x {
        if free[y] {
            free[y] = false;
            images[x] = y;
            images[y] = x;
            involutions_rec(x, images, free, out);
            images[y] = y;
            free[y] = true;
        }
    }
    images[x] = x;
    free[x] = true;
}

/// All permutations of `{0, …, n-1}` in lexicographic order of image table.
pub fn all_permutations(n: usize) -> AllPermutations {
    AllPermutations {
        current: Some((0..n).collect()),
    }
}

pub struct AllPermutations {
    current: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let n = next.len();
        if n >= 2 {
            if let Some(i) = (0..n - 1).rev().find(|&i| next[i] < next[i + 1]) {
                let j = (i + 1..n).rev().find(|&j| next[j] > next[i]).expect("exists");
                next.swap(i, j);
                next[i + 1..].reverse();
                self.current = Some(next);
            }
        }
        Some(Permutation::from_images_unchecked(cur))
    }
}

/// Counts ordered pairs `(τ1, τ2)` of involutions with `τ2 ∘ τ1 = σ` by
/// trying them all.
pub fn brute_force_count(sigma: &Permutation) -> Result<BigCount, OracleError> {
    Ok(BigUint::from(brute_force_pairs(sigma)?.len()))
}

/// Every ordered pair `(τ1, τ2)` of involutions with `τ2 ∘ τ1 = σ`.
pub fn brute_force_pairs(sigma: &Permutation) -> Result<Vec<(Permutation, Permutation)>, OracleError> {
    let invs: Vec<Permutation> = all_involutions(sigma.degree())?.collect();
    let mut out = Vec::new();
    for t1 in &invs {
        for t2 in &invs {
            if t2.compose(t1).expect("same degree") == *sigma {
                out.push((t1.clone(), t2.clone()));
            }
        }
    }
    Ok(out)
}

/// Brute-force factorization counts for every permutation of degree `n`,
/// from a single pass over ordered involution pairs.
pub fn brute_force_all_counts(n: usize) -> Result<HashMap<Permutation, u64>, OracleError> {
    let invs: Vec<Permutation> = all_involutions(n)?.collect();
    let mut buckets: HashMap<Permutation, u64> = HashMap::new();
    for t1 in &invs {
        for t2 in &invs {
            *buckets.entry(t2.compose(t1).expect("same degree")).or_insert(0) += 1;
        }
    }
    Ok(buckets)
}

/// Exact `V_m(k)` from the three-term recurrence
/// `W_m = W_{m-1} + ((m-1)/k) W_{m-2}`, `W_0 = W_1 = 1`, which follows from
/// the Hermite recurrence at `x = i√k` after dividing by `(i√k)^m`.
pub fn hermite_recurrence(m: usize, k: usize) -> BigRational {
    assert!(k > 0);
    let (mut prev, mut cur) = (BigRational::one(), BigRational::one());
    for j in 2..=m {
        let next = &cur + &prev * BigRational::new(BigInt::from(j - 1), BigInt::from(k));
        prev = std::mem::replace(&mut cur, next);
    }
    if m == 0 {
        prev
    } else {
        cur
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub images: Vec<usize>,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub brute_force: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub formula: BigCount,
}

/// Outcome of comparing brute force with the product formula on all of
/// `S_n`, plus the extremal and total-sum claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub n: usize,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub max_value: BigCount,
    pub max_attainers: u64,
    pub max_at_identity_only: bool,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub min_value: BigCount,
    pub min_attainers: u64,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub total_sum: BigCount,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub involutions: BigCount,
    pub sum_ok: bool,
    pub max_ok: bool,
    /// `None` for `n < 2`, where the minimum claim does not apply.
    pub min_ok: Option<bool>,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.sum_ok && self.max_ok && self.min_ok != Some(false)
    }
}

pub fn exhaustive_check(n: usize) -> Result<ExhaustiveReport, OracleError> {
    exhaustive_check_with_limit(n, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn exhaustive_check_with_limit(n: usize, limit: usize) -> Result<ExhaustiveReport, OracleError> {
    check_limit(n, limit)?;
    let invs: Vec<Permutation> = all_involutions_with_limit(n, limit)?.collect();
    let mut buckets: HashMap<Permutation, u64> = HashMap::new();
    for t1 in &invs {
        for t2 in &invs {
            *buckets.entry(t2.compose(t1).expect("same degree")).or_insert(0) += 1;
        }
    }

    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    let mut total = BigUint::zero();
    let mut max: Option<(BigUint, u64, bool)> = None;
    let mut min: Option<(BigUint, u64)> = None;
    for sigma in all_permutations(n) {
        checked += 1;
        let brute = BigUint::from(buckets.get(&sigma).copied().unwrap_or(0));
        let formula = count_factorizations(&sigma.cycle_type());
        if brute != formula {
            mismatches.push(Mismatch {
                images: sigma.images().to_vec(),
                brute_force: brute.clone(),
                formula,
            });
        }
        total += &brute;
        let is_id = sigma.is_identity();
        max = Some(match max {
            Some((v, c, id)) if v == brute => (v, c + 1, id && is_id),
            Some((v, c, id)) if v > brute => (v, c, id),
            _ => (brute.clone(), 1, is_id),
        });
        min = Some(match min {
            Some((v, c)) if v == brute => (v, c + 1),
            Some((v, c)) if v < brute => (v, c),
            _ => (brute, 1),
        });
    }
    let (max_value, max_attainers, max_at_identity_only) = max.expect("S_n is non-empty");
    let (min_value, min_attainers) = min.expect("S_n is non-empty");

    let involutions = BigUint::from(invs.len());
    let sum_ok = total == &involutions * &involutions;
    let max_ok = max_value == involutions && max_attainers == 1 && max_at_identity_only;
    let min_ok = (n >= 2).then(|| {
        let factorial: u64 = (1..=n as u64).product();
        min_value == BigUint::from(n - 1) && min_attainers == factorial / (n as u64 - 1)
    });

    Ok(ExhaustiveReport {
        n,
        checked,
        mismatches,
        max_value,
        max_attainers,
        max_at_identity_only,
        min_value,
        min_attainers,
        total_sum: total,
        involutions,
        sum_ok,
        max_ok,
        min_ok,
    })
}
