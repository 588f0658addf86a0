//! Exact counting of involution factorizations.
//!
//! Everything here is exact big-integer or big-rational arithmetic except
//! [`chm_asymptotic`] and [`log_count`], which return natural logarithms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::permutation::CycleType;

/// Exact non-negative count.
pub type BigCount = BigUint;

/// Exact rational in lowest terms.
pub type ExactRational = BigRational;

/// Number of ways to choose `j` disjoint pairs from `m` items, for
/// `j = 0..=m/2`: `m! / (2^j j! (m-2j)!)`.
fn partial_matching_counts(m: usize) -> impl Iterator<Item = BigUint> {
    let mut term = BigUint::one();
    (0..=m / 2).map(move |j| {
        let current = term.clone();
        let rem = m - 2 * j;
        if rem >= 2 {
            term = &term * BigUint::from(rem * (rem - 1)) / BigUint::from(2 * (j + 1));
        }
        current
    })
}

/// `V_m(k) = Σ_j k^{-j} m! / (2^j j! (m-2j)!)`, the per-length correction
/// factor. Equal to `He_m(i√k) / (i√k)^m`.
pub fn hermite_factor(m: usize, k: usize) -> ExactRational {
    assert!(k > 0, "cycle length must be positive");
    let k = BigInt::from(k);
    let mut k_pow = BigInt::one();
    let mut sum = BigRational::zero();
    for a in partial_matching_counts(m) {
        sum += BigRational::new(BigInt::from(a), k_pow.clone());
        k_pow *= &k;
    }
    sum
}

/// `Σ_j k^{c-j} c! / (2^j j! (c-2j)!)`: the number of factorizations of a
/// permutation made of `c` cycles of length `k`.
///
/// Terms are updated incrementally,
/// `t_{j+1} = t_j (c-2j)(c-2j-1) / (2k(j+1))`, multiplying before dividing so
/// every intermediate value stays an exact integer.
pub fn inner_factor(k: usize, c: usize) -> BigCount {
    assert!(k > 0, "cycle length must be positive");
    match c {
        0 => return BigUint::one(),
        1 => return BigUint::from(k),
        _ => {}
    }
    let kb = BigUint::from(k);
    let mut term = num_traits::pow(kb.clone(), c);
    let mut sum = term.clone();
    let mut j = 0;
    while c >= 2 * j + 2 {
        let rem = c - 2 * j;
        term *= BigUint::from(rem * (rem - 1));
        term /= &kb * BigUint::from(2 * (j + 1));
        sum += &term;
        j += 1;
    }
    sum
}

/// `N_n(σ)` as a function of the cycle type: `∏_k inner_factor(k, c_k)`.
pub fn count_factorizations(t: &CycleType) -> BigCount {
    t.iter()
        .fold(BigUint::one(), |acc, (k, c)| acc * inner_factor(k, c))
}

/// `B_n(σ) = ∏_k k^{c_k}`, the product of the cycle lengths.
pub fn product_of_cycle_lengths(t: &CycleType) -> BigCount {
    t.iter().fold(BigUint::one(), |acc, (k, c)| {
        acc * num_traits::pow(BigUint::from(k), c)
    })
}

/// Number of involutions of an `n`-set, via
/// `T_n = T_{n-1} + (n-1) T_{n-2}`.
pub fn involution_count(n: usize) -> BigCount {
    involution_counts_upto(n).pop().expect("non-empty")
}

/// `[T_0, T_1, …, T_n]`.
pub fn involution_counts_upto(n: usize) -> Vec<BigCount> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    if n >= 1 {
        out.push(BigUint::one());
    }
    for m in 2..=n {
        let next = &out[m - 1] + &out[m - 2] * BigUint::from(m - 1);
        out.push(next);
    }
    out
}

/// Log-space evaluation of the Chowla–Herstein–Moore asymptotic for the
/// number of involutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChmApprox {
    pub ln_value: f64,
    /// `exp(ln_value)` when finite.
    pub value: Option<f64>,
}

/// `(1/√2) (n/e)^{n/2} e^{√n - 1/4}`.
pub fn chm_asymptotic(n: usize) -> ChmApprox {
    assert!(n >= 1, "n must be positive");
    let nf = n as f64;
    let ln_value =
        -0.5 * std::f64::consts::LN_2 + 0.5 * nf * (nf.ln() - 1.0) + nf.sqrt() - 0.25;
    let value = Some(ln_value.exp()).filter(|v| v.is_finite());
    ChmApprox { ln_value, value }
}

/// `E_n[N_n] = T_n² / n!`.
pub fn mean_factorizations(n: usize) -> ExactRational {
    assert!(n >= 1, "n must be positive");
    let t = BigInt::from(involution_count(n));
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    BigRational::new(&t * &t, fact)
}

/// Natural log of a big integer, accurate to a few ulps.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln N_n(σ)`: the sum over lengths of the logarithm of each exact
/// per-length factor.
pub fn log_count(t: &CycleType) -> f64 {
    t.iter()
        .map(|(k, c)| match c {
            1 => (k as f64).ln(),
            _ => ln_big(&inner_factor(k, c)),
        })
        .sum()
}

/// `ln B_n(σ) = Σ_k c_k ln k`.
pub fn log_product_of_cycle_lengths(t: &CycleType) -> f64 {
    t.iter().map(|(k, c)| c as f64 * (k as f64).ln()).sum()
}

/// Per-length breakdown of a count, in ascending length order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthFactor {
    pub length: usize,
    pub multiplicity: usize,
    pub factor: BigCount,
}

pub fn length_factors(t: &CycleType) -> Vec<LengthFactor> {
    t.iter()
        .map(|(k, c)| LengthFactor {
            length: k,
            multiplicity: c,
            factor: inner_factor(k, c),
        })
        .collect()
}
