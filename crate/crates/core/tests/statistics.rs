use std::collections::HashMap;

use involfact::counting::{log_count, log_product_of_cycle_lengths};
use involfact::permutation::partitions;
use involfact::sampling::{sample_cycle_type, sample_many, sample_permutation};
use involfact::stats::{mu, normalized_samples, sigma, Statistic};
use involfact::CycleType;

// Stieltjes constants: lim (Σ_{k≤n} ln^m k / k − ln^{m+1} n / (m+1)) = γ_m.
const GAMMA_1: f64 = -0.072_815_845_483_676_724_860_586_375_874_9;
const GAMMA_2: f64 = -0.009_690_363_192_872_318_484_530_386_035_2;

/// Euler–Maclaurin tail: Σ_{k≤n} f(k) = γ_m + F(n) + f(n)/2 + f'(n)/12 + O(f'''(n)).
fn summatory_log_power(m: i32, n: f64) -> f64 {
    let l = n.ln();
    let f = l.powi(m) / n;
    let df = (m as f64 * l.powi(m - 1) - l.powi(m)) / (n * n);
    let gamma = if m == 1 { GAMMA_1 } else { GAMMA_2 };
    gamma + l.powi(m + 1) / (m + 1) as f64 + f / 2.0 + df / 12.0
}

#[test]
fn centering_constants_match_asymptotic_expansion() {
    let n = 1_000_000;
    let mu_ref = summatory_log_power(1, n as f64);
    let sigma_sq_ref = summatory_log_power(2, n as f64);
    let rel_mu = (mu(n) - mu_ref).abs() / mu_ref;
    let rel_sigma = (sigma(n).powi(2) - sigma_sq_ref).abs() / sigma_sq_ref;
    assert!(rel_mu < 1e-10, "mu relative error {rel_mu:e}");
    assert!(rel_sigma < 1e-10, "sigma^2 relative error {rel_sigma:e}");
}

#[test]
fn cycle_count_means_are_reciprocal_lengths() {
    let m = 20_000;
    let draws = sample_many(31, m, |r| sample_cycle_type(1_000, r));
    for k in [1usize, 2, 3, 10] {
        let values: Vec<f64> = draws.iter().map(|t| t.count(k) as f64).collect();
        let mean = values.iter().sum::<f64>() / m as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        let target = 1.0 / k as f64;
        assert!((mean - target).abs() <= 3.0 * se, "k={k}: {mean} vs {target} (se {se})");
    }
}

#[test]
fn cycle_type_sampler_matches_permutation_sampler_in_law() {
    let m = 1_000_000;
    let direct = sample_many(401, m, |r| sample_cycle_type(5, r));
    let via_perm = sample_many(402, m, |r| sample_permutation(5, r).cycle_type());
    let mut a: HashMap<CycleType, f64> = HashMap::new();
    let mut b: HashMap<CycleType, f64> = HashMap::new();
    direct.into_iter().for_each(|t| *a.entry(t).or_default() += 1.0);
    via_perm.into_iter().for_each(|t| *b.entry(t).or_default() += 1.0);
    // two-sample chi-squared homogeneity test over the 7 partitions of 5
    let mut chi2 = 0.0;
    for t in partitions(5) {
        let (x, y) = (a.get(&t).copied().unwrap_or(0.0), b.get(&t).copied().unwrap_or(0.0));
        let expected = (x + y) / 2.0;
        chi2 += (x - expected).powi(2) / expected + (y - expected).powi(2) / expected;
    }
    // chi-squared with 6 degrees of freedom, upper 0.001 point
    assert!(chi2 < 22.4577, "chi2 = {chi2}");
}

#[test]
fn log_n_dominates_log_b_per_sample() {
    let diffs = sample_many(55, 20_000, |r| {
        let t = sample_cycle_type(10_000, r);
        log_count(&t) - log_product_of_cycle_lengths(&t)
    });
    assert!(diffs.iter().all(|&d| d >= 0.0));
    let n_vals = normalized_samples(10_000, 2_000, 9, Statistic::LogN).unwrap();
    let b_vals = normalized_samples(10_000, 2_000, 9, Statistic::LogB).unwrap();
    assert!(n_vals.iter().zip(&b_vals).all(|(n, b)| n >= b));
}
