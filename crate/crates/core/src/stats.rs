//! Monte Carlo experiments on the cycle structure of uniform permutations:
//! the lognormal limit of `N_n`, the tail events that make `B_n` a good
//! proxy for `N_n`, and the two-sided bound relating them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::counting::{
    count_factorizations, log_count, log_product_of_cycle_lengths, product_of_cycle_lengths,
};
use crate::permutation::CycleType;
use crate::report::{float_or_inf, format_float};
use crate::sampling::{sample_cycle_type, sample_many};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least one sample")]
    Empty,
    #[error("samples must be sorted and free of NaN")]
    Unsorted,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bound violated: {counterexample}")]
    SandwichViolation { counterexample: String },
}

/// Compensated (Neumaier) sum.
fn neumaier_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Centering constant `μ_n = Σ_{k≤n} ln(k)/k`.
pub fn mu(n: usize) -> f64 {
    neumaier_sum((2..=n).map(|k| {
        let kf = k as f64;
        kf.ln() / kf
    }))
}

/// Scaling constant `σ_n = sqrt(Σ_{k≤n} ln²(k)/k)`.
pub fn sigma(n: usize) -> f64 {
    neumaier_sum((2..=n).map(|k| {
        let kf = k as f64;
        let l = kf.ln();
        l * l / kf
    }))
    .sqrt()
}

/// `½ ln² n`.
pub fn mu_asymptotic(n: usize) -> f64 {
    let l = (n as f64).ln();
    0.5 * l * l
}

/// `⅓ ln³ n`, the asymptotic form of `σ_n²`.
pub fn sigma_squared_asymptotic(n: usize) -> f64 {
    let l = (n as f64).ln();
    l * l * l / 3.0
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Inverse of [`normal_cdf`] on `(0, 1)`: Acklam's rational approximation
/// followed by one Halley step.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };

    let e = normal_cdf(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// One-sample Kolmogorov–Smirnov distance between the empirical CDF of
/// `sorted` and the standard normal CDF.
pub fn ks_statistic(sorted: &[f64]) -> Result<f64, StatsError> {
    if sorted.is_empty() {
        return Err(StatsError::Empty);
    }
    if sorted.iter().any(|x| x.is_nan()) || sorted.windows(2).any(|w| w[0] > w[1]) {
        return Err(StatsError::Unsorted);
    }
    let m = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            let hi = (i + 1) as f64 / m;
            let lo = i as f64 / m;
            (hi - f).abs().max((lo - f).abs())
        })
        .fold(0.0, f64::max))
}

/// Which log-statistic an experiment normalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statistic {
    #[serde(rename = "logN")]
    LogN,
    #[serde(rename = "logB")]
    LogB,
}

impl Statistic {
    pub fn evaluate(self, t: &CycleType) -> f64 {
        match self {
            Statistic::LogN => log_count(t),
            Statistic::LogB => log_product_of_cycle_lengths(t),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::LogN => "logN",
            Statistic::LogB => "logB",
        })
    }
}

impl FromStr for Statistic {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "logN" | "logn" => Ok(Statistic::LogN),
            "logB" | "logb" => Ok(Statistic::LogB),
            other => Err(StatsError::InvalidParameter(format!(
                "unknown statistic {other:?} (expected logN or logB)"
            ))),
        }
    }
}

pub const HISTOGRAM_WIDTH: f64 = 0.25;
pub const HISTOGRAM_RANGE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    #[serde(serialize_with = "float_or_inf")]
    pub left: f64,
    pub count: u64,
}

/// Fixed bins of width 0.25 covering `[-5, 5)`, plus an underflow bin
/// `(-inf, -5)` and an overflow bin `[5, inf)`.
pub fn histogram(values: &[f64]) -> Vec<HistogramBin> {
    let inner = (2.0 * HISTOGRAM_RANGE / HISTOGRAM_WIDTH).round() as usize;
    let mut counts = vec![0u64; inner + 2];
    for &v in values {
        let idx = if v < -HISTOGRAM_RANGE {
            0
        } else if v >= HISTOGRAM_RANGE {
            inner + 1
        } else {
            (((v + HISTOGRAM_RANGE) / HISTOGRAM_WIDTH).floor() as usize).min(inner - 1) + 1
        };
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            left: match i {
                0 => f64::NEG_INFINITY,
                i => -HISTOGRAM_RANGE + (i - 1) as f64 * HISTOGRAM_WIDTH,
            },
            count,
        })
        .collect()
}

/// CSV rendering of a histogram: header `bin_left,count`.
pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,count\n");
    for b in bins {
        out.push_str(&format!("{},{}\n", format_float(b.left), b.count));
    }
    out
}

pub const CLT_NOTE: &str = "sanity bands (|mean| <= 0.1, stdev in [0.85, 1.15], KS <= 0.1) are \
    loose desk-scale checks; the limit law carries no convergence rate";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub statistic: Statistic,
    pub mu_n: f64,
    pub sigma_n: f64,
    pub mean: f64,
    pub stdev: f64,
    pub ks_distance: f64,
    pub histogram: Vec<HistogramBin>,
    pub note: &'static str,
}

fn check_clt_params(n: usize, samples: usize) -> Result<(), StatsError> {
    if n < 2 {
        return Err(StatsError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if samples < 100 {
        return Err(StatsError::InvalidParameter(format!(
            "need at least 100 samples, got {samples}"
        )));
    }
    Ok(())
}

/// Normalized values `(stat − μ_n)/σ_n` for `samples` sampled cycle types,
/// in sample order.
pub fn normalized_samples(
    n: usize,
    samples: usize,
    seed: u64,
    statistic: Statistic,
) -> Result<Vec<f64>, StatsError> {
    check_clt_params(n, samples)?;
    let (m, s) = (mu(n), sigma(n));
    Ok(sample_many(seed, samples, |rng| {
        (statistic.evaluate(&sample_cycle_type(n, rng)) - m) / s
    }))
}

pub fn clt_experiment(
    n: usize,
    samples: usize,
    seed: u64,
    statistic: Statistic,
) -> Result<CltReport, StatsError> {
    let mut values = normalized_samples(n, samples, seed, statistic)?;
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
    let hist = histogram(&values);
    values.sort_by(f64::total_cmp);
    let ks_distance = ks_statistic(&values)?;
    Ok(CltReport {
        n,
        samples,
        seed,
        statistic,
        mu_n: mu(n),
        sigma_n: sigma(n),
        mean,
        stdev: var.sqrt(),
        ks_distance,
        histogram: hist,
        note: CLT_NOTE,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub xi: f64,
    pub samples: usize,
    pub seed: u64,
    /// Frequency of `c_k >= 2` for some `k >= ceil(xi)`.
    pub freq_large_k_repeat: f64,
    /// Frequency of `c_k >= ceil(xi)` for some `k <= floor(xi)`.
    pub freq_small_k_crowd: f64,
    /// `Σ_{k=ceil(xi)}^{floor(n/2)} 1/k²`.
    pub bound_large_k: f64,
    /// Binomial standard error `sqrt(p(1-p)/M)` at `p = min(bound, 1)`.
    pub standard_error: f64,
}

impl TailReport {
    /// Whether the repeat frequency lies within `bound + 3 SE`.
    pub fn within_bound(&self) -> bool {
        self.freq_large_k_repeat <= self.bound_large_k + 3.0 * self.standard_error
    }
}

pub fn large_k_bound(n: usize, xi: f64) -> f64 {
    let start = xi.ceil().max(1.0) as usize;
    neumaier_sum((start..=n / 2).map(|k| 1.0 / (k as f64 * k as f64)))
}

/// Some length `k >= ceil(xi)` occurs at least twice.
pub fn has_large_k_repeat(t: &CycleType, xi: f64) -> bool {
    let start = xi.ceil() as usize;
    t.iter().any(|(k, c)| k >= start && c >= 2)
}

/// Some length `k <= floor(xi)` occurs at least `ceil(xi)` times.
pub fn has_small_k_crowd(t: &CycleType, xi: f64) -> bool {
    let (kmax, cmin) = (xi.floor() as usize, xi.ceil() as usize);
    t.iter().any(|(k, c)| k <= kmax && c >= cmin)
}

pub fn tail_experiment(n: usize, xi: f64, samples: usize, seed: u64) -> Result<TailReport, StatsError> {
    if !(xi >= 1.0 && xi <= n as f64) {
        return Err(StatsError::InvalidParameter(format!("xi must lie in [1, n], got {xi}")));
    }
    if samples == 0 {
        return Err(StatsError::Empty);
    }
    let hits = sample_many(seed, samples, |rng| {
        let t = sample_cycle_type(n, rng);
        (has_large_k_repeat(&t, xi), has_small_k_crowd(&t, xi))
    });
    let m = samples as f64;
    let large = hits.iter().filter(|h| h.0).count() as f64 / m;
    let small = hits.iter().filter(|h| h.1).count() as f64 / m;
    let bound = large_k_bound(n, xi);
    let p = bound.min(1.0);
    Ok(TailReport {
        n,
        xi,
        samples,
        seed,
        freq_large_k_repeat: large,
        freq_small_k_crowd: small,
        bound_large_k: bound,
        standard_error: (p * (1.0 - p) / m).sqrt(),
    })
}

/// Default constant in the upper bound `N <= B (c ξ^ξ)^ξ`.
pub const DEFAULT_SANDWICH_CONSTANT: f64 = 2.0;

/// Hypotheses of the two-sided bound: `c_k <= 1` for every `k > ξ`, and
/// `c_k <= ξ` for every `k`.
pub fn sandwich_hypotheses_hold(t: &CycleType, xi: f64) -> bool {
    t.iter()
        .all(|(k, c)| (c as f64) <= xi && ((k as f64) <= xi || c <= 1))
}

/// `ln((c ξ^ξ)^ξ)`.
pub fn log_sandwich_factor(xi: f64, c: f64) -> f64 {
    xi * (c.ln() + xi * xi.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichViolation {
    pub cycle_type: String,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub count: BigUint,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub product_of_lengths: BigUint,
    pub log_upper_bound: f64,
    pub hypotheses_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub xi: f64,
    pub c: f64,
    pub samples: usize,
    pub seed: u64,
    pub hypotheses_satisfied: usize,
    pub fraction: f64,
    /// Largest observed `ln N − ln B` among hypothesis-satisfying samples.
    pub max_log_excess: f64,
    pub log_factor: f64,
}

/// Checks `B <= N` on every sample and `N <= B (c ξ^ξ)^ξ` on every sample
/// meeting the hypotheses. The first violation aborts with the offending
/// cycle type serialized as JSON.
pub fn sandwich_check(
    n: usize,
    xi: f64,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<SandwichReport, StatsError> {
    if !(xi >= 1.0) {
        return Err(StatsError::InvalidParameter(format!("xi must be at least 1, got {xi}")));
    }
    if !(c > 0.0) {
        return Err(StatsError::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if samples == 0 {
        return Err(StatsError::Empty);
    }
    let log_factor = log_sandwich_factor(xi, c);
    let outcomes = sample_many(seed, samples, |rng| {
        let t = sample_cycle_type(n, rng);
        let hyp = sandwich_hypotheses_hold(&t, xi);
        let count = count_factorizations(&t);
        let product = product_of_cycle_lengths(&t);
        let excess = log_count(&t) - log_product_of_cycle_lengths(&t);
        let violated = count < product || (hyp && excess > log_factor);
        let violation = violated.then(|| SandwichViolation {
            cycle_type: t.to_string(),
            count,
            product_of_lengths: product,
            log_upper_bound: log_product_of_cycle_lengths(&t) + log_factor,
            hypotheses_hold: hyp,
        });
        (hyp, excess, violation)
    });

    let mut satisfied = 0;
    let mut max_excess = 0.0f64;
    for (hyp, excess, violation) in outcomes {
        if let Some(v) = violation {
            return Err(StatsError::SandwichViolation {
                counterexample: serde_json::to_string(&v).expect("serializable"),
            });
        }
        if hyp {
            satisfied += 1;
            max_excess = max_excess.max(excess);
        }
    }
    Ok(SandwichReport {
        n,
        xi,
        c,
        samples,
        seed,
        hypotheses_satisfied: satisfied,
        fraction: satisfied as f64 / samples as f64,
        max_log_excess: max_excess,
        log_factor,
    })
}
