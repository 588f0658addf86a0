//! Browser bindings: exact counts, factorization listings, and the
//! lognormal histogram, each returned as a JSON string.

use involfact::counting::{
    count_factorizations, length_factors, log_count, product_of_cycle_lengths,
};
use involfact::factorize::enumerate_factorizations;
use involfact::stats::{clt_experiment, normal_cdf, Statistic};
use involfact::{CycleType, Permutation};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Accepts cycle notation, a JSON image array, or a `k:c,...` cycle type.
fn parse_input(input: &str, one_based: bool) -> Result<Permutation, String> {
    let text = input.trim();
    let parsed = if text.starts_with('[') {
        Permutation::parse_images(text)
    } else if text.contains(':') {
        CycleType::parse(text).map(|t| t.representative())
    } else {
        Permutation::parse_cycles(text, None, one_based)
    };
    parsed.map_err(|e| e.to_string())
}

pub fn count_json(input: &str, one_based: bool) -> Result<String, String> {
    let sigma = parse_input(input, one_based)?;
    let t = sigma.cycle_type();
    let factors: Vec<_> = length_factors(&t)
        .into_iter()
        .map(|f| json!({"length": f.length, "multiplicity": f.multiplicity, "factor": f.factor.to_string()}))
        .collect();
    Ok(json!({
        "degree": t.degree(),
        "cycle_type": t.to_string(),
        "N": count_factorizations(&t).to_string(),
        "B": product_of_cycle_lengths(&t).to_string(),
        "log_N": log_count(&t),
        "factors": factors,
    })
    .to_string())
}

pub fn enumerate_json(input: &str, one_based: bool, limit: usize) -> Result<String, String> {
    let sigma = parse_input(input, one_based)?;
    let mut it = enumerate_factorizations(&sigma);
    let mut rows = Vec::new();
    while rows.len() < limit {
        let Some((pair, exchanged)) = it.next_with_exchanges() else {
            break;
        };
        rows.push(json!({
            "tau1": pair.tau1().to_cycle_string(one_based),
            "tau2": pair.tau2().to_cycle_string(one_based),
            "exchanged_pairs": exchanged.len(),
        }));
    }
    Ok(json!({
        "sigma": sigma.to_cycle_string(one_based),
        "total": count_factorizations(&sigma.cycle_type()).to_string(),
        "factorizations": rows,
    })
    .to_string())
}

pub fn clt_json(n: usize, samples: usize, seed: u64, statistic: &str) -> Result<String, String> {
    let statistic: Statistic = statistic.parse().map_err(|e: involfact::stats::StatsError| e.to_string())?;
    let report = clt_experiment(n, samples, seed, statistic).map_err(|e| e.to_string())?;
    // expected normal mass per finite bin, for overlaying on the histogram
    let expected: Vec<f64> = report
        .histogram
        .iter()
        .map(|b| {
            let right = if b.left.is_finite() { b.left + 0.25 } else { -5.0 };
            let right = if b.left >= 5.0 { f64::INFINITY } else { right };
            (normal_cdf(right) - normal_cdf(b.left)) * samples as f64
        })
        .collect();
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    value["expected"] = json!(expected);
    Ok(value.to_string())
}

#[wasm_bindgen]
pub fn count(input: &str, one_based: bool) -> Result<String, JsValue> {
    count_json(input, one_based).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn enumerate(input: &str, one_based: bool, limit: usize) -> Result<String, JsValue> {
    enumerate_json(input, one_based, limit).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn clt(n: usize, samples: usize, seed: u64, statistic: &str) -> Result<String, JsValue> {
    clt_json(n, samples, seed, statistic).map_err(|e| JsValue::from_str(&e))
}
