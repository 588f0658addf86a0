//! Serialization helpers shared by the experiment reports.

use num_bigint::BigUint;
use serde::Serializer;

/// Big integers go over the wire as decimal strings.
pub fn big_as_string<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// Finite floats as numbers; infinities as `"-inf"` / `"inf"`.
pub fn float_or_inf<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        s.serialize_f64(*value)
    } else if *value > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn format_float(value: f64) -> String {
    if value.is_finite() {
        value.to_string()
    } else if value > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
