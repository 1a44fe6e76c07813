//! Number formatting for emitted files.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped.
///
/// Seventeen digits round-trip every finite `f64`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = strip_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

/// An `f64` that serializes to JSON with [`fmt_g17`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            // JSON has no literal for these
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fmt_g17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn f17_vec(v: &[f64]) -> Vec<F17> {
    v.iter().copied().map(F17).collect()
}
