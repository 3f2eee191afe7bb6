//! `%.17g` number formatting for every numeric output, plus CSV/JSON
//! matrix export.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::linalg::{ComplexMatrix, RealMatrix};

/// Formats like C's `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A float serialized through `fmt_g17`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G17(pub f64);

impl Serialize for G17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n = serde_json::Number::from_str(&fmt_g17(self.0)).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

pub fn g17_pair(z: Complex64) -> [G17; 2] {
    [G17(z.re), G17(z.im)]
}

/// Row-major CSV, one matrix row per line.
pub fn real_matrix_csv(m: &RealMatrix) -> String {
    let mut out = String::new();
    for r in m.row_iter() {
        let line: Vec<String> = r.iter().map(|&x| fmt_g17(x)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

/// Nested-array JSON; complex entries become `[re, im]`.
pub fn complex_matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[G17; 2]>> = m
        .row_iter()
        .map(|r| r.iter().map(|&z| g17_pair(z)).collect())
        .collect();
    serde_json::to_value(rows).expect("matrix serializes")
}

pub fn real_matrix_json(m: &RealMatrix) -> serde_json::Value {
    let rows: Vec<Vec<G17>> = m
        .row_iter()
        .map(|r| r.iter().map(|&x| G17(x)).collect())
        .collect();
    serde_json::to_value(rows).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        // reference strings from glibc printf("%.17g")
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456789.0, "123456789"),
            (1e20, "1e+20"),
            (0.0001, "0.0001"),
            (1.0 / 3.0, "0.33333333333333331"),
            (2.0f64.sqrt(), "1.4142135623730951"),
            (6.02214076e23, "6.0221407599999999e+23"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g17(x), want, "{x}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for x in [0.1, 1e-300, -7.25e12, std::f64::consts::PI] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_uses_g17() {
        let v = serde_json::to_string(&[G17(0.1), G17(f64::NAN)]).unwrap();
        assert_eq!(v, "[0.10000000000000001,null]");
    }
}
