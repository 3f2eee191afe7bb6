//! Truncated formal power series in u with real coefficients.

use serde::{Deserialize, Serialize};

/// Coefficients c_0..c_K of a power series truncated at order K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesOracle {
    coeffs: Vec<f64>,
}

impl SeriesOracle {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = 1.0;
        Self { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, 0.0);
        Self { coeffs: c }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        Self {
            coeffs: (0..=k).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        let mut c = vec![0.0; k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self { coeffs: c }
    }

    /// exp(f) for f with f_0 = 0, via n·g_n = Σ_{k=1}^{n} k·f_k·g_{n−k}.
    pub fn exp(&self) -> Self {
        debug_assert!(self.coeffs[0] == 0.0, "exp needs a zero constant term");
        let k = self.order();
        let mut g = vec![0.0; k + 1];
        g[0] = 1.0;
        for n in 1..=k {
            let s: f64 = (1..=n)
                .map(|j| j as f64 * self.coeffs[j] * g[n - j])
                .sum();
            g[n] = s / n as f64;
        }
        Self { coeffs: g }
    }

    /// log(f) for f with f_0 = 1, via n·l_n = n·f_n − Σ_{k=1}^{n−1} k·l_k·f_{n−k}.
    pub fn ln(&self) -> Self {
        debug_assert!((self.coeffs[0] - 1.0).abs() < 1e-12, "log needs f_0 = 1");
        let k = self.order();
        let f = &self.coeffs;
        let mut l = vec![0.0; k + 1];
        for n in 1..=k {
            let s: f64 = (1..n).map(|j| j as f64 * l[j] * f[n - j]).sum();
            l[n] = (n as f64 * f[n] - s) / n as f64;
        }
        Self { coeffs: l }
    }

    /// f^p for f_0 = 1 and real p.
    pub fn powf(&self, p: f64) -> Self {
        self.ln().scale(p).exp()
    }

    /// Largest coefficient gap relative to max(1, |other_k|).
    pub fn max_relative_gap(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Coefficients of exp(Σ_{k=1}^{order} counts[k]·u^k / k). `counts[0]` is ignored.
pub fn series_exp(counts: &[f64], order: usize) -> SeriesOracle {
    assert!(
        order < counts.len(),
        "series_exp needs counts up to the requested order"
    );
    let mut f = vec![0.0; order + 1];
    for k in 1..=order {
        f[k] = counts[k] / k as f64;
    }
    SeriesOracle::new(f).exp()
}

/// Series of log(1 − u²)^p truncated at `order`.
pub fn log_one_minus_u2(p: f64, order: usize) -> SeriesOracle {
    let mut c = vec![0.0; order + 1];
    for j in 1..=order / 2 {
        c[2 * j] = -p / j as f64;
    }
    SeriesOracle::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_counts_is_one() {
        assert_eq!(series_exp(&[0.0; 7], 6), SeriesOracle::one(6));
    }

    #[test]
    fn exp_of_u() {
        let s = series_exp(&[0.0, 1.0, 0.0], 2);
        assert_eq!(s.coeffs(), &[1.0, 1.0, 0.5]);
    }

    #[test]
    fn c3_counts_give_inverse_square_of_one_minus_u3() {
        // N_3 = N_6 = 6 for the triangle; (1 − u³)⁻² = 1 + 2u³ + 3u⁶ + …
        let counts = [0.0, 0.0, 0.0, 6.0, 0.0, 0.0, 6.0];
        let s = series_exp(&counts, 6);
        let expected = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 3.0];
        for (a, b) in s.coeffs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn ln_inverts_exp() {
        let f = SeriesOracle::new(vec![0.0, 0.3, -1.2, 0.5, 2.0]);
        let back = f.exp().ln();
        assert!(back.max_relative_gap(&f) < 1e-14);
    }

    #[test]
    fn powf_matches_binomial() {
        // (1 − u²)^{-1} = 1 + u² + u⁴
        let s = log_one_minus_u2(-1.0, 4).exp();
        assert!(s.max_relative_gap(&SeriesOracle::new(vec![1.0, 0.0, 1.0, 0.0, 1.0])) < 1e-15);
        let sq = SeriesOracle::new(vec![1.0, 2.0, 1.0, 0.0]).powf(0.5);
        assert!(sq.max_relative_gap(&SeriesOracle::new(vec![1.0, 1.0, 0.0, 0.0])) < 1e-14);
    }
}
