//! Small numerical helpers shared by the detectors and the harness.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant, to the five decimals used by the Gumbel
/// method-of-moments formula.
pub const EULER_GAMMA: f64 = 0.57722;

fn check_open_unit(p: f64, what: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{what} must lie in (0, 1), got {p}")))
    }
}

/// `z` with `Phi(z) = p` for the standard normal.
pub fn inverse_normal_cdf(p: f64) -> Result<f64> {
    check_open_unit(p, "probability")?;
    Ok(Normal::standard().inverse_cdf(p))
}

/// Quantile of the chi-square distribution with one degree of freedom.
pub fn chi2_quantile(p: f64) -> Result<f64> {
    check_open_unit(p, "probability")?;
    let z = inverse_normal_cdf(0.5 + 0.5 * p)?;
    Ok(z * z)
}

/// Quantile of the standard Gumbel (maximum) distribution.
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    check_open_unit(p, "probability")?;
    Ok(-(-p.ln()).ln())
}

/// Linear interpolation between order statistics at rank `(len - 1) p + 1`.
pub fn empirical_quantile(samples: &[f64], p: f64) -> Result<f64> {
    check_open_unit(p, "quantile level")?;
    if samples.is_empty() {
        return Err(Error::param("empirical quantile of an empty sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, p))
}

pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (divisor `len - 1`).
pub(crate) fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub(crate) fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, 0.5)
}
