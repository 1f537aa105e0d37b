//! Eigenvector L1-norm detector.
//!
//! A localized anomaly concentrates some leading eigenvector on a few nodes,
//! which shrinks its L1 norm. The statistic is the most negative standardized
//! norm (sign-flipped), mapped to the standard Gumbel scale.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::fmt_g6;
use crate::spectral::ResidualSpectrum;
use crate::stats::{gumbel_quantile, inverse_normal_cdf, mean, median, quantile_sorted, sample_sd, EULER_GAMMA};

/// IQR of the standard normal.
pub const IQR_CONSISTENCY: f64 = 1.3489;
/// MAD of the standard normal.
pub const MAD_CONSISTENCY: f64 = 0.67449;

/// `sum_i |v_k[i]|` for every eigenvector; each lies in `[1, sqrt(n)]`.
pub fn eigenvector_l1_norms(spectrum: &ResidualSpectrum) -> Vec<f64> {
    spectrum.eigenvectors.iter().map(|v| v.iter().map(|x| x.abs()).sum()).collect()
}

/// Where the location/scale used to standardize the norms came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationSource {
    HistoricalMom,
    SelfMeanSd,
    SelfMedianIqr,
    SelfMedianMad,
}

impl CalibrationSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CalibrationSource::HistoricalMom => "historical_mom",
            CalibrationSource::SelfMeanSd => "self_mean_sd",
            CalibrationSource::SelfMedianIqr => "self_median_iqr",
            CalibrationSource::SelfMedianMad => "self_median_mad",
        }
    }
}

/// Per-eigenvector location `mus[k]` and scale `sigmas[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Calibration {
    pub mus: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub source: CalibrationSource,
}

impl L1Calibration {
    pub fn m(&self) -> usize {
        self.mus.len()
    }
}

/// Column means and sample standard deviations of `h` rows of norms taken
/// from anomaly-free networks.
pub fn calibrate_historical(rows: &[Vec<f64>]) -> Result<L1Calibration> {
    if rows.len() < 2 {
        return Err(Error::param(format!("historical calibration needs at least 2 networks, got {}", rows.len())));
    }
    let m = rows[0].len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::param("historical norm rows must share one nonzero length"));
    }
    let mut mus = Vec::with_capacity(m);
    let mut sigmas = Vec::with_capacity(m);
    for k in 0..m {
        let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let sd = sample_sd(&col);
        if !(sd > 0.0) {
            return Err(Error::degenerate(format!("historical norms of eigenvector {} have zero spread", k + 1)));
        }
        mus.push(mean(&col));
        sigmas.push(sd);
    }
    Ok(L1Calibration { mus, sigmas, source: CalibrationSource::HistoricalMom })
}

/// Location/scale pair estimated from the norms of the network itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfMethod {
    MeanSd,
    MedianIqr,
    MedianMad,
}

/// One shared (location, scale) for all `m` norms of a single network.
pub fn calibrate_self(norms: &[f64], method: SelfMethod) -> Result<L1Calibration> {
    let m = norms.len();
    if m < 4 {
        return Err(Error::param(format!("self calibration needs at least 4 norms, got {m}")));
    }
    let (loc, scale, source) = match method {
        SelfMethod::MeanSd => (mean(norms), sample_sd(norms), CalibrationSource::SelfMeanSd),
        SelfMethod::MedianIqr => {
            let mut s = norms.to_vec();
            s.sort_by(f64::total_cmp);
            let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
            (quantile_sorted(&s, 0.5), iqr / IQR_CONSISTENCY, CalibrationSource::SelfMedianIqr)
        }
        SelfMethod::MedianMad => {
            let med = median(norms);
            let dev: Vec<f64> = norms.iter().map(|x| (x - med).abs()).collect();
            (med, median(&dev) / MAD_CONSISTENCY, CalibrationSource::SelfMedianMad)
        }
    };
    if !(scale > 0.0) {
        return Err(Error::degenerate(format!("{} scale of the norms is zero", source.as_str())));
    }
    Ok(L1Calibration { mus: vec![loc; m], sigmas: vec![scale; m], source })
}

/// `L = -min_k (norm_k - mu_k) / sigma_k` and the 1-based index `k*` of the
/// minimizing eigenvector.
pub fn l1_statistic(norms: &[f64], cal: &L1Calibration) -> Result<(f64, usize)> {
    if norms.len() != cal.m() || norms.is_empty() {
        return Err(Error::param(format!("{} norms against a calibration for {}", norms.len(), cal.m())));
    }
    let mut best = (f64::INFINITY, 0);
    for (k, ((x, mu), sd)) in norms.iter().zip(&cal.mus).zip(&cal.sigmas).enumerate() {
        let z = (x - mu) / sd;
        if z < best.0 {
            best = (z, k + 1);
        }
    }
    Ok((-best.0, best.1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GumbelSource {
    Evt,
    Mom,
}

impl GumbelSource {
    pub fn as_str(self) -> &'static str {
        match self {
            GumbelSource::Evt => "evt",
            GumbelSource::Mom => "mom",
        }
    }
}

/// Gumbel location `a_m` and scale `b_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelParams {
    pub a_m: f64,
    pub b_m: f64,
    pub source: GumbelSource,
}

/// Extreme-value normalizing constants for the maximum of `m` standard
/// normals: `a_m = Phi^-1(1 - 1/m)`, `b_m = 1 / a_m`.
pub fn evt_params(m: usize) -> Result<GumbelParams> {
    if m < 2 {
        return Err(Error::param(format!("extreme-value parameters need m >= 2, got {m}")));
    }
    let a_m = inverse_normal_cdf(1.0 - 1.0 / m as f64)?;
    if !(a_m > 0.0) {
        return Err(Error::param(format!("extreme-value location is not positive for m = {m}")));
    }
    Ok(GumbelParams { a_m, b_m: 1.0 / a_m, source: GumbelSource::Evt })
}

/// Method-of-moments Gumbel fit to historical statistics.
pub fn mom_gumbel_params(historical_l: &[f64]) -> Result<GumbelParams> {
    if historical_l.len() < 2 {
        return Err(Error::param("method-of-moments fit needs at least 2 statistics"));
    }
    let s = sample_sd(historical_l);
    if !(s > 0.0) {
        return Err(Error::degenerate("historical statistics have zero spread"));
    }
    let b_m = 6f64.sqrt() * s / std::f64::consts::PI;
    Ok(GumbelParams { a_m: mean(historical_l) - b_m * EULER_GAMMA, b_m, source: GumbelSource::Mom })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Result {
    pub l: f64,
    /// `(L - a_m) / b_m`, compared against standard Gumbel quantiles.
    pub g: f64,
    pub k_star: usize,
    pub a_m: f64,
    pub b_m: f64,
    pub standardization: CalibrationSource,
    pub gumbel_source: GumbelSource,
    pub threshold: f64,
    pub signal: bool,
}

impl L1Result {
    pub const CSV_HEADER: &'static str = "L,G,k_star,a_m,b_m,standardization,gumbel_source,threshold,signal";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt_g6(self.l),
            fmt_g6(self.g),
            self.k_star,
            fmt_g6(self.a_m),
            fmt_g6(self.b_m),
            self.standardization.as_str(),
            self.gumbel_source.as_str(),
            fmt_g6(self.threshold),
            self.signal
        )
    }
}

/// Maps `L` to `G = (L - a_m) / b_m` and signals when `G` exceeds the standard
/// Gumbel `1 - alpha` quantile.
pub fn gumbel_transform_and_decide(
    l: f64,
    k_star: usize,
    standardization: CalibrationSource,
    params: &GumbelParams,
    alpha: f64,
) -> Result<L1Result> {
    if !(params.b_m > 0.0) {
        return Err(Error::param(format!("Gumbel scale must be positive, got {}", params.b_m)));
    }
    let threshold = gumbel_quantile(1.0 - alpha)?;
    let g = (l - params.a_m) / params.b_m;
    Ok(L1Result {
        l,
        g,
        k_star,
        a_m: params.a_m,
        b_m: params.b_m,
        standardization,
        gumbel_source: params.source,
        threshold,
        signal: g > threshold,
    })
}

/// Number of eigenvectors used when none is configured: 30 up to n = 256,
/// 50 above (never more than n).
pub fn default_m(n: usize) -> usize {
    if n <= 256 { 30 } else { 50 }.min(n)
}

/// How the norms of one network are standardized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Standardization {
    /// Per-eigenvector mean and sd from anomaly-free networks of the same model.
    Historical,
    MeanSd,
    MedianIqr,
    MedianMad,
}

impl Standardization {
    pub fn self_method(self) -> Option<SelfMethod> {
        match self {
            Standardization::Historical => None,
            Standardization::MeanSd => Some(SelfMethod::MeanSd),
            Standardization::MedianIqr => Some(SelfMethod::MedianIqr),
            Standardization::MedianMad => Some(SelfMethod::MedianMad),
        }
    }

    pub fn needs_history(self) -> bool {
        self == Standardization::Historical
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct L1Config {
    /// Eigenvectors used; `None` picks [`default_m`], `Some(n)` uses all.
    pub m: Option<usize>,
    pub standardization: Standardization,
    pub gumbel: GumbelSource,
    pub alpha: f64,
}

impl Default for L1Config {
    fn default() -> Self {
        Self { m: None, standardization: Standardization::MedianIqr, gumbel: GumbelSource::Evt, alpha: 0.05 }
    }
}

impl L1Config {
    pub fn resolved_m(&self, n: usize) -> Result<usize> {
        let m = self.m.unwrap_or_else(|| default_m(n));
        if m == 0 || m > n {
            return Err(Error::param(format!("m must lie in 1..={n}, got {m}")));
        }
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    /// True when running the detector requires anomaly-free reference
    /// networks (historical standardization or a moment-fitted Gumbel).
    pub fn needs_history(&self) -> bool {
        self.standardization.needs_history() || self.gumbel == GumbelSource::Mom
    }
}

/// Reference quantities for the L1 detector that do not depend on the
/// observed network.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Reference {
    pub m: usize,
    pub historical: Option<L1Calibration>,
    pub gumbel: GumbelParams,
}

impl L1Reference {
    /// Reference for a configuration without history (EVT Gumbel, self
    /// standardization).
    pub fn without_history(cfg: &L1Config, m: usize) -> Result<Self> {
        if cfg.needs_history() {
            return Err(Error::param("this L1 configuration needs anomaly-free reference networks"));
        }
        Ok(Self { m, historical: None, gumbel: evt_params(m)? })
    }

    /// Builds the reference from norms of `h` anomaly-free networks (each row
    /// holds the first `m` norms).
    pub fn from_history(cfg: &L1Config, rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        let historical = if cfg.standardization.needs_history() { Some(calibrate_historical(rows)?) } else { None };
        let gumbel = match cfg.gumbel {
            GumbelSource::Evt => evt_params(m)?,
            GumbelSource::Mom => {
                let ls = rows
                    .iter()
                    .map(|r| {
                        let cal = match &historical {
                            Some(c) => Cow::Borrowed(c),
                            None => Cow::Owned(calibrate_self(r, cfg.standardization.self_method().unwrap())?),
                        };
                        l1_statistic(r, &cal).map(|(l, _)| l)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                mom_gumbel_params(&ls)?
            }
        };
        Ok(Self { m, historical, gumbel })
    }
}

/// Full decision from the first `reference.m` norms of a network.
pub fn l1_detect(norms: &[f64], cfg: &L1Config, reference: &L1Reference) -> Result<L1Result> {
    cfg.validate()?;
    let norms = norms
        .get(..reference.m)
        .ok_or_else(|| Error::param(format!("need {} norms, got {}", reference.m, norms.len())))?;
    let cal = match (cfg.standardization.self_method(), &reference.historical) {
        (Some(method), _) => Cow::Owned(calibrate_self(norms, method)?),
        (None, Some(c)) => Cow::Borrowed(c),
        (None, None) => return Err(Error::param("historical standardization without a historical calibration")),
    };
    let (l, k_star) = l1_statistic(norms, &cal)?;
    gumbel_transform_and_decide(l, k_star, cal.source, &reference.gumbel, cfg.alpha)
}

/// [`l1_detect`] on a spectrum.
pub fn l1_detect_spectrum(spectrum: &ResidualSpectrum, cfg: &L1Config, reference: &L1Reference) -> Result<L1Result> {
    l1_detect(&eigenvector_l1_norms(spectrum), cfg, reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::sample_er_binary;
    use crate::rng;
    use crate::spectral::{network_spectrum, top_eigenpairs, ExpectationModel, ExpectationOptions, SymmetricMatrix};
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::{Distribution, Gumbel, StandardNormal};

    fn spectrum_of(vectors: Vec<Vec<f64>>) -> ResidualSpectrum {
        ResidualSpectrum { eigenvalues: vec![0.0; vectors.len()], eigenvectors: vectors }
    }

    #[test]
    fn norm_bounds_attained() {
        let n = 9;
        let e1: Vec<f64> = (0..n).map(|i| f64::from(u8::from(i == 0))).collect();
        let flat = vec![1.0 / (n as f64).sqrt(); n];
        let norms = eigenvector_l1_norms(&spectrum_of(vec![e1, flat]));
        assert_eq!(norms[0], 1.0);
        assert!((norms[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn historical_calibration() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 2.0]];
        assert!(matches!(calibrate_historical(&rows), Err(Error::Degenerate(_))));
        assert!(matches!(calibrate_historical(&rows[..1]), Err(Error::Parameter(_))));
        let rows = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 9.0]];
        let c = calibrate_historical(&rows).unwrap();
        assert_eq!(c.mus, vec![3.0, 5.0]);
        assert_eq!(c.sigmas[0], 2.0);
        assert!((c.sigmas[1] - 13f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.source, CalibrationSource::HistoricalMom);

        // iid standard normal columns
        let mut r = rng::seeded(3);
        let rows: Vec<Vec<f64>> =
            (0..4000).map(|_| (0..3).map(|_| r.sample::<f64, _>(StandardNormal)).collect()).collect();
        let c = calibrate_historical(&rows).unwrap();
        for k in 0..3 {
            assert!(c.mus[k].abs() < 4.0 / 4000f64.sqrt());
            assert!((c.sigmas[k] - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn self_calibration_by_hand() {
        let norms: Vec<f64> = (1..=8).map(f64::from).collect();
        // type-7 quartiles of 1..8: 2.75 and 6.25, median 4.5
        let c = calibrate_self(&norms, SelfMethod::MedianIqr).unwrap();
        assert_eq!(c.mus, vec![4.5; 8]);
        assert!((c.sigmas[0] - 3.5 / 1.3489).abs() < 1e-12);
        // deviations from 4.5 are 0.5, 1.5, 2.5, 3.5 twice each: MAD = 2
        let c = calibrate_self(&norms, SelfMethod::MedianMad).unwrap();
        assert!((c.sigmas[3] - 2.0 / 0.67449).abs() < 1e-12);
        let c = calibrate_self(&norms, SelfMethod::MeanSd).unwrap();
        assert_eq!(c.mus[0], 4.5);
        assert!((c.sigmas[0] - 6f64.sqrt()).abs() < 1e-12);

        for method in [SelfMethod::MeanSd, SelfMethod::MedianIqr, SelfMethod::MedianMad] {
            assert!(matches!(calibrate_self(&[2.0; 6], method), Err(Error::Degenerate(_))));
            assert!(matches!(calibrate_self(&[1.0, 2.0, 3.0], method), Err(Error::Parameter(_))));
        }
    }

    #[test]
    fn robust_scales_are_normal_consistent() {
        let mut r = rng::seeded(5);
        let xs: Vec<f64> = (0..100_000).map(|_| 10.0 + 2.0 * r.sample::<f64, _>(StandardNormal)).collect();
        for method in [SelfMethod::MedianIqr, SelfMethod::MedianMad] {
            let c = calibrate_self(&xs, method).unwrap();
            assert!((c.sigmas[0] / 2.0 - 1.0).abs() < 0.01, "{method:?}: {}", c.sigmas[0]);
            assert!((c.mus[0] - 10.0).abs() < 0.02);
        }
    }

    #[test]
    fn statistic_by_construction() {
        let cal = L1Calibration {
            mus: vec![5.0; 8],
            sigmas: (1..=8).map(f64::from).collect(),
            source: CalibrationSource::HistoricalMom,
        };
        let mut norms = cal.mus.clone();
        assert_eq!(l1_statistic(&norms, &cal).unwrap(), (0.0, 1));
        norms[4] = 5.0 - 3.0 * cal.sigmas[4];
        assert_eq!(l1_statistic(&norms, &cal).unwrap(), (3.0, 5));
        assert!(l1_statistic(&norms[..3], &cal).is_err());
    }

    #[test]
    fn evt_constants() {
        let p = evt_params(50).unwrap();
        assert!((p.a_m - 2.05375).abs() < 5e-6);
        assert!((p.b_m - 0.48691).abs() < 5e-6);
        assert!((evt_params(30).unwrap().a_m - 1.83391).abs() < 5e-6);
        assert!(matches!(evt_params(2), Err(Error::Parameter(_))));
        assert!(matches!(evt_params(1), Err(Error::Parameter(_))));
    }

    #[test]
    fn mom_two_point_case() {
        // S of {0, 2} is sqrt(2); b = sqrt(6) sqrt(2) / pi, a = 1 - b gamma
        let p = mom_gumbel_params(&[0.0, 2.0]).unwrap();
        let b = 12f64.sqrt() / std::f64::consts::PI;
        assert!((p.b_m - b).abs() < 1e-12);
        assert!((p.a_m - (1.0 - b * 0.57722)).abs() < 1e-12);
        assert!(matches!(mom_gumbel_params(&[1.0, 1.0, 1.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mom_recovers_standard_gumbel_and_far() {
        let mut r = rng::seeded(8);
        let g = Gumbel::new(0.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..100_000).map(|_| g.sample(&mut r)).collect();
        let p = mom_gumbel_params(&xs).unwrap();
        assert!(p.a_m.abs() < 0.02, "{p:?}");
        assert!((p.b_m - 1.0).abs() < 0.02, "{p:?}");

        // both parameterizations give alpha +- 1 point on synthetic data
        let unit = GumbelParams { a_m: 0.0, b_m: 1.0, source: GumbelSource::Evt };
        let fresh: Vec<f64> = (0..20_000).map(|_| g.sample(&mut r)).collect();
        for params in [unit, p] {
            let alarms = fresh
                .iter()
                .filter(|&&l| gumbel_transform_and_decide(l, 1, CalibrationSource::HistoricalMom, &params, 0.05).unwrap().signal)
                .count();
            let far = alarms as f64 / fresh.len() as f64;
            assert!((far - 0.05).abs() < 0.01, "{far}");
        }
    }

    #[test]
    fn gumbel_thresholds() {
        let p = evt_params(50).unwrap();
        let r = gumbel_transform_and_decide(p.a_m, 1, CalibrationSource::SelfMedianIqr, &p, 0.05).unwrap();
        assert!((r.threshold - 2.9702).abs() < 1e-4);
        assert_eq!(r.g, 0.0);
        assert!(!r.signal);
        let r = gumbel_transform_and_decide(p.a_m, 1, CalibrationSource::SelfMedianIqr, &p, 0.01).unwrap();
        assert!((r.threshold - 4.6001).abs() < 1e-4);
        // G = 0 sits at Gumbel CDF e^-1, so no alpha below 1 - e^-1 signals
        let r = gumbel_transform_and_decide(p.a_m, 1, CalibrationSource::SelfMedianIqr, &p, 0.62).unwrap();
        assert!(!r.signal);
        let bad = GumbelParams { b_m: 0.0, ..p };
        assert!(gumbel_transform_and_decide(1.0, 1, CalibrationSource::SelfMedianIqr, &bad, 0.05).is_err());
    }

    #[test]
    fn default_m_rule() {
        assert_eq!(default_m(128), 30);
        assert_eq!(default_m(256), 30);
        assert_eq!(default_m(257), 50);
        assert_eq!(default_m(1024), 50);
        assert_eq!(default_m(10), 10);
    }

    #[test]
    fn historical_mu_is_stable_across_seeds() {
        // per-eigenvector means from 150 ER n=128 networks, two disjoint seed sets
        let model = ExpectationModel::ErBinary { p0: Some(0.1) };
        let mu1 = |base: u64| {
            let rows: Vec<Vec<f64>> = (0..150)
                .map(|s| {
                    let a = sample_er_binary(128, 0.1, base + s).unwrap();
                    eigenvector_l1_norms(&network_spectrum(&a, &model, ExpectationOptions::default(), 5).unwrap())
                })
                .collect();
            calibrate_historical(&rows).unwrap().mus[0]
        };
        let (a, b) = (mu1(0), mu1(10_000));
        assert!((a / b - 1.0).abs() < 0.01, "{a} vs {b}");
    }

    #[test]
    fn detect_pipeline_is_deterministic() {
        let a = sample_er_binary(96, 0.1, 4).unwrap();
        let model = ExpectationModel::ErBinary { p0: Some(0.1) };
        let cfg = L1Config::default();
        let m = cfg.resolved_m(96).unwrap();
        let reference = L1Reference::without_history(&cfg, m).unwrap();
        let run = || {
            let s = network_spectrum(&a, &model, ExpectationOptions::default(), m).unwrap();
            l1_detect_spectrum(&s, &cfg, &reference).unwrap()
        };
        assert_eq!(run(), run());
        let hist = L1Config { standardization: Standardization::Historical, ..cfg };
        assert!(L1Reference::without_history(&hist, m).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn norms_within_bounds_and_sign_free(seed in any::<u64>(), n in 2usize..20) {
            let mut r = rng::seeded(seed);
            let mut b = SymmetricMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    let x = r.random::<f64>() - 0.5;
                    b.set(i, j, x);
                    b.set(j, i, x);
                }
            }
            let s = top_eigenpairs(&b, n).unwrap();
            let norms = eigenvector_l1_norms(&s);
            for &x in &norms {
                prop_assert!(x >= 1.0 - 1e-12 && x <= (n as f64).sqrt() + 1e-12);
            }
            let flipped = spectrum_of(s.eigenvectors.iter().map(|v| v.iter().map(|x| -x).collect()).collect());
            prop_assert_eq!(eigenvector_l1_norms(&flipped), norms);
        }

        #[test]
        fn median_iqr_resists_small_outliers(
            base in prop::collection::vec(5.0f64..10.0, 8..60),
            shrink in prop::collection::vec(0.0f64..1.0, 15),
            order in any::<u64>(),
        ) {
            // an anomaly pulls a few norms down; replacing the smallest
            // floor(m/4) - 1 norms by anything smaller leaves the median and
            // both quartiles untouched
            let m = base.len();
            let mut sorted = base.clone();
            sorted.sort_by(f64::total_cmp);
            let replace = m / 4 - 1;
            let mut perturbed = sorted.clone();
            for (slot, f) in perturbed.iter_mut().zip(&shrink).take(replace) {
                *slot = sorted[0] * f;
            }
            // input order must not matter either
            let k = (order % m as u64) as usize;
            perturbed.rotate_left(k);
            let before = calibrate_self(&sorted, SelfMethod::MedianIqr);
            let after = calibrate_self(&perturbed, SelfMethod::MedianIqr);
            match (before, after) {
                (Ok(b), Ok(a)) => prop_assert_eq!(b, a),
                (Err(_), Err(_)) => {}
                (b, a) => prop_assert!(false, "{b:?} vs {a:?}"),
            }
        }
    }
}
