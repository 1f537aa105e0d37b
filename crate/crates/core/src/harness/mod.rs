//! Monte Carlo studies: null quantiles, detection and false-alarm rates, and
//! parameter sweeps.
//!
//! Replicate `r` draws everything it needs from stream `r` of the study seed,
//! runs every configured detector on one shared residual spectrum and hands
//! back its outcome. Replicates run in parallel on the current rayon pool and
//! are collected in index order, so a report does not depend on the thread
//! count.

mod csv;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chisq::{chi_square_max, ChiSqConfig};
use crate::error::{Error, Result};
use crate::l1norm::{eigenvector_l1_norms, l1_detect, L1Config, L1Reference, Standardization};
use crate::netgen::{
    embed_anomaly_with, pareto_degrees_with, rmat_binary_with, rmat_edges_for_density, sample_anomaly_nodes,
    AdjacencyMatrix, AnomalyMode, AnomalySpec, ModelSpec,
};
use crate::report::fmt_g6;
use crate::rng::{self, SHARED_STREAM};
use crate::spectral::{network_spectrum, ExpectationModel, ExpectationOptions, ResidualSpectrum};
use crate::stats::quantile_sorted;

pub use self::csv::{write_power_csv, write_quantiles_csv, write_samples_csv, POWER_HEADER, QUANTILES_HEADER, SAMPLES_HEADER};

/// Quantile levels reported by every study.
pub const QUANTILE_LEVELS: [f64; 5] = [0.95, 0.96, 0.97, 0.98, 0.99];

/// Streams from here on are used for anomaly-free reference networks, far
/// away from replicate indices.
const HISTORY_STREAM_BASE: u64 = 1 << 62;

pub use crate::stats::empirical_quantile;

/// Study-level model description. Unlike [`ModelSpec`] it may refer to
/// quantities drawn once per study (degree sequences), which are taken from
/// the study's shared stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelRecipe {
    ErBinary {
        p0: f64,
    },
    ErCount {
        lambda0: f64,
    },
    /// R-MAT with either an explicit edge budget or `M = n(n-1) p0`.
    Rmat {
        #[serde(default)]
        p0: Option<f64>,
        #[serde(default)]
        edges: Option<u64>,
        #[serde(default = "rmat_default_probs")]
        probs: [f64; 4],
    },
    /// Chung-Lu with explicit degrees, or with the observed degrees of one
    /// R-MAT draw at density `p0`.
    ChungLuBinary {
        #[serde(default)]
        p0: Option<f64>,
        #[serde(default)]
        degrees: Option<Vec<f64>>,
        #[serde(default = "rmat_default_probs")]
        probs: [f64; 4],
    },
    /// Poisson Chung-Lu with Pareto(eta, theta) expected degrees drawn once,
    /// or explicit degrees. `c` defaults to `1 / sum(k)`.
    ChungLuCount {
        #[serde(default)]
        eta: Option<f64>,
        #[serde(default = "pareto_default_theta")]
        theta: f64,
        #[serde(default)]
        degrees: Option<Vec<f64>>,
        #[serde(default)]
        c: Option<f64>,
    },
}

fn rmat_default_probs() -> [f64; 4] {
    [0.5, 0.125, 0.125, 0.25]
}

fn pareto_default_theta() -> f64 {
    1.2
}

impl ModelRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            ModelRecipe::ErBinary { .. } => "er_binary",
            ModelRecipe::ErCount { .. } => "er_count",
            ModelRecipe::Rmat { .. } => "rmat",
            ModelRecipe::ChungLuBinary { .. } => "chung_lu_binary",
            ModelRecipe::ChungLuCount { .. } => "chung_lu_count",
        }
    }

    /// The parameter that sets the density: `p0`, `lambda0`, the edge budget,
    /// or `eta`. NaN when the model is given by explicit degrees.
    pub fn density_param(&self) -> f64 {
        match self {
            ModelRecipe::ErBinary { p0 } => *p0,
            ModelRecipe::ErCount { lambda0 } => *lambda0,
            ModelRecipe::Rmat { p0, edges, .. } => p0.or(edges.map(|e| e as f64)).unwrap_or(f64::NAN),
            ModelRecipe::ChungLuBinary { p0, .. } => p0.unwrap_or(f64::NAN),
            ModelRecipe::ChungLuCount { eta, .. } => eta.unwrap_or(f64::NAN),
        }
    }

    /// Concrete model for networks of `n` nodes. Shared draws come from
    /// stream [`SHARED_STREAM`] of `seed`.
    pub fn resolve(&self, n: usize, seed: u64) -> Result<ModelSpec> {
        let spec = match self {
            ModelRecipe::ErBinary { p0 } => ModelSpec::ErBinary { p0: *p0 },
            ModelRecipe::ErCount { lambda0 } => ModelSpec::ErCount { lambda0: *lambda0 },
            ModelRecipe::Rmat { p0, edges, probs } => {
                let [a, b, c, d] = *probs;
                ModelSpec::Rmat { edges: rmat_budget(n, *p0, *edges)?, a, b, c, d }
            }
            ModelRecipe::ChungLuBinary { p0, degrees, probs } => match (p0, degrees) {
                (_, Some(k)) => ModelSpec::ChungLuBinary { degrees: k.clone() },
                (Some(p), None) => {
                    let edges = rmat_budget(n, Some(*p), None)?;
                    let mut r = rng::stream(seed, SHARED_STREAM);
                    let base = rmat_binary_with(n, edges, *probs, &mut r)?;
                    ModelSpec::ChungLuBinary { degrees: base.degrees() }
                }
                (None, None) => return Err(Error::param("chung_lu_binary needs p0 or degrees")),
            },
            ModelRecipe::ChungLuCount { eta, theta, degrees, c } => {
                let k = match (eta, degrees) {
                    (_, Some(k)) => k.clone(),
                    (Some(eta), None) => pareto_degrees_with(n, *eta, *theta, &mut rng::stream(seed, SHARED_STREAM))?,
                    (None, None) => return Err(Error::param("chung_lu_count needs eta or degrees")),
                };
                match c {
                    Some(c) => ModelSpec::ChungLuCount { degrees: k, c: *c },
                    None => ModelSpec::chung_lu_count_default(k),
                }
            }
        };
        spec.validate(n)?;
        Ok(spec)
    }
}

fn rmat_budget(n: usize, p0: Option<f64>, edges: Option<u64>) -> Result<u64> {
    match (p0, edges) {
        (_, Some(e)) => Ok(e),
        (Some(p), None) if (0.0..=1.0).contains(&p) => Ok(rmat_edges_for_density(n, p)),
        (Some(p), None) => Err(Error::param(format!("p0 must lie in [0, 1], got {p}"))),
        (None, None) => Err(Error::param("rmat needs p0 or edges")),
    }
}

/// How `E[A]` is formed inside a study.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpectationChoice {
    /// Estimate `p0` / `lambda0` from each network instead of using the
    /// generating value (ER models only).
    pub estimate: bool,
    pub zero_diagonal: bool,
}

impl ExpectationChoice {
    pub fn model(&self, spec: &ModelSpec) -> ExpectationModel {
        ExpectationModel::for_model(spec, self.estimate)
    }

    pub fn options(&self) -> ExpectationOptions {
        ExpectationOptions { zero_diagonal: self.zero_diagonal }
    }
}

/// A detector and its settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DetectorSpec {
    ChiSquare(ChiSqConfig),
    L1Norm(L1Config),
}

impl DetectorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorSpec::ChiSquare(_) => "chi_square",
            DetectorSpec::L1Norm(_) => "l1_norm",
        }
    }

    /// Short settings tag used to tell detectors of the same kind apart.
    pub fn variant(&self, n: usize) -> String {
        match self {
            DetectorSpec::ChiSquare(c) => {
                let mut v = if c.improved { format!("improved_k{}", fmt_g6(c.k)) } else { "unimproved".to_string() };
                if c.rotation_steps != ChiSqConfig::default().rotation_steps {
                    v.push_str(&format!("_steps{}", c.rotation_steps));
                }
                v
            }
            DetectorSpec::L1Norm(c) => {
                let m = match c.resolved_m(n) {
                    Ok(m) if m == n => "all".to_string(),
                    Ok(m) => m.to_string(),
                    Err(_) => "invalid".to_string(),
                };
                let st = match c.standardization {
                    Standardization::Historical => "historical",
                    Standardization::MeanSd => "mean_sd",
                    Standardization::MedianIqr => "median_iqr",
                    Standardization::MedianMad => "median_mad",
                };
                format!("m{m}_{st}_{}", c.gumbel.as_str())
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            DetectorSpec::ChiSquare(c) => c.alpha,
            DetectorSpec::L1Norm(c) => c.alpha,
        }
    }

    pub fn set_alpha(&mut self, alpha: f64) {
        match self {
            DetectorSpec::ChiSquare(c) => c.alpha = alpha,
            DetectorSpec::L1Norm(c) => c.alpha = alpha,
        }
    }

    /// Eigenpairs this detector reads.
    pub fn eigenpairs(&self, n: usize) -> Result<usize> {
        match self {
            DetectorSpec::ChiSquare(c) => {
                c.validate()?;
                if n < 2 {
                    return Err(Error::param("chi-square needs at least 2 nodes"));
                }
                Ok(2)
            }
            DetectorSpec::L1Norm(c) => {
                c.validate()?;
                c.resolved_m(n)
            }
        }
    }
}

/// Size of an embedded anomaly: a node count or a percentage of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalySize {
    Nodes(usize),
    /// Percent of `n`, rounded to the nearest node count.
    Percent(f64),
}

impl AnomalySize {
    pub fn nodes(&self, n: usize) -> usize {
        match *self {
            AnomalySize::Nodes(k) => k,
            AnomalySize::Percent(p) => (p / 100.0 * n as f64).round() as usize,
        }
    }
}

/// Anomaly inserted into the anomalous half of a power study; the node set is
/// drawn afresh in every replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnomalyRecipe {
    pub size: AnomalySize,
    pub mode: AnomalyMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub n: usize,
    pub model: ModelRecipe,
    pub detectors: Vec<DetectorSpec>,
    pub replicates: usize,
    pub anomaly: Option<AnomalyRecipe>,
    pub base_seed: u64,
    pub expectation: ExpectationChoice,
    /// Anomaly-free reference networks drawn for L1 detectors that need them.
    pub history: usize,
}

impl StudyConfig {
    pub fn new(n: usize, model: ModelRecipe, detectors: Vec<DetectorSpec>, replicates: usize, base_seed: u64) -> Self {
        Self {
            n,
            model,
            detectors,
            replicates,
            anomaly: None,
            base_seed,
            expectation: ExpectationChoice::default(),
            history: 1000,
        }
    }

    pub fn with_anomaly(mut self, anomaly: AnomalyRecipe) -> Self {
        self.anomaly = Some(anomaly);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::param("replicates must be at least 1"));
        }
        if self.detectors.is_empty() {
            return Err(Error::param("a study needs at least one detector"));
        }
        for d in &self.detectors {
            d.eigenpairs(self.n)?;
        }
        if let Some(a) = &self.anomaly {
            let k = a.size.nodes(self.n);
            if k < 2 {
                return Err(Error::param(format!("anomaly needs at least 2 nodes, got {k}")));
            }
            if k > self.n {
                return Err(Error::param(format!("anomaly of {k} nodes exceeds network order {}", self.n)));
            }
        }
        let needs_history = self.detectors.iter().any(|d| matches!(d, DetectorSpec::L1Norm(c) if c.needs_history()));
        if needs_history && self.history < 2 {
            return Err(Error::param("history must be at least 2 for historical L1 calibration"));
        }
        Ok(())
    }
}

/// Confusion counts; positives are replicates carrying an anomaly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn record(&mut self, anomalous: bool, signal: bool) {
        match (anomalous, signal) {
            (true, true) => self.tp += 1,
            (true, false) => self.fn_ += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
        }
    }

    /// `TP / (TP + FN)`; NaN without anomalous replicates.
    pub fn detection_rate(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64
    }

    /// `FP / (FP + TN)`; NaN without null replicates.
    pub fn false_alarm_rate(&self) -> f64 {
        self.fp as f64 / (self.fp + self.tn) as f64
    }
}

/// One detector's view of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorReport {
    pub detector: DetectorSpec,
    pub variant: String,
    /// `(replicate, statistic)` for every replicate with a usable statistic,
    /// in replicate order. Degenerate replicates are left out.
    pub samples: Vec<(usize, f64)>,
    /// Empirical quantiles at [`QUANTILE_LEVELS`] of the null samples; `None`
    /// when there are none.
    pub quantiles: Option<[f64; 5]>,
    pub degenerate_count: usize,
    /// Present for power studies. Degenerate replicates count as no signal.
    pub confusion: Option<Confusion>,
    /// Set when the detector could not run at all (e.g. its reference
    /// calibration failed); the other fields are then empty.
    pub failure: Option<String>,
}

impl DetectorReport {
    pub fn statistics(&self) -> Vec<f64> {
        self.samples.iter().map(|&(_, s)| s).collect()
    }

    pub fn q95(&self) -> Option<f64> {
        self.quantiles.map(|q| q[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub model: String,
    pub n: usize,
    pub density_param: f64,
    pub replicates: usize,
    /// Anomaly node count for power studies.
    pub anomaly_size: Option<usize>,
    pub detectors: Vec<DetectorReport>,
}

/// Outcome of one detector on one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// Statistic on the detector's reporting scale (chi-square value, or the
    /// Gumbel-transformed `G` for L1) and the signal bit.
    Value { statistic: f64, signal: bool },
    Degenerate,
}

struct Prepared {
    spec: ModelSpec,
    expectation: ExpectationModel,
    options: ExpectationOptions,
    m: usize,
    references: Vec<std::result::Result<Option<L1Reference>, String>>,
}

fn sample_network(spec: &ModelSpec, n: usize, anomaly: Option<&AnomalyRecipe>, seed: u64, stream: u64) -> Result<AdjacencyMatrix> {
    let mut r = rng::stream(seed, stream);
    let mut adj = spec.sample_with(n, &mut r)?;
    if let Some(a) = anomaly {
        let nodes = sample_anomaly_nodes(n, a.size.nodes(n), &mut r)?;
        embed_anomaly_with(&mut adj, &AnomalySpec { nodes, mode: a.mode }, spec, &mut r)?;
    }
    Ok(adj)
}

fn spectrum_for(p: &Prepared, adj: &AdjacencyMatrix, m: usize) -> Result<ResidualSpectrum> {
    network_spectrum(adj, &p.expectation, p.options, m)
}

fn prepare(cfg: &StudyConfig) -> Result<Prepared> {
    cfg.validate()?;
    let spec = cfg.model.resolve(cfg.n, cfg.base_seed)?;
    if let Some(a) = &cfg.anomaly {
        let kind_ok = match a.mode {
            AnomalyMode::CliqueBinary { .. } => spec.kind() == crate::netgen::NetworkKind::Binary,
            AnomalyMode::CountShift { .. } => spec.kind() == crate::netgen::NetworkKind::Count,
        };
        if !kind_ok {
            return Err(Error::Mode(format!("anomaly mode does not fit a {} network", spec.kind())));
        }
    }
    let expectation = cfg.expectation.model(&spec);
    let options = cfg.expectation.options();
    let mut m = 0;
    for d in &cfg.detectors {
        m = m.max(d.eigenpairs(cfg.n)?);
    }
    let mut prepared = Prepared { spec, expectation, options, m, references: Vec::new() };
    prepared.references = build_references(cfg, &prepared);
    Ok(prepared)
}

/// L1 reference quantities; history networks are drawn once and shared by
/// every detector that needs them.
fn build_references(cfg: &StudyConfig, p: &Prepared) -> Vec<std::result::Result<Option<L1Reference>, String>> {
    let hist_m = cfg
        .detectors
        .iter()
        .filter_map(|d| match d {
            DetectorSpec::L1Norm(c) if c.needs_history() => c.resolved_m(cfg.n).ok(),
            _ => None,
        })
        .max();
    let history: Option<std::result::Result<Vec<Vec<f64>>, String>> = hist_m.map(|m| {
        (0..cfg.history as u64)
            .into_par_iter()
            .map(|h| {
                let adj = sample_network(&p.spec, cfg.n, None, cfg.base_seed, HISTORY_STREAM_BASE + h)?;
                Ok(eigenvector_l1_norms(&spectrum_for(p, &adj, m)?))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| format!("reference networks: {e}"))
    });
    cfg.detectors
        .iter()
        .map(|d| match d {
            DetectorSpec::ChiSquare(_) => Ok(None),
            DetectorSpec::L1Norm(c) => {
                let m = c.resolved_m(cfg.n).map_err(|e| e.to_string())?;
                if !c.needs_history() {
                    return L1Reference::without_history(c, m).map(Some).map_err(|e| e.to_string());
                }
                let rows = history.as_ref().expect("history drawn when needed").as_ref().map_err(Clone::clone)?;
                let rows: Vec<Vec<f64>> = rows.iter().map(|r| r[..m].to_vec()).collect();
                L1Reference::from_history(c, &rows).map(Some).map_err(|e| format!("reference calibration: {e}"))
            }
        })
        .collect()
}

fn run_detectors(cfg: &StudyConfig, p: &Prepared, spectrum: &Result<ResidualSpectrum>) -> Vec<Outcome> {
    cfg.detectors
        .iter()
        .zip(&p.references)
        .map(|(d, reference)| {
            let Ok(spectrum) = spectrum else { return Outcome::Degenerate };
            let r = match (d, reference) {
                (_, Err(_)) => return Outcome::Degenerate,
                (DetectorSpec::ChiSquare(c), _) => chi_square_max(spectrum, c).map(|r| (r.statistic, r.signal)),
                (DetectorSpec::L1Norm(c), Ok(Some(reference))) => {
                    l1_detect(&eigenvector_l1_norms(spectrum), c, reference).map(|r| (r.g, r.signal))
                }
                (DetectorSpec::L1Norm(_), Ok(None)) => unreachable!("L1 detectors always get a reference"),
            };
            match r {
                Ok((statistic, signal)) => Outcome::Value { statistic, signal },
                Err(_) => Outcome::Degenerate,
            }
        })
        .collect()
}

/// L1 reference quantities for a single detector, drawing `history`
/// anomaly-free networks from `spec` when the configuration needs them.
pub fn l1_reference(
    spec: &ModelSpec,
    n: usize,
    cfg: &L1Config,
    expectation: ExpectationChoice,
    history: usize,
    seed: u64,
) -> Result<L1Reference> {
    cfg.validate()?;
    let m = cfg.resolved_m(n)?;
    if !cfg.needs_history() {
        return L1Reference::without_history(cfg, m);
    }
    if history < 2 {
        return Err(Error::param("history must be at least 2 for historical L1 calibration"));
    }
    let model = expectation.model(spec);
    let rows = (0..history as u64)
        .into_par_iter()
        .map(|h| {
            let adj = sample_network(spec, n, None, seed, HISTORY_STREAM_BASE + h)?;
            Ok(eigenvector_l1_norms(&network_spectrum(&adj, &model, expectation.options(), m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    L1Reference::from_history(cfg, &rows)
}

/// Per-replicate outcomes of a study: `(anomalous, outcome per detector)`.
pub fn run_replicates(cfg: &StudyConfig) -> Result<Vec<(bool, Vec<Outcome>)>> {
    let p = prepare(cfg)?;
    Ok(replicates_prepared(cfg, &p))
}

fn replicates_prepared(cfg: &StudyConfig, p: &Prepared) -> Vec<(bool, Vec<Outcome>)> {
    let anomalous_count = if cfg.anomaly.is_some() { cfg.replicates.div_ceil(2) } else { 0 };
    (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let anomalous = r < anomalous_count;
            let anomaly = if anomalous { cfg.anomaly.as_ref() } else { None };
            let spectrum = sample_network(&p.spec, cfg.n, anomaly, cfg.base_seed, r as u64)
                .and_then(|adj| spectrum_for(p, &adj, p.m));
            (anomalous, run_detectors(cfg, p, &spectrum))
        })
        .collect()
}

fn summarize(cfg: &StudyConfig, p: &Prepared, rows: &[(bool, Vec<Outcome>)]) -> StudyReport {
    let power = cfg.anomaly.is_some();
    let detectors = cfg
        .detectors
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let variant = d.variant(cfg.n);
            if let Err(e) = &p.references[idx] {
                return DetectorReport {
                    detector: *d,
                    variant,
                    samples: Vec::new(),
                    quantiles: None,
                    degenerate_count: 0,
                    confusion: None,
                    failure: Some(e.clone()),
                };
            }
            let mut samples = Vec::new();
            let mut null_stats = Vec::new();
            let mut degenerate_count = 0;
            let mut confusion = Confusion::default();
            for (r, (anomalous, outcomes)) in rows.iter().enumerate() {
                match outcomes[idx] {
                    Outcome::Value { statistic, signal } => {
                        samples.push((r, statistic));
                        if !anomalous {
                            null_stats.push(statistic);
                        }
                        confusion.record(*anomalous, signal);
                    }
                    Outcome::Degenerate => {
                        degenerate_count += 1;
                        confusion.record(*anomalous, false);
                    }
                }
            }
            null_stats.sort_by(f64::total_cmp);
            let quantiles = (!null_stats.is_empty()).then(|| QUANTILE_LEVELS.map(|q| quantile_sorted(&null_stats, q)));
            DetectorReport {
                detector: *d,
                variant,
                samples,
                quantiles,
                degenerate_count,
                confusion: power.then_some(confusion),
                failure: None,
            }
        })
        .collect();
    StudyReport {
        model: cfg.model.name().to_string(),
        n: cfg.n,
        density_param: cfg.model.density_param(),
        replicates: cfg.replicates,
        anomaly_size: cfg.anomaly.map(|a| a.size.nodes(cfg.n)),
        detectors,
    }
}

/// Null distribution of every configured detector.
pub fn run_null_study(cfg: &StudyConfig) -> Result<StudyReport> {
    if cfg.anomaly.is_some() {
        return Err(Error::param("a null study must not configure an anomaly"));
    }
    run_study(cfg)
}

/// Detection and false-alarm rates. The first `ceil(R/2)` replicates carry the
/// anomaly.
pub fn run_power_study(cfg: &StudyConfig) -> Result<StudyReport> {
    if cfg.anomaly.is_none() {
        return Err(Error::param("a power study needs an anomaly"));
    }
    run_study(cfg)
}

/// Null or power study depending on whether an anomaly is configured.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport> {
    let p = prepare(cfg)?;
    let rows = replicates_prepared(cfg, &p);
    Ok(summarize(cfg, &p, &rows))
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    pub config: StudyConfig,
    pub report: std::result::Result<StudyReport, String>,
}

/// Runs every cell (null study without an anomaly, power study with one).
/// Failing cells are recorded and the sweep continues.
pub fn sensitivity_sweep(cells: &[StudyConfig]) -> Result<Vec<SweepCell>> {
    if cells.is_empty() {
        return Err(Error::param("sweep grid is empty"));
    }
    Ok(cells
        .iter()
        .enumerate()
        .map(|(index, config)| SweepCell { index, config: config.clone(), report: run_study(config).map_err(|e| e.to_string()) })
        .collect())
}

/// One row of the long-format sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: usize,
    pub model: String,
    pub n: usize,
    pub density_param: f64,
    pub detector: String,
    pub variant: String,
    pub anomaly_size: Option<usize>,
    pub quantiles: Option<[f64; 5]>,
    pub detection_rate: Option<f64>,
    pub false_alarm_rate: Option<f64>,
    pub degenerate_count: usize,
    pub status: String,
}

/// Flattens a sweep into one row per (cell, detector).
pub fn sweep_table(cells: &[SweepCell]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for cell in cells {
        let cfg = &cell.config;
        match &cell.report {
            Ok(rep) => {
                for d in &rep.detectors {
                    rows.push(SweepRow {
                        cell: cell.index,
                        model: rep.model.clone(),
                        n: rep.n,
                        density_param: rep.density_param,
                        detector: d.detector.name().to_string(),
                        variant: d.variant.clone(),
                        anomaly_size: rep.anomaly_size,
                        quantiles: d.quantiles,
                        detection_rate: d.confusion.map(|c| c.detection_rate()),
                        false_alarm_rate: d.confusion.map(|c| c.false_alarm_rate()),
                        degenerate_count: d.degenerate_count,
                        status: d.failure.clone().map_or_else(|| "ok".to_string(), |f| format!("error: {f}")),
                    });
                }
            }
            Err(e) => {
                for d in &cfg.detectors {
                    rows.push(SweepRow {
                        cell: cell.index,
                        model: cfg.model.name().to_string(),
                        n: cfg.n,
                        density_param: cfg.model.density_param(),
                        detector: d.name().to_string(),
                        variant: d.variant(cfg.n),
                        anomaly_size: cfg.anomaly.map(|a| a.size.nodes(cfg.n)),
                        quantiles: None,
                        detection_rate: None,
                        false_alarm_rate: None,
                        degenerate_count: 0,
                        status: format!("error: {e}"),
                    });
                }
            }
        }
    }
    rows
}
