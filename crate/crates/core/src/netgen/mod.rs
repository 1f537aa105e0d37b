//! Random network generation under the Erdős–Rényi, R-MAT and Chung-Lu
//! background models, plus anomaly embedding.
//!
//! All generators are pure functions of their parameters and seed. The
//! `*_with` variants draw from a caller-supplied generator so that the
//! simulation harness can thread one replicate stream through generation and
//! embedding.

mod edgelist;

pub use edgelist::{read_edge_list, write_edge_list};

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

const PROB_SUM_TOL: f64 = 1e-12;

/// Whether entries are edge indicators or edge counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Binary,
    Count,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Binary => "binary",
            NetworkKind::Count => "count",
        }
    }
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Symmetric `n x n` matrix of nonnegative edge counts, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    kind: NetworkKind,
    entries: Vec<u32>,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize, kind: NetworkKind) -> Self {
        Self { n, kind, entries: vec![0; n * n] }
    }

    /// Builds a matrix from row-major entries, checking symmetry and, for
    /// binary networks, that every entry is 0 or 1.
    pub fn from_entries(n: usize, kind: NetworkKind, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::param(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = Self { n, kind, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Contract(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        if kind == NetworkKind::Binary && m.entries.iter().any(|&v| v > 1) {
            return Err(Error::param("binary network has an entry greater than 1"));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub(crate) fn set_pair(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    /// Row sums `k_i = sum_j A_ij`. A self-loop contributes its entry once.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&v| f64::from(v)).sum())
            .collect()
    }

    /// Total weight on and above the diagonal; the edge count for binary
    /// networks (self-loops included).
    pub fn total_weight(&self) -> u64 {
        let mut s = 0u64;
        for i in 0..self.n {
            for j in i..self.n {
                s += u64::from(self.get(i, j));
            }
        }
        s
    }

    /// Number of node pairs `i < j` with a nonzero entry, divided by
    /// `n(n-1)/2`.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut nz = 0u64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) > 0 {
                    nz += 1;
                }
            }
        }
        nz as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    /// Mean of the off-diagonal entries.
    pub fn off_diagonal_mean(&self) -> f64 {
        let n = self.n;
        let mut s = 0u64;
        for i in 0..n {
            for j in (i + 1)..n {
                s += u64::from(self.get(i, j));
            }
        }
        2.0 * s as f64 / (n * (n - 1)) as f64
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Generating model together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    ErBinary { p0: f64 },
    ErCount { lambda0: f64 },
    /// R-MAT with a target of `edges` edge endpoints placed as `edges / 2`
    /// symmetric placements.
    Rmat { edges: u64, a: f64, b: f64, c: f64, d: f64 },
    ChungLuBinary { degrees: Vec<f64> },
    ChungLuCount { degrees: Vec<f64>, c: f64 },
}

impl ModelSpec {
    /// R-MAT with the partition probabilities `(0.5, 0.125, 0.125, 0.25)`.
    pub fn rmat_standard(edges: u64) -> Self {
        ModelSpec::Rmat { edges, a: 0.5, b: 0.125, c: 0.125, d: 0.25 }
    }

    /// Chung-Lu count model with `c = 1 / sum(k)`, so that expected weighted
    /// degrees reproduce `degrees`.
    pub fn chung_lu_count_default(degrees: Vec<f64>) -> Self {
        let c = 1.0 / degrees.iter().sum::<f64>();
        ModelSpec::ChungLuCount { degrees, c }
    }

    pub fn kind(&self) -> NetworkKind {
        match self {
            ModelSpec::ErBinary { .. } | ModelSpec::Rmat { .. } | ModelSpec::ChungLuBinary { .. } => {
                NetworkKind::Binary
            }
            ModelSpec::ErCount { .. } | ModelSpec::ChungLuCount { .. } => NetworkKind::Count,
        }
    }

    /// Short model name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::ErBinary { .. } => "er_binary",
            ModelSpec::ErCount { .. } => "er_count",
            ModelSpec::Rmat { .. } => "rmat",
            ModelSpec::ChungLuBinary { .. } => "chung_lu_binary",
            ModelSpec::ChungLuCount { .. } => "chung_lu_count",
        }
    }

    /// Checks the model invariants for a network of `n` nodes.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::param(format!("node count must be at least 2, got {n}")));
        }
        match self {
            ModelSpec::ErBinary { p0 } => check_probability("p0", *p0),
            ModelSpec::ErCount { lambda0 } => check_rate("lambda0", *lambda0),
            ModelSpec::Rmat { edges, a, b, c, d } => {
                check_rmat(n, *edges, [*a, *b, *c, *d])?;
                if !(a > d && d > c && (b - c).abs() <= PROB_SUM_TOL) {
                    return Err(Error::param(format!(
                        "R-MAT probabilities must satisfy a > d > c = b, got a={a} b={b} c={c} d={d}"
                    )));
                }
                Ok(())
            }
            ModelSpec::ChungLuBinary { degrees } => {
                check_len(n, degrees)?;
                check_chung_lu_binary(degrees)
            }
            ModelSpec::ChungLuCount { degrees, c } => {
                check_len(n, degrees)?;
                check_chung_lu_count(degrees, *c)
            }
        }
    }

    /// Draws one network of `n` nodes from this model.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<AdjacencyMatrix> {
        self.validate(n)?;
        match self {
            ModelSpec::ErBinary { p0 } => er_binary_with(n, *p0, rng),
            ModelSpec::ErCount { lambda0 } => er_count_with(n, *lambda0, rng),
            ModelSpec::Rmat { edges, a, b, c, d } => rmat_binary_with(n, *edges, [*a, *b, *c, *d], rng),
            ModelSpec::ChungLuBinary { degrees } => chung_lu_binary_with(degrees, rng),
            ModelSpec::ChungLuCount { degrees, c } => chung_lu_count_with(degrees, *c, rng),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<AdjacencyMatrix> {
        self.sample_with(n, &mut rng::seeded(seed))
    }
}

/// R-MAT edge budget `M = n(n-1) p0`, rounded to the nearest even integer.
pub fn rmat_edges_for_density(n: usize, p0: f64) -> u64 {
    let target = n as f64 * (n as f64 - 1.0) * p0;
    let half = (target / 2.0).round().max(1.0);
    2 * half as u64
}

/// Anomalous subgraph to embed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalySpec {
    pub nodes: Vec<usize>,
    pub mode: AnomalyMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AnomalyMode {
    /// Within-set pairs redrawn as Bernoulli(p1).
    CliqueBinary { p1: f64 },
    /// Within-set pairs redrawn as Poisson(base rate + delta).
    CountShift { delta: f64 },
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn check_rate(name: &str, r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be a finite nonnegative rate, got {r}")))
    }
}

fn check_len(n: usize, degrees: &[f64]) -> Result<()> {
    if degrees.len() == n {
        Ok(())
    } else {
        Err(Error::param(format!("degree sequence has length {}, expected {n}", degrees.len())))
    }
}

fn check_rmat(n: usize, edges: u64, probs: [f64; 4]) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::param(format!("R-MAT node count must be a power of two >= 2, got {n}")));
    }
    if edges < 2 || edges % 2 != 0 {
        return Err(Error::param(format!("R-MAT edge target must be even and >= 2, got {edges}")));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::param("R-MAT probabilities must be nonnegative"));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::param(format!("R-MAT probabilities must sum to 1, got {sum}")));
    }
    Ok(())
}

fn check_chung_lu_binary(degrees: &[f64]) -> Result<()> {
    if degrees.len() < 2 {
        return Err(Error::param("Chung-Lu needs at least two nodes"));
    }
    if degrees.iter().any(|k| !k.is_finite() || *k < 0.0) {
        return Err(Error::param("Chung-Lu degrees must be finite and nonnegative"));
    }
    if degrees.iter().sum::<f64>() <= 0.0 {
        return Err(Error::param("Chung-Lu degree sequence is all zero"));
    }
    Ok(())
}

fn check_chung_lu_count(degrees: &[f64], c: f64) -> Result<()> {
    if degrees.len() < 2 {
        return Err(Error::param("Chung-Lu needs at least two nodes"));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::param(format!("Chung-Lu scaling constant must be positive, got {c}")));
    }
    if degrees.iter().any(|k| !k.is_finite() || *k <= 0.0) {
        return Err(Error::param("Chung-Lu count degrees must be positive"));
    }
    Ok(())
}

/// One Poisson draw; a zero rate yields zero.
pub(crate) fn poisson<R: Rng + ?Sized>(rng: &mut R, lambda: f64) -> u32 {
    if lambda <= 0.0 {
        return 0;
    }
    let d = Poisson::new(lambda).expect("positive finite rate");
    d.sample(rng) as u32
}

/// Erdős–Rényi binary network: each pair `i < j` independently Bernoulli(p0).
pub fn sample_er_binary(n: usize, p0: f64, seed: u64) -> Result<AdjacencyMatrix> {
    er_binary_with(n, p0, &mut rng::seeded(seed))
}

pub fn er_binary_with<R: Rng + ?Sized>(n: usize, p0: f64, rng: &mut R) -> Result<AdjacencyMatrix> {
    if n < 2 {
        return Err(Error::param(format!("node count must be at least 2, got {n}")));
    }
    check_probability("p0", p0)?;
    let mut a = AdjacencyMatrix::zeros(n, NetworkKind::Binary);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p0 {
                a.set_pair(i, j, 1);
            }
        }
    }
    Ok(a)
}

/// Erdős–Rényi count network: each pair `i < j` independently Poisson(lambda0).
pub fn sample_er_count(n: usize, lambda0: f64, seed: u64) -> Result<AdjacencyMatrix> {
    er_count_with(n, lambda0, &mut rng::seeded(seed))
}

pub fn er_count_with<R: Rng + ?Sized>(n: usize, lambda0: f64, rng: &mut R) -> Result<AdjacencyMatrix> {
    if n < 2 {
        return Err(Error::param(format!("node count must be at least 2, got {n}")));
    }
    check_rate("lambda0", lambda0)?;
    let mut a = AdjacencyMatrix::zeros(n, NetworkKind::Count);
    if lambda0 == 0.0 {
        return Ok(a);
    }
    let dist = Poisson::new(lambda0).map_err(|e| Error::param(e.to_string()))?;
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = dist.sample(rng);
            a.set_pair(i, j, v as u32);
        }
    }
    Ok(a)
}

/// R-MAT binary network.
///
/// Performs `edges / 2` placements. Each placement descends `log2(n)` levels,
/// picking the top-left, top-right, bottom-left or bottom-right quadrant with
/// probabilities `a, b, c, d`, and sets the landing cell and its mirror to 1.
/// Repeated placements collapse; a diagonal landing makes a self-loop.
///
/// Only the probability sum is checked here; the ordering `a > d > c = b` is
/// a model-level invariant enforced by [`ModelSpec::validate`].
pub fn sample_rmat_binary(
    n: usize,
    edges: u64,
    probs: [f64; 4],
    seed: u64,
) -> Result<AdjacencyMatrix> {
    rmat_binary_with(n, edges, probs, &mut rng::seeded(seed))
}

pub fn rmat_binary_with<R: Rng + ?Sized>(
    n: usize,
    edges: u64,
    probs: [f64; 4],
    rng: &mut R,
) -> Result<AdjacencyMatrix> {
    check_rmat(n, edges, probs)?;
    let levels = n.trailing_zeros();
    let [a, b, c, _] = probs;
    let (ab, abc) = (a + b, a + b + c);
    let mut adj = AdjacencyMatrix::zeros(n, NetworkKind::Binary);
    for _ in 0..edges / 2 {
        let (mut row, mut col) = (0usize, 0usize);
        for _ in 0..levels {
            let u: f64 = rng.random();
            let (dr, dc) = if u < a {
                (0, 0)
            } else if u < ab {
                (0, 1)
            } else if u < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            row = 2 * row + dr;
            col = 2 * col + dc;
        }
        adj.set_pair(row, col, 1);
    }
    Ok(adj)
}

/// Chung-Lu binary network with `p_ij = min(1, k_i k_j / sum(k))`.
pub fn sample_chunglu_binary(degrees: &[f64], seed: u64) -> Result<AdjacencyMatrix> {
    chung_lu_binary_with(degrees, &mut rng::seeded(seed))
}

pub fn chung_lu_binary_with<R: Rng + ?Sized>(degrees: &[f64], rng: &mut R) -> Result<AdjacencyMatrix> {
    check_chung_lu_binary(degrees)?;
    let n = degrees.len();
    let two_m: f64 = degrees.iter().sum();
    let mut adj = AdjacencyMatrix::zeros(n, NetworkKind::Binary);
    for i in 0..n {
        for j in (i + 1)..n {
            let p = (degrees[i] * degrees[j] / two_m).min(1.0);
            if rng.random::<f64>() < p {
                adj.set_pair(i, j, 1);
            }
        }
    }
    Ok(adj)
}

/// `n` Pareto(eta, theta) draws by inversion, `k = eta * U^(-1/theta)`.
pub fn sample_pareto_degrees(n: usize, eta: f64, theta: f64, seed: u64) -> Result<Vec<f64>> {
    pareto_degrees_with(n, eta, theta, &mut rng::seeded(seed))
}

pub fn pareto_degrees_with<R: Rng + ?Sized>(
    n: usize,
    eta: f64,
    theta: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::param(format!("Pareto location must be positive, got {eta}")));
    }
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::param(format!("Pareto shape must be positive, got {theta}")));
    }
    Ok((0..n)
        .map(|_| {
            // (0, 1]; never 0 so the power stays finite
            let u = 1.0 - rng.random::<f64>();
            eta * u.powf(-1.0 / theta)
        })
        .collect())
}

/// Chung-Lu count network with `lambda_ij = c k_i k_j`.
pub fn sample_chunglu_count(degrees: &[f64], c: f64, seed: u64) -> Result<AdjacencyMatrix> {
    chung_lu_count_with(degrees, c, &mut rng::seeded(seed))
}

pub fn chung_lu_count_with<R: Rng + ?Sized>(degrees: &[f64], c: f64, rng: &mut R) -> Result<AdjacencyMatrix> {
    check_chung_lu_count(degrees, c)?;
    let n = degrees.len();
    let mut adj = AdjacencyMatrix::zeros(n, NetworkKind::Count);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = poisson(rng, c * degrees[i] * degrees[j]);
            adj.set_pair(i, j, v);
        }
    }
    Ok(adj)
}

/// Uniformly random node set of the given size, sorted ascending.
pub fn sample_anomaly_nodes<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Result<Vec<usize>> {
    if size < 2 {
        return Err(Error::param(format!("anomaly needs at least 2 nodes, got {size}")));
    }
    if size > n {
        return Err(Error::param(format!("anomaly of {size} nodes exceeds network order {n}")));
    }
    let mut nodes = index::sample(rng, n, size).into_vec();
    nodes.sort_unstable();
    Ok(nodes)
}

/// Returns a copy of `adj` with every pair inside `spec.nodes` redrawn.
///
/// Clique anomalies redraw pairs as Bernoulli(p1); count shifts redraw them
/// as Poisson(base rate + delta) where the base rate comes from `base`
/// (`lambda0` for ER, `c k_i k_j` for Chung-Lu). Pairs with at least one
/// endpoint outside the set are untouched.
pub fn embed_anomaly(
    adj: &AdjacencyMatrix,
    spec: &AnomalySpec,
    base: &ModelSpec,
    seed: u64,
) -> Result<AdjacencyMatrix> {
    let mut out = adj.clone();
    embed_anomaly_with(&mut out, spec, base, &mut rng::seeded(seed))?;
    Ok(out)
}

pub fn embed_anomaly_with<R: Rng + ?Sized>(
    adj: &mut AdjacencyMatrix,
    spec: &AnomalySpec,
    base: &ModelSpec,
    rng: &mut R,
) -> Result<()> {
    let n = adj.n();
    if spec.nodes.len() < 2 {
        return Err(Error::param("anomaly needs at least 2 nodes"));
    }
    if let Some(&bad) = spec.nodes.iter().find(|&&v| v >= n) {
        return Err(Error::param(format!("anomaly node {bad} out of range for n={n}")));
    }
    let mut seen = vec![false; n];
    for &v in &spec.nodes {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::param(format!("anomaly node {v} listed twice")));
        }
    }
    let nodes = &spec.nodes;
    match spec.mode {
        AnomalyMode::CliqueBinary { p1 } => {
            if adj.kind() != NetworkKind::Binary {
                return Err(Error::Mode("clique anomaly requires a binary network".into()));
            }
            check_probability("p1", p1)?;
            for (x, &i) in nodes.iter().enumerate() {
                for &j in &nodes[x + 1..] {
                    let v = u32::from(rng.random::<f64>() < p1);
                    adj.set_pair(i, j, v);
                }
            }
        }
        AnomalyMode::CountShift { delta } => {
            if adj.kind() != NetworkKind::Count {
                return Err(Error::Mode("count shift requires a count network".into()));
            }
            check_rate("delta", delta)?;
            let rate: Box<dyn Fn(usize, usize) -> f64> = match base {
                ModelSpec::ErCount { lambda0 } => {
                    let l = *lambda0;
                    Box::new(move |_, _| l)
                }
                ModelSpec::ChungLuCount { degrees, c } => {
                    check_len(n, degrees)?;
                    let c = *c;
                    Box::new(move |i, j| c * degrees[i] * degrees[j])
                }
                other => {
                    return Err(Error::Mode(format!(
                        "count shift needs a count base model, got {}",
                        other.name()
                    )))
                }
            };
            for (x, &i) in nodes.iter().enumerate() {
                for &j in &nodes[x + 1..] {
                    let v = poisson(rng, rate(i, j) + delta);
                    adj.set_pair(i, j, v);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
