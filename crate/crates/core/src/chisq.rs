//! Quadrant chi-square detector.
//!
//! The first two residual eigenvectors give every node a point in the plane.
//! Under the null the quadrant counts of that cloud are independent along the
//! two axes; an anomaly skews them. The statistic is the 2x2 independence
//! chi-square, maximized over rotations of the cloud.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::ResidualSpectrum;
use crate::stats::chi2_quantile;

/// Quadrant counts. `q[0..4]` hold Q1..Q4 (counter-clockwise from the
/// positive x axis).
///
/// As a contingency table: `O11 = Q1, O12 = Q2, O21 = Q4, O22 = Q3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QuadrantTable {
    pub q: [u64; 4],
}

impl QuadrantTable {
    pub fn new(q1: u64, q2: u64, q3: u64, q4: u64) -> Self {
        Self { q: [q1, q2, q3, q4] }
    }

    pub fn total(&self) -> u64 {
        self.q.iter().sum()
    }

    /// Table cell `O_pq` with `p, q` in `{1, 2}`.
    pub fn cell(&self, p: usize, q: usize) -> u64 {
        match (p, q) {
            (1, 1) => self.q[0],
            (1, 2) => self.q[1],
            (2, 1) => self.q[3],
            (2, 2) => self.q[2],
            _ => panic!("table index ({p},{q}) out of range"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChiSqConfig {
    /// Redistribute points near the origin evenly across the quadrants.
    pub improved: bool,
    /// Origin radius constant: points closer than `k / sqrt(n)` are
    /// redistributed.
    pub k: f64,
    /// Number of rotation angles scanned over `[0, pi/2)`.
    pub rotation_steps: usize,
    pub alpha: f64,
}

impl Default for ChiSqConfig {
    fn default() -> Self {
        Self { improved: false, k: 0.35, rotation_steps: 180, alpha: 0.05 }
    }
}

impl ChiSqConfig {
    pub fn improved() -> Self {
        Self { improved: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::param(format!("k must be positive, got {}", self.k)));
        }
        if self.rotation_steps == 0 {
            return Err(Error::param("rotation_steps must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    /// `D0 = k / sqrt(n)`.
    pub fn origin_radius(&self, n: usize) -> f64 {
        self.k / (n as f64).sqrt()
    }
}

/// Quadrant index (0..4) of a point; the origin goes to Q1.
#[inline]
fn quadrant(x: f64, y: f64) -> usize {
    if x > 0.0 && y >= 0.0 {
        0
    } else if x <= 0.0 && y > 0.0 {
        1
    } else if x < 0.0 && y <= 0.0 {
        2
    } else if x >= 0.0 && y < 0.0 {
        3
    } else {
        0
    }
}

/// Points with radius below `D0` are pooled; the pool contributes `c / 4` to
/// every quadrant and its remainder `r` one each to Q1..Qr.
fn spread_pool(table: &mut QuadrantTable, pooled: u64) {
    let share = pooled / 4;
    let rem = pooled % 4;
    for (i, slot) in table.q.iter_mut().enumerate() {
        *slot += share + u64::from((i as u64) < rem);
    }
}

fn near_origin(x1: &[f64], x2: &[f64], cfg: &ChiSqConfig) -> Vec<bool> {
    let d0 = cfg.origin_radius(x1.len());
    x1.iter().zip(x2).map(|(x, y)| cfg.improved && x.hypot(*y) < d0).collect()
}

fn count_rotated(x1: &[f64], x2: &[f64], near: &[bool], theta: f64) -> QuadrantTable {
    let (s, c) = theta.sin_cos();
    let mut table = QuadrantTable::default();
    let mut pooled = 0;
    for ((&x, &y), &pool) in x1.iter().zip(x2).zip(near) {
        if pool {
            pooled += 1;
            continue;
        }
        table.q[quadrant(x * c - y * s, x * s + y * c)] += 1;
    }
    spread_pool(&mut table, pooled);
    table
}

/// Quadrant counts of the points `(x1[i], x2[i])` after rotating by `theta`.
pub fn quadrant_counts(x1: &[f64], x2: &[f64], theta: f64, cfg: &ChiSqConfig) -> Result<QuadrantTable> {
    if x1.len() != x2.len() {
        return Err(Error::param(format!("coordinate lengths differ: {} vs {}", x1.len(), x2.len())));
    }
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(Error::param(format!("theta must lie in [0, pi/2), got {theta}")));
    }
    cfg.validate()?;
    Ok(count_rotated(x1, x2, &near_origin(x1, x2, cfg), theta))
}

/// Independence chi-square of the 2x2 table.
pub fn chi_square_table_stat(table: &QuadrantTable) -> Result<f64> {
    let n = table.total() as f64;
    let rows = [table.cell(1, 1) + table.cell(1, 2), table.cell(2, 1) + table.cell(2, 2)];
    let cols = [table.cell(1, 1) + table.cell(2, 1), table.cell(1, 2) + table.cell(2, 2)];
    if rows.contains(&0) || cols.contains(&0) {
        return Err(Error::degenerate(format!("quadrant table {:?} has a zero marginal", table.q)));
    }
    let mut stat = 0.0;
    for p in 1..=2 {
        for q in 1..=2 {
            let expected = rows[p - 1] as f64 * cols[q - 1] as f64 / n;
            stat += (table.cell(p, q) as f64 - expected).powi(2) / expected;
        }
    }
    Ok(stat)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSqResult {
    pub statistic: f64,
    pub theta_argmax: f64,
    pub threshold: f64,
    pub signal: bool,
    pub improved: bool,
    pub k: f64,
    pub alpha: f64,
    /// Rotation angles whose table had a zero marginal and were skipped.
    pub degenerate_angles: usize,
}

impl ChiSqResult {
    pub const CSV_HEADER: &'static str = "statistic,theta_argmax,threshold,signal,improved,k,alpha";

    pub fn csv_row(&self) -> String {
        use crate::report::fmt_g6;
        format!(
            "{},{},{},{},{},{},{}",
            fmt_g6(self.statistic),
            fmt_g6(self.theta_argmax),
            fmt_g6(self.threshold),
            self.signal,
            self.improved,
            fmt_g6(self.k),
            fmt_g6(self.alpha)
        )
    }
}

/// Maximum of the table statistic over the rotation grid
/// `theta_t = t (pi/2) / steps`, using the two leading eigenvectors.
pub fn chi_square_max(spectrum: &ResidualSpectrum, cfg: &ChiSqConfig) -> Result<ChiSqResult> {
    if spectrum.m() < 2 {
        return Err(Error::param(format!("chi-square needs two eigenvectors, spectrum has {}", spectrum.m())));
    }
    chi_square_max_points(&spectrum.eigenvectors[0], &spectrum.eigenvectors[1], cfg)
}

/// [`chi_square_max`] on explicit coordinates.
pub fn chi_square_max_points(x1: &[f64], x2: &[f64], cfg: &ChiSqConfig) -> Result<ChiSqResult> {
    cfg.validate()?;
    if x1.len() != x2.len() {
        return Err(Error::param(format!("coordinate lengths differ: {} vs {}", x1.len(), x2.len())));
    }
    let near = near_origin(x1, x2, cfg);
    let mut best: Option<(f64, f64)> = None;
    let mut degenerate_angles = 0;
    for t in 0..cfg.rotation_steps {
        let theta = t as f64 * FRAC_PI_2 / cfg.rotation_steps as f64;
        match chi_square_table_stat(&count_rotated(x1, x2, &near, theta)) {
            Ok(stat) => {
                if best.is_none_or(|(b, _)| stat > b) {
                    best = Some((stat, theta));
                }
            }
            Err(e) if e.is_degenerate() => degenerate_angles += 1,
            Err(e) => return Err(e),
        }
    }
    let (statistic, theta_argmax) =
        best.ok_or_else(|| Error::degenerate("every rotated quadrant table has a zero marginal"))?;
    let threshold = chi2_quantile(1.0 - cfg.alpha)?;
    Ok(ChiSqResult {
        statistic,
        theta_argmax,
        threshold,
        signal: statistic > threshold,
        improved: cfg.improved,
        k: cfg.k,
        alpha: cfg.alpha,
        degenerate_angles,
    })
}
