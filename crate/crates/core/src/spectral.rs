//! Residual matrices `B = A - E[A]` and their leading eigenpairs.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::diag::Diag;
use faer::{Mat, Par};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{AdjacencyMatrix, ModelSpec};

const SYMMETRY_TOL: f64 = 1e-10;

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Fills from `f(i, j)`. The caller is responsible for `f` being symmetric;
    /// [`top_eigenpairs`] re-checks.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest absolute difference between mirrored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// How `E[A]` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExpectationModel {
    /// Constant `p0`; estimated as the off-diagonal edge density when `None`.
    ErBinary { p0: Option<f64> },
    /// Constant `lambda0`; estimated as the mean off-diagonal entry when `None`.
    ErCount { lambda0: Option<f64> },
    /// `k k^T / (2M)` from the observed degree (or strength) sequence.
    Rank1,
}

impl ExpectationModel {
    /// Expectation used for networks drawn from `model`. ER models use the
    /// known parameter unless `estimate` is set; R-MAT and Chung-Lu always use
    /// the rank-1 form built from observed degrees.
    pub fn for_model(model: &ModelSpec, estimate: bool) -> Self {
        match model {
            ModelSpec::ErBinary { p0 } => ExpectationModel::ErBinary { p0: (!estimate).then_some(*p0) },
            ModelSpec::ErCount { lambda0 } => {
                ExpectationModel::ErCount { lambda0: (!estimate).then_some(*lambda0) }
            }
            ModelSpec::Rmat { .. } | ModelSpec::ChungLuBinary { .. } | ModelSpec::ChungLuCount { .. } => {
                ExpectationModel::Rank1
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ErBinary,
    ErCount,
    Rank1Degree,
}

/// `E[A]` with the value it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedMatrix {
    pub matrix: SymmetricMatrix,
    pub provenance: Provenance,
    /// The constant rate for ER expectations (supplied or estimated); `None`
    /// for rank-1.
    pub rate: Option<f64>,
}

/// Diagonal treatment for `E[A]`.
///
/// By default every formula is applied on the diagonal too (`p0`, `lambda0`,
/// `k_i^2 / 2M`), so `B` generally has a nonzero diagonal. `zero_diagonal`
/// sets `E[A]_ii = 0` to match zero-diagonal generators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationOptions {
    #[serde(default)]
    pub zero_diagonal: bool,
}

pub fn expected_matrix(
    adj: &AdjacencyMatrix,
    model: &ExpectationModel,
    opts: ExpectationOptions,
) -> Result<ExpectedMatrix> {
    let n = adj.n();
    if n < 2 {
        return Err(Error::param("network needs at least 2 nodes"));
    }
    let (mut matrix, provenance, rate) = match *model {
        ExpectationModel::ErBinary { p0 } => {
            let p = match p0 {
                Some(p) if (0.0..=1.0).contains(&p) => p,
                Some(p) => return Err(Error::param(format!("p0 must lie in [0, 1], got {p}"))),
                None => adj.off_diagonal_mean(),
            };
            (SymmetricMatrix::from_fn(n, |_, _| p), Provenance::ErBinary, Some(p))
        }
        ExpectationModel::ErCount { lambda0 } => {
            let l = match lambda0 {
                Some(l) if l.is_finite() && l >= 0.0 => l,
                Some(l) => return Err(Error::param(format!("lambda0 must be nonnegative, got {l}"))),
                None => adj.off_diagonal_mean(),
            };
            (SymmetricMatrix::from_fn(n, |_, _| l), Provenance::ErCount, Some(l))
        }
        ExpectationModel::Rank1 => {
            let k = adj.degrees();
            let two_m: f64 = k.iter().sum();
            if two_m <= 0.0 {
                return Err(Error::degenerate("rank-1 expectation of a graph with no edges"));
            }
            (SymmetricMatrix::from_fn(n, |i, j| k[i] * k[j] / two_m), Provenance::Rank1Degree, None)
        }
    };
    if opts.zero_diagonal {
        for i in 0..n {
            matrix.set(i, i, 0.0);
        }
    }
    Ok(ExpectedMatrix { matrix, provenance, rate })
}

/// `B = A - E[A]`, elementwise.
pub fn residual_matrix(adj: &AdjacencyMatrix, expected: &ExpectedMatrix) -> Result<SymmetricMatrix> {
    let n = adj.n();
    if expected.matrix.n() != n {
        return Err(Error::param(format!(
            "dimension mismatch: network has {n} nodes, expectation has {}",
            expected.matrix.n()
        )));
    }
    Ok(SymmetricMatrix::from_fn(n, |i, j| f64::from(adj.get(i, j)) - expected.matrix.get(i, j)))
}

/// The `m` largest (algebraic) eigenvalues of `B`, descending, with
/// orthonormal eigenvectors.
///
/// Each eigenvector is signed so that its entry of largest magnitude is
/// positive (first such index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl ResidualSpectrum {
    pub fn n(&self) -> usize {
        self.eigenvectors.first().map_or(0, Vec::len)
    }

    pub fn m(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Leading `m` pairs of an already computed spectrum.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.m() {
            return Err(Error::param(format!("cannot take {m} of {} eigenpairs", self.m())));
        }
        Ok(Self {
            eigenvalues: self.eigenvalues[..m].to_vec(),
            eigenvectors: self.eigenvectors[..m].to_vec(),
        })
    }
}

pub(crate) fn normalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn top_eigenpairs(b: &SymmetricMatrix, m: usize) -> Result<ResidualSpectrum> {
    let n = b.n();
    if m == 0 || m > n {
        return Err(Error::param(format!("eigenpair count must be in 1..={n}, got {m}")));
    }
    let asym = b.asymmetry();
    if !(asym <= SYMMETRY_TOL) {
        return Err(Error::Contract(format!("matrix is not symmetric (max deviation {asym:e})")));
    }
    let a = Mat::<f64>::from_fn(n, n, |i, j| b.get(i, j));
    let mut u = Mat::<f64>::zeros(n, n);
    let mut s = Diag::<f64>::zeros(n);
    // Sequential so the decomposition is bitwise identical regardless of the
    // surrounding thread pool.
    let par = Par::Seq;
    let scratch = evd::self_adjoint_evd_scratch::<f64>(n, ComputeEigenvectors::Yes, par, Default::default());
    evd::self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        Default::default(),
    )
    .map_err(|e| Error::degenerate(format!("eigendecomposition did not converge: {e:?}")))?;

    // faer returns ascending eigenvalues
    let vals = s.column_vector();
    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenvectors = Vec::with_capacity(m);
    for idx in (n - m..n).rev() {
        eigenvalues.push(vals[idx]);
        let mut v: Vec<f64> = (0..n).map(|i| u[(i, idx)]).collect();
        normalize_sign(&mut v);
        eigenvectors.push(v);
    }
    Ok(ResidualSpectrum { eigenvalues, eigenvectors })
}

/// Residual spectrum of a network in one call.
pub fn network_spectrum(
    adj: &AdjacencyMatrix,
    model: &ExpectationModel,
    opts: ExpectationOptions,
    m: usize,
) -> Result<ResidualSpectrum> {
    let expected = expected_matrix(adj, model, opts)?;
    let b = residual_matrix(adj, &expected)?;
    top_eigenpairs(&b, m)
}
