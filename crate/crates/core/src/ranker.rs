//! Standard and citation-personalized PageRank.
//!
//! Both variants solve the same fixed point `x = (1 - d) v + d M x`; they differ only in
//! the teleport vector `v` (uniform for standard PageRank, citation shares for the
//! weighted variant). [`pagerank`] iterates the fixed point on the sparse operator and
//! [`solve_direct`] solves `(I - d M) x = (1 - d) v` densely as an independent check.

use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{AuthorId, StochasticOperator};
use crate::metrics::CitationProfile;

/// Largest node count accepted by [`solve_direct`].
pub const DIRECT_SOLVE_LIMIT: usize = 5_000;

/// Damping values swept by default, ascending.
pub const DEFAULT_SCHEDULE: [f64; 8] = [0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85];

/// Damping used for single-value runs.
pub const DEFAULT_DAMPING: f64 = 0.85;

const TELEPORT_SUM_TOLERANCE: f64 = 1e-12;

/// Non-negative personalization vector summing to one, indexed like the graph's nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportVector {
    entries: Vec<f64>,
}

impl TeleportVector {
    /// Wraps an already normalized vector.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(bad) = entries.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidTeleport(format!(
                "entry {bad} is not a non-negative finite number"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > TELEPORT_SUM_TOLERANCE {
            return Err(Error::InvalidTeleport(format!("entries sum to {sum}, not 1")));
        }
        Ok(TeleportVector { entries })
    }

    /// Normalizes non-negative weights to unit mass.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(bad) = weights.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidTeleport(format!(
                "weight {bad} is not a non-negative finite number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroTeleportMass);
        }
        Ok(TeleportVector {
            entries: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn uniform_teleport(n: usize) -> Result<TeleportVector> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(TeleportVector {
        entries: vec![1.0 / n as f64; n],
    })
}

/// Citation share of each node, `CC(p) / sum CC` over `nodes`.
///
/// Nodes without a citation entry count as zero; profile entries outside `nodes` are
/// ignored. Use [`CitationProfile::join`] to report either case.
pub fn citation_teleport(citations: &CitationProfile, nodes: &[AuthorId]) -> Result<TeleportVector> {
    if nodes.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let counts: Vec<f64> = nodes
        .iter()
        .map(|id| citations.total(id.as_str()) as f64)
        .collect();
    TeleportVector::from_weights(&counts)
}

/// Which teleport vector a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TeleportKind {
    #[default]
    Uniform,
    Citations,
}

impl FromStr for TeleportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(TeleportKind::Uniform),
            "citations" | "citation" => Ok(TeleportKind::Citations),
            other => Err(Error::Config(format!(
                "unknown teleport {other:?} (expected uniform or citations)"
            ))),
        }
    }
}

impl std::fmt::Display for TeleportKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TeleportKind::Uniform => "uniform",
            TeleportKind::Citations => "citations",
        })
    }
}

/// Result of one PageRank computation.
#[derive(Debug, Clone)]
pub struct ScoreVector {
    authors: Arc<[AuthorId]>,
    entries: Vec<f64>,
    pub damping: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl ScoreVector {
    pub fn authors(&self) -> &[AuthorId] {
        &self.authors
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn get(&self, author: &str) -> Option<f64> {
        self.authors
            .iter()
            .position(|a| a.as_str() == author)
            .map(|i| self.entries[i])
    }

    /// `(author, score)` pairs in node order.
    pub fn iter(&self) -> impl Iterator<Item = (&AuthorId, f64)> + '_ {
        self.authors.iter().zip(self.entries.iter().copied())
    }
}

/// Stopping rule for power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    /// Stop once the L1 change between successive iterates drops below this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for Convergence {
    fn default() -> Self {
        Convergence {
            tolerance: 1e-12,
            max_iter: 1_000,
        }
    }
}

fn check_damping(d: f64) -> Result<()> {
    if d.is_finite() && (0.0..1.0).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidDamping(d))
    }
}

fn check_dims(op: &StochasticOperator, teleport: &TeleportVector) -> Result<()> {
    if op.dim() != teleport.len() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: teleport.len(),
        });
    }
    Ok(())
}

fn normalize(x: &mut [f64]) {
    let sum: f64 = x.iter().sum();
    if sum > 0.0 && sum != 1.0 {
        x.iter_mut().for_each(|v| *v /= sum);
    }
}

/// Power iteration on `x <- (1 - d) v + d M x`, starting from `x = v`.
pub fn pagerank(
    op: &StochasticOperator,
    teleport: &TeleportVector,
    damping: f64,
    convergence: Convergence,
) -> Result<ScoreVector> {
    check_damping(damping)?;
    if !(convergence.tolerance.is_finite() && convergence.tolerance > 0.0) {
        return Err(Error::InvalidTolerance(convergence.tolerance));
    }
    check_dims(op, teleport)?;

    let v = teleport.entries();
    let n = v.len();
    let mut x = v.to_vec();
    let mut walked = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=convergence.max_iter {
        op.apply_into(&x, &mut walked);
        residual = 0.0;
        for i in 0..n {
            next[i] = (1.0 - damping) * v[i] + damping * walked[i];
            residual += (next[i] - x[i]).abs();
        }
        std::mem::swap(&mut x, &mut next);
        if residual < convergence.tolerance {
            normalize(&mut x);
            return Ok(ScoreVector {
                authors: op.shared_nodes(),
                entries: x,
                damping,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        damping,
        iterations: convergence.max_iter,
        residual,
    })
}

/// Exact solution of `(I - d M) x = (1 - d) v` by dense Gaussian elimination with
/// partial pivoting.
pub fn solve_direct(op: &StochasticOperator, teleport: &TeleportVector, damping: f64) -> Result<ScoreVector> {
    check_damping(damping)?;
    check_dims(op, teleport)?;
    let n = op.dim();
    if n > DIRECT_SOLVE_LIMIT {
        return Err(Error::TooLargeForDirectSolve {
            nodes: n,
            limit: DIRECT_SOLVE_LIMIT,
        });
    }
    let entries = if damping == 0.0 {
        teleport.entries().to_vec()
    } else {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        for j in 0..n {
            for &(i, m) in op.column(j) {
                a[i * n + j] -= damping * m;
            }
        }
        let b: Vec<f64> = teleport.entries().iter().map(|v| (1.0 - damping) * v).collect();
        let mut x = gaussian_solve(a, b, n)?;
        normalize(&mut x);
        x
    };
    Ok(ScoreVector {
        authors: op.shared_nodes(),
        entries,
        damping,
        iterations: 0,
        residual: 0.0,
    })
}

/// Solves the row-major `n x n` system `a x = b` in place.
fn gaussian_solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))
            .expect("non-empty pivot range");
        if a[pivot * n + col].abs() < f64::MIN_POSITIVE {
            return Err(Error::SingularMatrix);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row * n + row];
    }
    Ok(x)
}

/// Ordered set of distinct damping factors, each strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct DampingSchedule {
    values: Vec<f64>,
}

impl DampingSchedule {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSchedule("no damping values".into()));
        }
        for (i, &d) in values.iter().enumerate() {
            if !(d.is_finite() && d > 0.0 && d < 1.0) {
                return Err(Error::InvalidSchedule(format!("{d} is not inside (0, 1)")));
            }
            if values[..i].contains(&d) {
                return Err(Error::InvalidSchedule(format!("duplicate value {d}")));
            }
        }
        Ok(DampingSchedule { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Default for DampingSchedule {
    fn default() -> Self {
        DampingSchedule {
            values: DEFAULT_SCHEDULE.to_vec(),
        }
    }
}

impl FromStr for DampingSchedule {
    type Err = Error;

    /// Comma-separated list, e.g. `0.15,0.5,0.85`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidSchedule(format!("{t:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        DampingSchedule::new(values)
    }
}

/// Score vectors for every value of a schedule, in schedule order.
#[derive(Debug, Clone)]
pub struct DampingSweep {
    results: Vec<ScoreVector>,
}

impl DampingSweep {
    /// Assembles a sweep from precomputed vectors. Damping values must be distinct.
    pub fn from_vectors(results: Vec<ScoreVector>) -> Self {
        DampingSweep { results }
    }

    pub fn get(&self, damping: f64) -> Option<&ScoreVector> {
        self.results.iter().find(|s| s.damping == damping)
    }

    pub fn dampings(&self) -> Vec<f64> {
        self.results.iter().map(|s| s.damping).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScoreVector> + '_ {
        self.results.iter()
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

/// Runs [`pagerank`] at every damping value of the schedule, in parallel.
///
/// Each value is computed independently, so the output does not depend on scheduling.
pub fn damping_sweep(
    op: &StochasticOperator,
    teleport: &TeleportVector,
    schedule: &DampingSchedule,
    convergence: Convergence,
) -> Result<DampingSweep> {
    let results = schedule
        .values()
        .par_iter()
        .map(|&d| pagerank(op, teleport, d, convergence))
        .collect::<Result<Vec<_>>>()?;
    Ok(DampingSweep { results })
}
