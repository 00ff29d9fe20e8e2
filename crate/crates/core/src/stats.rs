//! Rank statistics: Spearman correlation, stratified correlation by ranking level,
//! log-log power-law fits, rank deltas with normal Q-Q data, and the cross-damping
//! correlation matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};
use crate::graph::AuthorId;
use crate::ranker::{DampingSweep, ScoreVector};

/// How tied scores are assigned rank positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    /// Tied rows share the best position ("1, 2, 2, 4"). Used for display.
    Competition,
    /// Tied rows share the mean of their positions ("1, 2.5, 2.5, 4"). Used for correlation.
    Fractional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow {
    pub author: AuthorId,
    pub score: f64,
    /// Competition rank.
    pub rank: usize,
    pub fractional_rank: f64,
}

impl RankingRow {
    pub fn rank_by(&self, policy: TiePolicy) -> f64 {
        match policy {
            TiePolicy::Competition => self.rank as f64,
            TiePolicy::Fractional => self.fractional_rank,
        }
    }
}

/// Authors ordered by score descending, ties by author id ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    rows: Vec<RankingRow>,
}

impl RankingTable {
    /// Authors are expected to be unique.
    pub fn from_scores(scores: impl IntoIterator<Item = (AuthorId, f64)>) -> Self {
        let mut pairs: Vec<(AuthorId, f64)> = scores.into_iter().collect();
        pairs.sort_by(|(a, x), (b, y)| y.total_cmp(x).then_with(|| a.cmp(b)));
        let same = |x: f64, y: f64| x == y || x.total_cmp(&y).is_eq();
        let mut ranks = Vec::with_capacity(pairs.len());
        let mut start = 0;
        while start < pairs.len() {
            let score = pairs[start].1;
            let end = start + pairs[start..].iter().take_while(|(_, s)| same(*s, score)).count();
            // Positions start+1 ..= end share these ranks.
            let fractional = (start + 1 + end) as f64 / 2.0;
            ranks.extend(std::iter::repeat_n((start + 1, fractional), end - start));
            start = end;
        }
        let rows = pairs
            .into_iter()
            .zip(ranks)
            .map(|((author, score), (rank, fractional_rank))| RankingRow {
                author,
                score,
                rank,
                fractional_rank,
            })
            .collect();
        RankingTable { rows }
    }

    pub fn from_score_vector(scores: &ScoreVector) -> Self {
        RankingTable::from_scores(scores.iter().map(|(a, s)| (a.clone(), s)))
    }

    pub fn rows(&self) -> &[RankingRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, author: &str) -> Option<&RankingRow> {
        self.rows.iter().find(|r| r.author.as_str() == author)
    }

    pub fn author_set(&self) -> BTreeSet<&AuthorId> {
        self.rows.iter().map(|r| &r.author).collect()
    }

    fn index(&self) -> HashMap<&AuthorId, &RankingRow> {
        self.rows.iter().map(|r| (&r.author, r)).collect()
    }
}

/// Checks two tables cover the same authors.
pub fn ensure_same_authors(a: &RankingTable, b: &RankingTable) -> Result<()> {
    let left = a.author_set();
    let right = b.author_set();
    if left == right {
        return Ok(());
    }
    Err(Error::AuthorSetMismatch {
        only_left: left.difference(&right).map(|id| (*id).clone()).collect(),
        only_right: right.difference(&left).map(|id| (*id).clone()).collect(),
    })
}

/// Ascending 1-based ranks with ties averaged.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == v {
            end += 1;
        }
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub rho: f64,
    /// Two-sided, from the Student-t approximation with `n - 2` degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

/// Spearman rank correlation: Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue("correlation inputs must be finite".into()));
    }
    let rx = fractional_ranks(x);
    let ry = fractional_ranks(y);
    let rho = pearson(&rx, &ry).ok_or(Error::UndefinedCorrelation)?;
    Ok(Correlation {
        rho,
        p_value: t_test_p_value(rho, n),
        n,
    })
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn t_test_p_value(rho: f64, n: usize) -> f64 {
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
}

/// Which of the two tables defines the slicing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Level `k` is the top `k` positions of the base ranking.
    Obverse,
    /// Level `k` is positions `k..=n` of the base ranking.
    Reverse,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Obverse => "obverse",
            Direction::Reverse => "reverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevelOutcome {
    Computed(Correlation),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub label: String,
    /// 1-based inclusive positions in the base ranking.
    pub lower: usize,
    pub upper: usize,
    pub outcome: LevelOutcome,
}

impl LevelResult {
    pub fn size(&self) -> usize {
        self.upper + 1 - self.lower
    }

    pub fn correlation(&self) -> Option<&Correlation> {
        match &self.outcome {
            LevelOutcome::Computed(c) => Some(c),
            LevelOutcome::Skipped(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub direction: Direction,
    pub levels: Vec<LevelResult>,
}

/// Spearman correlation of the two tables' scores within slices of the base ranking.
///
/// `levels` are strictly ascending cut points in `1..=n`. Slices with fewer than three
/// authors, or with a constant score column, are reported as skipped.
pub fn stratified_correlation(
    a: &RankingTable,
    b: &RankingTable,
    base: Base,
    levels: &[usize],
    direction: Direction,
) -> Result<CorrelationReport> {
    ensure_same_authors(a, b)?;
    let n = a.len();
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLevels(
            "cut points must be strictly ascending".into(),
        ));
    }
    if let Some(&bad) = levels.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidLevels(format!("cut point {bad} outside 1..={n}")));
    }
    let (base_table, other) = match base {
        Base::A => (a, b),
        Base::B => (b, a),
    };
    let other_index = other.index();
    let ordered: Vec<(f64, f64)> = base_table
        .rows()
        .iter()
        .map(|r| (r.score, other_index[&r.author].score))
        .collect();

    let results = levels
        .iter()
        .map(|&k| {
            let (lower, upper, label) = match direction {
                Direction::Obverse => (1, k, format!("1~{k}")),
                Direction::Reverse => (k, n, format!("{n}~{k}")),
            };
            let slice = &ordered[lower - 1..upper];
            let outcome = if slice.len() < 3 {
                LevelOutcome::Skipped(format!("slice of {} authors is too small", slice.len()))
            } else {
                // Keep the original argument order: a's scores first.
                let (xs, ys): (Vec<f64>, Vec<f64>) = match base {
                    Base::A => slice.iter().copied().unzip(),
                    Base::B => slice.iter().map(|&(s, o)| (o, s)).unzip(),
                };
                match spearman(&xs, &ys) {
                    Ok(c) => LevelOutcome::Computed(c),
                    Err(Error::UndefinedCorrelation) => {
                        LevelOutcome::Skipped("constant scores within slice".into())
                    }
                    Err(e) => return Err(e),
                }
            };
            Ok(LevelResult {
                label,
                lower,
                upper,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        direction,
        levels: results,
    })
}

/// Histogram construction for [`powerlaw_fit_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binning {
    /// Exact bins for integer-valued data, logarithmic bins otherwise.
    Auto(usize),
    /// One bin per distinct value.
    Exact,
    /// Logarithmically spaced bins; frequencies are divided by bin width.
    Logarithmic(usize),
}

pub const DEFAULT_LOG_BINS: usize = 20;

impl Default for Binning {
    fn default() -> Self {
        Binning::Auto(DEFAULT_LOG_BINS)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    /// `lambda` in `p(k) ~ k^-lambda`.
    pub exponent: f64,
    pub intercept: f64,
    /// Pearson correlation of the log-log points.
    pub r: f64,
    pub bins_used: usize,
    /// Non-empty histogram points `(value, frequency)` used by the fit.
    pub points: Vec<(f64, f64)>,
}

pub fn powerlaw_fit(values: &[f64]) -> Result<PowerLawFit> {
    powerlaw_fit_with(values, Binning::default())
}

pub fn powerlaw_fit_with(values: &[f64], binning: Binning) -> Result<PowerLawFit> {
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidValue(format!(
            "{bad} is not a positive finite value"
        )));
    }
    let binning = match binning {
        Binning::Auto(_) if values.iter().all(|v| v.fract() == 0.0) => Binning::Exact,
        Binning::Auto(bins) => Binning::Logarithmic(bins),
        other => other,
    };
    let points = match binning {
        Binning::Exact => exact_histogram(values),
        Binning::Logarithmic(bins) => log_histogram(values, bins)?,
        Binning::Auto(_) => unreachable!(),
    };
    fit_frequencies(&points)
}

fn exact_histogram(values: &[f64]) -> Vec<(f64, f64)> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for v in values {
        // Positive finite floats order like their bit patterns.
        *counts.entry(v.to_bits()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(bits, c)| (f64::from_bits(bits), c as f64))
        .collect()
}

fn log_histogram(values: &[f64], bins: usize) -> Result<Vec<(f64, f64)>> {
    if bins < 3 {
        return Err(Error::InvalidValue(format!("{bins} bins cannot support a fit")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Ok(vec![(lo, values.len() as f64)]);
    }
    let span = (hi / lo).ln();
    let edge = |i: usize| lo * (span * i as f64 / bins as f64).exp();
    let mut counts = vec![0usize; bins];
    for &v in values {
        let pos = ((v / lo).ln() / span * bins as f64).floor() as usize;
        counts[pos.min(bins - 1)] += 1;
    }
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let (left, right) = (edge(i), edge(i + 1));
            ((left * right).sqrt(), c as f64 / (right - left))
        })
        .collect())
}

/// Ordinary least squares of `ln frequency` on `ln value`.
pub fn fit_frequencies(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientBins(usable.len()));
    }
    let lx: Vec<f64> = usable.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = usable.iter().map(|p| p.1.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r = if syy == 0.0 {
        0.0
    } else {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    };
    Ok(PowerLawFit {
        exponent: -slope,
        intercept: my - slope * mx,
        r,
        bins_used: usable.len(),
        points: usable,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDelta {
    pub author: AuthorId,
    pub rank_a: usize,
    pub rank_b: usize,
    /// `rank_a - rank_b`.
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QqPoint {
    pub empirical: f64,
    pub normal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDeltas {
    /// Sorted by delta, then author.
    pub deltas: Vec<RankDelta>,
    /// Sorted deltas against standard normal quantiles at plotting positions `(i + 0.5) / n`.
    pub qq: Vec<QqPoint>,
}

/// Per-author change in competition rank between two tables.
pub fn rank_deltas(a: &RankingTable, b: &RankingTable) -> Result<RankDeltas> {
    ensure_same_authors(a, b)?;
    let b_index = b.index();
    let mut deltas: Vec<RankDelta> = a
        .rows()
        .iter()
        .map(|row| {
            let rank_b = b_index[&row.author].rank;
            RankDelta {
                author: row.author.clone(),
                rank_a: row.rank,
                rank_b,
                delta: row.rank as i64 - rank_b as i64,
            }
        })
        .collect();
    deltas.sort_by(|x, y| x.delta.cmp(&y.delta).then_with(|| x.author.cmp(&y.author)));
    let normal = Normal::standard();
    let n = deltas.len() as f64;
    let qq = deltas
        .iter()
        .enumerate()
        .map(|(i, d)| QqPoint {
            empirical: d.delta as f64,
            normal: normal.inverse_cdf((i as f64 + 0.5) / n),
        })
        .collect();
    Ok(RankDeltas { deltas, qq })
}

/// Symmetric matrix of Spearman correlations between sweep vectors, unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub dampings: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, d1: f64, d2: f64) -> Option<f64> {
        let i = self.dampings.iter().position(|&d| d == d1)?;
        let j = self.dampings.iter().position(|&d| d == d2)?;
        Some(self.values[i][j])
    }

    /// Smallest off-diagonal entry as `(d_i, d_j, rho)` with `i < j`.
    pub fn min_off_diagonal(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for i in 0..self.dampings.len() {
            for j in i + 1..self.dampings.len() {
                let v = self.values[i][j];
                if best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((self.dampings[i], self.dampings[j], v));
                }
            }
        }
        best
    }
}

pub fn cross_damping_matrix(sweep: &DampingSweep) -> Result<CorrelationMatrix> {
    let vectors: Vec<&ScoreVector> = sweep.iter().collect();
    if vectors.len() < 2 {
        return Err(Error::TooFewDampingValues);
    }
    let k = vectors.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in i + 1..k {
            let (x, y) = aligned(vectors[i], vectors[j]);
            let rho = spearman(&x, &y)?.rho;
            values[i][j] = rho;
            values[j][i] = rho;
        }
    }
    Ok(CorrelationMatrix {
        dampings: vectors.iter().map(|s| s.damping).collect(),
        values,
    })
}

/// Scores of the authors common to both vectors, in the first vector's order.
fn aligned(a: &ScoreVector, b: &ScoreVector) -> (Vec<f64>, Vec<f64>) {
    if a.authors() == b.authors() {
        return (a.entries().to_vec(), b.entries().to_vec());
    }
    let lookup: HashMap<&AuthorId, f64> = b.iter().collect();
    a.iter()
        .filter_map(|(author, s)| lookup.get(author).map(|&t| (s, t)))
        .unzip()
}
