//! Seeded synthetic data and reference implementations shared by the integration tests.
#![allow(dead_code)]

use coauthor_rank::{AuthorId, CitationProfile, RawEdge};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn name(i: usize) -> String {
    format!("author{i:05}")
}

/// Random spanning tree plus extra edges; weights uniform in [0.1, 5).
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: usize) -> Vec<RawEdge> {
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push(RawEdge::new(name(i), name(j), rng.gen_range(0.1..5.0)));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push(RawEdge::new(name(a), name(b), rng.gen_range(0.1..5.0)));
        }
    }
    edges
}

/// Random citation totals for `author0..authorN`, about a tenth of them zero.
pub fn random_citations(rng: &mut impl Rng, n: usize) -> CitationProfile {
    let mut profile = CitationProfile::default();
    for i in 0..n {
        let total = if rng.gen_bool(0.1) {
            0
        } else {
            rng.gen_range(1..2000)
        };
        profile.insert(AuthorId::new(name(i)).unwrap(), total, None);
    }
    if (0..n).all(|i| profile.total(&name(i)) == 0) {
        profile.insert(AuthorId::new(name(0)).unwrap(), 1, None);
    }
    profile
}

/// Preferential attachment: each new node joins `m` distinct existing nodes chosen by degree.
/// Returns the edges and each node's final degree.
pub fn preferential_attachment(rng: &mut impl Rng, n: usize, m: usize) -> (Vec<RawEdge>, Vec<usize>) {
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    let mut targets: Vec<usize> = Vec::new();
    for i in 0..=m {
        for j in 0..i {
            edges.push(RawEdge::new(name(i), name(j), rng.gen_range(1..=5) as f64));
            degree[i] += 1;
            degree[j] += 1;
            targets.extend([i, j]);
        }
    }
    for i in (m + 1)..n {
        let mut chosen = Vec::with_capacity(m);
        while chosen.len() < m {
            let t = targets[rng.gen_range(0..targets.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for t in chosen {
            edges.push(RawEdge::new(name(i), name(t), rng.gen_range(1..=5) as f64));
            degree[i] += 1;
            degree[t] += 1;
            targets.extend([i, t]);
        }
    }
    (edges, degree)
}

/// Dense transition matrix built straight from edge records (merging duplicates,
/// dropping self-loops), in ascending-name node order.
pub fn dense_transition(edges: &[RawEdge]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut names: Vec<String> = edges.iter().flat_map(|e| [e.a.clone(), e.b.clone()]).collect();
    names.sort();
    names.dedup();
    let idx = |s: &str| names.binary_search_by(|n| n.as_str().cmp(s)).unwrap();
    let n = names.len();
    let mut w = vec![vec![0.0; n]; n];
    for e in edges {
        let (a, b) = (idx(&e.a), idx(&e.b));
        if a != b {
            w[a][b] += e.weight;
            w[b][a] += e.weight;
        }
    }
    for j in 0..n {
        let col: f64 = (0..n).map(|i| w[i][j]).sum();
        for row in w.iter_mut() {
            row[j] /= col;
        }
    }
    (names, w)
}

/// Solves `(I - d M) x = (1 - d) v` by Gauss-Jordan elimination with partial pivoting.
pub fn dense_pagerank(m: &[Vec<f64>], v: &[f64], d: f64) -> Vec<f64> {
    let n = v.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| f64::from(i == j) - d * m[i][j]).collect();
            row.push((1.0 - d) * v[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        a[col].iter_mut().skip(col).for_each(|x| *x /= p);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            let f = row[col];
            if r != col && f != 0.0 {
                row.iter_mut()
                    .zip(&pivot_row)
                    .skip(col)
                    .for_each(|(x, p)| *x -= f * p);
            }
        }
    }
    a.iter().map(|row| row[n]).collect()
}

/// Average ranks (1-based) by counting, ascending values.
pub fn brute_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let less = x.iter().filter(|&&y| y < xi).count() as f64;
            let equal = x.iter().filter(|&&y| y == xi).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Largest h in `0..=len` with at least h entries >= h.
pub fn brute_h_index(counts: &[u64]) -> usize {
    (0..=counts.len())
        .filter(|&h| counts.iter().filter(|&&c| c >= h as u64).count() >= h)
        .max()
        .unwrap()
}

/// Edge-list text for a fixed synthetic dataset.
pub fn edge_text(edges: &[RawEdge]) -> String {
    edges
        .iter()
        .map(|e| format!("{}\t{}\t{}\n", e.a, e.b, e.weight))
        .collect()
}
