//! Undirected weighted coauthorship graph and its column-stochastic walk operator.
//!
//! Nodes are kept in ascending [`AuthorId`] order, so node index order, component
//! ordering and every report derived from them are deterministic.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An author name as it appears in the input, with surrounding whitespace removed.
///
/// Names are otherwise opaque: no case folding or diacritic normalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorId(String);

impl AuthorId {
    pub fn new(token: impl AsRef<str>) -> Option<Self> {
        let trimmed = token.as_ref().trim();
        if trimmed.is_empty() {
            None
        } else {
            Some(AuthorId(trimmed.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for AuthorId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// One unvalidated coauthorship record, as read from an edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEdge {
    pub a: String,
    pub b: String,
    pub weight: f64,
}

impl RawEdge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, weight: f64) -> Self {
        RawEdge {
            a: a.into(),
            b: b.into(),
            weight,
        }
    }
}

/// A validated undirected edge between two distinct authors.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: AuthorId,
    pub b: AuthorId,
    pub weight: f64,
}

/// Undirected weighted simple graph with zero diagonal.
#[derive(Debug, Clone)]
pub struct CoauthorGraph {
    nodes: Arc<[AuthorId]>,
    index: HashMap<AuthorId, usize>,
    // Sorted by neighbor index; symmetric by construction.
    adjacency: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl CoauthorGraph {
    /// `nodes` must be sorted and unique; edges are `(i, j, w)` with `i < j`, unique pairs.
    fn from_parts(nodes: Vec<AuthorId>, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut edge_count = 0;
        for (i, j, w) in edges {
            debug_assert!(i < j);
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
            edge_count += 1;
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        let index = nodes.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        CoauthorGraph {
            nodes: nodes.into(),
            index,
            adjacency,
            edge_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[AuthorId] {
        &self.nodes
    }

    pub(crate) fn shared_nodes(&self) -> Arc<[AuthorId]> {
        Arc::clone(&self.nodes)
    }

    pub fn index_of(&self, author: &str) -> Option<usize> {
        self.index.get(author).copied()
    }

    pub fn contains(&self, author: &str) -> bool {
        self.index.contains_key(author)
    }

    /// Neighbors of node `i` as `(neighbor index, weight)`, in ascending index order.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Edge weight between two node indices; 0 when not adjacent (including `i == j`).
    pub fn weight_between(&self, i: usize, j: usize) -> f64 {
        match self.adjacency[i].binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => self.adjacency[i][pos].1,
            Err(_) => 0.0,
        }
    }

    /// Edge weight between two authors by name; 0 when either is absent or they are not adjacent.
    pub fn weight(&self, a: &str, b: &str) -> f64 {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.weight_between(i, j),
            _ => 0.0,
        }
    }

    /// Each undirected edge once, with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |&&(j, _)| j > i)
                .map(move |&(j, w)| Edge {
                    a: self.nodes[i].clone(),
                    b: self.nodes[j].clone(),
                    weight: w,
                })
        })
    }

    /// Subgraph induced by a sorted list of node indices.
    fn induced(&self, members: &[usize]) -> CoauthorGraph {
        let remap: HashMap<usize, usize> = members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let nodes = members.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = members.iter().enumerate().flat_map(|(new_i, &old_i)| {
            let remap = &remap;
            self.adjacency[old_i].iter().filter_map(move |&(old_j, w)| {
                let new_j = remap[&old_j];
                (new_j > new_i).then_some((new_i, new_j, w))
            })
        });
        CoauthorGraph::from_parts(nodes, edges.collect::<Vec<_>>())
    }
}

/// Builds the graph from raw records.
///
/// Duplicate unordered pairs are merged by summing their weights. Self-loop records
/// contribute their endpoint as a node but no edge.
pub fn build_graph(records: &[RawEdge]) -> Result<CoauthorGraph> {
    if records.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut names = BTreeSet::new();
    let mut pairs: BTreeMap<(AuthorId, AuthorId), f64> = BTreeMap::new();
    for (k, rec) in records.iter().enumerate() {
        let record = k + 1;
        let a = AuthorId::new(&rec.a).ok_or(Error::InvalidAuthorId { record })?;
        let b = AuthorId::new(&rec.b).ok_or(Error::InvalidAuthorId { record })?;
        if !(rec.weight.is_finite() && rec.weight > 0.0) {
            return Err(Error::InvalidWeight {
                record,
                a: rec.a.clone(),
                b: rec.b.clone(),
                weight: rec.weight,
            });
        }
        names.insert(a.clone());
        names.insert(b.clone());
        if a == b {
            continue;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        *pairs.entry(key).or_insert(0.0) += rec.weight;
    }
    let nodes: Vec<AuthorId> = names.into_iter().collect();
    let position: HashMap<&AuthorId, usize> = nodes.iter().enumerate().map(|(i, id)| (id, i)).collect();
    let edges: Vec<(usize, usize, f64)> = pairs
        .iter()
        .map(|((a, b), &w)| (position[a], position[b], w))
        .collect();
    Ok(CoauthorGraph::from_parts(nodes, edges))
}

/// Maximal connected subgraphs, largest first; equal sizes ordered by smallest member id.
pub fn components(g: &CoauthorGraph) -> Vec<CoauthorGraph> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for &(v, _) in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    // Node indices follow id order, so members[0] is the smallest id.
    groups.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    if groups.len() == 1 {
        return vec![g.clone()];
    }
    groups.iter().map(|m| g.induced(m)).collect()
}

pub fn largest_component(g: &CoauthorGraph) -> Result<CoauthorGraph> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(components(g).swap_remove(0))
}

/// Column normalization of the walk operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide each column by the node's total incident edge weight.
    #[default]
    Weighted,
    /// Divide each column by the node's neighbor count.
    Unweighted,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "weighted" => Ok(Normalization::Weighted),
            "unweighted" => Ok(Normalization::Unweighted),
            other => Err(Error::Config(format!(
                "unknown normalization mode {other:?} (expected weighted or unweighted)"
            ))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Weighted => "weighted",
            Normalization::Unweighted => "unweighted",
        })
    }
}

/// Column-stochastic transition matrix `M` of a walk on the graph, stored by column.
///
/// `M[i][j]` is the probability of stepping from `j` to `i`.
#[derive(Debug, Clone)]
pub struct StochasticOperator {
    nodes: Arc<[AuthorId]>,
    mode: Normalization,
    columns: Vec<Vec<(usize, f64)>>,
}

impl StochasticOperator {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn nodes(&self) -> &[AuthorId] {
        &self.nodes
    }

    pub(crate) fn shared_nodes(&self) -> Arc<[AuthorId]> {
        Arc::clone(&self.nodes)
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }

    /// Nonzero entries of column `j` as `(row, value)`.
    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self.columns[j].binary_search_by_key(&i, |&(k, _)| k) {
            Ok(pos) => self.columns[j][pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        self.columns[j].iter().map(|&(_, v)| v).sum()
    }

    /// `out = M x`.
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        out.iter_mut().for_each(|o| *o = 0.0);
        for (j, col) in self.columns.iter().enumerate() {
            let xj = x[j];
            for &(i, v) in col {
                out[i] += v * xj;
            }
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x, &mut out);
        out
    }

    /// Dense row-major copy of `M`.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut dense = vec![vec![0.0; n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                dense[i][j] = v;
            }
        }
        dense
    }
}

/// Normalizes the graph's adjacency into a column-stochastic operator.
///
/// A single isolated node yields the empty 1x1 operator; any other node without
/// neighbors is rejected.
pub fn stochastic_operator(g: &CoauthorGraph, mode: Normalization) -> Result<StochasticOperator> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let neighbors = g.neighbors(j);
        if neighbors.is_empty() {
            if n == 1 {
                columns.push(Vec::new());
                continue;
            }
            return Err(Error::DanglingNode(g.nodes()[j].clone()));
        }
        let total = match mode {
            Normalization::Weighted => g.weighted_degree(j),
            Normalization::Unweighted => neighbors.len() as f64,
        };
        let column = neighbors
            .iter()
            .map(|&(i, w)| {
                let share = match mode {
                    Normalization::Weighted => w,
                    Normalization::Unweighted => 1.0,
                };
                (i, share / total)
            })
            .collect();
        columns.push(column);
    }
    Ok(StochasticOperator {
        nodes: g.shared_nodes(),
        mode,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(records: &[(&str, &str, f64)]) -> CoauthorGraph {
        let raw: Vec<RawEdge> = records.iter().map(|&(a, b, w)| RawEdge::new(a, b, w)).collect();
        build_graph(&raw).unwrap()
    }

    fn names(g: &CoauthorGraph) -> Vec<&str> {
        g.nodes().iter().map(AuthorId::as_str).collect()
    }

    #[test]
    fn reversed_duplicates_merge() {
        let g = graph(&[("A", "B", 2.0), ("B", "A", 1.0)]);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight("A", "B"), 3.0);
        assert_eq!(g.weight("B", "A"), 3.0);
    }

    #[test]
    fn self_loop_only_gives_single_node() {
        let g = graph(&[("A", "A", 5.0)]);
        assert_eq!(names(&g), vec!["A"]);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.weight("A", "A"), 0.0);
    }

    #[test]
    fn triangle_weighted_degrees() {
        let g = graph(&[("A", "B", 1.0), ("A", "C", 2.0), ("B", "C", 3.0)]);
        assert_eq!(g.edge_count(), 3);
        // Brute-force accumulation over the raw records.
        let raw = [("A", "B", 1.0), ("A", "C", 2.0), ("B", "C", 3.0)];
        for (i, id) in g.nodes().iter().enumerate() {
            let brute: f64 = raw
                .iter()
                .filter(|(a, b, _)| *a == id.as_str() || *b == id.as_str())
                .map(|(_, _, w)| w)
                .sum();
            assert_eq!(g.weighted_degree(i), brute);
        }
        let degs: Vec<f64> = (0..3).map(|i| g.weighted_degree(i)).collect();
        assert_eq!(degs, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build_graph(&[]), Err(Error::EmptyGraph)));
        let err = build_graph(&[RawEdge::new("A", "B", 1.0), RawEdge::new("C", "D", 0.0)]).unwrap_err();
        match err {
            Error::InvalidWeight { record, a, b, .. } => {
                assert_eq!(record, 2);
                assert_eq!((a.as_str(), b.as_str()), ("C", "D"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            build_graph(&[RawEdge::new("A", "B", -1.0)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            build_graph(&[RawEdge::new("A", "B", f64::NAN)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            build_graph(&[RawEdge::new("  ", "B", 1.0)]),
            Err(Error::InvalidAuthorId { record: 1 })
        ));
    }

    #[test]
    fn names_are_trimmed() {
        let g = graph(&[(" Glanzel, W ", "Schubert, A", 1.0)]);
        assert_eq!(names(&g), vec!["Glanzel, W", "Schubert, A"]);
    }

    #[test]
    fn connected_input_is_single_component() {
        let g = graph(&[("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 1.0)]);
        let comps = components(&g);
        assert_eq!(comps.len(), 1);
        assert_eq!(names(&comps[0]), names(&g));
        assert_eq!(comps[0].edge_count(), 3);
    }

    #[test]
    fn disjoint_triangles_and_pair() {
        let g = graph(&[
            ("G", "H", 1.0),
            ("D", "E", 1.0),
            ("E", "F", 1.0),
            ("D", "F", 1.0),
            ("A", "B", 1.0),
            ("B", "C", 1.0),
            ("C", "A", 1.0),
        ]);
        let comps = components(&g);
        let sets: Vec<Vec<&str>> = comps.iter().map(names).collect();
        assert_eq!(
            sets,
            vec![vec!["A", "B", "C"], vec!["D", "E", "F"], vec!["G", "H"]]
        );
        assert_eq!(comps[1].weight("D", "F"), 1.0);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let g = graph(&[("A", "A", 1.0), ("B", "B", 1.0), ("C", "C", 1.0), ("D", "D", 1.0)]);
        let comps = components(&g);
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.node_count() == 1));
        assert_eq!(names(&comps[0]), vec!["A"]);
    }

    #[test]
    fn largest_component_choices() {
        let g = graph(&[("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 1.0), ("Z", "Z", 1.0)]);
        assert_eq!(names(&largest_component(&g).unwrap()), vec!["A", "B", "C"]);

        let tie = graph(&[("C", "D", 1.0), ("A", "B", 1.0)]);
        assert_eq!(names(&largest_component(&tie).unwrap()), vec!["A", "B"]);
    }

    #[test]
    fn operator_columns() {
        let path = graph(&[("A", "B", 1.0), ("B", "C", 1.0)]);
        let op = stochastic_operator(&path, Normalization::Weighted).unwrap();
        assert_eq!(op.entry(0, 1), 0.5);
        assert_eq!(op.entry(1, 1), 0.0);
        assert_eq!(op.entry(2, 1), 0.5);

        let star = graph(&[("X", "L1", 1.0), ("X", "L2", 3.0)]);
        let x = star.index_of("X").unwrap();
        let l1 = star.index_of("L1").unwrap();
        let l2 = star.index_of("L2").unwrap();
        let w = stochastic_operator(&star, Normalization::Weighted).unwrap();
        assert_eq!((w.entry(l1, x), w.entry(l2, x)), (0.25, 0.75));
        let u = stochastic_operator(&star, Normalization::Unweighted).unwrap();
        assert_eq!((u.entry(l1, x), u.entry(l2, x)), (0.5, 0.5));
    }

    #[test]
    fn operator_rejects_dangling() {
        let g = graph(&[("A", "B", 1.0), ("C", "C", 1.0)]);
        match stochastic_operator(&g, Normalization::Weighted) {
            Err(Error::DanglingNode(id)) => assert_eq!(id.as_str(), "C"),
            other => panic!("unexpected {other:?}"),
        }
        let single = graph(&[("A", "A", 1.0)]);
        let op = stochastic_operator(&single, Normalization::Weighted).unwrap();
        assert_eq!(op.dim(), 1);
        assert!(op.column(0).is_empty());
    }

    fn arb_records() -> impl Strategy<Value = Vec<RawEdge>> {
        prop::collection::vec((0u8..12, 0u8..12, 1u32..20), 1..40).prop_map(|v| {
            v.into_iter()
                .map(|(a, b, w)| RawEdge::new(format!("n{a:02}"), format!("n{b:02}"), w as f64 / 4.0))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn symmetric_zero_diagonal(records in arb_records()) {
            let g = build_graph(&records).unwrap();
            for i in 0..g.node_count() {
                prop_assert_eq!(g.weight_between(i, i), 0.0);
                for j in 0..g.node_count() {
                    prop_assert_eq!(g.weight_between(i, j), g.weight_between(j, i));
                }
            }
        }

        #[test]
        fn components_partition(records in arb_records()) {
            let g = build_graph(&records).unwrap();
            let comps = components(&g);
            let mut all: Vec<&AuthorId> = comps.iter().flat_map(|c| c.nodes()).collect();
            all.sort();
            let before = all.len();
            all.dedup();
            prop_assert_eq!(before, all.len());
            prop_assert_eq!(all, g.nodes().iter().collect::<Vec<_>>());
            let edges: usize = comps.iter().map(CoauthorGraph::edge_count).sum();
            prop_assert_eq!(edges, g.edge_count());
            for e in g.edges() {
                let owner: Vec<_> = comps.iter().filter(|c| c.contains(e.a.as_str())).collect();
                prop_assert_eq!(owner.len(), 1);
                prop_assert_eq!(owner[0].weight(e.a.as_str(), e.b.as_str()), e.weight);
            }
            for pair in comps.windows(2) {
                let (x, y) = (&pair[0], &pair[1]);
                prop_assert!(x.node_count() > y.node_count()
                    || (x.node_count() == y.node_count() && x.nodes()[0] < y.nodes()[0]));
            }
        }

        #[test]
        fn largest_component_idempotent(records in arb_records()) {
            let g = build_graph(&records).unwrap();
            let once = largest_component(&g).unwrap();
            let twice = largest_component(&once).unwrap();
            prop_assert_eq!(once.nodes(), twice.nodes());
            prop_assert_eq!(once.edges().collect::<Vec<_>>(), twice.edges().collect::<Vec<_>>());
        }

        #[test]
        fn columns_are_stochastic(records in arb_records()) {
            let g = build_graph(&records).unwrap();
            for comp in components(&g).into_iter().filter(|c| c.node_count() >= 2) {
                for mode in [Normalization::Weighted, Normalization::Unweighted] {
                    let op = stochastic_operator(&comp, mode).unwrap();
                    for j in 0..op.dim() {
                        prop_assert!((op.column_sum(j) - 1.0).abs() < 1e-12);
                        for &(i, v) in op.column(j) {
                            prop_assert!(v > 0.0);
                            prop_assert!(comp.weight_between(i, j) > 0.0);
                        }
                    }
                }
            }
        }
    }
}
