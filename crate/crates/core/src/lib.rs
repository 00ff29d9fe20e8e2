//! PageRank and citation-personalized PageRank over undirected weighted
//! coauthorship networks, with the rank statistics and impact metrics used to
//! compare them against citation counts.
//!
//! The usual pipeline is [`ingest`] → [`graph::build_graph`] →
//! [`graph::largest_component`] → [`graph::stochastic_operator`] →
//! [`ranker::pagerank`] → [`stats`] / [`metrics`].

pub mod config;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod ranker;
pub mod report;
pub mod stats;

pub use error::{Error, ErrorClass, Result};
pub use graph::{
    build_graph, components, largest_component, stochastic_operator, AuthorId, CoauthorGraph, Edge,
    Normalization, RawEdge, StochasticOperator,
};
pub use metrics::{
    citation_rank, comparison_table, h_index, min_prefix_containing, top_k, AwardList, CitationProfile,
    PrefixLength,
};
pub use ranker::{
    citation_teleport, damping_sweep, pagerank, solve_direct, uniform_teleport, Convergence, DampingSchedule,
    DampingSweep, ScoreVector, TeleportKind, TeleportVector,
};
pub use stats::{
    cross_damping_matrix, powerlaw_fit, rank_deltas, spearman, stratified_correlation, RankingTable,
    TiePolicy,
};
