//! Command execution: parse inputs, build the graph, restrict to the largest
//! component (or each component), run the requested analysis and assemble a
//! [`ReportBundle`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::error::Error;
use crate::graph::{self, AuthorId, CoauthorGraph};
use crate::ingest;
use crate::metrics::{self, AwardList, CitationProfile, PrefixLength};
use crate::ranker::{self, ScoreVector, TeleportKind, TeleportVector};
use crate::report::{ranking_table, Cell, ReportBundle, Table};
use crate::stats::{self, Base, Binning, Direction, LevelOutcome, RankingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Component sizes and largest-component extraction.
    Component,
    /// PageRank at one damping value.
    Rank,
    /// Top-k per damping value plus the cross-damping correlation matrix.
    Sweep,
    /// Stratified correlation between PageRank and citations.
    Correlate,
    /// Power-law fits of citation and PageRank distributions.
    Fit,
    /// Rank changes between citations and PageRank, with Q-Q and scatter data.
    Deltas,
    /// Multi-metric comparison table and award prefix recall.
    Compare,
}

/// Pipeline stage an error originated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Parse,
    Graph,
    Rank,
    Stats,
    Metrics,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Parse => "parse",
            Stage::Graph => "graph",
            Stage::Rank => "rank",
            Stage::Stats => "stats",
            Stage::Metrics => "metrics",
        })
    }
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T, Error> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

fn usage(message: impl Into<String>) -> StageError {
    StageError {
        stage: Stage::Config,
        error: Error::Config(message.into()),
    }
}

/// Input file locations.
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub edges: PathBuf,
    pub citations: Option<PathBuf>,
    pub awards: Option<PathBuf>,
    /// Named integer columns for the comparison table.
    pub extras: Vec<(String, PathBuf)>,
}

struct Loaded {
    graph: CoauthorGraph,
    citations: Option<CitationProfile>,
    awards: Option<AwardList>,
    extras: Vec<(String, BTreeMap<AuthorId, i64>)>,
}

fn summarize(ids: &[AuthorId]) -> String {
    const SHOWN: usize = 10;
    let mut s = ids
        .iter()
        .take(SHOWN)
        .map(AuthorId::as_str)
        .collect::<Vec<_>>()
        .join("; ");
    if ids.len() > SHOWN {
        s.push_str(&format!("; ... ({} more)", ids.len() - SHOWN));
    }
    s
}

fn load(inputs: &Inputs, warnings: &mut Vec<String>) -> Result<Loaded, StageError> {
    let parsed = ingest::parse_edge_list(&inputs.edges).at(Stage::Parse)?;
    warnings.extend(
        parsed
            .warnings
            .iter()
            .map(|w| format!("{}: {w}", inputs.edges.display())),
    );
    let graph = graph::build_graph(&parsed.records).at(Stage::Graph)?;

    let citations = inputs
        .citations
        .as_deref()
        .map(ingest::parse_citations)
        .transpose()
        .at(Stage::Parse)?;
    if let Some(profile) = &citations {
        let join = profile.join(graph.nodes());
        if !join.missing.is_empty() {
            warnings.push(format!(
                "{} authors have no citation entry and count as 0: {}",
                join.missing.len(),
                summarize(&join.missing)
            ));
        }
        if !join.unused.is_empty() {
            warnings.push(format!(
                "{} citation entries are not in the graph and are ignored: {}",
                join.unused.len(),
                summarize(&join.unused)
            ));
        }
    }
    let awards = inputs
        .awards
        .as_deref()
        .map(ingest::parse_awards)
        .transpose()
        .at(Stage::Parse)?;
    let extras = inputs
        .extras
        .iter()
        .map(|(name, path)| ingest::parse_extra_column(path).map(|col| (name.clone(), col)))
        .collect::<Result<Vec<_>, _>>()
        .at(Stage::Parse)?;
    Ok(Loaded {
        graph,
        citations,
        awards,
        extras,
    })
}

/// Runs one command end to end.
pub fn run_command(
    command: Command,
    inputs: &Inputs,
    config: &RunConfig,
) -> Result<ReportBundle, StageError> {
    let mut bundle = ReportBundle::default();
    let loaded = load(inputs, &mut bundle.warnings)?;

    if command == Command::Component {
        component_report(&loaded.graph, &mut bundle);
        return Ok(bundle);
    }

    let comps = graph::components(&loaded.graph);
    let units: Vec<(String, CoauthorGraph)> = if config.all_components {
        let ranked: Vec<CoauthorGraph> = comps.into_iter().filter(|c| c.node_count() >= 2).collect();
        if ranked.is_empty() {
            return Err(StageError {
                stage: Stage::Graph,
                error: Error::EmptyGraph,
            });
        }
        let mut notes = Table::new("notes", &["note"]);
        notes.push(vec![
            "scores are normalized within each component; values are not comparable across components".into(),
        ]);
        bundle.tables.push(notes);
        ranked
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("component_{}.", i + 1), c))
            .collect()
    } else {
        vec![(
            String::new(),
            comps
                .into_iter()
                .next()
                .ok_or(Error::EmptyGraph)
                .at(Stage::Graph)?,
        )]
    };

    for (prefix, unit) in &units {
        let ctx = Unit {
            prefix,
            graph: unit,
            loaded: &loaded,
            config,
        };
        match command {
            Command::Component => unreachable!(),
            Command::Rank => ctx.rank(&mut bundle)?,
            Command::Sweep => ctx.sweep(&mut bundle)?,
            Command::Correlate => ctx.correlate(&mut bundle)?,
            Command::Fit => ctx.fit(&mut bundle)?,
            Command::Deltas => ctx.deltas(&mut bundle)?,
            Command::Compare => ctx.compare(&mut bundle)?,
        }
    }
    Ok(bundle)
}

fn component_report(g: &CoauthorGraph, bundle: &mut ReportBundle) {
    let comps = graph::components(g);
    let mut summary = Table::new(
        "summary",
        &["authors", "edges", "components", "largest_component"],
    );
    summary.push(vec![
        g.node_count().into(),
        g.edge_count().into(),
        comps.len().into(),
        comps[0].node_count().into(),
    ]);
    let mut table = Table::new("components", &["component", "authors", "edges", "first_author"]);
    for (i, c) in comps.iter().enumerate() {
        table.push(vec![
            (i + 1).into(),
            c.node_count().into(),
            c.edge_count().into(),
            (&c.nodes()[0]).into(),
        ]);
    }
    let mut members = Table::new("largest_component", &["author", "degree", "weighted_degree"]);
    for (i, id) in comps[0].nodes().iter().enumerate() {
        members.push(vec![
            id.into(),
            comps[0].degree(i).into(),
            comps[0].weighted_degree(i).into(),
        ]);
    }
    bundle.tables.extend([summary, table, members]);
}

struct Unit<'a> {
    prefix: &'a str,
    graph: &'a CoauthorGraph,
    loaded: &'a Loaded,
    config: &'a RunConfig,
}

impl Unit<'_> {
    fn name(&self, base: &str) -> String {
        format!("{}{base}", self.prefix)
    }

    fn citations(&self, purpose: &str) -> Result<&CitationProfile, StageError> {
        self.loaded
            .citations
            .as_ref()
            .ok_or_else(|| usage(format!("{purpose} requires --citations")))
    }

    fn operator(&self) -> Result<graph::StochasticOperator, StageError> {
        graph::stochastic_operator(self.graph, self.config.mode).at(Stage::Graph)
    }

    fn teleport(&self, kind: TeleportKind) -> Result<TeleportVector, StageError> {
        match kind {
            TeleportKind::Uniform => ranker::uniform_teleport(self.graph.node_count()).at(Stage::Rank),
            TeleportKind::Citations => {
                let profile = self.citations("citation teleport")?;
                ranker::citation_teleport(profile, self.graph.nodes()).at(Stage::Rank)
            }
        }
    }

    fn scores(&self, kind: TeleportKind, damping: f64) -> Result<ScoreVector, StageError> {
        let op = self.operator()?;
        let v = self.teleport(kind)?;
        ranker::pagerank(&op, &v, damping, self.config.convergence).at(Stage::Rank)
    }

    fn run_table(&self, scores: &ScoreVector, kind: TeleportKind) -> Table {
        let mut run = Table::new(
            self.name("run"),
            &["authors", "damping", "teleport", "mode", "iterations", "residual"],
        );
        run.push(vec![
            scores.len().into(),
            scores.damping.into(),
            kind.to_string().into(),
            self.config.mode.to_string().into(),
            scores.iterations.into(),
            scores.residual.into(),
        ]);
        run
    }

    fn rank(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let kind = self.config.teleport;
        let scores = self.scores(kind, self.config.damping)?;
        bundle.tables.push(self.run_table(&scores, kind));
        bundle.tables.push(ranking_table(
            &self.name("ranking"),
            &RankingTable::from_score_vector(&scores),
        ));
        Ok(())
    }

    fn sweep(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let op = self.operator()?;
        let v = self.teleport(self.config.teleport)?;
        let sweep =
            ranker::damping_sweep(&op, &v, &self.config.schedule, self.config.convergence).at(Stage::Rank)?;
        let k = self.config.top_k.min(self.graph.node_count());
        for scores in sweep.iter() {
            let table = RankingTable::from_score_vector(scores);
            let mut top = Table::new(
                self.name(&format!("top_{k}_d{}", scores.damping)),
                &["rank", "author", "score"],
            );
            for row in metrics::top_k(&table, k).at(Stage::Metrics)? {
                top.push(vec![row.rank.into(), (&row.author).into(), row.score.into()]);
            }
            bundle.tables.push(top);
        }
        let matrix = stats::cross_damping_matrix(&sweep).at(Stage::Stats)?;
        let mut headers = vec!["damping".to_string()];
        headers.extend(matrix.dampings.iter().map(|d| d.to_string()));
        let mut table = Table::with_headers(self.name("cross_damping_spearman"), headers);
        for (d, row) in matrix.dampings.iter().zip(&matrix.values) {
            let mut cells: Vec<Cell> = vec![d.to_string().into()];
            cells.extend(row.iter().map(|&r| Cell::Float(r)));
            table.push(cells);
        }
        bundle.tables.push(table);
        Ok(())
    }

    fn rankings_against_citations(&self) -> Result<(RankingTable, RankingTable, ScoreVector), StageError> {
        let profile = self.citations("this command")?;
        let scores = self.scores(self.config.teleport, self.config.damping)?;
        let citation = metrics::citation_rank(profile, self.graph.nodes());
        let pagerank = RankingTable::from_score_vector(&scores);
        Ok((citation, pagerank, scores))
    }

    fn correlate(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let (citation, pagerank, scores) = self.rankings_against_citations()?;
        bundle.tables.push(self.run_table(&scores, self.config.teleport));
        let n = citation.len();
        let mut table = Table::new(
            self.name("stratified_spearman"),
            &[
                "direction",
                "level",
                "lower",
                "upper",
                "size",
                "rho",
                "p_value",
                "status",
            ],
        );
        for (direction, levels) in [
            (Direction::Obverse, self.config.obverse_levels(n)),
            (Direction::Reverse, self.config.reverse_levels(n)),
        ] {
            let report = stats::stratified_correlation(&pagerank, &citation, Base::B, &levels, direction)
                .at(Stage::Stats)?;
            for level in &report.levels {
                let size = level.size();
                let (rho, p, status): (Cell, Cell, Cell) = match &level.outcome {
                    LevelOutcome::Computed(c) => (c.rho.into(), c.p_value.into(), "ok".into()),
                    LevelOutcome::Skipped(reason) => {
                        (Cell::Blank, Cell::Blank, format!("skipped: {reason}").into())
                    }
                };
                table.push(vec![
                    direction.to_string().into(),
                    level.label.clone().into(),
                    level.lower.into(),
                    level.upper.into(),
                    size.into(),
                    rho,
                    p,
                    status,
                ]);
            }
        }
        bundle.tables.push(table);
        Ok(())
    }

    fn fit(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let scores = self.scores(self.config.teleport, self.config.damping)?;
        let mut series: Vec<(&str, Vec<f64>, Binning)> = Vec::new();
        if let Some(profile) = &self.loaded.citations {
            let counts: Vec<f64> = self
                .graph
                .nodes()
                .iter()
                .map(|a| profile.total(a.as_str()) as f64)
                .filter(|&c| c > 0.0)
                .collect();
            let zero = self.graph.node_count() - counts.len();
            if zero > 0 {
                bundle.warnings.push(format!(
                    "{zero} authors with zero citations are excluded from the citation fit"
                ));
            }
            series.push(("citations", counts, Binning::Exact));
        }
        series.push((
            "pagerank",
            scores.entries().to_vec(),
            Binning::Logarithmic(self.config.bins),
        ));

        let mut fits = Table::new(
            self.name("powerlaw_fit"),
            &["series", "exponent", "r", "bins_used"],
        );
        let mut points = Table::new(self.name("powerlaw_points"), &["series", "value", "frequency"]);
        for (label, values, binning) in series {
            let fit = stats::powerlaw_fit_with(&values, binning).at(Stage::Stats)?;
            fits.push(vec![
                label.into(),
                fit.exponent.into(),
                fit.r.into(),
                fit.bins_used.into(),
            ]);
            for (x, y) in &fit.points {
                points.push(vec![label.into(), (*x).into(), (*y).into()]);
            }
        }
        bundle.tables.push(fits);
        bundle.tables.push(points);
        Ok(())
    }

    fn deltas(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let (citation, pagerank, scores) = self.rankings_against_citations()?;
        let deltas = stats::rank_deltas(&citation, &pagerank).at(Stage::Stats)?;
        let mut table = Table::new(
            self.name("rank_deltas"),
            &["author", "citation_rank", "pagerank_rank", "delta"],
        );
        for d in &deltas.deltas {
            table.push(vec![
                (&d.author).into(),
                d.rank_a.into(),
                d.rank_b.into(),
                d.delta.into(),
            ]);
        }
        let mut qq = Table::new(self.name("rank_delta_qq"), &["empirical", "normal"]);
        for p in &deltas.qq {
            qq.push(vec![p.empirical.into(), p.normal.into()]);
        }
        let profile = self.citations("deltas")?;
        let mut scatter = Table::new(self.name("scatter"), &["author", "citations", "score"]);
        for (author, score) in scores.iter() {
            scatter.push(vec![
                author.into(),
                profile.total(author.as_str()).into(),
                score.into(),
            ]);
        }
        bundle.tables.extend([table, qq, scatter]);
        Ok(())
    }

    fn compare(&self, bundle: &mut ReportBundle) -> Result<(), StageError> {
        let profile = self.citations("compare")?;
        let op = self.operator()?;
        let uniform = self.teleport(TeleportKind::Uniform)?;
        let cited = self.teleport(TeleportKind::Citations)?;
        let mut rankings: Vec<(String, RankingTable)> = Vec::new();
        for &d in self.config.compare.values() {
            for (label, v) in [("PR_W", &cited), ("PR", &uniform)] {
                let s = ranker::pagerank(&op, v, d, self.config.convergence).at(Stage::Rank)?;
                rankings.push((format!("{label}({d})"), RankingTable::from_score_vector(&s)));
            }
        }
        let winners = self.loaded.awards.as_ref();
        let comparison = metrics::comparison_table(&rankings, Some(profile), winners, &self.loaded.extras)
            .at(Stage::Metrics)?;
        let mut table = Table::with_headers(self.name("comparison"), comparison.headers());
        for row in &comparison.rows {
            let mut cells: Vec<Cell> = vec![(&row.author).into()];
            cells.extend(row.ranks.iter().map(|&r| Cell::from(r)));
            if comparison.has_citations {
                cells.push(row.citations.into());
            }
            if comparison.has_h_index {
                cells.push(row.h_index.into());
            }
            cells.extend(row.extras.iter().map(|&e| Cell::from(e)));
            if comparison.has_winners {
                cells.push(if row.winner { "yes".into() } else { Cell::Blank });
            }
            table.push(cells);
        }
        bundle.tables.push(table);

        if let Some(winners) = winners {
            let (matched, unmatched) = winners.split(self.graph.nodes());
            let required = self.config.winner_count.unwrap_or(matched.len());
            let mut all = rankings;
            all.push((
                "citations".into(),
                metrics::citation_rank(profile, self.graph.nodes()),
            ));
            if profile.has_per_paper() {
                let h = RankingTable::from_scores(
                    self.graph
                        .nodes()
                        .iter()
                        .map(|a| (a.clone(), profile.h_index_of(a.as_str()).unwrap_or(0) as f64)),
                );
                all.push(("h_index".into(), h));
            }
            let mut recall = Table::new(
                self.name("prefix_recall"),
                &["ranking", "winners_required", "prefix_length", "winners_found"],
            );
            for (name, ranking) in &all {
                let (length, found): (Cell, usize) =
                    match metrics::min_prefix_containing(ranking, winners, required) {
                        PrefixLength::Reached(l) => (l.into(), required),
                        PrefixLength::NotReachable { found } => (Cell::Blank, found),
                    };
                recall.push(vec![name.clone().into(), required.into(), length, found.into()]);
            }
            bundle.tables.push(recall);
            if !unmatched.is_empty() {
                bundle.warnings.push(format!(
                    "{} award winners are not in this component: {}",
                    unmatched.len(),
                    summarize(&unmatched)
                ));
                let mut table = Table::new(self.name("unmatched_winners"), &["author"]);
                for w in &unmatched {
                    table.push(vec![w.into()]);
                }
                bundle.tables.push(table);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
        let path = dir.path().join(name);
        std::fs::File::create(&path)
            .unwrap()
            .write_all(content.as_bytes())
            .unwrap();
        path
    }

    #[test]
    fn rank_two_nodes_ties() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = Inputs {
            edges: write(&dir, "e.tsv", "A\tB\t2\n"),
            ..Inputs::default()
        };
        let bundle = run_command(Command::Rank, &inputs, &RunConfig::default()).unwrap();
        let ranking = bundle.table("ranking").unwrap();
        assert_eq!(ranking.rows.len(), 2);
        for row in &ranking.rows {
            assert_eq!(row[0], Cell::Int(1));
            match row[2] {
                Cell::Float(s) => assert!((s - 0.5).abs() < 1e-12),
                ref other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn restricts_to_largest_component() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = Inputs {
            edges: write(&dir, "e.tsv", "A\tB\nB\tC\nX\tY\nbad\n"),
            ..Inputs::default()
        };
        let bundle = run_command(Command::Rank, &inputs, &RunConfig::default()).unwrap();
        assert_eq!(bundle.table("ranking").unwrap().rows.len(), 3);
        assert_eq!(bundle.warnings.len(), 1);
        assert!(bundle.warnings[0].contains("line 4"));

        let config = RunConfig {
            all_components: true,
            ..RunConfig::default()
        };
        let bundle = run_command(Command::Rank, &inputs, &config).unwrap();
        assert_eq!(bundle.table("component_1.ranking").unwrap().rows.len(), 3);
        assert_eq!(bundle.table("component_2.ranking").unwrap().rows.len(), 2);
        assert!(bundle.table("notes").is_some());
    }

    #[test]
    fn citation_commands_need_citations() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = Inputs {
            edges: write(&dir, "e.tsv", "A\tB\nB\tC\nC\tD\n"),
            ..Inputs::default()
        };
        let err = run_command(Command::Correlate, &inputs, &RunConfig::default()).unwrap_err();
        assert_eq!(err.stage, Stage::Config);
        assert!(matches!(err.error, Error::Config(_)));
    }

    #[test]
    fn parse_errors_are_tagged() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = Inputs {
            edges: write(&dir, "e.tsv", "A\tB\n"),
            citations: Some(write(&dir, "c.tsv", "A\t1\nA\t2\n")),
            ..Inputs::default()
        };
        let err = run_command(Command::Rank, &inputs, &RunConfig::default()).unwrap_err();
        assert_eq!(err.stage, Stage::Parse);
        assert!(matches!(err.error, Error::DuplicateAuthor { .. }));
    }

    #[test]
    fn component_summary() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = Inputs {
            edges: write(&dir, "e.tsv", "A\tB\nB\tC\nX\tY\nZ\tZ\n"),
            ..Inputs::default()
        };
        let bundle = run_command(Command::Component, &inputs, &RunConfig::default()).unwrap();
        let summary = bundle.table("summary").unwrap();
        assert_eq!(
            summary.rows[0],
            vec![Cell::Int(6), Cell::Int(3), Cell::Int(3), Cell::Int(3)]
        );
        assert_eq!(bundle.table("components").unwrap().rows.len(), 3);
    }
}
