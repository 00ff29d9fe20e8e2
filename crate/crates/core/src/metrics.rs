//! Author-impact metrics: citation ranking, h-index, top-k extraction, award-winner
//! prefix recall and the multi-ranking comparison table.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::AuthorId;
use crate::stats::{ensure_same_authors, RankingRow, RankingTable};

/// Per-author citation totals, with optional per-paper counts for the h-index.
///
/// Totals and per-paper lists may come from different extractions and are not
/// required to agree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CitationProfile {
    totals: BTreeMap<AuthorId, u64>,
    per_paper: BTreeMap<AuthorId, Vec<u64>>,
}

/// How a citation profile lines up with a node set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CitationJoin {
    /// Nodes without a citation entry (treated as zero citations).
    pub missing: Vec<AuthorId>,
    /// Profile entries that are not nodes (ignored).
    pub unused: Vec<AuthorId>,
}

impl CitationProfile {
    /// Inserts or replaces an author's record, returning the previous total.
    pub fn insert(&mut self, author: AuthorId, total: u64, per_paper: Option<Vec<u64>>) -> Option<u64> {
        match per_paper {
            Some(list) => {
                self.per_paper.insert(author.clone(), list);
            }
            None => {
                self.per_paper.remove(&author);
            }
        }
        self.totals.insert(author, total)
    }

    /// Total citations, 0 when the author is unknown.
    pub fn total(&self, author: &str) -> u64 {
        self.totals.get(author).copied().unwrap_or(0)
    }

    pub fn get_total(&self, author: &str) -> Option<u64> {
        self.totals.get(author).copied()
    }

    pub fn per_paper(&self, author: &str) -> Option<&[u64]> {
        self.per_paper.get(author).map(Vec::as_slice)
    }

    pub fn has_per_paper(&self) -> bool {
        !self.per_paper.is_empty()
    }

    pub fn h_index_of(&self, author: &str) -> Option<usize> {
        self.per_paper(author).map(h_index)
    }

    pub fn authors(&self) -> impl Iterator<Item = &AuthorId> + '_ {
        self.totals.keys()
    }

    pub fn len(&self) -> usize {
        self.totals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.totals.is_empty()
    }

    pub fn join(&self, nodes: &[AuthorId]) -> CitationJoin {
        let node_set: BTreeSet<&AuthorId> = nodes.iter().collect();
        CitationJoin {
            missing: nodes
                .iter()
                .filter(|n| !self.totals.contains_key(*n))
                .cloned()
                .collect(),
            unused: self
                .totals
                .keys()
                .filter(|a| !node_set.contains(a))
                .cloned()
                .collect(),
        }
    }
}

/// Set of award-winning authors. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AwardList {
    winners: BTreeSet<AuthorId>,
}

impl AwardList {
    pub fn new(winners: impl IntoIterator<Item = AuthorId>) -> Result<Self> {
        let winners: BTreeSet<AuthorId> = winners.into_iter().collect();
        if winners.is_empty() {
            return Err(Error::EmptyAwardList);
        }
        Ok(AwardList { winners })
    }

    pub fn contains(&self, author: &str) -> bool {
        self.winners.contains(author)
    }

    pub fn len(&self) -> usize {
        self.winners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winners.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AuthorId> + '_ {
        self.winners.iter()
    }

    /// Splits winners into those present in `authors` and those absent, both sorted.
    pub fn split<'a>(
        &self,
        authors: impl IntoIterator<Item = &'a AuthorId>,
    ) -> (Vec<AuthorId>, Vec<AuthorId>) {
        let present: BTreeSet<&AuthorId> = authors.into_iter().collect();
        self.winners.iter().cloned().partition(|w| present.contains(w))
    }
}

/// Largest `h` such that at least `h` papers have at least `h` citations each.
pub fn h_index(per_paper: &[u64]) -> usize {
    let mut sorted = per_paper.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c >= (i + 1) as u64)
        .count()
}

/// Ranks `authors` by total citations; authors missing from the profile count as zero.
pub fn citation_rank(profile: &CitationProfile, authors: &[AuthorId]) -> RankingTable {
    RankingTable::from_scores(
        authors
            .iter()
            .map(|a| (a.clone(), profile.total(a.as_str()) as f64)),
    )
}

/// First `k` rows in display order.
pub fn top_k(table: &RankingTable, k: usize) -> Result<&[RankingRow]> {
    if k == 0 || k > table.len() {
        return Err(Error::InvalidK { k, n: table.len() });
    }
    Ok(&table.rows()[..k])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixLength {
    /// Shortest prefix holding the requested number of winners.
    Reached(usize),
    /// The whole table holds only this many winners.
    NotReachable { found: usize },
}

/// Smallest `L` such that the top `L` rows contain at least `count` winners.
///
/// Winners absent from the table simply never match.
pub fn min_prefix_containing(table: &RankingTable, winners: &AwardList, count: usize) -> PrefixLength {
    if count == 0 {
        return PrefixLength::Reached(0);
    }
    let mut found = 0;
    for (i, row) in table.rows().iter().enumerate() {
        if winners.contains(row.author.as_str()) {
            found += 1;
            if found == count {
                return PrefixLength::Reached(i + 1);
            }
        }
    }
    PrefixLength::NotReachable { found }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub author: AuthorId,
    /// Competition rank in each ranking, in column order.
    pub ranks: Vec<usize>,
    pub citations: Option<u64>,
    /// `None` when the author has no per-paper data.
    pub h_index: Option<usize>,
    pub extras: Vec<Option<i64>>,
    pub winner: bool,
}

/// Side-by-side comparison of several rankings.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub ranking_names: Vec<String>,
    pub has_citations: bool,
    pub has_h_index: bool,
    pub extra_names: Vec<String>,
    pub has_winners: bool,
    /// Ordered like the first (primary) ranking.
    pub rows: Vec<ComparisonRow>,
    pub unmatched_winners: Vec<AuthorId>,
}

impl ComparisonTable {
    pub fn headers(&self) -> Vec<String> {
        let mut headers = vec!["author".to_string()];
        headers.extend(self.ranking_names.iter().cloned());
        if self.has_citations {
            headers.push("citations".into());
        }
        if self.has_h_index {
            headers.push("h_index".into());
        }
        headers.extend(self.extra_names.iter().cloned());
        if self.has_winners {
            headers.push("winner".into());
        }
        headers
    }
}

/// Joins rankings, citation data, extra integer columns and award flags by author.
///
/// The first ranking fixes the row order. Citation and h-index columns appear only
/// when a profile is given (h-index only if it holds per-paper data).
pub fn comparison_table(
    rankings: &[(String, RankingTable)],
    profile: Option<&CitationProfile>,
    winners: Option<&AwardList>,
    extras: &[(String, BTreeMap<AuthorId, i64>)],
) -> Result<ComparisonTable> {
    let (_, primary) = rankings
        .first()
        .ok_or_else(|| Error::Config("comparison needs at least one ranking".into()))?;
    for (_, other) in &rankings[1..] {
        ensure_same_authors(primary, other)?;
    }
    let has_h_index = profile.is_some_and(CitationProfile::has_per_paper);
    let rows = primary
        .rows()
        .iter()
        .map(|row| {
            let id = row.author.as_str();
            ComparisonRow {
                author: row.author.clone(),
                ranks: rankings
                    .iter()
                    .map(|(_, t)| t.get(id).expect("author sets checked").rank)
                    .collect(),
                citations: profile.map(|p| p.total(id)),
                h_index: profile.and_then(|p| p.h_index_of(id)),
                extras: extras.iter().map(|(_, col)| col.get(id).copied()).collect(),
                winner: winners.is_some_and(|w| w.contains(id)),
            }
        })
        .collect();
    let unmatched_winners = winners
        .map(|w| w.split(primary.rows().iter().map(|r| &r.author)).1)
        .unwrap_or_default();
    Ok(ComparisonTable {
        ranking_names: rankings.iter().map(|(n, _)| n.clone()).collect(),
        has_citations: profile.is_some(),
        has_h_index,
        extra_names: extras.iter().map(|(n, _)| n.clone()).collect(),
        has_winners: winners.is_some(),
        rows,
        unmatched_winners,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn id(s: &str) -> AuthorId {
        AuthorId::new(s).unwrap()
    }

    fn table(entries: &[(&str, f64)]) -> RankingTable {
        RankingTable::from_scores(entries.iter().map(|&(a, s)| (id(a), s)))
    }

    fn brute_h(list: &[u64]) -> usize {
        (0..=list.len())
            .filter(|&h| list.iter().filter(|&&c| c >= h as u64).count() >= h)
            .max()
            .unwrap()
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[5, 4, 3, 2, 1]), 3);
        assert_eq!(h_index(&[3, 1, 1]), 1);
        assert_eq!(brute_h(&[5, 4, 3, 2, 1]), 3);
        assert_eq!(brute_h(&[3, 1, 1]), 1);
        assert_eq!(h_index(&[0, 0]), 0);
        assert_eq!(h_index(&[100]), 1);
    }

    #[test]
    fn citation_rank_ties() {
        let mut p = CitationProfile::default();
        p.insert(id("A"), 10, None);
        p.insert(id("B"), 5, None);
        p.insert(id("C"), 5, None);
        let t = citation_rank(&p, &[id("A"), id("B"), id("C")]);
        let ranks: Vec<(usize, f64)> = t.rows().iter().map(|r| (r.rank, r.fractional_rank)).collect();
        assert_eq!(ranks, vec![(1, 1.0), (2, 2.5), (2, 2.5)]);

        let single = citation_rank(&p, &[id("B")]);
        assert_eq!(single.rows()[0].rank, 1);

        let missing = citation_rank(&p, &[id("A"), id("Z")]);
        assert_eq!(missing.get("Z").unwrap().score, 0.0);
    }

    #[test]
    fn citation_rank_matches_sort() {
        let counts = [17u64, 3, 99, 42, 3, 0, 58, 12, 42, 7];
        let mut p = CitationProfile::default();
        let authors: Vec<AuthorId> = (0..counts.len()).map(|i| id(&format!("a{i}"))).collect();
        for (a, &c) in authors.iter().zip(&counts) {
            p.insert(a.clone(), c, None);
        }
        let t = citation_rank(&p, &authors);
        let mut expected: Vec<(u64, &str)> = authors
            .iter()
            .zip(&counts)
            .map(|(a, &c)| (c, a.as_str()))
            .collect();
        expected.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(y.1)));
        let got: Vec<(u64, &str)> = t
            .rows()
            .iter()
            .map(|r| (r.score as u64, r.author.as_str()))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn join_reports_both_sides() {
        let mut p = CitationProfile::default();
        p.insert(id("A"), 1, None);
        p.insert(id("Q"), 1, None);
        let join = p.join(&[id("A"), id("B")]);
        assert_eq!(join.missing, vec![id("B")]);
        assert_eq!(join.unused, vec![id("Q")]);
    }

    #[test]
    fn top_k_bounds() {
        let t = table(&[("B", 2.0), ("A", 2.0), ("C", 1.0)]);
        assert_eq!(top_k(&t, 3).unwrap().len(), 3);
        assert_eq!(top_k(&t, 1).unwrap()[0].author.as_str(), "A");
        assert!(matches!(top_k(&t, 0), Err(Error::InvalidK { k: 0, n: 3 })));
        assert!(matches!(top_k(&t, 4), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn top_k_matches_sort_and_slice() {
        let entries: Vec<(String, f64)> = (0..100)
            .map(|i| (format!("a{i:03}"), ((i * 37) % 101) as f64))
            .collect();
        let t = RankingTable::from_scores(entries.iter().map(|(a, s)| (id(a), *s)));
        let mut brute = entries.clone();
        brute.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        let got: Vec<(&str, f64)> = top_k(&t, 20)
            .unwrap()
            .iter()
            .map(|r| (r.author.as_str(), r.score))
            .collect();
        let want: Vec<(&str, f64)> = brute[..20].iter().map(|(a, s)| (a.as_str(), *s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn prefix_examples() {
        let t = table(&[("A", 3.0), ("B", 2.0), ("C", 1.0)]);
        let c = AwardList::new([id("C")]).unwrap();
        assert_eq!(min_prefix_containing(&t, &c, 1), PrefixLength::Reached(3));
        let ab = AwardList::new([id("A"), id("B"), id("Nobody")]).unwrap();
        assert_eq!(min_prefix_containing(&t, &ab, 2), PrefixLength::Reached(2));
        assert_eq!(
            min_prefix_containing(&t, &ab, 3),
            PrefixLength::NotReachable { found: 2 }
        );
        assert!(AwardList::new(Vec::new()).is_err());
    }

    #[test]
    fn award_split() {
        let w = AwardList::new([id("A"), id("X"), id("B")]).unwrap();
        let authors = [id("A"), id("B"), id("C")];
        let (matched, unmatched) = w.split(authors.iter());
        assert_eq!(matched, vec![id("A"), id("B")]);
        assert_eq!(unmatched, vec![id("X")]);
    }

    #[test]
    fn comparison_single_ranking() {
        let t = table(&[("A", 3.0), ("B", 2.0)]);
        let c = comparison_table(&[("pr".into(), t.clone())], None, None, &[]).unwrap();
        assert_eq!(c.headers(), vec!["author", "pr"]);
        assert_eq!(c.rows[0].ranks, vec![1]);

        let twin = comparison_table(&[("x".into(), t.clone()), ("y".into(), t)], None, None, &[]).unwrap();
        assert!(twin.rows.iter().all(|r| r.ranks[0] == r.ranks[1]));
    }

    #[test]
    fn comparison_joins_by_author() {
        // Three rankings over 15 authors, checked cell by cell against a direct lookup.
        let authors: Vec<String> = (0..15).map(|i| format!("a{i:02}")).collect();
        let mk = |mult: usize| {
            RankingTable::from_scores(
                authors
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (id(a), ((i * mult) % 17) as f64)),
            )
        };
        let rankings = vec![
            ("r1".to_string(), mk(3)),
            ("r2".to_string(), mk(5)),
            ("r3".to_string(), mk(11)),
        ];
        let mut profile = CitationProfile::default();
        for (i, a) in authors.iter().enumerate() {
            let papers = if i % 2 == 0 {
                Some(vec![i as u64, 3, 1])
            } else {
                None
            };
            profile.insert(id(a), i as u64 * 10, papers);
        }
        let winners = AwardList::new([id("a03"), id("a07"), id("ghost")]).unwrap();
        let pc: BTreeMap<AuthorId, i64> = [(id("a01"), 4), (id("a02"), 9)].into_iter().collect();
        let table = comparison_table(
            &rankings,
            Some(&profile),
            Some(&winners),
            &[("pc".to_string(), pc.clone())],
        )
        .unwrap();
        assert_eq!(
            table.headers(),
            vec!["author", "r1", "r2", "r3", "citations", "h_index", "pc", "winner"]
        );
        assert_eq!(table.unmatched_winners, vec![id("ghost")]);
        let order: Vec<&AuthorId> = rankings[0].1.rows().iter().map(|r| &r.author).collect();
        assert_eq!(table.rows.iter().map(|r| &r.author).collect::<Vec<_>>(), order);
        for row in &table.rows {
            let a = row.author.as_str();
            for (k, (_, t)) in rankings.iter().enumerate() {
                let brute = 1 + t
                    .rows()
                    .iter()
                    .filter(|r| r.score > t.get(a).unwrap().score)
                    .count();
                assert_eq!(row.ranks[k], brute);
            }
            assert_eq!(row.citations, Some(profile.total(a)));
            assert_eq!(row.h_index, profile.per_paper(a).map(brute_h));
            assert_eq!(row.extras, vec![pc.get(a).copied()]);
            assert_eq!(row.winner, a == "a03" || a == "a07");
        }
    }

    #[test]
    fn comparison_rejects_mismatch() {
        let a = table(&[("A", 1.0), ("B", 2.0)]);
        let b = table(&[("A", 1.0), ("C", 2.0)]);
        assert!(matches!(
            comparison_table(&[("a".into(), a), ("b".into(), b)], None, None, &[]),
            Err(Error::AuthorSetMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn h_index_properties(mut list in prop::collection::vec(0u64..60, 0..40), extra in 0u64..100) {
            let h = h_index(&list);
            prop_assert_eq!(h, brute_h(&list));
            prop_assert!(h <= list.len());
            prop_assert!(h as u64 <= list.iter().copied().max().unwrap_or(0));
            list.reverse();
            prop_assert_eq!(h_index(&list), h);
            list.push(extra.max(h as u64 + 1));
            prop_assert!(h_index(&list) >= h);
        }

        #[test]
        fn prefix_monotone(positions in prop::collection::btree_set(0usize..50, 1..15)) {
            let t = RankingTable::from_scores((0..50).map(|i| (id(&format!("a{i:02}")), (50 - i) as f64)));
            let w = AwardList::new(positions.iter().map(|i| id(&format!("a{i:02}")))).unwrap();
            let mut last = 0;
            for count in 1..=positions.len() {
                match min_prefix_containing(&t, &w, count) {
                    PrefixLength::Reached(l) => { prop_assert!(l >= last); last = l; }
                    PrefixLength::NotReachable { .. } => prop_assert!(false),
                }
            }
            prop_assert_eq!(
                min_prefix_containing(&t, &w, positions.len() + 1),
                PrefixLength::NotReachable { found: positions.len() }
            );
        }

        #[test]
        fn citation_rank_scale_invariant(counts in prop::collection::vec(0u64..1000, 1..30), factor in 1u64..50) {
            let authors: Vec<AuthorId> = (0..counts.len()).map(|i| id(&format!("a{i:02}"))).collect();
            let mut p = CitationProfile::default();
            let mut q = CitationProfile::default();
            for (a, &c) in authors.iter().zip(&counts) {
                p.insert(a.clone(), c, None);
                q.insert(a.clone(), c * factor, None);
            }
            let order = |t: RankingTable| t.rows().iter().map(|r| (r.author.clone(), r.rank)).collect::<Vec<_>>();
            prop_assert_eq!(order(citation_rank(&p, &authors)), order(citation_rank(&q, &authors)));
        }
    }
}
