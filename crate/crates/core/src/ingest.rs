//! Tab-separated input files.
//!
//! All formats are UTF-8, one record per line. Blank lines and lines starting with `#`
//! are ignored. Tabs are the only field separator because author names contain commas
//! ("Glanzel, W").

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{AuthorId, RawEdge};
use crate::metrics::{AwardList, CitationProfile};

/// A skipped input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEdges {
    /// Valid records in file order.
    pub records: Vec<RawEdge>,
    pub warnings: Vec<LineWarning>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Numbered data lines with comments and blanks removed.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// `authorA<TAB>authorB[<TAB>weight]`, weight defaulting to 1.
pub fn parse_edge_list(path: &Path) -> Result<ParsedEdges> {
    let parsed = parse_edge_text(&read(path)?);
    if parsed.records.is_empty() {
        return Err(Error::NoValidRecords {
            path: path.to_path_buf(),
        });
    }
    Ok(parsed)
}

/// Parses edge-list text; malformed lines become warnings. May return zero records.
pub fn parse_edge_text(text: &str) -> ParsedEdges {
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (line, content) in data_lines(text) {
        match parse_edge_line(content) {
            Ok(rec) => records.push(rec),
            Err(message) => warnings.push(LineWarning { line, message }),
        }
    }
    ParsedEdges { records, warnings }
}

fn parse_edge_line(content: &str) -> std::result::Result<RawEdge, String> {
    let fields: Vec<&str> = content.split('\t').collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(format!(
            "expected 2 or 3 tab-separated fields, found {}",
            fields.len()
        ));
    }
    let a = fields[0].trim();
    let b = fields[1].trim();
    if a.is_empty() || b.is_empty() {
        return Err("empty author name".into());
    }
    let weight = match fields.get(2).map(|w| w.trim()) {
        None | Some("") => 1.0,
        Some(w) => w
            .parse::<f64>()
            .map_err(|_| format!("weight {w:?} is not a number"))?,
    };
    if !(weight.is_finite() && weight > 0.0) {
        return Err(format!("weight {weight} is not positive"));
    }
    Ok(RawEdge::new(a, b, weight))
}

fn parse_count(line: usize, token: &str) -> Result<u64> {
    let token = token.trim();
    token.parse::<u64>().map_err(|_| Error::InvalidCount {
        line,
        value: token.to_string(),
    })
}

/// `author<TAB>total[<TAB>c1,c2,...]`.
pub fn parse_citations(path: &Path) -> Result<CitationProfile> {
    let profile = parse_citation_text(&read(path)?)?;
    if profile.is_empty() {
        return Err(Error::NoValidRecords {
            path: path.to_path_buf(),
        });
    }
    Ok(profile)
}

pub fn parse_citation_text(text: &str) -> Result<CitationProfile> {
    let mut profile = CitationProfile::default();
    for (line, content) in data_lines(text) {
        let fields: Vec<&str> = content.split('\t').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let author = AuthorId::new(fields[0]).ok_or_else(|| Error::MalformedLine {
            line,
            reason: "empty author name".into(),
        })?;
        let total = parse_count(line, fields[1])?;
        let per_paper = match fields.get(2).map(|f| f.trim()) {
            None | Some("") => None,
            Some(list) => Some(
                list.split(',')
                    .map(|c| parse_count(line, c))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        if profile.get_total(author.as_str()).is_some() {
            return Err(Error::DuplicateAuthor { author, line });
        }
        profile.insert(author, total, per_paper);
    }
    Ok(profile)
}

/// One author per line; repeats collapse.
pub fn parse_awards(path: &Path) -> Result<AwardList> {
    parse_award_text(&read(path)?)
}

pub fn parse_award_text(text: &str) -> Result<AwardList> {
    AwardList::new(data_lines(text).filter_map(|(_, l)| AuthorId::new(l)))
}

/// `author<TAB>integer`, e.g. program-committee membership counts.
pub fn parse_extra_column(path: &Path) -> Result<BTreeMap<AuthorId, i64>> {
    parse_extra_text(&read(path)?)
}

pub fn parse_extra_text(text: &str) -> Result<BTreeMap<AuthorId, i64>> {
    let mut column = BTreeMap::new();
    for (line, content) in data_lines(text) {
        let fields: Vec<&str> = content.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected 2 tab-separated fields, found {}", fields.len()),
            });
        }
        let author = AuthorId::new(fields[0]).ok_or_else(|| Error::MalformedLine {
            line,
            reason: "empty author name".into(),
        })?;
        let value = fields[1].trim().parse::<i64>().map_err(|_| Error::InvalidCount {
            line,
            value: fields[1].trim().to_string(),
        })?;
        if column.insert(author.clone(), value).is_some() {
            return Err(Error::DuplicateAuthor { author, line });
        }
    }
    Ok(column)
}
