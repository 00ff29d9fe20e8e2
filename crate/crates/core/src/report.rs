//! Tabular report model and its CSV / TSV / markdown serialization.
//!
//! Output is UTF-8 with `\n` line endings; floats carry six significant digits.
//! Identical bundles serialize to identical bytes.

use std::fmt::Write as _;

use crate::config::OutputFormat;
use crate::error::{Error, Result};
use crate::graph::AuthorId;
use crate::stats::RankingTable;

/// Formats like C's `%.6g`.
pub fn format_sig(x: f64) -> String {
    format_sig_digits(x, 6)
}

pub fn format_sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
    Blank,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_sig(*f),
            Cell::Blank => String::new(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&AuthorId> for Cell {
    fn from(a: &AuthorId) -> Self {
        Cell::Text(a.as_str().to_string())
    }
}

impl From<f64> for Cell {
    fn from(f: f64) -> Self {
        Cell::Float(f)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Blank, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: &[&str]) -> Self {
        Table {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_headers(name: impl Into<String>, headers: Vec<String>) -> Self {
        Table {
            name: name.into(),
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn rendered_rows(&self) -> impl Iterator<Item = Vec<String>> + '_ {
        self.rows.iter().map(|r| r.iter().map(Cell::render).collect())
    }

    /// Column index by header name.
    pub fn column(&self, header: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == header)
    }
}

/// Everything one command produced, in output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportBundle {
    pub tables: Vec<Table>,
    /// Diagnostics; never part of the serialized data.
    pub warnings: Vec<String>,
}

impl ReportBundle {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match format {
                OutputFormat::Csv => render_delimited(&mut out, table, b','),
                OutputFormat::Tsv => render_delimited(&mut out, table, b'\t'),
                OutputFormat::Markdown => render_markdown(&mut out, table),
            }
        }
        out
    }
}

fn render_delimited(out: &mut String, table: &Table, delimiter: u8) {
    let _ = writeln!(out, "# {}", table.name);
    out.push_str(&to_delimited(&table.headers, table.rendered_rows(), delimiter));
}

fn to_delimited(headers: &[String], rows: impl Iterator<Item = Vec<String>>, delimiter: u8) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(if delimiter == b'\t' {
            csv::QuoteStyle::Never
        } else {
            csv::QuoteStyle::Necessary
        })
        .from_writer(Vec::new());
    writer.write_record(headers).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn render_markdown(out: &mut String, table: &Table) {
    let escape = |s: &str| s.replace('|', "\\|");
    let _ = writeln!(out, "### {}\n", table.name);
    let _ = writeln!(
        out,
        "| {} |",
        table
            .headers
            .iter()
            .map(|h| escape(h))
            .collect::<Vec<_>>()
            .join(" | ")
    );
    let _ = writeln!(out, "|{}", "---|".repeat(table.headers.len()));
    for row in table.rendered_rows() {
        let _ = writeln!(
            out,
            "| {} |",
            row.iter().map(|c| escape(c)).collect::<Vec<_>>().join(" | ")
        );
    }
}

/// `rank,author,score` rows of a ranking table.
pub fn ranking_table(name: &str, table: &RankingTable) -> Table {
    let mut t = Table::new(name, &["rank", "author", "score"]);
    for row in table.rows() {
        t.push(vec![row.rank.into(), (&row.author).into(), row.score.into()]);
    }
    t
}

/// Serializes a ranking as a standalone CSV document.
pub fn ranking_to_csv(table: &RankingTable) -> String {
    let t = ranking_table("ranking", table);
    to_delimited(&t.headers, t.rendered_rows(), b',')
}

/// Reads `(author, score, rank)` triples back from [`ranking_to_csv`] output.
pub fn ranking_from_csv(text: &str) -> Result<Vec<(AuthorId, f64, usize)>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::MalformedLine {
            line,
            reason: e.to_string(),
        })?;
        let bad = |reason: &str| Error::MalformedLine {
            line,
            reason: reason.to_string(),
        };
        if record.len() != 3 {
            return Err(bad("expected rank,author,score"));
        }
        let rank = record[0].parse().map_err(|_| bad("rank is not an integer"))?;
        let author = AuthorId::new(&record[1]).ok_or_else(|| bad("empty author"))?;
        let score = record[2].parse().map_err(|_| bad("score is not a number"))?;
        out.push((author, score, rank));
    }
    Ok(out)
}
