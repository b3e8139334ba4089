//! Line-oriented serialization of enumeration results.
//!
//! ```text
//! {"kind":"header","format":"projcb-enumeration","version":1,"m":3,"n":3,"method":"dfs","count":40}
//! {"m":3,"n":3,"start":[0,1],"moves":"..."}
//! ...
//! {"kind":"footer","pairs":..,"pairsDigest":"..",...}
//! ```
//!
//! Path lines use the walk JSON schema. Digests are sha256 over the compact
//! JSON of the sorted lists, so two runs agree on a digest iff they agree on
//! the list. Timing is left out to keep files reproducible.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::board::{Board, Square};
use crate::decoder::{EnumerationReport, Method};
use crate::error::{Error, Result};
use crate::walk::{PathRecord, Walk};

pub const FORMAT: &str = "projcb-enumeration";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "header")]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub m: usize,
    pub n: usize,
    pub method: Method,
    pub count: usize,
    #[serde(rename = "countOnly")]
    pub count_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "footer", rename_all = "camelCase")]
pub struct Footer {
    pub pairs: usize,
    pub pairs_digest: String,
    pub initial_digest: String,
    pub terminal_digest: String,
    pub paths_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_witness: Option<PathRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("json");
    hex::encode(Sha256::digest(bytes))
}

pub fn pairs_digest(pairs: &BTreeSet<(Square, Square)>) -> String {
    digest(pairs)
}

pub fn squares_digest(squares: &BTreeSet<Square>) -> String {
    digest(squares)
}

/// Digest of the sorted path records.
pub fn paths_digest(paths: &[Walk]) -> String {
    let mut records: Vec<PathRecord> = paths.iter().map(Walk::to_record).collect();
    records.sort_by(|a, b| (a.start, &a.moves).cmp(&(b.start, &b.moves)));
    digest(&records)
}

pub fn header(report: &EnumerationReport, count_only: bool) -> Header {
    Header {
        format: FORMAT.into(),
        version: VERSION,
        m: report.board.m(),
        n: report.board.n(),
        method: report.method,
        count: report.count(),
        count_only,
    }
}

pub fn footer(report: &EnumerationReport) -> Footer {
    let witness = report.cycle_witness();
    Footer {
        pairs: report.endpoint_pairs.len(),
        pairs_digest: pairs_digest(&report.endpoint_pairs),
        initial_digest: squares_digest(&report.initial_squares),
        terminal_digest: squares_digest(&report.terminal_squares),
        paths_digest: paths_digest(&report.paths),
        cycle_witness: witness.map(Walk::to_record),
        note: witness.map(|w| format!("hamiltonian cycle: {w} closes back to its start")),
    }
}

/// The full report text; `count_only` leaves out the path lines.
pub fn write_report(report: &EnumerationReport, count_only: bool) -> String {
    let mut lines = vec![serde_json::to_string(&header(report, count_only)).expect("json")];
    if !count_only {
        lines.extend(report.paths.iter().map(Walk::to_json));
    }
    lines.push(serde_json::to_string(&footer(report)).expect("json"));
    lines.join("\n") + "\n"
}

/// A report read back from text.
#[derive(Clone, Debug)]
pub struct ParsedReport {
    pub header: Header,
    pub paths: Vec<Walk>,
    pub footer: Footer,
}

impl ParsedReport {
    /// Recompute the footer from the path lines and compare. Count-only
    /// reports have nothing to check against.
    pub fn verify(&self) -> Result<()> {
        if self.header.count_only {
            return Ok(());
        }
        let board = Board::new(self.header.m, self.header.n)?;
        let rebuilt = EnumerationReport::new(board, self.header.method, self.paths.clone(), Default::default());
        if rebuilt.count() != self.header.count {
            return Err(Error::Parse(format!(
                "header count {} but {} distinct paths",
                self.header.count,
                rebuilt.count()
            )));
        }
        if footer(&rebuilt) != self.footer {
            return Err(Error::Parse("footer digests do not match the paths".into()));
        }
        Ok(())
    }
}

pub fn parse_report(text: &str) -> Result<ParsedReport> {
    let parse_err = |line: usize, e: serde_json::Error| Error::Parse(format!("line {line}: {e}"));
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let (first, rest) = lines.split_first().ok_or_else(|| Error::Parse("empty report".into()))?;
    let (last, body) = rest.split_last().ok_or_else(|| Error::Parse("missing footer".into()))?;
    let header: Header = serde_json::from_str(first).map_err(|e| parse_err(1, e))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(Error::Parse(format!(
            "unsupported format {} v{}",
            header.format, header.version
        )));
    }
    let paths = body
        .iter()
        .enumerate()
        .map(|(k, line)| Walk::from_json(line).map_err(|e| Error::Parse(format!("line {}: {e}", k + 2))))
        .collect::<Result<Vec<_>>>()?;
    let footer: Footer = serde_json::from_str(last).map_err(|e| parse_err(lines.len(), e))?;
    Ok(ParsedReport { header, paths, footer })
}
